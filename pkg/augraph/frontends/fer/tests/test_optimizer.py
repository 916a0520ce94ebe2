# ----------------------------------------------------------------------------
# Copyright 2026 The augraph Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ----------------------------------------------------------------------------

'''
Test of the optimizer
'''
import itertools as itt

import numpy as np
import pytest

import augraph as ag
from augraph.frontends.fer import GradientDescentMomentum
from augraph.util.errors import ConfigurationError


def pytest_generate_tests(metafunc):
    if 'args' in metafunc.fixturenames:
        lr = [0.01, 0.25]
        momentum = [0., 0.5, 0.9]
        wdecay = [0., 0.001, 0.1]
        fargs = itt.product(lr, momentum, wdecay)
        metafunc.parametrize('args', fargs)


class ReferenceGDM(object):
    """
    Plain numpy momentum descent to compare against.
    """

    def __init__(self, lr, momentum, wdecay):
        self.lr = lr
        self.momentum = momentum
        self.wdecay = wdecay
        self.velocity = None

    def update(self, param, grad):
        if self.velocity is None:
            self.velocity = np.zeros_like(param)
        self.velocity = self.momentum * self.velocity - self.lr * (grad + self.wdecay * param)
        return param + self.velocity


def test_gdm(args):
    """
    Test GradientDescentMomentum against the reference across 10 update steps.
    """
    lr, momentum, wdecay = args
    rng = np.random.RandomState(0)
    w_init = rng.rand(20)
    W = ag.variable(w_init, name='W')
    gdm = GradientDescentMomentum(lr, momentum_coef=momentum, wdecay=wdecay)
    reference = ReferenceGDM(lr, momentum, wdecay)
    expected = w_init
    for _ in range(10):
        grad = rng.rand(20) - 0.5
        W.grad = grad
        gdm([('W', W)])
        expected = reference.update(expected, grad)
        np.testing.assert_allclose(W.data, expected, rtol=1e-12, atol=1e-15)
    assert gdm.iteration_index == 10


def test_gdm_zero_learning_rate_keeps_parameters():
    W = ag.variable(np.arange(6.).reshape(2, 3), name='W')
    before = W.numpy()
    gdm = GradientDescentMomentum(0., momentum_coef=0.9)
    for _ in range(3):
        W.grad = np.ones((2, 3))
        gdm([('W', W)])
    np.testing.assert_array_equal(W.data, before)


def test_gdm_missing_gradient_is_zero():
    W = ag.variable([1., 2.], name='W')
    GradientDescentMomentum(0.5)([('W', W)])
    np.testing.assert_array_equal(W.data, [1., 2.])


def test_gdm_velocity_per_parameter():
    a = ag.variable([0.], name='a')
    b = ag.variable([0.], name='b')
    gdm = GradientDescentMomentum(1., momentum_coef=0.5)
    a.grad = np.array([1.])
    b.grad = np.array([-2.])
    gdm([('a', a), ('b', b)])
    gdm([('a', a), ('b', b)])
    np.testing.assert_array_equal(a.data, [-2.5])
    np.testing.assert_array_equal(b.data, [5.])


@pytest.mark.parametrize('kwargs', [
    dict(learning_rate=-0.1),
    dict(learning_rate=0.1, momentum_coef=1.),
    dict(learning_rate=0.1, momentum_coef=-0.1),
    dict(learning_rate=0.1, wdecay=-1.),
])
def test_gdm_rejects_bad_settings(kwargs):
    with pytest.raises(ConfigurationError):
        GradientDescentMomentum(**kwargs)
