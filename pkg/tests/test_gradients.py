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
"""
Finite-difference checks of every differentiable op.
"""
import numpy as np
import pytest

import augraph as ag
from augraph.util.derivative_check import check_derivative, grad_check
from augraph.util.errors import ContractError, ParameterError
from augraph.util.utils import RandomTensorGenerator, numeric_derivative

tolerance = 1e-4
quick_trials = 10
acceptance_trials = 100


def separated(gen, shape, low=-1., high=1.):
    """
    Distinct values at least (high - low) / (2 * size) apart, so no max or ReLU kink lies
    within a finite difference step.
    """
    size = int(np.prod(shape))
    levels = np.linspace(low, high, 2 * size + 1)[1::2]
    values = gen.rng.permutation(levels)
    return values.reshape(shape)


def weighted(y, seed):
    """
    sum(y * w) for fixed random w, reducing any output to a scalar with O(1) gradients.
    """
    w = np.random.RandomState(seed).uniform(-1, 1, y.shape)
    return ag.sum(y * w)


def case_add(gen):
    b = gen.uniform(-1, 1, (4,))
    return gen.uniform(-1, 1, (3, 4)), lambda x: weighted(x + b, 1)


def case_subtract(gen):
    b = gen.uniform(-1, 1, (3, 4))
    return gen.uniform(-1, 1, (3, 4)), lambda x: weighted(b - x, 1)


def case_multiply(gen):
    b = gen.uniform(-1, 1, (3, 4))
    return gen.uniform(-1, 1, (3, 4)), lambda x: weighted(x * b * x, 1)


def case_divide(gen):
    b = gen.uniform(-1, 1, (3, 4))
    return gen.uniform(-1, 1, (3, 4)), lambda x: weighted(b / (x + 3.) + x / 2., 1)


def case_negative(gen):
    return gen.uniform(-1, 1, (5,)), lambda x: weighted(-x, 1)


def case_mean(gen):
    return gen.uniform(-1, 1, (2, 3)), lambda x: ag.mean(x * x)


def case_flatten(gen):
    return gen.uniform(-1, 1, (2, 3, 2)), lambda x: weighted(ag.flatten(x), 1)


def case_relu(gen):
    return separated(gen, (4, 5)), lambda x: weighted(ag.relu(x), 1)


def case_linear_input(gen):
    W = gen.uniform(-1, 1, (3, 5))
    b = gen.uniform(-1, 1, (3,))
    return gen.uniform(-1, 1, (5,)), lambda x: weighted(ag.linear(x, W, b), 1)


def case_linear_weight(gen):
    x = gen.uniform(-1, 1, (5,))
    b = gen.uniform(-1, 1, (3,))
    return gen.uniform(-1, 1, (3, 5)), lambda W: weighted(ag.linear(x, W, b), 1)


def case_linear_bias(gen):
    x = gen.uniform(-1, 1, (5,))
    W = gen.uniform(-1, 1, (3, 5))
    return gen.uniform(-1, 1, (3,)), lambda b: weighted(ag.linear(x, W, b), 1)


def case_conv_input(gen):
    F = gen.uniform(-1, 1, (3, 2, 3, 3))
    b = gen.uniform(-1, 1, (3,))
    return gen.uniform(-1, 1, (2, 5, 5)), \
        lambda x: weighted(ag.conv2d(x, F, b, stride=2, pad=1), 1)


def case_conv_filters(gen):
    x = gen.uniform(-1, 1, (2, 4, 4))
    b = gen.uniform(-1, 1, (3,))
    return gen.uniform(-1, 1, (3, 2, 3, 3)), \
        lambda F: weighted(ag.conv2d(x, F, b, stride=1, pad=1), 1)


def case_conv_bias(gen):
    x = gen.uniform(-1, 1, (2, 4, 4))
    F = gen.uniform(-1, 1, (3, 2, 3, 3))
    return gen.uniform(-1, 1, (3,)), lambda b: weighted(ag.conv2d(x, F, b, pad=1), 1)


def case_maxpool(gen):
    return separated(gen, (2, 4, 5)), lambda x: weighted(ag.maxpool2d(x, 2), 1)


def case_global_avg_pool(gen):
    return gen.uniform(-1, 1, (3, 4, 4)), lambda x: weighted(ag.global_avg_pool(x), 1)


def case_channel_mean(gen):
    return gen.uniform(-1, 1, (4, 3, 3)), lambda x: weighted(ag.channel_mean(x), 1)


def case_cosine_t(gen):
    a = gen.uniform(0, 1, (4, 4))
    return gen.uniform(-1, 1, (4, 4)), lambda t: ag.cosine_sim_map(t, a)


def case_cosine_a(gen):
    t = gen.uniform(-1, 1, (4, 4))
    return gen.uniform(0, 1, (4, 4)), lambda a: ag.cosine_sim_map(t, a)


def case_softmax_cross_entropy(gen):
    y = int(gen.random_integers(0, 4, ()))
    return gen.uniform(-1, 1, (5,)), lambda x: ag.softmax_cross_entropy(x, y)


cases = dict((name[5:], f) for name, f in list(globals().items()) if name.startswith('case_'))


def pytest_generate_tests(metafunc):
    if 'quick_case' in metafunc.fixturenames:
        metafunc.parametrize('quick_case', sorted(cases))
    if 'trial' in metafunc.fixturenames:
        metafunc.parametrize('trial', range(quick_trials))


def worst_error(name, trials):
    worst = 0.
    for trial in trials:
        gen = RandomTensorGenerator(trial)
        x, f = cases[name](gen)
        worst = max(worst, grad_check(f, x, h=1e-5))
    return worst


def test_gradient(quick_case, trial):
    assert worst_error(quick_case, [trial]) < tolerance


@pytest.mark.acceptance
@pytest.mark.parametrize('name', sorted(cases))
def test_gradient_acceptance(name):
    assert worst_error(name, range(acceptance_trials)) < tolerance


def test_grad_check_of_sum_is_exact():
    gen = RandomTensorGenerator(0)
    assert grad_check(ag.sum, gen.uniform(-1, 1, (3, 4))) < 1e-8


def test_grad_check_oracles():
    gen = RandomTensorGenerator(5)
    x, f = case_softmax_cross_entropy(gen)
    assert grad_check(f, x) < 1e-5
    x, f = case_cosine_t(gen)
    assert grad_check(f, x + 2.) < 1e-5


def test_chained_relu_linear():
    gen = RandomTensorGenerator(2)
    x = gen.uniform(0.5, 1., (4,))
    b = gen.uniform(-0.1, 0.1, (3,))
    c = gen.uniform(0.5, 1., (3,))

    def f(W):
        return ag.sum(ag.relu(ag.linear(x, W, b)) * c)

    assert grad_check(f, gen.uniform(-1, 1, (3, 4))) < 1e-6


def test_check_derivative():
    gen = RandomTensorGenerator(1)
    x, f = case_multiply(gen)
    check_derivative(f, x, h=1e-5, rtol=1e-6, atol=1e-8)


def test_grad_check_step_range():
    with pytest.raises(ParameterError):
        grad_check(ag.sum, np.ones(3), h=1e-2)
    with pytest.raises(ParameterError):
        grad_check(ag.sum, np.ones(3), h=1e-9)


def test_grad_check_needs_scalar():
    with pytest.raises(ContractError):
        grad_check(ag.relu, np.ones(3))


def test_numeric_derivative():
    d = numeric_derivative(lambda v: np.sum(v ** 3), np.array([1., 2.]), 1e-5)
    np.testing.assert_allclose(d, [3., 12.], rtol=1e-8)
    with pytest.raises(ParameterError):
        numeric_derivative(np.sum, np.ones(2), 0.)
