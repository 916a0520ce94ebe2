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
Channel mean attention and the map cosine.
"""
import numpy as np
import pytest

import augraph as ag
from augraph.util.errors import DimensionError, ParameterError
from augraph.util.utils import RandomTensorGenerator

rng = RandomTensorGenerator(0, np.float64)


def test_channel_mean_values():
    features = [[[1., 3.], [2., 4.]], [[3., 1.], [4., 2.]]]
    np.testing.assert_array_equal(ag.channel_mean(features).data, [[2., 2.], [3., 3.]])


def test_channel_mean_of_one_channel():
    x = rng.uniform(-1, 1, (1, 4, 3))
    np.testing.assert_array_equal(ag.channel_mean(x).data, x[0])
    np.testing.assert_array_equal(ag.channel_mean(np.zeros((5, 2, 2))).data, np.zeros((2, 2)))


def test_channel_mean_is_linear():
    F = rng.uniform(-1, 1, (6, 5, 5))
    G = rng.uniform(-1, 1, (6, 5, 5))
    np.testing.assert_allclose(ag.channel_mean(F + G).data,
                               ag.channel_mean(F).data + ag.channel_mean(G).data,
                               rtol=0, atol=1e-12)


def test_channel_mean_gradient_is_spread():
    x = ag.variable(rng.uniform(-1, 1, (4, 2, 2)))
    delta = np.array([[1., 2.], [3., 4.]])
    grad = ag.deriv(ag.channel_mean(x), x, error=delta)
    np.testing.assert_array_equal(grad, np.broadcast_to(delta / 4., (4, 2, 2)))


def test_channel_mean_errors():
    with pytest.raises(DimensionError):
        ag.channel_mean(np.zeros((0, 2, 2)))
    with pytest.raises(DimensionError):
        ag.channel_mean(np.zeros((2, 2)))


def test_cosine_hand_values():
    t = np.array([[1., 0.], [0., 0.]])
    a = np.array([[0., 0.], [0., 1.]])
    assert ag.cosine_sim_map(t, a).item() == 0.
    value = ag.cosine_sim_map(np.ones((2, 2)), [[1., 0.], [0., 0.]]).item()
    assert abs(value - 0.5) < 1e-12


def test_cosine_self_similarity():
    t = rng.uniform(0.5, 1., (4, 4))
    assert abs(ag.cosine_sim_map(t, t).item() - 1.) < 1e-12


def test_cosine_scale_invariance():
    for _ in range(20):
        t = rng.uniform(-1, 1, (8, 8))
        a = rng.uniform(0, 1, (8, 8))
        alpha, beta = rng.uniform(0.5, 10., (2,))
        R = ag.cosine_sim_map(t, a).item()
        assert abs(ag.cosine_sim_map(alpha * t, beta * a).item() - R) < 1e-10


def test_cosine_range():
    for _ in range(50):
        t = rng.uniform(-1, 1, (5, 5))
        a = rng.uniform(-1, 1, (5, 5))
        R = ag.cosine_sim_map(t, a).item()
        assert -1 - 1e-12 <= R <= 1 + 1e-12
        R = ag.cosine_sim_map(np.abs(t), np.abs(a)).item()
        assert R >= -1e-12


def test_cosine_of_zero_map():
    t = ag.variable(np.zeros((3, 3)))
    R = ag.cosine_sim_map(t, rng.uniform(0, 1, (3, 3)))
    assert R.item() == 0.
    grad = ag.deriv(R, t)
    assert np.all(np.isfinite(grad))


def test_cosine_is_stationary_at_self_similarity():
    t = ag.variable(rng.uniform(0.1, 1., (4, 4)))
    ag.backward(ag.cosine_sim_map(t, t))
    np.testing.assert_allclose(t.grad, np.zeros((4, 4)), atol=1e-10)


def test_cosine_gradient_reaches_both_maps():
    t = ag.variable(rng.uniform(0.1, 1., (3, 3)))
    a = ag.variable(rng.uniform(0.1, 1., (3, 3)))
    ag.backward(ag.cosine_sim_map(t, a))
    assert t.grad is not None and a.grad is not None
    assert np.any(t.grad != 0) and np.any(a.grad != 0)


def test_cosine_errors():
    with pytest.raises(DimensionError):
        ag.cosine_sim_map(np.ones((2, 2)), np.ones((2, 3)))
    with pytest.raises(ParameterError):
        ag.cosine_sim_map(np.ones((2, 2)), np.ones((2, 2)), eps=0.)
