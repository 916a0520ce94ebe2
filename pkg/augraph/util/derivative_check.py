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
from __future__ import division

import numpy as np

from augraph.op_graph.op_graph import Tensor, deriv, variable
from augraph.util.errors import ContractError, ParameterError
from augraph.util.threadstate import no_record
from augraph.util.utils import numeric_derivative

min_step = 1e-7
max_step = 1e-3
absolute_floor = 1e-8


def _as_array(x):
    if isinstance(x, Tensor):
        return x.numpy()
    return np.array(x, dtype=np.float64)


def _scalar(result):
    if not isinstance(result, Tensor) or result.size != 1:
        raise ContractError('grad_check needs a scalar-valued function, got shape {}'.format(
            getattr(result, 'shape', np.shape(result))))
    return result


def analytic_derivative(f, x_value):
    """
    d f/dx at x_value through the recorded graph.

    Arguments:
        f: Function from a Tensor to a scalar Tensor.
        x_value: ndarray position.

    Returns:
        ndarray shaped like x_value.
    """
    x = variable(x_value, name='x')
    result = _scalar(f(x))
    return deriv(result, x)


def probe_derivative(f, x_value, h):
    """
    Central differences of f at x_value, evaluated without recording.
    """
    def value(xx):
        with no_record():
            return _scalar(f(Tensor(xx))).item()

    return numeric_derivative(value, x_value, h)


def relative_errors(analytic, numeric):
    """
    Coordinate-wise |analytic - numeric| / max(|analytic|, |numeric|), falling back to
    the absolute difference where both magnitudes are below the floor.
    """
    diff = np.abs(analytic - numeric)
    scale = np.maximum(np.abs(analytic), np.abs(numeric))
    small = scale < absolute_floor
    return np.where(small, diff, diff / np.where(small, 1., scale))


def grad_check(f, x, h=1e-5):
    """
    Compare the analytic gradient of f at x to central finite differences.

    Arguments:
        f: Deterministic function from a Tensor to a scalar Tensor.
        x: Tensor or ndarray position.
        h (float): Finite difference step, in [1e-7, 1e-3].

    Returns:
        float: The worst coordinate-wise relative error.
    """
    if not min_step <= h <= max_step:
        raise ParameterError('step h={} outside [{}, {}]'.format(h, min_step, max_step))
    x_value = _as_array(x)
    analytic = analytic_derivative(f, x_value)
    numeric = probe_derivative(f, x_value, h)
    if analytic.size == 0:
        return 0.
    return float(np.max(relative_errors(analytic, numeric)))


def check_derivative(f, x_value, h=1e-5, **kwargs):
    """
    Check that the numeric and analytic derivatives of f are the same when x has
    value x_value.

    Arguments:
        f: function to take the derivative of
        x_value: the value of x we are going to compute the derivative of f at
        h: distance to perturb x in the numeric derivative
        kwargs: passed to assert_allclose.  Useful for atol/rtol.
    """
    x_value = _as_array(x_value)
    np.testing.assert_allclose(
        probe_derivative(f, x_value, h),
        analytic_derivative(f, x_value),
        **kwargs
    )
