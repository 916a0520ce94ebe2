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
from builtins import object

import decorator
import numpy as np

from augraph.util.errors import ParameterError


class RandomTensorGenerator(object):
    """
    Generate various pseudo-random values from a seed.

    Arguments:
        seed: The seed for the random number generator.
        dtype: The type of the generated values.
    """

    def __init__(self, seed=0, dtype=np.float64):
        self.dtype = dtype
        self.seed = 0
        self.reset(seed)

    def reset(self, seed=None):
        """
        Restart generation from the seed.

        Arguments:
            seed: If supplied, a new seed for generation, otherwise the original seed.
        """
        if seed is not None:
            self.seed = seed
        self.rng = np.random.RandomState(seed=self.seed)

    def uniform(self, low, high, shape, dtype=None):
        """
        Returns an array drawn uniformly from [low, high).

        Arguments:
            low: The lower limit of the distribution.
            high: The upper limit of the distribution.
            shape: The shape of the array.
            dtype: If supplied, the type of the values.

        Returns:
            The array.
        """
        if dtype is None:
            dtype = self.dtype
        return np.array(self.rng.uniform(low, high, shape), dtype=dtype)

    def normal(self, loc, scale, shape, dtype=None):
        if dtype is None:
            dtype = self.dtype
        return np.array(self.rng.normal(loc, scale, shape), dtype=dtype)

    def random_integers(self, low, high, shape, dtype=np.int64):
        """
        Returns integers drawn uniformly from [low, high], both ends included.
        """
        return self.rng.randint(low, high + 1, shape).astype(dtype)


def with_error_settings(**new_settings):
    """
    Decorator running the wrapped function under the given np.seterr settings.

    Arguments:
      **new_settings: Keyword arguments for np.seterr, e.g. over='raise'.

    Returns:
      The decorator.
    """
    @decorator.decorator
    def dec(f, *args, **kwargs):
        with np.errstate(**new_settings):
            return f(*args, **kwargs)

    return dec


def numeric_derivative(f, x, dx):
    """
    Compute df/dx at x numerically with central differences.

    Do not use for non-continuous derivatives such as min/max.  If there is a tie at
    the extremum, only one value will change and the computed derivative will be very
    wrong.

    Arguments:
      f: Function from an ndarray shaped like x to a scalar.
      x: Derivative position.  It is not modified.
      dx: Scalar change in each dimension.

    Returns:
      ndarray shaped like x.
    """
    if not dx > 0:
        raise ParameterError('dx must be positive, found {}'.format(dx))
    x = np.array(x, dtype=np.float64)
    d = np.zeros(x.shape, dtype=np.float64)

    idxiter = np.nditer(x, flags=['multi_index'], op_flags=['readwrite'])
    for xiter in idxiter:
        old_x = float(xiter)
        xiter[...] = old_x + dx
        f_plus = float(f(x))
        xiter[...] = old_x - dx
        f_minus = float(f(x))
        xiter[...] = old_x
        d[idxiter.multi_index] = (f_plus - f_minus) / (2 * dx)
    return d
