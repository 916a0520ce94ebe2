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

import numpy as np


class FanInUniformInit(object):
    """
    Uniform in +-sqrt(scale / fan_in), fan_in being the product of every axis but
    the first (input channels times kernel area, or input features).
    """

    def __init__(self, scale=6.):
        self.scale = scale

    def __call__(self, out_shape, rng):
        fan_in = int(np.prod(out_shape[1:]))
        limit = np.sqrt(self.scale / fan_in)
        return rng.uniform(-limit, limit, out_shape)


class ConstantInit(object):
    def __init__(self, val=0.0):
        self.val = val

    def __call__(self, out_shape, rng=None):
        return np.full(out_shape, self.val, dtype=np.float64)
