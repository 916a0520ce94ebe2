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

from augraph.util.errors import ConfigurationError


class Optimizer(object):
    def __init__(self, name=None, **kwargs):
        super(Optimizer, self).__init__(**kwargs)
        self.name = name
        self.iteration_index = 0


class GradientDescentMomentum(Optimizer):
    """
    Stochastic gradient descent with momentum and optional weight decay:

        velocity = momentum_coef * velocity - learning_rate * (grad + wdecay * param)
        param = param + velocity

    Arguments:
        learning_rate (float): >= 0.
        momentum_coef (float): In [0, 1).
        wdecay (float): L2 weight decay, >= 0.
    """

    def __init__(self, learning_rate, momentum_coef=0.0, wdecay=0.0, name=None, **kwargs):
        super(GradientDescentMomentum, self).__init__(name=name, **kwargs)
        if learning_rate < 0:
            raise ConfigurationError('learning rate must be >= 0, found {}'.format(
                learning_rate))
        if not 0 <= momentum_coef < 1:
            raise ConfigurationError('momentum must be in [0, 1), found {}'.format(
                momentum_coef))
        if wdecay < 0:
            raise ConfigurationError('weight decay must be >= 0, found {}'.format(wdecay))
        self.learning_rate = learning_rate
        self.momentum_coef = momentum_coef
        self.wdecay = wdecay
        self.velocities = {}

    def __call__(self, parameters):
        """
        Apply one update to every (name, Tensor) in parameters using its grad; a
        parameter without a grad is treated as having a zero gradient.
        """
        for name, variable in parameters:
            grad = variable.grad
            if grad is None:
                grad = np.zeros(variable.shape)
            velocity = self.velocities.get(name)
            if velocity is None:
                velocity = np.zeros(variable.shape)
            velocity = velocity * self.momentum_coef - self.learning_rate * (
                grad + self.wdecay * variable.data)
            self.velocities[name] = velocity
            variable.assign(variable.data + velocity)
        self.iteration_index += 1
