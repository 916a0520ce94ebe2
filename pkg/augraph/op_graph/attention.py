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
Spatial attention and the map-to-map cosine similarity used to align it.
"""
from __future__ import division

import numpy as np

from augraph.op_graph import op_graph
from augraph.util.errors import DimensionError, ParameterError

default_eps = 1e-12


class ChannelMeanOp(op_graph.TensorOp):
    """
    Average of the n channels of a (n, h, w) feature stack.
    """

    def __init__(self, features, **kwargs):
        features = op_graph.as_tensor(features)
        if features.ndim != 3:
            raise DimensionError('features must be (n, h, w)', axis='rank',
                                 expected=3, actual=features.ndim)
        if features.shape[0] == 0:
            raise DimensionError('cannot average an empty channel axis', axis=0,
                                 expected='>= 1', actual=0)
        super(ChannelMeanOp, self).__init__(
            args=(features,), value=features.data.mean(axis=0), **kwargs)

    def generate_adjoints(self, adjoints, delta, features):
        n = features.shape[0]
        features.generate_add_delta(
            adjoints, np.array(np.broadcast_to(delta / n, features.shape)))


def channel_mean(features):
    """
    The layer attention map, the mean of a feature stack over its channels.

    Arguments:
        features (Tensor): Shape (n, h, w), n >= 1.

    Returns:
        TensorOp: Shape (h, w).
    """
    return ChannelMeanOp(features)


class CosineSimMapOp(op_graph.TensorOp):
    """
    R = sum(t * a) / (|t| |a| + eps), with |.| the Frobenius norm.

    Arguments:
        t: The candidate map.
        a: The reference map, usually a constant.
        eps: Keeps the denominator positive.
    """

    def __init__(self, t, a, eps=default_eps, **kwargs):
        t, a = op_graph.as_tensor(t), op_graph.as_tensor(a)
        if t.shape != a.shape:
            raise DimensionError('maps must have the same shape', axis='shape',
                                 expected=a.shape, actual=t.shape)
        if not eps > 0:
            raise ParameterError('eps must be positive, found {}'.format(eps))
        self.eps = eps
        self.s = float(np.sum(t.data * a.data))
        self.t_norm = float(np.linalg.norm(t.data))
        self.a_norm = float(np.linalg.norm(a.data))
        self.denominator = self.t_norm * self.a_norm + eps
        super(CosineSimMapOp, self).__init__(
            args=(t, a), value=self.s / self.denominator, **kwargs)

    def _partial(self, x, y, x_norm, y_norm):
        # dR/dx = y/D - s |y| x / (|x| D^2); the second term vanishes as x -> 0.
        D = self.denominator
        grad = y.data / D
        if x_norm > 0:
            grad = grad - (self.s * y_norm / (x_norm * D * D)) * x.data
        return grad

    def generate_adjoints(self, adjoints, delta, t, a):
        delta = float(delta)
        if t.requires_grad:
            t.generate_add_delta(
                adjoints, delta * self._partial(t, a, self.t_norm, self.a_norm))
        if a.requires_grad:
            a.generate_add_delta(
                adjoints, delta * self._partial(a, t, self.a_norm, self.t_norm))


def cosine_sim_map(t, a, eps=default_eps):
    """
    Cosine similarity of two maps of the same shape.

    Arguments:
        t (Tensor): The candidate map, typically a layer attention map.
        a (Tensor): The reference map.
        eps (float): Added to the norm product.

    Returns:
        TensorOp: A scalar in [-1, 1]; in [0, 1] when both maps are nonnegative.
    """
    return CosineSimMapOp(t, a, eps=eps)
