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
from numpy.lib.stride_tricks import sliding_window_view

from augraph.op_graph import op_graph
from augraph.util.errors import DimensionError, ParameterError


def pooling(inputs, k, stride=None):
    """
    Per-channel max pooling.

    Args:
        inputs (Tensor): Input to pooling, shape (C, H, W).
        k (int): Window side.
        stride (int, optional): Step between windows.  Defaults to k.

    Returns:
        TensorOp: The pooling computation.

    """
    return PoolingOp(inputs, k, k if stride is None else stride)


maxpool2d = pooling


class PoolingOp(op_graph.TensorOp):
    """
    Max over k x k windows.  Ties go to the first element in row-major order of the
    window, and only that element receives gradient.
    """

    def __init__(self, inputs, k, stride, **kwargs):
        inputs = op_graph.as_tensor(inputs)
        if inputs.ndim != 3:
            raise DimensionError('pooling input must be (C, H, W)', axis='rank',
                                 expected=3, actual=inputs.ndim)
        if k < 1 or stride < 1:
            raise ParameterError('pool window {} and stride {} must be >= 1'.format(k, stride))
        C, H, W = inputs.shape
        if H < k:
            raise DimensionError('pool window larger than input', axis='H',
                                 expected='>= {}'.format(k), actual=H)
        if W < k:
            raise DimensionError('pool window larger than input', axis='W',
                                 expected='>= {}'.format(k), actual=W)
        # Trailing rows/columns that do not fill a window are dropped.
        P = (H - k) // stride + 1
        Q = (W - k) // stride + 1

        self.k = k
        self.stride = stride

        windows = sliding_window_view(inputs.data, (k, k), axis=(1, 2))
        windows = windows[:, ::stride, ::stride][:, :P, :Q].reshape((C, P, Q, k * k))
        # np.argmax returns the first maximal element, which is the tie rule.
        self.argmax = np.argmax(windows, axis=-1)
        value = np.take_along_axis(windows, self.argmax[..., np.newaxis], axis=-1)[..., 0]

        super(PoolingOp, self).__init__(args=(inputs,), value=value, **kwargs)

    def generate_adjoints(self, adjoints, delta, inputs):
        inputs.generate_add_delta(adjoints, bprop_pool(delta, self.argmax, inputs.shape,
                                                       self.k, self.stride))


def bprop_pool(E, argmax, input_shape, k, stride):
    """
    Route each output error to the input element that won its window.
    """
    C, P, Q = E.shape
    c, p, q = np.indices((C, P, Q))
    rows = p * stride + argmax // k
    cols = q * stride + argmax % k
    D = np.zeros(input_shape, dtype=op_graph.default_dtype)
    # add.at accumulates repeated indices (overlapping windows) in index order.
    np.add.at(D, (c.ravel(), rows.ravel(), cols.ravel()), E.ravel())
    return D


class GlobalAvgPoolOp(op_graph.TensorOp):
    """
    Per-channel spatial mean, (C, H, W) -> (C,).
    """

    def __init__(self, inputs, **kwargs):
        inputs = op_graph.as_tensor(inputs)
        if inputs.ndim != 3:
            raise DimensionError('global average pooling input must be (C, H, W)',
                                 axis='rank', expected=3, actual=inputs.ndim)
        if inputs.shape[1] * inputs.shape[2] == 0:
            raise DimensionError('empty spatial extent', axis='H*W', expected='>= 1',
                                 actual=0)
        super(GlobalAvgPoolOp, self).__init__(
            args=(inputs,), value=inputs.data.mean(axis=(1, 2)), **kwargs)

    def generate_adjoints(self, adjoints, delta, inputs):
        _, H, W = inputs.shape
        spread = np.broadcast_to(delta[:, np.newaxis, np.newaxis] / (H * W), inputs.shape)
        inputs.generate_add_delta(adjoints, np.array(spread))


def global_avg_pool(inputs):
    return GlobalAvgPoolOp(inputs)
