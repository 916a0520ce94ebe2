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

import itertools as itt

import numpy as np

from augraph.op_graph import op_graph
from augraph.util.errors import DimensionError, ParameterError


def convolution(inputs, filters, bias, stride=1, pad=0):
    """
    Two-dimensional cross-correlation of one image.

    Args:
        inputs (Tensor): The input, shape (C, H, W).
        filters (Tensor): The kernels, shape (K, C, R, R), R odd.
        bias (Tensor): One bias per output channel, shape (K,).
        stride (int): Step between output positions, >= 1.
        pad (int): Zero padding on every spatial border, >= 0.

    Returns:
        TensorOp: The result of the convolution, shape (K, P, Q).

    """
    return ConvolutionOp(inputs, filters, bias, stride=stride, pad=pad)


conv2d = convolution


def output_length(length, fsize, pad, stride, axis):
    """
    Spatial length of a convolution or pooling output.

    Raises:
        DimensionError: when the window does not tile the padded input exactly.
    """
    span = length + 2 * pad - fsize
    if span < 0:
        raise DimensionError('window larger than padded input', axis=axis,
                             expected='>= {}'.format(fsize), actual=length + 2 * pad)
    if span % stride != 0:
        raise DimensionError(
            'stride {} does not tile the padded input'.format(stride), axis=axis,
            expected='(length + 2*pad - {}) divisible by {}'.format(fsize, stride),
            actual=length)
    return span // stride + 1


class ConvolutionOp(op_graph.TensorOp):
    def __init__(self, inputs, filters, bias, stride=1, pad=0, **kwargs):
        """
        Arguments:
            inputs  : input tensor.
            filters : filter/kernel tensor.
            bias    : per-output-channel bias.
        """
        inputs, filters, bias = op_graph.as_ops((inputs, filters, bias))
        if inputs.ndim != 3:
            raise DimensionError('convolution input must be (C, H, W)', axis='rank',
                                 expected=3, actual=inputs.ndim)
        if filters.ndim != 4:
            raise DimensionError('convolution filters must be (K, C, R, R)', axis='rank',
                                 expected=4, actual=filters.ndim)
        if inputs.shape[0] != filters.shape[1]:
            raise DimensionError('input and filter channels are not the same',
                                 axis='C', expected=filters.shape[1], actual=inputs.shape[0])
        K, C, R, S = filters.shape
        if R != S:
            raise DimensionError('filters must be square', axis='S', expected=R, actual=S)
        if R % 2 == 0:
            raise DimensionError('filter size must be odd', axis='R',
                                 expected='odd', actual=R)
        if bias.shape != (K,):
            raise DimensionError('one bias per output channel', axis='K',
                                 expected=(K,), actual=bias.shape)
        if stride < 1:
            raise ParameterError('stride must be >= 1, found {}'.format(stride))
        if pad < 0:
            raise ParameterError('pad must be >= 0, found {}'.format(pad))

        _, H, W = inputs.shape
        P = output_length(H, R, pad, stride, 'H')
        Q = output_length(W, S, pad, stride, 'W')

        self.stride = stride
        self.pad = pad

        padded = pad_spatial(inputs.data, pad)
        value = fprop_conv(padded, filters.data, P, Q, stride)
        value += bias.data[:, np.newaxis, np.newaxis]

        super(ConvolutionOp, self).__init__(
            args=(inputs, filters, bias), value=value, **kwargs
        )

    def generate_adjoints(self, adjoints, delta, inputs, filters, bias):
        padded = pad_spatial(inputs.data, self.pad)
        filters.generate_add_delta(
            adjoints, update_conv(padded, delta, filters.shape, self.stride))
        if inputs.requires_grad:
            gI = bprop_conv(delta, filters.data, padded.shape, self.stride)
            if self.pad:
                gI = gI[:, self.pad:-self.pad, self.pad:-self.pad]
            inputs.generate_add_delta(adjoints, gI)
        bias.generate_add_delta(adjoints, delta.sum(axis=(1, 2)))


def pad_spatial(I, pad):
    if pad == 0:
        return I
    return np.pad(I, ((0, 0), (pad, pad), (pad, pad)), mode='constant')


def _tap_slices(r, s, P, Q, stride):
    return (slice(None),
            slice(r, r + stride * (P - 1) + 1, stride),
            slice(s, s + stride * (Q - 1) + 1, stride))


def fprop_conv(I, F, P, Q, stride):
    """
    Cross-correlate padded I (C, H, W) with F (K, C, R, S) one filter tap at a time.

    Taps are accumulated in a fixed row-major order so results are bitwise
    reproducible.
    """
    K, C, R, S = F.shape
    O = np.zeros((K, P, Q), dtype=op_graph.default_dtype)
    for r, s in itt.product(range(R), range(S)):
        slicedI = I[_tap_slices(r, s, P, Q, stride)].reshape((C, -1))
        O += np.dot(F[:, :, r, s], slicedI).reshape((K, P, Q))
    return O


def bprop_conv(E, F, padded_shape, stride):
    """
    Gradient of the padded input given the output error E (K, P, Q).
    """
    K, P, Q = E.shape
    _, C, R, S = F.shape
    gI = np.zeros(padded_shape, dtype=op_graph.default_dtype)
    slicedE = E.reshape((K, -1))
    for r, s in itt.product(range(R), range(S)):
        gI[_tap_slices(r, s, P, Q, stride)] += \
            np.dot(F[:, :, r, s].T, slicedE).reshape((C, P, Q))
    return gI


def update_conv(I, E, filter_shape, stride):
    """
    Gradient of the filters given padded input I and output error E.
    """
    K, C, R, S = filter_shape
    _, P, Q = E.shape
    U = np.zeros(filter_shape, dtype=op_graph.default_dtype)
    slicedE = E.reshape((K, -1))
    for r, s in itt.product(range(R), range(S)):
        slicedI = I[_tap_slices(r, s, P, Q, stride)].reshape((C, -1))
        U[:, :, r, s] = np.dot(slicedE, slicedI.T)
    return U
