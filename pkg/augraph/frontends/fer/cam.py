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
Class activation maps: CAM, GradCAM, GradCAM++ and LayerCAM.

Every extractor returns a nonnegative map normalized to a peak of 1 (an all-zero map
stays all zero) and leaves the model untouched: parameters, their gradients and
state.last_forward are never written.
"""
from __future__ import division
from builtins import object

from collections import OrderedDict

import numpy as np

import augraph as ag
from augraph.frontends.fer.model import as_model_input, check_layer, forward, forward_from
from augraph.util.errors import DimensionError, ParameterError, UnsupportedHeadError

default_eps = 1e-12


class CamMap(object):
    """
    A normalized class activation map.

    Arguments:
        values: (h, w) nonnegative map with peak 1, or all zero.
        method (str): The extractor that produced it.
        class_index (int): The class it explains.
        layer (int): The stage it was computed at.
    """

    def __init__(self, values, method, class_index, layer):
        values = np.array(values, dtype=np.float64)
        values.setflags(write=False)
        self.values = values
        self.method = method
        self.class_index = class_index
        self.layer = layer

    @property
    def shape(self):
        return self.values.shape

    @property
    def is_zero(self):
        return not self.values.any()

    def __repr__(self):
        return 'CamMap({}, class={}, layer={}, {}x{})'.format(
            self.method, self.class_index, self.layer, *self.values.shape)


def normalize_map(values):
    """
    ReLU, then divide by the peak when it is positive.
    """
    values = np.maximum(np.asarray(values, dtype=np.float64), 0.)
    peak = values.max() if values.size else 0.
    if peak > 0:
        values = values / peak
    return values


def _values(x):
    return x.data if isinstance(x, ag.Tensor) else np.asarray(x, dtype=np.float64)


def cam(features, head_weights, y, layer=None):
    """
    Class activation mapping for a global-average-pooling linear head:
    ReLU(sum_k W[y, k] F_k), normalized.

    Arguments:
        features: (n, h, w) stack feeding the global average pooling.
        head_weights: (classes, n) linear head weight.
        y (int): The class to explain.
        layer (int, optional): Recorded on the map.
    """
    F = _values(features)
    W = _values(head_weights)
    if F.ndim != 3:
        raise DimensionError('features must be (n, h, w)', axis='rank', expected=3,
                             actual=F.ndim)
    if W.ndim != 2 or W.shape[1] != F.shape[0]:
        raise UnsupportedHeadError(
            'head weight {} does not map the {} feature channels'.format(W.shape, F.shape[0]))
    if not 0 <= y < W.shape[0]:
        raise ParameterError('class {} outside [0, {})'.format(y, W.shape[0]))
    return CamMap(normalize_map(np.tensordot(W[y], F, axes=1)), 'cam', y, layer)


def layer_gradients(state, image, y, l):
    """
    Stage l's post-ReLU features and d logit_y / d features, computed without writing
    to the model.

    Returns:
        (features, gradients) as (n, h, w) arrays.
    """
    l = check_layer(l, len(state.stages))
    if not 0 <= y < state.cfg.classes:
        raise ParameterError('class {} outside [0, {})'.format(y, state.cfg.classes))
    x = as_model_input(state, image)
    with ag.no_record():
        for stage in state.stages[:l - 1]:
            _, _, x = stage.train_outputs(x)
        _, features, _ = state.stages[l - 1].train_outputs(x)
    # A fresh leaf makes the features differentiable whatever the parameters are.
    F = ag.variable(features.data, name='stage{}/features'.format(l))
    with ag.recording(True):
        logits = forward_from(state, F, l)
    onehot = np.zeros(logits.shape)
    onehot[y] = 1.
    return F.data, ag.deriv(logits, F, error=onehot)


def gradcam(state, image, y, l):
    """
    ReLU(sum_k alpha_k F_k) with alpha_k the spatial mean of d logit_y / d F_k.
    """
    F, g = layer_gradients(state, image, y, l)
    alpha = g.mean(axis=(1, 2))
    return CamMap(normalize_map(np.tensordot(alpha, F, axes=1)), 'gradcam', y, l)


def gradcam_pp(state, image, y, l, eps=default_eps):
    """
    GradCAM++ with the closed-form pixel weights of the exponentiated score:

        a_kij = g^2 / (2 g^2 + sum_ab F_kab g^3),   w_k = sum_ij a_kij ReLU(g_kij)

    The common positive factor of the exponential cancels in the normalization.
    """
    F, g = layer_gradients(state, image, y, l)
    g2 = g * g
    g3 = g2 * g
    denominator = 2. * g2 + np.sum(F, axis=(1, 2), keepdims=True) * g3
    denominator = np.where(denominator != 0., denominator, eps)
    alpha = g2 / denominator
    weights = np.sum(alpha * np.maximum(g, 0.), axis=(1, 2))
    return CamMap(normalize_map(np.tensordot(weights, F, axes=1)), 'gradcampp', y, l)


def layercam(state, image, y, l):
    """
    ReLU(sum_k ReLU(d logit_y / d F_k) * F_k), normalized.
    """
    F, g = layer_gradients(state, image, y, l)
    return CamMap(normalize_map(np.sum(np.maximum(g, 0.) * F, axis=0)), 'layercam', y, l)


def model_cam(state, image, y, l):
    """
    cam for a model; only defined at the last stage of a global-average-pooling head.
    """
    l = check_layer(l, len(state.stages))
    if state.cfg.head != 'gap-linear':
        raise UnsupportedHeadError('CAM needs a gap-linear head, found {}'.format(
            state.cfg.head))
    if l != len(state.stages) or state.stages[-1].pool is not None:
        raise UnsupportedHeadError(
            'CAM is only defined on the features feeding global average pooling')
    with ag.no_record():
        _, features = forward(state, image, record=False)
    return cam(features[l - 1], state.head_weights, y, layer=l)


methods = OrderedDict([
    ('cam', model_cam),
    ('gradcam', gradcam),
    ('gradcampp', gradcam_pp),
    ('layercam', layercam),
])


def supports(state, method, l):
    """
    True when method can explain state at layer l.
    """
    if method != 'cam':
        return method in methods
    return state.cfg.head == 'gap-linear' and l == len(state.stages) \
        and state.stages[-1].pool is None


def extract(method, state, image, y, l):
    """
    Run the named extractor.
    """
    if method not in methods:
        raise ParameterError('unknown CAM method {!r}; choose from {}'.format(
            method, ', '.join(methods)))
    return methods[method](state, image, y, l)
