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
Layers of the expression classifier.  Each layer is allocated once for a known input
shape, drawing its parameters in a fixed order, and then maps Tensors to Tensors.
"""
from __future__ import division
from builtins import object

import augraph as ag
from augraph.frontends.fer.initializer import ConstantInit, FanInUniformInit
from augraph.op_graph.convolution import output_length
from augraph.util.errors import DimensionError


class Layer(object):
    def __init__(self, name=None):
        self.name = name

    def allocate(self, in_shape, rng):
        """
        Create parameters for inputs of in_shape.

        Returns:
            The output shape.
        """
        return in_shape

    @property
    def parameters(self):
        """
        list of (name, Tensor) in allocation order.
        """
        return []

    def train_outputs(self, in_obj):
        raise NotImplementedError()


class Conv2D(Layer):
    """
    Square odd kernels, equal padding on every side.

    Arguments:
        nout (int): Output channels.
        fshape (int): Kernel side.
        padding (int): Zero padding.
        strides (int): Stride.
        init: Kernel initializer.
        bias_init: Bias initializer.
    """

    def __init__(self, nout, fshape=3, padding=1, strides=1, init=None, bias_init=None,
                 **kwargs):
        super(Conv2D, self).__init__(**kwargs)
        self.nout = nout
        self.fshape = fshape
        self.padding = padding
        self.strides = strides
        self.init = init or FanInUniformInit()
        self.bias_init = bias_init or ConstantInit(0.)
        self.W = None
        self.b = None

    def allocate(self, in_shape, rng):
        C, H, W = in_shape
        f_shape = (self.nout, C, self.fshape, self.fshape)
        self.W = ag.variable(self.init(f_shape, rng), name='{}/W'.format(self.name))
        self.b = ag.variable(self.bias_init((self.nout,), rng), name='{}/b'.format(self.name))
        return (self.nout,
                output_length(H, self.fshape, self.padding, self.strides, 'H'),
                output_length(W, self.fshape, self.padding, self.strides, 'W'))

    @property
    def parameters(self):
        return [(self.W.name, self.W), (self.b.name, self.b)]

    def train_outputs(self, in_obj):
        return ag.convolution(in_obj, self.W, self.b, stride=self.strides, pad=self.padding)


class Activation(Layer):
    def __init__(self, transform=ag.relu, **kwargs):
        super(Activation, self).__init__(**kwargs)
        self.transform = transform

    def train_outputs(self, in_obj):
        # An activation layer with no transform defaults to identity
        if self.transform:
            return self.transform(in_obj)
        else:
            return in_obj


class Pool2D(Layer):
    """
    Max pooling over fshape x fshape windows.
    """

    def __init__(self, fshape=2, strides=None, **kwargs):
        super(Pool2D, self).__init__(**kwargs)
        self.fshape = fshape
        self.strides = fshape if strides is None else strides

    def allocate(self, in_shape, rng):
        C, H, W = in_shape
        if H < self.fshape or W < self.fshape:
            raise DimensionError('pool window larger than input', axis='H, W',
                                 expected='>= {}'.format(self.fshape), actual=(H, W))
        return (C,
                (H - self.fshape) // self.strides + 1,
                (W - self.fshape) // self.strides + 1)

    def train_outputs(self, in_obj):
        return ag.pooling(in_obj, self.fshape, self.strides)


class GlobalAvgPool(Layer):
    def allocate(self, in_shape, rng):
        return (in_shape[0],)

    def train_outputs(self, in_obj):
        return ag.global_avg_pool(in_obj)


class Flatten(Layer):
    def allocate(self, in_shape, rng):
        size = 1
        for length in in_shape:
            size *= length
        return (size,)

    def train_outputs(self, in_obj):
        return ag.flatten(in_obj)


class Linear(Layer):
    def __init__(self, nout, init=None, bias_init=None, **kwargs):
        super(Linear, self).__init__(**kwargs)
        self.nout = nout
        self.init = init or FanInUniformInit()
        self.bias_init = bias_init or ConstantInit(0.)
        self.W = None
        self.b = None

    def allocate(self, in_shape, rng):
        if len(in_shape) != 1:
            raise DimensionError('linear input must be a vector', axis='rank', expected=1,
                                 actual=len(in_shape))
        self.W = ag.variable(self.init((self.nout, in_shape[0]), rng),
                             name='{}/W'.format(self.name))
        self.b = ag.variable(self.bias_init((self.nout,), rng), name='{}/b'.format(self.name))
        return (self.nout,)

    @property
    def parameters(self):
        return [(self.W.name, self.W), (self.b.name, self.b)]

    def train_outputs(self, in_obj):
        return ag.linear(in_obj, self.W, self.b)


class Sequential(object):
    def __init__(self, layers):
        self.layers = layers

    def allocate(self, in_shape, rng):
        for l in self.layers:
            in_shape = l.allocate(in_shape, rng)
        return in_shape

    @property
    def parameters(self):
        return [p for l in self.layers for p in l.parameters]

    def train_outputs(self, in_obj):
        for l in self.layers:
            in_obj = l.train_outputs(in_obj)
        return in_obj
