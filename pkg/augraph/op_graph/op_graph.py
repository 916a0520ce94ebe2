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

import numbers

import numpy as np
from builtins import object
from scipy.special import logsumexp

from augraph.util.errors import ClassIndexError, ContractError, DimensionError
from augraph.util.threadstate import is_recording

default_dtype = np.float64


class Tensor(object):
    """
    A dense tensor of 64-bit floats.

    Values are immutable once created; only the gradient buffer of a leaf changes, and
    only during backward.

    Arguments:
        value: Anything np.asarray accepts.  The value is copied.
        requires_grad (bool): Accumulate gradients into this tensor during backward.
        name (str, optional): Name used in error messages and checkpoints.

    Attributes:
        grad: None, or an ndarray with the shape of the value holding accumulated
            gradients.
        args: The tensors this tensor was computed from.  Empty for leaves and for ops
            created while recording is off.
    """

    # ndarray <op> Tensor dispatches to the reflected methods below
    __array_ufunc__ = None

    def __init__(self, value, requires_grad=False, name=None, **kwargs):
        super(Tensor, self).__init__(**kwargs)
        value = np.array(value, dtype=default_dtype)
        value.setflags(write=False)
        self.__value = value
        self.requires_grad = bool(requires_grad)
        self.grad = None
        self.name = name
        self.args = ()

    @property
    def data(self):
        """The read-only row-major value."""
        return self.__value

    @property
    def shape(self):
        return self.__value.shape

    @property
    def size(self):
        return self.__value.size

    @property
    def ndim(self):
        return self.__value.ndim

    @property
    def is_scalar(self):
        return self.__value.size == 1

    @property
    def is_leaf(self):
        return not isinstance(self, TensorOp)

    def item(self):
        """
        Returns:
            The value of a one-element tensor as a Python float.
        """
        return float(self.__value.reshape(()))

    def numpy(self):
        """
        Returns:
            A writable copy of the value.
        """
        return np.array(self.__value)

    def zero_grad(self):
        """
        Clear the accumulated gradient.
        """
        self.grad = None

    def assign(self, value):
        """
        Replace the value of a leaf, e.g. a parameter after an optimizer step.

        Tensors computed from the old value keep it.

        Arguments:
            value: New value with the same shape.
        """
        if not self.is_leaf:
            raise ContractError('only leaf tensors can be assigned')
        value = np.array(value, dtype=default_dtype)
        if value.shape != self.shape:
            raise DimensionError('assigned value must keep the shape', axis='shape',
                                 expected=self.shape, actual=value.shape)
        value.setflags(write=False)
        self.__value = value

    def generate_add_delta(self, adjoints, delta):
        """
        Adds delta to the backprop contribution.

        Arguments:
            adjoints: d(root)/d(tensor) for all tensors used to compute root.
            delta: Backprop contribution, same shape as self.
        """
        if not self.requires_grad:
            return
        if delta.shape != self.shape:
            raise DimensionError(
                'A tensor and its adjoint must have the same shape',
                axis='shape', expected=self.shape, actual=delta.shape)
        if self not in adjoints:
            adjoints[self] = delta
        else:
            adjoints[self] = delta + adjoints[self]

    @staticmethod
    def visit_input_closure(roots, fun):
        """
        "Bottom-up" post-order traversal of roots and their inputs.

        Nodes will only be visited once, even if there are multiple routes to the
        same node.

        Arguments:
            roots: root set of tensors to visit
            fun: Function to call on each visited tensor
        """
        visited = set()

        def visit(node):
            if node not in visited:
                visited.add(node)
                for arg in node.args:
                    visit(arg)
                fun(node)

        for node in roots:
            visit(node)

    @staticmethod
    def ordered_ops(results):
        """
        Depth-first, post-order "Bottom Up" traversal of tensors in results.

        Arguments:
          results: a list of tensors which are the roots of the graph traversal

        Returns:
          list of tensors in depth-first, post-order; every tensor follows its inputs.
        """
        ordered_ops = []
        Tensor.visit_input_closure(results, ordered_ops.append)
        return ordered_ops

    def adjoints(self, error=None):
        """
        Returns a map containing the adjoints of this tensor with respect to the tensors
        it was computed from.

        Arguments:
            error (ndarray, optional): The adjoint of self.  Defaults to ones.

        Returns:
            Map from tensor to d(self)/d(tensor), for every tensor that requires grad.
        """
        if error is None:
            error = np.ones(self.shape, dtype=default_dtype)
        adjoints = {self: np.asarray(error, dtype=default_dtype)}

        # Visit in reverse post-order so every op's adjoint is complete before it
        # is propagated to its inputs.
        for o in reversed(Tensor.ordered_ops([self])):
            if o in adjoints and o.args:
                o.generate_adjoints(adjoints, adjoints[o], *o.args)
        return adjoints

    def backward(self):
        """
        Accumulate d(self)/d(leaf) into the grad of every leaf that requires grad.
        """
        backward(self)

    # Magic methods for builtin operations we want to use for creating nodes
    def __neg__(self):
        return negative(self)

    def __pos__(self):
        return self

    def __add__(self, val):
        return add(self, val)

    def __radd__(self, val):
        return add(val, self)

    def __sub__(self, val):
        return subtract(self, val)

    def __rsub__(self, val):
        return subtract(val, self)

    def __mul__(self, val):
        return multiply(self, val)

    def __rmul__(self, val):
        return multiply(val, self)

    def __truediv__(self, val):
        return divide(self, val)

    def __rtruediv__(self, val):
        return divide(val, self)

    def __div__(self, val):
        return divide(self, val)

    def __rdiv__(self, val):
        return divide(val, self)

    def __repr__(self):
        return '<{cl}({name}):{shape}>'.format(
            cl=self.__class__.__name__,
            name=self.name or '',
            shape=self.shape)


class TensorOp(Tensor):
    """
    Super class for tensors computed by an operation.

    Subclasses compute their value eagerly and pass it here together with the
    arguments it was computed from; they implement generate_adjoints.

    Arguments:
        args: The input tensors.
        value: The computed value.
    """

    def __init__(self, args=(), value=None, **kwargs):
        args = tuple(args)
        requires_grad = is_recording() and any(arg.requires_grad for arg in args)
        super(TensorOp, self).__init__(value, requires_grad=requires_grad, **kwargs)
        if requires_grad:
            self.args = args

    def generate_adjoints(self, adjoints, delta, *args):
        raise NotImplementedError(
            '{} does not define generate_adjoints'.format(self.__class__.__name__))


def as_tensor(x):
    """
    Finds a Tensor appropriate for x.

    If x is a Tensor, it returns x.  Otherwise, a constant Tensor(x) is returned.

    Arguments:
      x: Some value.

    Returns:
      Tensor:
    """
    if isinstance(x, Tensor):
        return x
    return Tensor(x)


def as_ops(xs):
    """
    Converts an iterable of values to a tuple of Tensors using as_tensor.
    """
    return tuple(as_tensor(x) for x in xs)


def constant(value, name=None):
    """
    A tensor that never receives gradients.
    """
    return Tensor(value, requires_grad=False, name=name)


def variable(value, name=None):
    """
    A leaf tensor that accumulates gradients.
    """
    return Tensor(value, requires_grad=True, name=name)


def _unbroadcast(delta, shape):
    """
    Sum delta over the axes that broadcasting added or stretched to reach shape.
    """
    while delta.ndim > len(shape):
        delta = delta.sum(axis=0)
    for axis, length in enumerate(shape):
        if length == 1 and delta.shape[axis] != 1:
            delta = delta.sum(axis=axis, keepdims=True)
    return delta


class BinaryElementWiseOp(TensorOp):
    """
    Elementwise op over two tensors with numpy broadcasting.
    """

    def __init__(self, x, y, **kwargs):
        x, y = as_tensor(x), as_tensor(y)
        try:
            value = self.compute(x.data, y.data)
        except ValueError:
            raise DimensionError(
                '{} operands do not broadcast'.format(self.__class__.__name__),
                axis='shape', expected=x.shape, actual=y.shape)
        super(BinaryElementWiseOp, self).__init__(args=(x, y), value=value, **kwargs)

    @staticmethod
    def compute(x, y):
        raise NotImplementedError()


class AddOp(BinaryElementWiseOp):
    compute = staticmethod(np.add)

    def generate_adjoints(self, adjoints, delta, x, y):
        x.generate_add_delta(adjoints, _unbroadcast(delta, x.shape))
        y.generate_add_delta(adjoints, _unbroadcast(delta, y.shape))


class SubtractOp(BinaryElementWiseOp):
    compute = staticmethod(np.subtract)

    def generate_adjoints(self, adjoints, delta, x, y):
        x.generate_add_delta(adjoints, _unbroadcast(delta, x.shape))
        y.generate_add_delta(adjoints, _unbroadcast(-delta, y.shape))


class MultiplyOp(BinaryElementWiseOp):
    compute = staticmethod(np.multiply)

    def generate_adjoints(self, adjoints, delta, x, y):
        x.generate_add_delta(adjoints, _unbroadcast(delta * y.data, x.shape))
        y.generate_add_delta(adjoints, _unbroadcast(delta * x.data, y.shape))


class DivideOp(BinaryElementWiseOp):
    compute = staticmethod(np.divide)

    def generate_adjoints(self, adjoints, delta, x, y):
        x.generate_add_delta(adjoints, _unbroadcast(delta / y.data, x.shape))
        y.generate_add_delta(
            adjoints, _unbroadcast(-delta * x.data / np.square(y.data), y.shape))


def add(x, y):
    return AddOp(x, y)


def subtract(x, y):
    return SubtractOp(x, y)


def multiply(x, y):
    return MultiplyOp(x, y)


def divide(x, y):
    return DivideOp(x, y)


class NegativeOp(TensorOp):
    def __init__(self, x, **kwargs):
        x = as_tensor(x)
        super(NegativeOp, self).__init__(args=(x,), value=np.negative(x.data), **kwargs)

    def generate_adjoints(self, adjoints, delta, x):
        x.generate_add_delta(adjoints, -delta)


def negative(x):
    return NegativeOp(x)


class SumOp(TensorOp):
    """
    Sum of every element, as a scalar.
    """

    def __init__(self, x, **kwargs):
        x = as_tensor(x)
        super(SumOp, self).__init__(args=(x,), value=np.sum(x.data), **kwargs)

    def generate_adjoints(self, adjoints, delta, x):
        x.generate_add_delta(adjoints, np.full(x.shape, float(delta), dtype=default_dtype))


class MeanOp(TensorOp):
    """
    Mean of every element, as a scalar.
    """

    def __init__(self, x, **kwargs):
        x = as_tensor(x)
        if x.size == 0:
            raise DimensionError('mean of an empty tensor', axis=0, expected='>= 1', actual=0)
        super(MeanOp, self).__init__(args=(x,), value=np.mean(x.data), **kwargs)

    def generate_adjoints(self, adjoints, delta, x):
        x.generate_add_delta(
            adjoints, np.full(x.shape, float(delta) / x.size, dtype=default_dtype))


def sum(x):  # noqa: A001
    return SumOp(x)


def mean(x):
    return MeanOp(x)


class ReshapeOp(TensorOp):
    def __init__(self, x, shape, **kwargs):
        x = as_tensor(x)
        try:
            value = x.data.reshape(shape)
        except ValueError:
            raise DimensionError('cannot reshape', axis='size', expected=shape, actual=x.shape)
        super(ReshapeOp, self).__init__(args=(x,), value=value, **kwargs)

    def generate_adjoints(self, adjoints, delta, x):
        x.generate_add_delta(adjoints, delta.reshape(x.shape))


def reshape(x, shape):
    return ReshapeOp(x, shape)


def flatten(x):
    """
    Row-major view of x as a vector.
    """
    x = as_tensor(x)
    return ReshapeOp(x, (x.size,))


class ReluOp(TensorOp):
    """
    Elementwise max(0, x).  The subgradient at 0 is 0.
    """

    def __init__(self, x, **kwargs):
        x = as_tensor(x)
        super(ReluOp, self).__init__(args=(x,), value=np.maximum(x.data, 0.), **kwargs)

    def generate_adjoints(self, adjoints, delta, x):
        x.generate_add_delta(adjoints, np.where(x.data > 0., delta, 0.))


def relu(x):
    return ReluOp(x)


class LinearOp(TensorOp):
    """
    Affine map weight @ input + bias.

    Arguments:
        x: Tensor[d]
        weight: Tensor[c, d]
        bias: Tensor[c]
    """

    def __init__(self, x, weight, bias, **kwargs):
        x, weight, bias = as_tensor(x), as_tensor(weight), as_tensor(bias)
        if x.ndim != 1:
            raise DimensionError('linear input must be a vector', axis='rank',
                                 expected=1, actual=x.ndim)
        if weight.ndim != 2:
            raise DimensionError('linear weight must be a matrix', axis='rank',
                                 expected=2, actual=weight.ndim)
        if weight.shape[1] != x.shape[0]:
            raise DimensionError('linear weight and input disagree', axis=1,
                                 expected=x.shape[0], actual=weight.shape[1])
        if bias.shape != (weight.shape[0],):
            raise DimensionError('linear bias and weight disagree', axis=0,
                                 expected=weight.shape[0], actual=bias.shape)
        value = np.dot(weight.data, x.data) + bias.data
        super(LinearOp, self).__init__(args=(x, weight, bias), value=value, **kwargs)

    def generate_adjoints(self, adjoints, delta, x, weight, bias):
        x.generate_add_delta(adjoints, np.dot(weight.data.T, delta))
        weight.generate_add_delta(adjoints, np.outer(delta, x.data))
        bias.generate_add_delta(adjoints, delta)


def linear(x, weight, bias):
    return LinearOp(x, weight, bias)


class SoftmaxCrossEntropyOp(TensorOp):
    """
    -log softmax(logits)[y], computed as logsumexp(logits) - logits[y].

    Arguments:
        logits: Tensor[c]
        y (int): The target class index.
    """

    def __init__(self, logits, y, **kwargs):
        logits = as_tensor(logits)
        if logits.ndim != 1:
            raise DimensionError('logits must be a vector', axis='rank',
                                 expected=1, actual=logits.ndim)
        c = logits.shape[0]
        if isinstance(y, bool) or not isinstance(y, numbers.Integral) or not 0 <= y < c:
            raise ClassIndexError('class index {} outside [0, {})'.format(y, c))
        self.y = int(y)
        self.lse = logsumexp(logits.data)
        value = self.lse - logits.data[self.y]
        super(SoftmaxCrossEntropyOp, self).__init__(args=(logits,), value=value, **kwargs)

    def generate_adjoints(self, adjoints, delta, logits):
        grad = np.exp(logits.data - self.lse)
        grad[self.y] -= 1.
        logits.generate_add_delta(adjoints, float(delta) * grad)


def softmax_cross_entropy(logits, y):
    return SoftmaxCrossEntropyOp(logits, y)


def backward(root):
    """
    Accumulate d(root)/d(leaf) into leaf.grad for every leaf that requires grad.

    Repeated calls without zero_grad accumulate.

    Arguments:
        root (Tensor): A scalar produced by recorded operations.
    """
    if not isinstance(root, Tensor) or root.size != 1:
        raise ContractError('backward needs a scalar root, got shape {}'.format(
            getattr(root, 'shape', None)))
    if not root.requires_grad:
        raise ContractError('backward root was not produced by recorded operations')
    for tensor, adjoint in root.adjoints().items():
        if tensor.is_leaf:
            adjoint = np.asarray(adjoint, dtype=default_dtype).reshape(tensor.shape)
            if tensor.grad is None:
                tensor.grad = np.array(adjoint)
            else:
                tensor.grad = tensor.grad + adjoint


def deriv(dependent, independent, error=None):
    """
    d(dependent)/d(independent), without touching any grad buffer.

    Arguments:
        dependent (Tensor): The tensor being differentiated.
        independent (Tensor): Any recorded tensor it was computed from, leaf or not.
        error (ndarray, optional): The adjoint of dependent.  Defaults to ones.

    Returns:
        ndarray shaped like independent; zeros when dependent does not depend on it.
    """
    if not dependent.requires_grad:
        return np.zeros(independent.shape, dtype=default_dtype)
    adjoint = dependent.adjoints(error).get(independent)
    if adjoint is None:
        return np.zeros(independent.shape, dtype=default_dtype)
    return np.asarray(adjoint, dtype=default_dtype).reshape(independent.shape)


def zero_grad(tensors):
    """
    Clear the grad buffer of every tensor in tensors.
    """
    for tensor in tensors:
        tensor.zero_grad()
