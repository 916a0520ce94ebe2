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
The staged convolutional expression classifier, its forward pass and checkpoints.

Stage l (1-based) runs its convolutions, each followed by ReLU, records the feature
stack F_l, and then optionally max-pools by 2.  The head is global average pooling
followed by a linear layer, or flatten followed by a linear layer.
"""
from __future__ import division
from builtins import object

import json
import logging
from collections import OrderedDict, namedtuple

import h5py
import numpy as np

import augraph as ag
from augraph.frontends.fer.layer import Activation, Conv2D, Flatten, GlobalAvgPool, \
    Linear, Pool2D, Sequential
from augraph.util.errors import ConfigurationError, DataError, DimensionError, ParameterError
from augraph.util.persist import ensure_dirs_exist

logger = logging.getLogger(__name__)

format_version = 1

default_stages = ((8, 1, True), (16, 1, True), (32, 1, True), (64, 1, True), (64, 1, False))
heads = ('gap-linear', 'flatten-linear')
attention_sources = ('post', 'pre')


class ModelConfig(object):
    """
    Shape of the classifier.

    Arguments:
        input_size: (h, w, channels).
        stages: Sequence of (out_channels, conv_count, pool).
        head (str): 'gap-linear' or 'flatten-linear'.
        classes (int): Number of classes, >= 2.
        attention_layer (int, optional): 1-based stage whose attention is aligned and
            measured.  Defaults to the last stage.
        seed (int): Parameter initialization seed.
        attention_source (str): 'post' (after ReLU) or 'pre' (before ReLU) features for
            the attention map.
        kernel (int): Odd convolution kernel side; padding keeps the spatial size.
    """

    def __init__(self, input_size=(64, 64, 1), stages=default_stages, head='gap-linear',
                 classes=6, attention_layer=None, seed=0, attention_source='post', kernel=3):
        self.input_size = tuple(int(v) for v in input_size)
        self.stages = tuple((int(n), int(c), bool(p)) for n, c, p in stages)
        self.head = head
        self.classes = int(classes)
        self.attention_layer = len(self.stages) if attention_layer is None \
            else int(attention_layer)
        self.seed = int(seed)
        self.attention_source = attention_source
        self.kernel = int(kernel)
        self.validate()

    def validate(self):
        if len(self.input_size) != 3 or min(self.input_size) < 1:
            raise ConfigurationError('input_size must be positive (h, w, channels), found {}'
                                     .format(self.input_size))
        if not self.stages:
            raise ConfigurationError('a model needs at least one stage')
        for i, (nout, convs, _) in enumerate(self.stages):
            if nout < 1 or convs < 1:
                raise ConfigurationError(
                    'stage {} needs >= 1 channel and >= 1 convolution, found {}'.format(
                        i + 1, self.stages[i]))
        if self.head not in heads:
            raise ConfigurationError('head {!r} not one of {}'.format(self.head, heads))
        if self.classes < 2:
            raise ConfigurationError('classes must be >= 2, found {}'.format(self.classes))
        if not 1 <= self.attention_layer <= len(self.stages):
            raise ConfigurationError('attention_layer {} outside [1, {}]'.format(
                self.attention_layer, len(self.stages)))
        if self.attention_source not in attention_sources:
            raise ConfigurationError('attention_source {!r} not one of {}'.format(
                self.attention_source, attention_sources))
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise ConfigurationError('kernel must be odd, found {}'.format(self.kernel))
        h, w = self.input_size[:2]
        for i, (_, _, pool) in enumerate(self.stages):
            if pool:
                if h < 2 or w < 2:
                    raise ConfigurationError(
                        'stage {} pools a {}x{} map'.format(i + 1, h, w))
                h, w = h // 2, w // 2

    @property
    def image_shape(self):
        """(channels, h, w) of a model input."""
        h, w, c = self.input_size
        return (c, h, w)

    def to_dict(self):
        return OrderedDict([
            ('input_size', list(self.input_size)),
            ('stages', [list(s) for s in self.stages]),
            ('head', self.head),
            ('classes', self.classes),
            ('attention_layer', self.attention_layer),
            ('seed', self.seed),
            ('attention_source', self.attention_source),
            ('kernel', self.kernel),
        ])

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigurationError('bad model config: {}'.format(e))

    def __eq__(self, other):
        return isinstance(other, ModelConfig) and self.to_dict() == other.to_dict()

    def __ne__(self, other):
        return not self == other

    __hash__ = None


class Stage(object):
    """
    conv_count convolutions with ReLU, then an optional 2x2 max pool.
    """

    def __init__(self, index, nout, conv_count, pool, kernel):
        self.index = index
        self.convs = [Conv2D(nout, fshape=kernel, padding=kernel // 2,
                             name='stage{}/conv{}'.format(index, j + 1))
                      for j in range(conv_count)]
        self.activation = Activation(ag.relu)
        self.pool = Pool2D(2) if pool else None
        self.feature_shape = None

    def allocate(self, in_shape, rng):
        for conv in self.convs:
            in_shape = conv.allocate(in_shape, rng)
        self.feature_shape = in_shape
        if self.pool is not None:
            in_shape = self.pool.allocate(in_shape, rng)
        return in_shape

    @property
    def parameters(self):
        return [p for conv in self.convs for p in conv.parameters]

    def train_outputs(self, in_obj):
        """
        Returns:
            (pre-activation, features, output) of the stage.
        """
        pre = None
        for conv in self.convs:
            pre = conv.train_outputs(in_obj)
            in_obj = self.activation.train_outputs(pre)
        features = in_obj
        out = features if self.pool is None else self.pool.train_outputs(features)
        return pre, features, out


class ForwardRecord(namedtuple('ForwardRecord', ['logits', 'features', 'pre_features'])):
    """
    Everything one forward pass produced.
    """
    __slots__ = ()

    def attention_features(self, source='post'):
        return self.features if source == 'post' else self.pre_features


class ModelState(object):
    """
    Parameters and the last recorded forward pass of a classifier.

    Arguments:
        cfg (ModelConfig): The shape.
        rng (RandomState): Draws every parameter in stage order, head last.
    """

    def __init__(self, cfg, rng):
        self.cfg = cfg
        self.stages = [Stage(i + 1, nout, convs, pool, cfg.kernel)
                       for i, (nout, convs, pool) in enumerate(cfg.stages)]
        shape = cfg.image_shape
        for stage in self.stages:
            shape = stage.allocate(shape, rng)
        reduce_layer = GlobalAvgPool() if cfg.head == 'gap-linear' else Flatten()
        self.head = Sequential([reduce_layer, Linear(cfg.classes, name='head')])
        self.head.allocate(shape, rng)
        self.feature_shapes = [stage.feature_shape for stage in self.stages]
        self.parameters = OrderedDict(
            [p for stage in self.stages for p in stage.parameters] + self.head.parameters)
        self.last_forward = None
        self.optimizer = None

    @property
    def head_weights(self):
        """The (classes, n) weight of the final linear layer."""
        return self.head.layers[-1].W

    def layer_shape(self, l):
        """(h, w) of stage l's features."""
        check_layer(l, len(self.stages))
        return self.feature_shapes[l - 1][1:]

    def parameter_values(self):
        return OrderedDict((name, p.numpy()) for name, p in self.parameters.items())


def init_model(cfg):
    """
    A freshly initialized classifier: fan-in scaled uniform weights drawn from
    RandomState(cfg.seed), zero biases.
    """
    if not isinstance(cfg, ModelConfig):
        raise ConfigurationError('init_model needs a ModelConfig, found {!r}'.format(cfg))
    return ModelState(cfg, np.random.RandomState(cfg.seed))


def check_layer(l, count):
    if isinstance(l, bool) or not 1 <= int(l) <= count:
        raise ParameterError('layer {} outside [1, {}]'.format(l, count))
    return int(l)


def as_model_input(state, image):
    """
    image as a (c, h, w) Tensor matching the model, accepting (h, w) for one channel.
    """
    image = ag.as_tensor(image)
    expected = state.cfg.image_shape
    if image.ndim == 2 and expected[0] == 1:
        image = ag.reshape(image, (1,) + image.shape)
    if image.ndim != 3:
        raise DimensionError('image must be (c, h, w)', axis='rank', expected=3,
                             actual=image.ndim)
    for axis, name in enumerate('CHW'):
        if image.shape[axis] != expected[axis]:
            raise DimensionError('image does not match the model input', axis=name,
                                 expected=expected[axis], actual=image.shape[axis])
    return image


def forward_record(state, image, record=True):
    """
    Run the classifier on one image.

    Arguments:
        state (ModelState): The model.
        image: (c, h, w) or, for one channel, (h, w).
        record (bool): Keep the result as state.last_forward.

    Returns:
        ForwardRecord
    """
    x = as_model_input(state, image)
    features, pre_features = [], []
    for stage in state.stages:
        pre, post, x = stage.train_outputs(x)
        pre_features.append(pre)
        features.append(post)
    logits = state.head.train_outputs(x)
    result = ForwardRecord(logits, features, pre_features)
    if record:
        state.last_forward = result
    return result


def forward(state, image, record=True):
    """
    Returns:
        (logits, features): logits Tensor[classes] and the post-ReLU feature stack of
        every stage.
    """
    result = forward_record(state, image, record=record)
    return result.logits, result.features


def forward_from(state, features, l):
    """
    Finish a forward pass from stage l's post-ReLU features.

    Returns:
        The logits.
    """
    l = check_layer(l, len(state.stages))
    stage = state.stages[l - 1]
    x = features if stage.pool is None else stage.pool.train_outputs(features)
    for stage in state.stages[l:]:
        _, _, x = stage.train_outputs(x)
    return state.head.train_outputs(x)


def attention_at_layer(features, l):
    """
    T_l, the channel mean of stage l's feature stack.

    Arguments:
        features: The per-stage feature stacks of a forward pass.
        l (int): 1-based stage index.
    """
    l = check_layer(l, len(features))
    return ag.channel_mean(features[l - 1])


def layer_attention(state, result, l=None):
    """
    Attention of a forward pass at layer l (default: the configured layer) using the
    configured feature source.
    """
    l = state.cfg.attention_layer if l is None else l
    return attention_at_layer(result.attention_features(state.cfg.attention_source), l)


def predict(state, image):
    """
    The predicted class; ties go to the lowest class index.
    """
    with ag.no_record():
        logits, _ = forward(state, image, record=False)
    return int(np.argmax(logits.data))


def save_model(state, path, train_config=None):
    """
    Write a checkpoint: format version and config echo as attributes, one float64
    little-endian dataset per named parameter.
    """
    with h5py.File(ensure_dirs_exist(path), 'w') as f:
        f.attrs['format_version'] = format_version
        f.attrs['config'] = json.dumps(state.cfg.to_dict())
        if train_config is not None:
            f.attrs['train'] = json.dumps(train_config)
        for name, p in state.parameters.items():
            f.create_dataset(name, data=p.data, dtype='<f8')
    logger.info('saved checkpoint %s', path)
    return path


def read_checkpoint_attrs(path):
    """
    Returns:
        (ModelConfig, training config dict or None) of a checkpoint.
    """
    try:
        f = h5py.File(path, 'r')
    except (IOError, OSError) as e:
        raise DataError('cannot open checkpoint: {}'.format(e), path=path)
    with f:
        version = int(f.attrs.get('format_version', -1))
        if version != format_version:
            raise ConfigurationError('{}: checkpoint format {} is not {}'.format(
                path, version, format_version))
        cfg = ModelConfig.from_dict(json.loads(f.attrs['config']))
        train = json.loads(f.attrs['train']) if 'train' in f.attrs else None
    return cfg, train


def load_model(path):
    """
    Rebuild a ModelState from a checkpoint.

    Raises:
        DataError: if the file cannot be read.
        ConfigurationError: on a format version or parameter mismatch.
    """
    cfg, _ = read_checkpoint_attrs(path)
    state = ModelState(cfg, np.random.RandomState(cfg.seed))
    with h5py.File(path, 'r') as f:
        for name, p in state.parameters.items():
            if name not in f:
                raise ConfigurationError('{}: missing parameter {}'.format(path, name))
            value = f[name][()]
            if value.shape != p.shape:
                raise ConfigurationError('{}: parameter {} has shape {}, expected {}'.format(
                    path, name, value.shape, p.shape))
            p.assign(value)
    return state
