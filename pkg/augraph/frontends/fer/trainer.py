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
Joint training: cross-entropy plus lambda * (1 - cosine(attention, AU map)).
"""
from __future__ import division
from builtins import object

import json
import logging
from collections import namedtuple
from timeit import default_timer

import numpy as np

import augraph as ag
from augraph.facs.aumap import AUConfig, AUMap, cosine
from augraph.frontends.fer.arrayiterator import ArrayIterator
from augraph.frontends.fer.callbacks import CallbackContainer, CallbackPhase
from augraph.frontends.fer.metrics import accuracy, att_cos
from augraph.frontends.fer.model import check_layer, forward_record, layer_attention
from augraph.frontends.fer.optimizer import GradientDescentMomentum
from augraph.util.errors import ConfigurationError, DimensionError, NumericalError
from augraph.util.persist import ensure_dirs_exist
from augraph.util.utils import with_error_settings

logger = logging.getLogger(__name__)


class TrainConfig(object):
    """
    Arguments:
        lam (float): Weight of the alignment term, >= 0.
        lam_warmup (int): Epochs over which the weight ramps linearly up from 0; epoch
            e uses lam * min(1, (e - 1) / lam_warmup).  0 applies lam from the start.
        lr (float): Learning rate, >= 0.
        momentum (float): In [0, 1).
        epochs (int): >= 1.
        batch_size (int): >= 1.
        attention_layer (int): 1-based stage whose attention is aligned.
        sigma (float): AU blob width as a fraction of min(h, w).
        seed (int): Seed of the minibatch shuffle.
        shuffle (bool): Reshuffle the training set every epoch.
    """

    def __init__(self, lam=1.0, lr=0.01, momentum=0.9, epochs=12, batch_size=16,
                 attention_layer=5, sigma=0.08, seed=0, shuffle=True, lam_warmup=4):
        self.lam = float(lam)
        self.lam_warmup = int(lam_warmup)
        self.lr = float(lr)
        self.momentum = float(momentum)
        self.epochs = int(epochs)
        self.batch_size = int(batch_size)
        self.attention_layer = int(attention_layer)
        self.sigma = float(sigma)
        self.seed = int(seed)
        self.shuffle = bool(shuffle)
        self.validate()

    def validate(self):
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise ConfigurationError('lambda must be >= 0, found {}'.format(self.lam))
        if not (np.isfinite(self.lr) and self.lr >= 0):
            raise ConfigurationError('learning rate must be >= 0, found {}'.format(self.lr))
        if not 0 <= self.momentum < 1:
            raise ConfigurationError('momentum must be in [0, 1), found {}'.format(
                self.momentum))
        if self.lam_warmup < 0:
            raise ConfigurationError('lambda warmup must be >= 0 epochs, found {}'.format(
                self.lam_warmup))
        if self.epochs < 1:
            raise ConfigurationError('epochs must be >= 1, found {}'.format(self.epochs))
        if self.batch_size < 1:
            raise ConfigurationError('batch size must be >= 1, found {}'.format(
                self.batch_size))
        if self.attention_layer < 1:
            raise ConfigurationError('attention layer must be >= 1, found {}'.format(
                self.attention_layer))
        if not self.sigma > 0:
            raise ConfigurationError('sigma must be positive, found {}'.format(self.sigma))

    def to_dict(self):
        return {
            'lambda': self.lam,
            'lambda_warmup': self.lam_warmup,
            'lr': self.lr,
            'momentum': self.momentum,
            'epochs': self.epochs,
            'batch_size': self.batch_size,
            'attention_layer': self.attention_layer,
            'sigma': self.sigma,
            'seed': self.seed,
            'shuffle': self.shuffle,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if 'lambda' in d:
            d['lam'] = d.pop('lambda')
        if 'lambda_warmup' in d:
            d['lam_warmup'] = d.pop('lambda_warmup')
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigurationError('bad training config: {}'.format(e))

    def lam_at(self, epoch):
        """
        The alignment weight used during the 1-based epoch.
        """
        if self.lam_warmup == 0:
            return self.lam
        return self.lam * min(1., (epoch - 1) / self.lam_warmup)


class TrainLog(object):
    """
    One record per finished epoch with keys epoch, ce, align, R_train, R_val, acc_val
    and seconds.  Values that were not measured are None.
    """

    keys = ('epoch', 'ce', 'align', 'R_train', 'R_val', 'acc_val', 'seconds')

    def __init__(self, records=None):
        self.records = list(records or [])

    def append(self, record):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index):
        return self.records[index]

    def column(self, key):
        return [record[key] for record in self.records]

    def write(self, path):
        with open(ensure_dirs_exist(path), 'w') as f:
            for record in self.records:
                f.write(json.dumps(record, sort_keys=True))
                f.write('\n')

    @classmethod
    def read(cls, path):
        with open(path) as f:
            return cls(json.loads(line) for line in f if line.strip())


def _map_values(a):
    if a is None:
        return None
    return a.values if isinstance(a, AUMap) else np.asarray(a, dtype=np.float64)


def joint_loss(logits, y, t_l, a, lam):
    """
    softmax_cross_entropy(logits, y) + lam * (1 - cosine_sim_map(t_l, a)).

    The alignment term is left out entirely, not added as zero, when lam is 0 or a
    is missing or all zero.

    Arguments:
        logits (Tensor): Class scores.
        y (int): Target class.
        t_l (Tensor): Attention map at the aligned layer.
        a (AUMap): Reference map at t_l's resolution, or None.
        lam (float): Weight of the alignment term.

    Returns:
        TensorOp: A scalar.
    """
    ce = ag.softmax_cross_entropy(logits, y)
    values = _map_values(a)
    if values is None:
        return ce
    if values.shape != tuple(t_l.shape):
        raise DimensionError('AU map does not match the attention resolution',
                             axis='shape', expected=tuple(t_l.shape), actual=values.shape)
    if lam == 0 or not values.any():
        return ce
    return ce + lam * (1. - ag.cosine_sim_map(t_l, values))


StepResult = namedtuple('StepResult', ['loss', 'ce', 'R'])


@with_error_settings(over='raise', invalid='raise', divide='raise')
def _accumulate_sample(state, image, label, a, lam, n, m, l):
    result = forward_record(state, image)
    t_l = layer_attention(state, result, l)
    # Scaled so the batch gradient is mean(ce) + lam * mean over aligned samples of (1 - R).
    weight = lam * n / m if m else 0.
    loss = joint_loss(result.logits, label, t_l, a, weight) / n
    value = loss.item()
    if not np.isfinite(value):
        raise FloatingPointError('loss is {}'.format(value))
    ag.backward(loss)
    ce = float(ag.softmax_cross_entropy(result.logits.data, label).item())
    values = _map_values(a)
    R = cosine(t_l.numpy(), values) if values is not None and values.any() else None
    return value, ce, R


def step(state, batch, cfg, optimizer=None, lam=None):
    """
    One update on a minibatch, weighting the alignment term by lam, or cfg.lam when lam
    is None.

    Returns:
        StepResult: the batch loss with the per-sample cross-entropies and cosines
        (None where the sample has no AU map).
    """
    if not batch:
        raise ValueError('cannot train on an empty batch')
    if optimizer is None:
        if state.optimizer is None:
            state.optimizer = GradientDescentMomentum(cfg.lr, momentum_coef=cfg.momentum)
        optimizer = state.optimizer
    l = check_layer(cfg.attention_layer, len(state.stages))
    n = len(batch)
    lam = cfg.lam if lam is None else lam
    m = 0
    if lam > 0:
        m = sum(1 for _, _, a in batch if a is not None and _map_values(a).any())
    total, ces, Rs = 0., [], []
    ag.zero_grad(state.parameters.values())
    for i, (image, label, a) in enumerate(batch):
        try:
            value, ce, R = _accumulate_sample(state, image, label, a, lam, n, m, l)
        except FloatingPointError as e:
            ag.zero_grad(state.parameters.values())
            raise NumericalError('non-finite loss ({})'.format(e), sample=i)
        total += value
        ces.append(ce)
        Rs.append(R)
    optimizer(state.parameters.items())
    ag.zero_grad(state.parameters.values())
    return StepResult(total, ces, Rs)


def train_step(state, batch, cfg, optimizer=None):
    """
    One momentum SGD update on the mean batch loss.

    Arguments:
        state (ModelState): Updated in place.
        batch: List of (image, label, AUMap or None), maps at the aligned layer's
            resolution.
        cfg (TrainConfig): Supplies lambda, learning rate, momentum and layer.
        optimizer (optional): Defaults to the state's own momentum optimizer.

    Returns:
        float: The batch loss before the update.

    Raises:
        NumericalError: naming the batch index of a sample whose loss is not finite.
    """
    return step(state, batch, cfg, optimizer).loss


def _check_compatible(state, dataset, what):
    if len(dataset) == 0:
        raise ConfigurationError('{} set is empty'.format(what))
    if len(dataset.class_names) != state.cfg.classes:
        raise ConfigurationError('{} set has {} classes, the model {}'.format(
            what, len(dataset.class_names), state.cfg.classes))
    expected = tuple(state.cfg.image_shape[1:])
    for sample in dataset:
        if tuple(sample.image.shape[-2:]) != expected:
            raise ConfigurationError('{} sample {} is {}, the model takes {}'.format(
                what, sample.id, sample.image.shape, expected))


def _align_config(au_config, cfg, class_names):
    return AUConfig(au_config.codebook, au_config.table, sigma_fraction=cfg.sigma,
                    class_names=class_names, codebook_path=au_config.codebook_path,
                    anchors_path=au_config.anchors_path)


def _mean(values):
    values = [v for v in values if v is not None]
    return float(np.mean(values)) if values else None


def fit(state, train_set, val_set, cfg, au_config=None, callbacks=None):
    """
    Train for cfg.epochs epochs of seeded minibatches.  Each epoch weights the
    alignment term by cfg.lam_at(epoch).

    AU maps are built on the fly for training samples only; the validation set is
    used for measurement.

    Arguments:
        state (ModelState): Updated in place.
        train_set (Dataset): Samples with landmarks when au_config is given.
        val_set (Dataset, optional): Held-out samples for R_val and acc_val.
        cfg (TrainConfig): Training settings.
        au_config (AUConfig, optional): Needed when cfg.lam > 0.  Without it the run
            is plain cross-entropy training.
        callbacks (CallbackContainer, optional): Receives every training phase.

    Returns:
        TrainLog
    """
    _check_compatible(state, train_set, 'training')
    if val_set is not None and len(val_set):
        _check_compatible(state, val_set, 'validation')
    l = cfg.attention_layer
    if not 1 <= l <= len(state.stages):
        raise ConfigurationError('attention layer {} outside [1, {}]'.format(
            l, len(state.stages)))
    if cfg.lam > 0 and au_config is None:
        raise ConfigurationError('lambda > 0 needs an AU configuration')
    if au_config is not None:
        au_config = _align_config(au_config, cfg, train_set.class_names)
    layer_shape = state.layer_shape(l)
    image_shape = state.cfg.image_shape[1:]

    def au_map(sample):
        if au_config is None:
            return None
        return au_config.layer_map(sample.landmarks, sample.label, image_shape, layer_shape)

    iterator = ArrayIterator(train_set, cfg.batch_size, shuffle=cfg.shuffle, seed=cfg.seed)
    if callbacks is None:
        callbacks = CallbackContainer(iterator.nbatches * cfg.epochs)
    log = TrainLog()
    iteration = 0
    callbacks(CallbackPhase.train_pre_)
    for epoch in range(1, cfg.epochs + 1):
        callbacks(CallbackPhase.epoch_pre_, idx=epoch)
        lam = cfg.lam_at(epoch)
        start = default_timer()
        ces, Rs = [], []
        for _, samples in iterator:
            batch = [(s.image, s.label, au_map(s)) for s in samples]
            try:
                result = step(state, batch, cfg, lam=lam)
            except NumericalError as e:
                raise NumericalError(e.reason, epoch=epoch, sample=samples[e.sample].id)
            ces.extend(result.ce)
            Rs.extend(result.R)
            callbacks(CallbackPhase.minibatch_post, {'batch_cost': result.loss}, iteration)
            iteration += 1
        seconds = default_timer() - start
        R_train = _mean(Rs)
        record = {
            'epoch': epoch,
            'ce': _mean(ces),
            'align': None if R_train is None else 1. - R_train,
            'R_train': R_train,
            'R_val': None,
            'acc_val': None,
            'seconds': seconds,
        }
        if val_set is not None and len(val_set):
            record['acc_val'] = accuracy(state, val_set)
            if au_config is not None:
                record['R_val'] = att_cos(state, val_set, l, au_config)
        log.append(record)
        logger.debug('epoch %d done in %.2fs, lambda %g', epoch, seconds, lam)
        callbacks(CallbackPhase.epoch_post, record, epoch)
    callbacks(CallbackPhase.train_post)
    return log
