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
from __future__ import division, print_function

import itertools
import json
import logging
import os
from builtins import object
from enum import Enum

import h5py
from tqdm import tqdm

from augraph.frontends.fer.model import save_model
from augraph.util.persist import ensure_dirs_exist

logger = logging.getLogger(__name__)

_container_ids = itertools.count()


class CallbackPhase(Enum):
    train_pre_ = 0
    train_post = 1
    epoch_pre_ = 2
    epoch_post = 3
    minibatch_post = 4


def make_default_callbacks(output_dir=None, total_iterations=0, state=None,
                           checkpoint_every=0, train_config=None, use_progress_bar=True):
    """
    The callbacks of a command line training run.

    Arguments:
        output_dir (str, optional): Where the TrainLog and checkpoints go.  Nothing is
            written when None.
        total_iterations (int): Minibatches in the whole run.
        state (ModelState, optional): Model to checkpoint.
        checkpoint_every (int): Epochs between checkpoints; 0 disables them.
        train_config (dict, optional): Echoed into checkpoints.
        use_progress_bar (bool): Show a tqdm bar.
    """
    cbs = CallbackContainer(total_iterations)
    cbs.append(TrainCostCallback())
    cbs.append(TrainLoggerCallback())
    if output_dir is not None:
        cbs.append(TrainLogWriterCallback(os.path.join(output_dir, 'train_log.jsonl')))
        if checkpoint_every and state is not None:
            cbs.append(CheckpointCallback(state, output_dir, checkpoint_every, train_config))
    if use_progress_bar:
        cbs.append(ProgressCallback())
    return cbs


class CallbackContainer(object):
    """
    An ordered list of callbacks sharing an in-memory HDF5 container for run data.

    Arguments:
        total_iterations (int): Minibatches in the whole run.
        callback_list (list, optional): Initial callbacks.
    """

    def __init__(self, total_iterations, callback_list=None):
        self._callbacks = list(callback_list or [])
        self.callback_data = h5py.File('callback_data_{}'.format(next(_container_ids)), 'w',
                                       driver='core', backing_store=False)
        config = self.callback_data.create_group('config')
        config.attrs['total_iterations'] = total_iterations

    def close(self):
        try:
            self.callback_data.close()
        except Exception:
            pass

    def __del__(self):
        self.close()

    def __iter__(self):
        return self._callbacks.__iter__()

    def append(self, cb):
        """
        Appends a callback

        Arguments:
            cb: The callback object to append.
        """
        self._callbacks.append(cb)

    def __call__(self, phase, data=None, idx=None):
        for c in self._callbacks:
            c(self.callback_data, phase, data, idx)


class Callback(object):
    def __call__(self, callback_data, phase, data, idx):
        pass


class TrainCostCallback(Callback):
    """
    Records the loss of every minibatch in cost/train.
    """

    def __call__(self, callback_data, phase, data, idx):
        if phase == CallbackPhase.train_pre_:
            iterations = callback_data['config'].attrs['total_iterations']
            callback_data.create_dataset('cost/train', (iterations,), dtype='f8')
            callback_data['cost/train'].attrs['time_markers'] = 'minibatch'
        elif phase == CallbackPhase.minibatch_post:
            callback_data['cost/train'][idx] = data['batch_cost']


class ProgressCallback(Callback):
    """
    Callback shows overall progress
    """

    def __call__(self, callback_data, phase, data, idx):
        if phase == CallbackPhase.train_pre_:
            self.tpbar = tqdm(desc="Overall",
                              unit="minibatches",
                              ncols=80,
                              total=int(callback_data['config'].attrs['total_iterations']))
        elif phase == CallbackPhase.train_post:
            self.tpbar.close()
        elif phase == CallbackPhase.minibatch_post:
            self.tpbar.update(1)


class TrainLoggerCallback(Callback):
    """
    Writes one summary line per epoch.
    """

    def __call__(self, callback_data, phase, data, idx):
        if phase == CallbackPhase.epoch_post:
            tqdm.write('Epoch {epoch} complete.  ce: {ce:.4f}  align: {align}  '
                       'R_train: {R_train}  R_val: {R_val}  acc_val: {acc_val}  '
                       '({seconds:.1f}s)'.format(
                           **dict(data, **{k: _fmt(data[k]) for k in
                                           ('align', 'R_train', 'R_val', 'acc_val')})))
            logger.info('epoch %d: %s', data['epoch'], json.dumps(data, sort_keys=True))


def _fmt(value):
    return 'n/a' if value is None else '{:.4f}'.format(value)


class TrainLogWriterCallback(Callback):
    """
    Appends each epoch record as one JSON line.

    Arguments:
        path (str): The log file; it is truncated when training starts.
    """

    def __init__(self, path):
        self.path = path

    def __call__(self, callback_data, phase, data, idx):
        if phase == CallbackPhase.train_pre_:
            open(ensure_dirs_exist(self.path), 'w').close()
        elif phase == CallbackPhase.epoch_post:
            with open(self.path, 'a') as f:
                f.write(json.dumps(data, sort_keys=True))
                f.write('\n')


class CheckpointCallback(Callback):
    """
    Saves the model every frequency epochs as checkpoint_NNNN.h5.
    """

    def __init__(self, state, output_dir, frequency, train_config=None):
        self.state = state
        self.output_dir = output_dir
        self.frequency = frequency
        self.train_config = train_config

    def __call__(self, callback_data, phase, data, idx):
        if phase == CallbackPhase.epoch_post and data['epoch'] % self.frequency == 0:
            save_model(self.state, os.path.join(
                self.output_dir, 'checkpoint_{:04d}.h5'.format(data['epoch'])),
                self.train_config)

