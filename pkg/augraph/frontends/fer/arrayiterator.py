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


class ArrayIterator(object):
    """
    Mini-batches over a sequence, one epoch per iteration pass.

    Arguments:
        data: Any sequence supporting len() and integer indexing.
        batch_size (int): Examples per minibatch; the last one may be smaller.
        shuffle (bool): Visit examples in a fresh permutation each epoch.
        seed (int): Seed of the permutation stream.
    """

    def __init__(self, data, batch_size, shuffle=False, seed=0):
        self.data = data
        self.ndata = len(data)
        if self.ndata == 0:
            raise ValueError('cannot iterate over an empty dataset')
        if batch_size < 1:
            raise ValueError('batch size must be >= 1, found {}'.format(batch_size))
        self.batch_size = batch_size
        self.shuffle = shuffle
        self.seed = seed
        self.reset()

    @property
    def nbatches(self):
        """
        Return the number of minibatches in one epoch.
        """
        return -(-self.ndata // self.batch_size)

    def reset(self):
        """
        Restart the permutation stream from the seed.
        """
        self.rng = np.random.RandomState(self.seed)
        self.epoch = 0

    def epoch_order(self):
        """
        The example order of the next epoch, advancing the permutation stream.
        """
        self.epoch += 1
        if self.shuffle:
            return self.rng.permutation(self.ndata)
        return np.arange(self.ndata)

    def __len__(self):
        return self.nbatches

    def __iter__(self):
        """
        Yields:
            (indices, examples) for each minibatch of one epoch.
        """
        order = self.epoch_order()
        for start in range(0, self.ndata, self.batch_size):
            indices = [int(i) for i in order[start:start + self.batch_size]]
            yield indices, [self.data[i] for i in indices]
