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
import numpy as np
import pytest

from augraph.frontends.fer import ArrayIterator


def test_batches_cover_the_data_once():
    it = ArrayIterator(list(range(10)), 4)
    assert it.nbatches == 3 and len(it) == 3
    batches = list(it)
    assert [len(examples) for _, examples in batches] == [4, 4, 2]
    assert [i for indices, _ in batches for i in indices] == list(range(10))


def test_shuffle_is_seeded():
    data = list(range(17))
    first = [indices for indices, _ in ArrayIterator(data, 5, shuffle=True, seed=4)]
    second = [indices for indices, _ in ArrayIterator(data, 5, shuffle=True, seed=4)]
    assert first == second
    assert sorted(i for indices in first for i in indices) == data


def test_each_epoch_draws_a_new_order():
    it = ArrayIterator(list(range(30)), 30, shuffle=True, seed=0)
    epoch1 = list(it)[0][0]
    epoch2 = list(it)[0][0]
    assert epoch1 != epoch2
    it.reset()
    assert list(it)[0][0] == epoch1


def test_examples_follow_indices():
    data = ['a', 'b', 'c', 'd']
    for indices, examples in ArrayIterator(data, 3, shuffle=True, seed=2):
        assert examples == [data[i] for i in indices]


def test_rejects_empty_data_and_bad_batch_size():
    with pytest.raises(ValueError):
        ArrayIterator([], 2)
    with pytest.raises(ValueError):
        ArrayIterator(np.zeros(3), 0)
