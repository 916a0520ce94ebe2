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
Labelled face samples and the on-disk dataset layout:

    classes.txt          ordered class names, one per line
    labels.tsv           id <tab> class name
    split.tsv            id <tab> train|val|test
    images/NNNNN.pgm     8-bit graymap (or NNNNN.txt, raw text map)
    landmarks/NNNNN.txt  68 lines of "x y"
"""
from __future__ import division
from builtins import object

import logging
import os

import numpy as np

from augraph.facs.landmarks import read_landmarks, write_landmarks
from augraph.util import pnm
from augraph.util.errors import DataError
from augraph.util.persist import write_lines

logger = logging.getLogger(__name__)

splits = ('train', 'val', 'test')
dataset_files = ('classes.txt', 'labels.tsv', 'split.tsv', 'images', 'landmarks')


class Sample(object):
    """
    One labelled face.

    Arguments:
        image: (h, w) grayscale array in [0, 1].
        landmarks (LandmarkSet): The face's landmarks, or None.
        label (int): Class index.
        id (int): Identifier, unique within a dataset.
        split (str, optional): 'train', 'val' or 'test'.
    """

    def __init__(self, image, landmarks, label, id=0, split=None):
        image = np.array(image, dtype=np.float64)
        image.setflags(write=False)
        self.image = image
        self.landmarks = landmarks
        self.label = int(label)
        self.id = int(id)
        self.split = split

    def __eq__(self, other):
        return (isinstance(other, Sample) and self.id == other.id and
                self.label == other.label and self.split == other.split and
                self.landmarks == other.landmarks and
                np.array_equal(self.image, other.image))

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return 'Sample(id={}, label={}, split={})'.format(self.id, self.label, self.split)


class Dataset(object):
    """
    An ordered collection of samples sharing a class list.

    Arguments:
        samples: Iterable of Sample.
        class_names: Ordered class names; labels index into it.
        name (str, optional): e.g. the split.
    """

    def __init__(self, samples, class_names, name=None):
        self.samples = list(samples)
        self.class_names = list(class_names)
        self.name = name
        for sample in self.samples:
            if not 0 <= sample.label < len(self.class_names):
                raise DataError('sample {} has label {} outside [0, {})'.format(
                    sample.id, sample.label, len(self.class_names)))

    def __len__(self):
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def __getitem__(self, index):
        return self.samples[index]

    def __eq__(self, other):
        return (isinstance(other, Dataset) and self.class_names == other.class_names and
                self.samples == other.samples)

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    @property
    def labels(self):
        return [sample.label for sample in self.samples]

    @property
    def image_shape(self):
        return self.samples[0].image.shape if self.samples else None

    def subset(self, split):
        """
        The samples of one split.
        """
        return Dataset([s for s in self.samples if s.split == split], self.class_names,
                       name=split)

    @classmethod
    def concat(cls, datasets, name=None):
        datasets = list(datasets)
        class_names = datasets[0].class_names
        for d in datasets[1:]:
            if d.class_names != class_names:
                raise DataError('cannot join datasets with different classes')
        return cls([s for d in datasets for s in d], class_names, name=name)


def _stem(sample_id):
    return '{:05d}'.format(sample_id)


def save_dataset(dataset, path, image_format='pgm'):
    """
    Write a dataset (or a list of datasets, joined) under path.

    Arguments:
        image_format (str): 'pgm' stores 8-bit samples, exact for images on the 1/255
            grid; 'raw' stores 17-digit text.
    """
    if not isinstance(dataset, Dataset):
        dataset = Dataset.concat(dataset)
    if image_format not in ('pgm', 'raw'):
        raise ValueError('image_format must be pgm or raw, found {!r}'.format(image_format))
    ids = [s.id for s in dataset]
    if len(set(ids)) != len(ids):
        raise DataError('sample ids are not unique')
    write_lines(os.path.join(path, 'classes.txt'), dataset.class_names)
    write_lines(os.path.join(path, 'labels.tsv'),
                ['{}\t{}'.format(_stem(s.id), dataset.class_names[s.label]) for s in dataset])
    write_lines(os.path.join(path, 'split.tsv'),
                ['{}\t{}'.format(_stem(s.id), s.split or 'train') for s in dataset])
    for sample in dataset:
        stem = _stem(sample.id)
        if image_format == 'pgm':
            pnm.write_pgm(os.path.join(path, 'images', stem + '.pgm'), sample.image)
        else:
            pnm.write_raw_map(os.path.join(path, 'images', stem + '.txt'), sample.image)
        if sample.landmarks is not None:
            write_landmarks(os.path.join(path, 'landmarks', stem + '.txt'), sample.landmarks)
    logger.info('wrote %d samples to %s', len(dataset), path)


def _read_table(path):
    """
    Rows of a two-column tab-separated file, as (line number, key, value).
    """
    try:
        with open(path) as f:
            lines = f.read().splitlines()
    except IOError as e:
        raise DataError('cannot read: {}'.format(e.strerror), path=path)
    rows = []
    for n, line in enumerate(lines):
        if not line.strip():
            continue
        fields = line.split('\t')
        if len(fields) != 2:
            raise DataError('expected two tab-separated fields', path=path, line=n + 1)
        rows.append((n + 1, fields[0].strip(), fields[1].strip()))
    return rows


def load_dataset(path, split=None):
    """
    Read a dataset directory.

    Arguments:
        split (str, optional): Keep only this split.

    Returns:
        Dataset

    Raises:
        DataError: naming the file, and line where known, of the first problem.
    """
    if not os.path.isdir(path):
        raise DataError('dataset directory not found', path=path)
    classes_path = os.path.join(path, 'classes.txt')
    try:
        with open(classes_path) as f:
            class_names = [line.strip() for line in f if line.strip()]
    except IOError as e:
        raise DataError('cannot read: {}'.format(e.strerror), path=classes_path)
    if len(class_names) < 2:
        raise DataError('need at least two classes', path=classes_path)
    index = {name.lower(): i for i, name in enumerate(class_names)}

    labels_path = os.path.join(path, 'labels.tsv')
    labels = []
    for line, stem, name in _read_table(labels_path):
        if name.lower() not in index:
            raise DataError('label {!r} is not one of the {} classes'.format(
                name, len(class_names)), path=labels_path, line=line)
        try:
            labels.append((int(stem), index[name.lower()]))
        except ValueError:
            raise DataError('bad sample id {!r}'.format(stem), path=labels_path, line=line)

    split_path = os.path.join(path, 'split.tsv')
    assigned = {}
    if os.path.exists(split_path):
        for line, stem, name in _read_table(split_path):
            if name not in splits:
                raise DataError('split {!r} not one of {}'.format(name, splits),
                                path=split_path, line=line)
            assigned[stem] = name

    samples = []
    for sample_id, label in labels:
        stem = _stem(sample_id)
        if split is not None and assigned.get(stem, 'train') != split:
            continue
        pgm = os.path.join(path, 'images', stem + '.pgm')
        raw = os.path.join(path, 'images', stem + '.txt')
        if os.path.exists(pgm):
            image = pnm.read_pgm(pgm)
        elif os.path.exists(raw):
            image = pnm.read_raw_map(raw)
        else:
            raise DataError('missing image for sample {}'.format(stem), path=pgm)
        landmarks = read_landmarks(os.path.join(path, 'landmarks', stem + '.txt'))
        samples.append(Sample(image, landmarks, label, id=sample_id,
                              split=assigned.get(stem, 'train')))
    if samples:
        shapes = {s.image.shape for s in samples}
        if len(shapes) > 1:
            raise DataError('images have different sizes: {}'.format(sorted(shapes)), path=path)
    return Dataset(samples, class_names, name=split)
