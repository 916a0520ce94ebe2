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
Deterministic synthetic face-like expression data.

Every sample starts from the canonical 68-point template, takes the deformation of
its class, gets a brightened blob at each of its class's action unit sites, then
landmark jitter, pixel noise and an optional mirror flip.  The signal that separates
the classes therefore lives where the default anchor table puts the class's AUs.
"""
from __future__ import division
from builtins import object

import logging

import numpy as np
from scipy.special import expit

from augraph.facs.codebook import au_positions, default_anchor_table, default_codebook
from augraph.facs.landmarks import LandmarkSet, canonical_template
from augraph.frontends.fer.dataset import Dataset, Sample
from augraph.util.errors import ConfigurationError

logger = logging.getLogger(__name__)

class_names = ('anger', 'disgust', 'fear', 'happiness', 'sadness', 'surprise')

# Landmarks sit on a grid of 2**-16 so x -> 1 - x is exact; pixels on 8-bit levels.
landmark_levels = 2 ** 16
pixel_levels = 255
max_jitter = 0.03

background_level = 0.15
face_level = 0.55
stroke_level = 0.35
blob_level = 0.3
stroke_width = 0.012
blob_width = 0.05

# (landmark indices, (dx, dy)) in normalized coordinates, y pointing down.
deformations = {
    'anger': (
        ((19, 20, 21, 22, 23, 24), (0., 0.02)),
        ((21,), (0.012, 0.)), ((22,), (-0.012, 0.)),
        ((37, 38, 43, 44), (0., 0.008)),
        ((40, 41, 46, 47), (0., -0.008)),
        ((50, 51, 52, 61, 62, 63), (0., 0.008)),
        ((56, 57, 58, 65, 66, 67), (0., -0.008)),
    ),
    'disgust': (
        ((28, 29, 30), (0., -0.012)),
        ((31, 32, 33, 34, 35), (0., -0.01)),
        ((49, 50, 51, 52, 53), (0., -0.015)),
        ((48, 59), (0., 0.015)), ((54, 55), (0., 0.015)),
        ((56, 57, 58), (0., 0.012)),
    ),
    'fear': (
        ((17, 18, 19, 20, 21, 22, 23, 24, 25, 26), (0., -0.02)),
        ((21,), (0.008, 0.)), ((22,), (-0.008, 0.)),
        ((37, 38, 43, 44), (0., -0.01)),
        ((48,), (-0.02, 0.)), ((54,), (0.02, 0.)),
        ((55, 56, 57, 58, 59, 65, 66, 67), (0., 0.02)),
        ((7, 8, 9), (0., 0.01)),
    ),
    'happiness': (
        ((48,), (-0.02, -0.03)), ((54,), (0.02, -0.03)),
        ((49, 53, 60, 64), (0., -0.015)),
        ((40, 41, 46, 47), (0., -0.01)),
        ((3, 4, 5, 11, 12, 13), (0., -0.008)),
    ),
    'sadness': (
        ((21, 22), (0., -0.02)),
        ((20, 23), (0., -0.01)),
        ((48, 54), (0., 0.025)),
        ((59, 55), (0., 0.012)),
    ),
    'surprise': (
        ((17, 18, 19, 20, 21, 22, 23, 24, 25, 26), (0., -0.035)),
        ((37, 38, 43, 44), (0., -0.015)),
        ((40, 41, 46, 47), (0., 0.005)),
        ((55, 56, 57, 58, 59, 64, 65, 66, 67), (0., 0.05)),
        ((6, 7, 8, 9, 10), (0., 0.03)),
    ),
}

# Chains of landmarks drawn as strokes; closed chains join their ends.
strokes = (
    (tuple(range(17, 22)), False),
    (tuple(range(22, 27)), False),
    (tuple(range(27, 31)), False),
    (tuple(range(31, 36)), False),
    (tuple(range(36, 42)), True),
    (tuple(range(42, 48)), True),
    (tuple(range(48, 60)), True),
    (tuple(range(60, 68)), True),
)


class SynthConfig(object):
    """
    Arguments:
        samples_per_class (int): >= 1.
        image_size: (h, w), each >= 32.
        jitter (float): Std of landmark jitter in normalized units, in [0, 0.03].
        noise (float): Std of pixel noise, >= 0.
        flip_prob (float): Probability of a mirror flip, in [0, 1].
        seed (int): Seed of the whole dataset.
        split: Train, validation and test fractions summing to 1.
    """

    def __init__(self, samples_per_class=72, image_size=(64, 64), jitter=0.01, noise=0.05,
                 flip_prob=0.5, seed=0, split=(0.7, 0.1, 0.2)):
        self.samples_per_class = int(samples_per_class)
        self.image_size = tuple(int(v) for v in image_size)
        self.jitter = float(jitter)
        self.noise = float(noise)
        self.flip_prob = float(flip_prob)
        self.seed = int(seed)
        self.split = tuple(float(v) for v in split)
        self.validate()

    @property
    def classes(self):
        return len(class_names)

    def validate(self):
        if self.samples_per_class < 1:
            raise ConfigurationError('samples_per_class must be >= 1, found {}'.format(
                self.samples_per_class))
        if len(self.image_size) != 2 or min(self.image_size) < 32:
            raise ConfigurationError('image sizes must be >= 32, found {}'.format(
                self.image_size))
        if not 0 <= self.jitter <= max_jitter:
            raise ConfigurationError('jitter must be in [0, {}], found {}'.format(
                max_jitter, self.jitter))
        if not self.noise >= 0:
            raise ConfigurationError('noise must be >= 0, found {}'.format(self.noise))
        if not 0 <= self.flip_prob <= 1:
            raise ConfigurationError('flip probability must be in [0, 1], found {}'.format(
                self.flip_prob))
        if not 0 <= self.seed < 2 ** 32:
            raise ConfigurationError('seed must be in [0, 2**32), found {}'.format(self.seed))
        if len(self.split) != 3 or min(self.split) < 0 or abs(sum(self.split) - 1) > 1e-9:
            raise ConfigurationError('split must be three fractions summing to 1, found {}'
                                     .format(self.split))

    def to_dict(self):
        return {
            'samples_per_class': self.samples_per_class,
            'image_size': list(self.image_size),
            'jitter': self.jitter,
            'noise': self.noise,
            'flip_prob': self.flip_prob,
            'seed': self.seed,
            'split': list(self.split),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(**d)
        except TypeError as e:
            raise ConfigurationError('bad synthetic data config: {}'.format(e))


def quantize(values, levels):
    return np.rint(np.asarray(values) * levels) / levels


def deform(landmarks, expression):
    """
    The landmarks of expression applied to a neutral face.
    """
    points = np.array(landmarks.points)
    for indices, offset in deformations[expression]:
        points[list(indices)] += offset
    return LandmarkSet(np.clip(points, 0., 1.))


def au_sites(landmarks, expression):
    """
    Normalized (x, y) of every anchor of the expression's action units.
    """
    table = default_anchor_table()
    sites = [p for au in default_codebook().aus_for(expression)
             for p in au_positions(landmarks, au, table)]
    return np.array(sites, dtype=np.float64).reshape((-1, 2))


def _pixel_grid(h, w):
    rows, cols = np.mgrid[0:h, 0:w]
    return cols + 0.5, rows + 0.5


def _segment_distance(px, py, a, b):
    """
    Distance from each pixel center to the segments a[i] -> b[i], minimized over i.
    """
    p = np.stack([px.ravel(), py.ravel()], axis=1)[:, np.newaxis, :]
    ab = (b - a)[np.newaxis]
    length2 = np.maximum(np.sum(ab * ab, axis=-1), 1e-12)
    t = np.clip(np.sum((p - a[np.newaxis]) * ab, axis=-1) / length2, 0., 1.)
    d = p - (a[np.newaxis] + t[..., np.newaxis] * ab)
    return np.sqrt(np.min(np.sum(d * d, axis=-1), axis=1)).reshape(px.shape)


def render_face(landmarks, expression, h, w):
    """
    Draw a face: background, a face ellipse bounded by the jaw and brows, dark
    strokes along the landmark chains and bright blobs at the AU sites of expression.

    Returns:
        (h, w) array, unclipped.
    """
    px, py = _pixel_grid(h, w)
    pts = landmarks.to_pixels(h, w)
    scale = min(h, w)

    jaw = pts[0:17]
    cx = 0.5 * (jaw[0, 0] + jaw[16, 0])
    ax = max(0.5 * (jaw[16, 0] - jaw[0, 0]), 1.)
    top = pts[17:27, 1].min() - 0.12 * h
    bottom = jaw[8, 1]
    cy = 0.5 * (top + bottom)
    ay = max(0.5 * (bottom - top), 1.)
    r = np.sqrt(((px - cx) / ax) ** 2 + ((py - cy) / ay) ** 2)
    image = background_level + (face_level - background_level) * expit((1. - r) * 20.)

    starts, ends = [], []
    for chain, closed in strokes:
        chain_pts = pts[list(chain)]
        starts.append(chain_pts[:-1])
        ends.append(chain_pts[1:])
        if closed:
            starts.append(chain_pts[-1:])
            ends.append(chain_pts[:1])
    d = _segment_distance(px, py, np.concatenate(starts), np.concatenate(ends))
    width = stroke_width * scale
    image = image - stroke_level * np.exp(-d * d / (2. * width * width))

    sigma = blob_width * scale
    for x, y in au_sites(landmarks, expression) * np.array([w, h]):
        image = image + blob_level * np.exp(
            -((px - x) ** 2 + (py - y) ** 2) / (2. * sigma * sigma))
    return image


def flip_sample(sample):
    """
    The mirror image of a sample; flipping twice restores it exactly.
    """
    return Sample(sample.image[:, ::-1], sample.landmarks.flip(), sample.label,
                  id=sample.id, split=sample.split)


def render_sample(cfg, label, index):
    """
    Sample number index of the dataset, drawn with its own RandomState(seed ^ index).
    """
    h, w = cfg.image_size
    rng = np.random.RandomState(cfg.seed ^ index)
    expression = class_names[label]
    # Every draw happens whatever the settings so streams do not shift.
    jitter = rng.normal(0., 1., (68, 2)) * cfg.jitter
    noise = rng.normal(0., 1., (h, w)) * cfg.noise
    flip = rng.uniform() < cfg.flip_prob

    landmarks = deform(canonical_template(), expression)
    points = quantize(np.clip(landmarks.points + jitter, 0., 1.), landmark_levels)
    landmarks = LandmarkSet(points)
    image = render_face(landmarks, expression, h, w) + noise
    image = quantize(np.clip(image, 0., 1.), pixel_levels)
    sample = Sample(image, landmarks, label, id=index)
    return flip_sample(sample) if flip else sample


def split_counts(n, fractions):
    """
    Per-split sample counts for one class: train and validation rounded half up,
    test takes the rest.
    """
    train = int(np.floor(fractions[0] * n + 0.5))
    val = min(int(np.floor(fractions[1] * n + 0.5)), n - train)
    return train, val, n - train - val


def generate(cfg):
    """
    Render a stratified dataset.

    Arguments:
        cfg (SynthConfig): Settings; equal configs give bitwise-equal datasets.

    Returns:
        (train, val, test) Datasets.
    """
    split_rng = np.random.RandomState(cfg.seed)
    assignments = {}
    samples = []
    for label in range(cfg.classes):
        ids = [label * cfg.samples_per_class + k for k in range(cfg.samples_per_class)]
        order = split_rng.permutation(len(ids))
        train, val, _ = split_counts(len(ids), cfg.split)
        for rank, position in enumerate(order):
            assignments[ids[position]] = ('train' if rank < train else
                                          'val' if rank < train + val else 'test')
        for index in ids:
            sample = render_sample(cfg, label, index)
            sample.split = assignments[index]
            samples.append(sample)
    logger.info('rendered %d samples of %d classes', len(samples), cfg.classes)
    full = Dataset(samples, class_names)
    return tuple(full.subset(split) for split in ('train', 'val', 'test'))
