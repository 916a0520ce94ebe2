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
Spatial action unit maps: soft Gaussian blobs at the anchor points of a class's
action units, max-composed and normalized to a peak of 1.
"""
from __future__ import division
from builtins import object

import logging

import numpy as np

from augraph.facs import codebook as cb
from augraph.util import pnm
from augraph.util.errors import ConfigurationError, DimensionError, ParameterError

logger = logging.getLogger(__name__)

default_sigma_fraction = 0.08


class AUMap(object):
    """
    A nonnegative (h, w) map with values in [0, 1].

    Arguments:
        values: array-like of shape (h, w).
    """

    def __init__(self, values):
        values = np.array(values, dtype=np.float64)
        if values.ndim != 2:
            raise DimensionError('AU map must be (h, w)', axis='rank', expected=2,
                                 actual=values.ndim)
        if values.size == 0:
            raise DimensionError('AU map is empty', axis='size', expected='>= 1', actual=0)
        if not np.all(np.isfinite(values)) or values.min() < 0. or values.max() > 1.:
            raise ValueError('AU map values must lie in [0, 1]')
        values.setflags(write=False)
        self.values = values

    @property
    def h(self):
        return self.values.shape[0]

    @property
    def w(self):
        return self.values.shape[1]

    @property
    def shape(self):
        return self.values.shape

    @property
    def is_zero(self):
        return not self.values.any()

    def __eq__(self, other):
        return isinstance(other, AUMap) and np.array_equal(self.values, other.values)

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return 'AUMap({}x{}, max={})'.format(self.h, self.w, self.values.max())


def render_au_map(positions, sigma, h, w):
    """
    Max-composed isotropic Gaussians evaluated at pixel centers.

    Arguments:
        positions: Iterable of normalized (x, y) points.
        sigma (float): Standard deviation in pixels.
        h, w (int): Map size.

    Returns:
        AUMap: all zeros for no positions, else peak-normalized to 1.
    """
    if not sigma > 0:
        raise ParameterError('sigma must be positive, found {}'.format(sigma))
    if h < 1 or w < 1:
        raise ParameterError('map size {}x{} must be at least 1x1'.format(h, w))
    positions = [np.asarray(p, dtype=np.float64) for p in positions]
    if not positions:
        return AUMap(np.zeros((h, w)))

    rows = np.arange(h, dtype=np.float64) + 0.5
    cols = np.arange(w, dtype=np.float64) + 0.5
    # Max-composition commutes with exp, so compose exponents and normalize by the
    # global peak before exponentiating; distant or narrow blobs never underflow to
    # an all-zero map.
    exponent = np.full((h, w), -np.inf)
    for x, y in positions:
        dr = (rows - y * h) ** 2
        dc = (cols - x * w) ** 2
        exponent = np.maximum(exponent, -(dr[:, np.newaxis] + dc[np.newaxis, :]) /
                              (2. * sigma * sigma))
    with np.errstate(under='ignore'):
        values = np.exp(exponent - exponent.max())
    return AUMap(values)


def build_au_map(landmarks, label, codebook, table, sigma, h, w, class_names=None):
    """
    The AU map of one image from its landmarks and class.

    Arguments:
        landmarks (LandmarkSet): The face.
        label: Class index or expression name.
        codebook (AUCodebook): Expression -> action units.
        table (AUAnchorTable): Action unit -> anchors.
        sigma (float): Blob width in pixels.
        h, w (int): Map size.
        class_names (list, optional): Resolves integer labels.

    Returns:
        AUMap
    """
    positions = []
    for au in codebook.aus_for(label, class_names):
        positions.extend(cb.au_positions(landmarks, au, table))
    return render_au_map(positions, sigma, h, w)


def _overlap_matrix(n, m):
    """
    (m, n) matrix whose row i averages source cells [0, n) over the i-th of m equal
    target cells, weighting each cell by its overlap.
    """
    edges = np.arange(m + 1, dtype=np.float64) * (n / m)
    lo = np.maximum(edges[:-1, np.newaxis], np.arange(n)[np.newaxis, :])
    hi = np.minimum(edges[1:, np.newaxis], np.arange(1, n + 1)[np.newaxis, :])
    return np.maximum(hi - lo, 0.) / (n / m)


def downsample_map(au_map, h2, w2):
    """
    Area-weighted average down to (h2, w2), renormalized to a peak of 1.

    Block averaging is the special case where the sizes divide evenly.

    Raises:
        ParameterError: for a target larger than the map.
    """
    values = au_map.values if isinstance(au_map, AUMap) else np.asarray(au_map)
    h, w = values.shape
    if not (1 <= h2 <= h and 1 <= w2 <= w):
        raise ParameterError('cannot resample {}x{} to {}x{}; only downsampling'.format(
            h, w, h2, w2))
    if (h2, w2) == (h, w):
        return au_map if isinstance(au_map, AUMap) else AUMap(values)
    pooled = _overlap_matrix(h, h2).dot(values).dot(_overlap_matrix(w, w2).T)
    peak = pooled.max()
    if peak > 0:
        pooled = pooled / peak
    return AUMap(np.clip(pooled, 0., 1.))


def export_au_map(au_map, stem):
    """
    Write stem.pgm (8-bit, for viewing) and stem.txt (exact).
    """
    pnm.write_pgm(stem + '.pgm', au_map.values)
    pnm.write_raw_map(stem + '.txt', au_map.values)


def import_au_map(path):
    """
    Read a map written by export_au_map from its raw text file.
    """
    return AUMap(pnm.read_raw_map(path))


def cosine(x, y):
    """
    Cosine similarity of two arrays, 0 when either is all zero.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError('maps must have the same shape', axis='shape',
                             expected=y.shape, actual=x.shape)
    norm = np.linalg.norm(x) * np.linalg.norm(y)
    if norm == 0:
        return 0.
    return float(np.sum(x * y) / norm)


class AUConfig(object):
    """
    Everything needed to build AU maps for a dataset.

    Arguments:
        codebook (AUCodebook, optional): Defaults to the shipped codebook.
        table (AUAnchorTable, optional): Defaults to the shipped anchors.
        sigma_fraction (float): Blob width as a fraction of min(h, w).
        class_names (list, optional): The dataset's class order.
        codebook_path, anchors_path (str, optional): Where codebook and table came
            from, echoed by to_dict.
    """

    def __init__(self, codebook=None, table=None, sigma_fraction=default_sigma_fraction,
                 class_names=None, codebook_path=None, anchors_path=None):
        if not sigma_fraction > 0:
            raise ConfigurationError('sigma must be positive, found {}'.format(sigma_fraction))
        self.codebook = cb.default_codebook() if codebook is None else codebook
        self.table = cb.default_anchor_table() if table is None else table
        self.sigma_fraction = float(sigma_fraction)
        self.class_names = None if class_names is None else list(class_names)
        self.codebook_path = codebook_path
        self.anchors_path = anchors_path
        cb.validate(self.codebook, self.table, self.class_names)

    @classmethod
    def from_files(cls, codebook_path=None, anchors_path=None, **kwargs):
        codebook = None if codebook_path is None else cb.load_codebook(codebook_path)
        table = None if anchors_path is None else cb.load_anchor_table(anchors_path)
        return cls(codebook, table, codebook_path=codebook_path, anchors_path=anchors_path,
                   **kwargs)

    def to_dict(self):
        return {
            'codebook': self.codebook_path,
            'anchors': self.anchors_path,
            'sigma': self.sigma_fraction,
        }

    @classmethod
    def from_dict(cls, d, class_names=None):
        return cls.from_files(d.get('codebook'), d.get('anchors'),
                              sigma_fraction=d.get('sigma', default_sigma_fraction),
                              class_names=class_names)

    def sigma_pixels(self, h, w, sigma_fraction=None):
        fraction = self.sigma_fraction if sigma_fraction is None else sigma_fraction
        return fraction * min(h, w)

    def image_map(self, landmarks, label, h, w, sigma_fraction=None):
        """
        The AU map of one sample at image resolution.
        """
        return build_au_map(landmarks, label, self.codebook, self.table,
                            self.sigma_pixels(h, w, sigma_fraction), h, w, self.class_names)

    def layer_map(self, landmarks, label, image_shape, layer_shape, sigma_fraction=None):
        """
        The AU map rendered at image resolution, then downsampled to a layer's.
        """
        full = self.image_map(landmarks, label, image_shape[0], image_shape[1],
                              sigma_fraction)
        return downsample_map(full, layer_shape[0], layer_shape[1])
