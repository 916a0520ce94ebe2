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
The 68-point facial landmark convention.

Indices are 0-based: jaw 0-16, brows 17-26, nose 27-35, eyes 36-47, mouth 48-67.
"Left" and "right" are image sides, so the right eye is 42-47 and the right side of
the jaw is 9-16.  Coordinates are normalized: x = column / width, y = row / height.
"""
from __future__ import division
from builtins import object

import cachetools
import numpy as np

from augraph.util.errors import DataError, DimensionError
from augraph.util.persist import ensure_dirs_exist

num_landmarks = 68

groups = {
    'jaw': tuple(range(0, 17)),
    'left_brow': tuple(range(17, 22)),
    'right_brow': tuple(range(22, 27)),
    'nose_bridge': tuple(range(27, 31)),
    'nostrils': tuple(range(31, 36)),
    'left_eye': tuple(range(36, 42)),
    'right_eye': tuple(range(42, 48)),
    'outer_mouth': tuple(range(48, 60)),
    'inner_mouth': tuple(range(60, 68)),
}

# Pairs exchanged by a horizontal flip.  Unlisted points lie on the midline.
mirror_pairs = (
    tuple((i, 16 - i) for i in range(8)) +
    tuple((17 + k, 26 - k) for k in range(5)) +
    ((31, 35), (32, 34),
     (36, 45), (37, 44), (38, 43), (39, 42), (40, 47), (41, 46),
     (48, 54), (49, 53), (50, 52), (55, 59), (56, 58),
     (60, 64), (61, 63), (65, 67))
)


@cachetools.cached({})
def mirror_permutation():
    """
    Returns:
        Read-only int array perm such that flipped.points[i] is the mirror image of
        points[perm[i]].  perm is an involution.
    """
    perm = np.arange(num_landmarks)
    for i, j in mirror_pairs:
        perm[i], perm[j] = j, i
    perm.setflags(write=False)
    return perm


class LandmarkSet(object):
    """
    68 facial keypoints in normalized image coordinates.

    Arguments:
        points: (68, 2) array-like of (x, y) pairs in [0, 1].
    """

    def __init__(self, points):
        points = np.array(points, dtype=np.float64)
        if points.shape != (num_landmarks, 2):
            raise DimensionError('landmarks must be 68 (x, y) pairs', axis='shape',
                                 expected=(num_landmarks, 2), actual=points.shape)
        if not np.all(np.isfinite(points)):
            raise ValueError('landmark coordinates must be finite')
        if points.min() < 0. or points.max() > 1.:
            bad = np.argwhere((points < 0.) | (points > 1.))[0][0]
            raise ValueError('landmark {} at {} is outside [0, 1]'.format(
                bad, tuple(points[bad])))
        points.setflags(write=False)
        self.points = points

    def __len__(self):
        return num_landmarks

    def __getitem__(self, index):
        return self.points[index]

    def __eq__(self, other):
        return isinstance(other, LandmarkSet) and np.array_equal(self.points, other.points)

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return 'LandmarkSet(center={})'.format(tuple(self.points.mean(axis=0)))

    def flip(self):
        """
        The landmarks of the horizontally mirrored image: x -> 1 - x with left and
        right indices exchanged.  Flipping twice restores the original exactly for
        coordinates on a dyadic grid.
        """
        mirrored = self.points[mirror_permutation()].copy()
        mirrored[:, 0] = 1. - mirrored[:, 0]
        return LandmarkSet(mirrored)

    def to_pixels(self, h, w):
        """
        Returns:
            (68, 2) array of (column, row) positions in an h x w image.
        """
        return self.points * np.array([w, h], dtype=np.float64)

    def combine(self, combo):
        """
        Weighted combination sum(weight * points[index]) of (index, weight) pairs.
        """
        indices = np.array([index for index, _ in combo], dtype=np.int64)
        weights = np.array([weight for _, weight in combo], dtype=np.float64)
        return weights.dot(self.points[indices])


def _template_points():
    points = np.zeros((num_landmarks, 2), dtype=np.float64)

    theta = np.pi - np.pi * np.arange(17) / 16.
    points[0:17, 0] = 0.5 + 0.36 * np.cos(theta)
    points[0:17, 1] = 0.40 + 0.48 * np.sin(theta)

    points[17:22, 0] = np.linspace(0.22, 0.44, 5)
    points[17:22, 1] = [0.30, 0.28, 0.27, 0.275, 0.29]

    points[27:31, 0] = 0.5
    points[27:31, 1] = [0.36, 0.42, 0.48, 0.54]
    points[31:36, 0] = [0.44, 0.47, 0.5, 0.53, 0.56]
    points[31:36, 1] = [0.58, 0.595, 0.60, 0.595, 0.58]

    points[36:42] = [(0.26, 0.40), (0.30, 0.375), (0.36, 0.375),
                     (0.40, 0.40), (0.36, 0.425), (0.30, 0.425)]

    points[48:52] = [(0.38, 0.72), (0.42, 0.705), (0.46, 0.70), (0.5, 0.695)]
    points[54:58] = [(0.62, 0.72), (0.585, 0.75), (0.545, 0.765), (0.5, 0.77)]
    points[60:63] = [(0.40, 0.72), (0.45, 0.71), (0.5, 0.71)]
    points[64] = (0.60, 0.72)
    points[65:67] = [(0.55, 0.73), (0.5, 0.735)]

    # Fill every mirrored point not set above from its partner.
    for i, j in mirror_pairs:
        for src, dst in ((i, j), (j, i)):
            if not points[dst].any() and points[src].any():
                points[dst] = (1. - points[src, 0], points[src, 1])
    return points


@cachetools.cached({})
def canonical_template():
    """
    A frontal, symmetric, neutral face used by the synthetic generator.

    Returns:
        LandmarkSet
    """
    return LandmarkSet(_template_points())


def read_landmarks(path):
    """
    Read 68 lines of "x y".

    Raises:
        DataError: naming the path and line of the first ill-formed entry.
    """
    try:
        with open(path) as f:
            lines = [line for line in f.read().splitlines()]
    except IOError as e:
        raise DataError('cannot read landmarks: {}'.format(e.strerror), path=path)
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) != num_landmarks:
        raise DataError('expected {} landmark lines, found {}'.format(
            num_landmarks, len(lines)), path=path)
    points = np.empty((num_landmarks, 2), dtype=np.float64)
    for n, line in enumerate(lines):
        fields = line.split()
        try:
            if len(fields) != 2:
                raise ValueError()
            points[n] = [float(fields[0]), float(fields[1])]
        except ValueError:
            raise DataError('expected "x y", found {!r}'.format(line), path=path, line=n + 1)
        if not (0. <= points[n, 0] <= 1. and 0. <= points[n, 1] <= 1.):
            raise DataError('coordinates outside [0, 1]', path=path, line=n + 1)
    return LandmarkSet(points)


def write_landmarks(path, landmarks):
    """
    Write landmarks losslessly as 68 lines of "x y".
    """
    with open(ensure_dirs_exist(path), 'w') as f:
        for x, y in landmarks.points:
            f.write('%.17g %.17g\n' % (x, y))
