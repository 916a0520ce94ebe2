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
Expression -> action unit codebooks and landmark-anchored action unit positions.
"""
from __future__ import division
from builtins import object

import logging
import os
import re
from collections import OrderedDict, namedtuple

import cachetools
import numpy as np

from augraph.facs.landmarks import num_landmarks
from augraph.util.errors import AULookupError, ConfigurationError, DataError

logger = logging.getLogger(__name__)

data_dir = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
default_codebook_path = os.path.join(data_dir, 'codebook.txt')
default_anchors_path = os.path.join(data_dir, 'anchors.txt')

sides = ('left', 'right', 'center')
weight_tolerance = 1e-9

_au_pattern = re.compile(r'^AU0*(\d+)$', re.IGNORECASE)
_anchor_pattern = re.compile(
    r'^(?P<au>[^:]+):\s*side\s*=\s*(?P<side>\w+)\s*;\s*combo\s*=\s*\((?P<combo>[^)]*)\)\s*$',
    re.IGNORECASE)


def normalize_au(name):
    """
    Canonical spelling of an action unit identifier: 'au04' -> 'AU4'.

    Raises:
        ValueError: if name is not of the form AU<number>.
    """
    match = _au_pattern.match(str(name).strip())
    if match is None:
        raise ValueError('{!r} is not an action unit identifier'.format(name))
    return 'AU{}'.format(int(match.group(1)))


def _strip_comment(line):
    return line.split('#', 1)[0].strip()


def _read_lines(path):
    try:
        with open(path) as f:
            return f.read().splitlines()
    except IOError as e:
        raise DataError('cannot read: {}'.format(e.strerror), path=path)


class AUCodebook(object):
    """
    Ordered map from expression name to its action units.

    Arguments:
        entries: Iterable of (expression, [AU, ...]) pairs.  Expression names are
            case-insensitive and kept in order.
    """

    def __init__(self, entries):
        self.entries = OrderedDict()
        for expression, aus in entries:
            key = expression.strip().lower()
            if not key:
                raise ConfigurationError('empty expression name')
            if key in self.entries:
                raise ConfigurationError('expression {!r} listed twice'.format(key))
            self.entries[key] = tuple(normalize_au(au) for au in aus)

    @property
    def expressions(self):
        return list(self.entries)

    def __contains__(self, expression):
        return str(expression).strip().lower() in self.entries

    def __len__(self):
        return len(self.entries)

    def aus_for(self, label, class_names=None):
        """
        The action units of a class.

        Arguments:
            label: An expression name, or a class index into class_names (or into the
                codebook's own order when class_names is None).
            class_names (list, optional): The dataset's ordered class names.

        Raises:
            ConfigurationError: when the class has no codebook entry.
        """
        if isinstance(label, str):
            name = label
        else:
            names = self.expressions if class_names is None else list(class_names)
            if not 0 <= int(label) < len(names):
                raise ConfigurationError('class index {} outside [0, {})'.format(
                    label, len(names)))
            name = names[int(label)]
        key = name.strip().lower()
        if key not in self.entries:
            raise ConfigurationError('no codebook entry for expression {!r}'.format(name))
        return self.entries[key]

    def to_lines(self):
        return ['{}: {}'.format(name, ', '.join(aus)) for name, aus in self.entries.items()]


def parse_codebook(lines, path=None):
    """
    Parse "expression: AU, AU, ..." lines; blank lines and # comments are skipped.
    """
    entries = []
    seen = set()
    for n, raw in enumerate(lines):
        line = _strip_comment(raw)
        if not line:
            continue
        if ':' not in line:
            raise DataError('expected "expression: AU, ..."', path=path, line=n + 1)
        name, _, rest = line.partition(':')
        name = name.strip().lower()
        if not name:
            raise DataError('missing expression name', path=path, line=n + 1)
        if name in seen:
            raise DataError('expression {!r} listed twice'.format(name), path=path, line=n + 1)
        seen.add(name)
        aus = [token.strip() for token in rest.split(',') if token.strip()]
        try:
            aus = [normalize_au(au) for au in aus]
        except ValueError as e:
            raise DataError(str(e), path=path, line=n + 1)
        entries.append((name, aus))
    if not entries:
        raise DataError('codebook has no entries', path=path)
    return AUCodebook(entries)


def load_codebook(path):
    return parse_codebook(_read_lines(path), path=path)


@cachetools.cached({})
def default_codebook():
    """
    The shipped codebook of basic-expression action units.
    """
    return load_codebook(default_codebook_path)


class AnchorSpec(namedtuple('AnchorSpec', ['au', 'side', 'combo'])):
    """
    One anchor point of an action unit.

    Arguments:
        au (str): The action unit.
        side (str): 'left', 'right' or 'center', in image coordinates.
        combo: Tuple of (landmark index, weight) with weights summing to 1.
    """
    __slots__ = ()

    def point(self, landmarks):
        """
        The anchor position on landmarks, clamped to the unit square.
        """
        return np.clip(landmarks.combine(self.combo), 0., 1.)


def _parse_combo(text, path, line):
    tokens = [token.strip() for token in text.split(',') if token.strip()]
    if not tokens:
        raise DataError('empty combination', path=path, line=line)
    weighted = [':' in token for token in tokens]
    if any(weighted) and not all(weighted):
        raise DataError('mix of weighted and unweighted landmarks', path=path, line=line)
    combo = []
    for token in tokens:
        try:
            if ':' in token:
                index, weight = token.split(':', 1)
                index, weight = int(index), float(weight)
            else:
                index, weight = int(token), 1. / len(tokens)
        except ValueError:
            raise DataError('bad landmark term {!r}'.format(token), path=path, line=line)
        if not 0 <= index < num_landmarks:
            raise DataError('landmark index {} outside [0, {}]'.format(
                index, num_landmarks - 1), path=path, line=line)
        combo.append((index, weight))
    total = sum(weight for _, weight in combo)
    if abs(total - 1.) > weight_tolerance:
        raise DataError('weights sum to {!r}, not 1'.format(total), path=path, line=line)
    return tuple(combo)


class AUAnchorTable(object):
    """
    Map from action unit to its anchor specs.

    Arguments:
        specs: Iterable of AnchorSpec.  Order is kept per action unit.
    """

    def __init__(self, specs):
        self.anchors = OrderedDict()
        for spec in specs:
            if spec.side not in sides:
                raise ConfigurationError('side {!r} not one of {}'.format(spec.side, sides))
            total = sum(weight for _, weight in spec.combo)
            if abs(total - 1.) > weight_tolerance:
                raise ConfigurationError('{} weights sum to {!r}, not 1'.format(spec.au, total))
            if any(not 0 <= index < num_landmarks for index, _ in spec.combo):
                raise ConfigurationError('{} references a landmark outside [0, {}]'.format(
                    spec.au, num_landmarks - 1))
            self.anchors.setdefault(spec.au, []).append(spec)
        for au in self.anchors:
            self.anchors[au] = tuple(self.anchors[au])

    def __contains__(self, au):
        try:
            return normalize_au(au) in self.anchors
        except ValueError:
            return False

    def specs(self, au):
        """
        Raises:
            AULookupError: when au has no anchors.
        """
        try:
            key = normalize_au(au)
        except ValueError:
            raise AULookupError(au)
        if key not in self.anchors:
            raise AULookupError(au)
        return self.anchors[key]

    def to_lines(self):
        lines = []
        for specs in self.anchors.values():
            for spec in specs:
                lines.append('{}: side={}; combo=({})'.format(
                    spec.au, spec.side,
                    ', '.join('{}:{!r}'.format(i, w) for i, w in spec.combo)))
        return lines


def parse_anchor_table(lines, path=None):
    """
    Parse "AUn: side=...; combo=(index:weight, ...)" lines.
    """
    specs = []
    for n, raw in enumerate(lines):
        line = _strip_comment(raw)
        if not line:
            continue
        match = _anchor_pattern.match(line)
        if match is None:
            raise DataError('expected "AUn: side=...; combo=(...)"', path=path, line=n + 1)
        try:
            au = normalize_au(match.group('au'))
        except ValueError as e:
            raise DataError(str(e), path=path, line=n + 1)
        side = match.group('side').lower()
        if side not in sides:
            raise DataError('side {!r} not one of {}'.format(side, sides), path=path, line=n + 1)
        specs.append(AnchorSpec(au, side, _parse_combo(match.group('combo'), path, n + 1)))
    if not specs:
        raise DataError('anchor table has no entries', path=path)
    return AUAnchorTable(specs)


def load_anchor_table(path):
    return parse_anchor_table(_read_lines(path), path=path)


@cachetools.cached({})
def default_anchor_table():
    """
    The shipped anchor table.
    """
    return load_anchor_table(default_anchors_path)


def validate(codebook, table, class_names=None):
    """
    Check that every action unit the codebook uses has anchors, and that every class
    name has a codebook entry.

    Raises:
        ConfigurationError: listing everything that is missing.
    """
    problems = []
    missing = sorted({au for aus in codebook.entries.values() for au in aus
                      if au not in table}, key=lambda au: int(au[2:]))
    if missing:
        problems.append('action units without anchors: {}'.format(', '.join(missing)))
    if class_names is not None:
        absent = [name for name in class_names if name not in codebook]
        if absent:
            problems.append('classes without codebook entries: {}'.format(', '.join(absent)))
    if problems:
        raise ConfigurationError('; '.join(problems))
    for name, aus in codebook.entries.items():
        if not aus:
            logger.debug('expression %r has no action units; its AU maps are empty', name)


def au_positions(landmarks, au, table):
    """
    The image points of an action unit, one per anchor spec.

    Arguments:
        landmarks (LandmarkSet): The face.
        au (str): Action unit identifier.
        table (AUAnchorTable): The anchors.

    Returns:
        list of (x, y) ndarrays in the unit square.

    Raises:
        AULookupError: when au is not in table.
    """
    return [spec.point(landmarks) for spec in table.specs(au)]
