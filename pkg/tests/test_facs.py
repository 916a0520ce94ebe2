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
Landmarks, the expression codebook, AU anchors and AU map rendering.
"""
import os

import numpy as np
import pytest

from augraph.facs import codebook as cb
from augraph.facs.aumap import AUConfig, AUMap, build_au_map, cosine, downsample_map, \
    export_au_map, import_au_map, render_au_map
from augraph.facs.landmarks import LandmarkSet, canonical_template, mirror_permutation, \
    num_landmarks, read_landmarks, write_landmarks
from augraph.util.errors import AULookupError, ConfigurationError, DataError, \
    DimensionError, ParameterError
from augraph.util.utils import RandomTensorGenerator

rng = RandomTensorGenerator(0, np.float64)

six_classes = ['anger', 'disgust', 'fear', 'happiness', 'sadness', 'surprise']


def dyadic_landmarks():
    return LandmarkSet(rng.random_integers(0, 2 ** 16, (num_landmarks, 2)) / 2. ** 16)


def test_mirror_permutation_is_an_involution():
    perm = mirror_permutation()
    np.testing.assert_array_equal(perm[perm], np.arange(num_landmarks))
    assert perm[36] == 45 and perm[0] == 16 and perm[30] == 30
    with pytest.raises(ValueError):
        perm[0] = 1


def test_flip_twice_is_exact():
    lms = dyadic_landmarks()
    assert lms.flip().flip() == lms
    flipped = lms.flip()
    perm = mirror_permutation()
    np.testing.assert_array_equal(flipped.points[:, 0], 1. - lms.points[perm, 0])
    np.testing.assert_array_equal(flipped.points[:, 1], lms.points[perm, 1])


def test_template_is_symmetric():
    template = canonical_template()
    np.testing.assert_allclose(template.flip().points, template.points, atol=1e-12)
    assert template.points.min() >= 0. and template.points.max() <= 1.


def test_landmark_validation():
    with pytest.raises(DimensionError):
        LandmarkSet(np.zeros((67, 2)))
    points = np.full((num_landmarks, 2), 0.5)
    points[3, 1] = 1.5
    with pytest.raises(ValueError):
        LandmarkSet(points)


def test_landmark_file_round_trip(tmpdir):
    lms = LandmarkSet(rng.uniform(0, 1, (num_landmarks, 2)))
    path = os.path.join(str(tmpdir), 'lm.txt')
    write_landmarks(path, lms)
    assert read_landmarks(path) == lms


def test_landmark_file_with_67_lines(tmpdir):
    path = os.path.join(str(tmpdir), 'lm.txt')
    with open(path, 'w') as f:
        f.write('0.5 0.5\n' * 67)
    with pytest.raises(DataError) as e:
        read_landmarks(path)
    assert 'found 67' in str(e.value)
    assert path in str(e.value)


def test_landmark_file_bad_line(tmpdir):
    path = os.path.join(str(tmpdir), 'lm.txt')
    lines = ['0.5 0.5'] * num_landmarks
    lines[9] = '0.5'
    with open(path, 'w') as f:
        f.write('\n'.join(lines) + '\n')
    with pytest.raises(DataError) as e:
        read_landmarks(path)
    assert e.value.line == 10


def test_normalize_au():
    assert cb.normalize_au('au04') == 'AU4'
    assert cb.normalize_au(' AU12 ') == 'AU12'
    with pytest.raises(ValueError):
        cb.normalize_au('brow')


def test_default_codebook():
    codebook = cb.default_codebook()
    assert codebook.expressions[:6] == six_classes
    assert codebook.aus_for('happiness') == ('AU6', 'AU12')
    assert codebook.aus_for('Surprise') == ('AU1', 'AU2', 'AU5', 'AU26')
    assert codebook.aus_for(3, six_classes) == ('AU6', 'AU12')
    assert codebook.aus_for('neutral') == ()
    with pytest.raises(ConfigurationError):
        codebook.aus_for('contempt')
    with pytest.raises(ConfigurationError):
        codebook.aus_for(9, six_classes)


def test_parse_codebook_errors():
    with pytest.raises(DataError) as e:
        cb.parse_codebook(['anger: AU4', 'joy AU12'], path='book.txt')
    assert e.value.line == 2
    with pytest.raises(DataError):
        cb.parse_codebook(['anger: AU4', 'Anger: AU5'])
    with pytest.raises(DataError):
        cb.parse_codebook(['anger: brow'])
    with pytest.raises(DataError):
        cb.parse_codebook(['# nothing here'])


def test_cheek_anchor_is_midpoint_of_47_and_11():
    lms = canonical_template()
    right = [s for s in cb.default_anchor_table().specs('AU6') if s.side == 'right']
    assert len(right) == 1
    expected = (lms.points[47] + lms.points[11]) / 2.
    np.testing.assert_array_equal(right[0].point(lms), expected)


def test_anchor_table_parsing():
    table = cb.parse_anchor_table([
        'AU1: side=left; combo=(21:1)',
        'au1: side=right; combo=(22)',
        'AU4: side=center; combo=(21, 22)',
    ])
    assert [s.side for s in table.specs('AU1')] == ['left', 'right']
    assert table.specs('AU4')[0].combo == ((21, 0.5), (22, 0.5))
    with pytest.raises(AULookupError):
        table.specs('AU9')
    with pytest.raises(KeyError):
        table.specs('AU9')


def test_anchor_table_errors():
    with pytest.raises(DataError) as e:
        cb.parse_anchor_table(['AU1: side=left; combo=(21:1)',
                               'AU2: side=left; combo=(18:0.6, 19:0.6)'])
    assert e.value.line == 2
    with pytest.raises(DataError):
        cb.parse_anchor_table(['AU1: side=up; combo=(21:1)'])
    with pytest.raises(DataError):
        cb.parse_anchor_table(['AU1: side=left; combo=(68:1)'])


def test_anchor_table_round_trip():
    table = cb.default_anchor_table()
    again = cb.parse_anchor_table(table.to_lines())
    assert again.to_lines() == table.to_lines()


def test_validate_reports_missing_anchors():
    codebook = cb.AUCodebook([('odd', ['AU99'])])
    with pytest.raises(ConfigurationError) as e:
        cb.validate(codebook, cb.default_anchor_table())
    assert 'AU99' in str(e.value)
    with pytest.raises(ConfigurationError):
        cb.validate(cb.default_codebook(), cb.default_anchor_table(), ['anger', 'contempt'])
    cb.validate(cb.default_codebook(), cb.default_anchor_table(), six_classes)


def test_render_peak_is_exactly_one():
    au_map = render_au_map([(0.25, 0.5), (0.75, 0.5)], 2.0, 16, 16)
    assert au_map.values.max() == 1.
    assert au_map.values.min() >= 0.
    row, col = np.unravel_index(np.argmax(au_map.values), au_map.shape)
    assert (row, col) in [(8, 4), (7, 4), (8, 3), (7, 3), (8, 12), (7, 12), (8, 11), (7, 11)]


def test_render_is_max_composed():
    single = render_au_map([(0.25, 0.25)], 1.5, 20, 20).values
    double = render_au_map([(0.25, 0.25), (0.75, 0.75)], 1.5, 20, 20).values
    np.testing.assert_array_equal(double[:10, :10], single[:10, :10])


def test_render_without_positions_is_zero():
    au_map = render_au_map([], 2.0, 5, 6)
    assert au_map.is_zero
    assert au_map.shape == (5, 6)


def test_render_parameter_errors():
    with pytest.raises(ParameterError):
        render_au_map([(0.5, 0.5)], 0., 8, 8)
    with pytest.raises(ParameterError):
        render_au_map([(0.5, 0.5)], 1., 0, 8)


def test_render_narrow_far_blob_does_not_vanish():
    au_map = render_au_map([(0.999, 0.999)], 0.05, 32, 32)
    assert au_map.values.max() == 1.


def test_build_au_map_for_every_class():
    lms = canonical_template()
    codebook, table = cb.default_codebook(), cb.default_anchor_table()
    for label in range(6):
        first = build_au_map(lms, label, codebook, table, 5.12, 64, 64, six_classes)
        second = build_au_map(lms, label, codebook, table, 5.12, 64, 64, six_classes)
        assert first == second
        assert first.values.max() == 1.
        assert first.values.min() >= 0.
    neutral = build_au_map(lms, 'neutral', codebook, table, 5.12, 64, 64)
    assert neutral.is_zero


@pytest.mark.parametrize('dx,dy', [(3, 2), (0, 5), (4, 0)])
def test_au_map_follows_shifted_landmarks(dx, dy):
    h = w = 64
    base = canonical_template()
    shifted = LandmarkSet(base.points + np.array([dx / float(w), dy / float(h)]))
    codebook, table = cb.default_codebook(), cb.default_anchor_table()
    for label in range(6):
        before = build_au_map(base, label, codebook, table, 5.12, h, w, six_classes).values
        after = build_au_map(shifted, label, codebook, table, 5.12, h, w, six_classes).values
        np.testing.assert_allclose(after[dy:, dx:], before[:h - dy, :w - dx], atol=1e-9)

    single = render_au_map([(0.3, 0.4)], 3., h, w).values
    moved = render_au_map([(0.3 + dx / float(w), 0.4 + dy / float(h))], 3., h, w).values
    row, col = np.unravel_index(np.argmax(single), single.shape)
    assert np.unravel_index(np.argmax(moved), moved.shape) == (row + dy, col + dx)


def test_au_map_validation():
    with pytest.raises(ValueError):
        AUMap([[0., 2.]])
    with pytest.raises(DimensionError):
        AUMap(np.zeros(4))


def test_downsample():
    values = np.zeros((4, 4))
    values[0, 0] = 1.
    values[3, 3] = 0.5
    small = downsample_map(AUMap(values), 2, 2)
    np.testing.assert_allclose(small.values, [[1., 0.], [0., 0.5]])
    same = AUMap(values)
    assert downsample_map(same, 4, 4) is same
    with pytest.raises(ParameterError):
        downsample_map(same, 8, 8)


def test_downsample_uneven_sizes():
    au_map = render_au_map([(0.3, 0.6)], 3., 64, 64)
    small = downsample_map(au_map, 10, 7)
    assert small.shape == (10, 7)
    assert small.values.max() == 1.


def test_export_import(tmpdir):
    au_map = render_au_map([(0.4, 0.3)], 2.5, 12, 9)
    stem = os.path.join(str(tmpdir), 'maps', '00001')
    export_au_map(au_map, stem)
    assert os.path.exists(stem + '.pgm')
    assert import_au_map(stem + '.txt') == au_map


def test_cosine_of_arrays():
    assert cosine(np.zeros((2, 2)), np.ones((2, 2))) == 0.
    assert abs(cosine(np.ones((2, 2)), [[1., 0.], [0., 0.]]) - 0.5) < 1e-15


def test_au_config():
    config = AUConfig(class_names=six_classes)
    assert config.sigma_pixels(64, 48) == 0.08 * 48
    lms = canonical_template()
    layer = config.layer_map(lms, 3, (64, 64), (8, 8))
    assert layer.shape == (8, 8)
    assert layer.values.max() == 1.
    again = AUConfig.from_dict(config.to_dict(), class_names=six_classes)
    assert again.layer_map(lms, 3, (64, 64), (8, 8)) == layer
    with pytest.raises(ConfigurationError):
        AUConfig(sigma_fraction=0.)
    with pytest.raises(ConfigurationError):
        AUConfig(class_names=['anger', 'contempt'])
