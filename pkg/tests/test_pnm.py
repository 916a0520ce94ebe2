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

import os

import numpy as np
import pytest

from augraph.util import pnm
from augraph.util.errors import DataError, DimensionError
from augraph.util.persist import ensure_dirs_exist, is_nonempty_dir, write_lines
from augraph.util.utils import RandomTensorGenerator

rng = RandomTensorGenerator(0, np.float64)


def test_pgm_is_exact_on_the_8_bit_grid(tmpdir):
    values = rng.random_integers(0, 255, (5, 7)) / 255.
    path = os.path.join(str(tmpdir), 'a.pgm')
    pnm.write_pgm(path, values)
    with open(path, 'rb') as f:
        assert f.read(3) == b'P5\n'
    np.testing.assert_array_equal(pnm.read_pgm(path), values)


def test_pgm_quantizes(tmpdir):
    path = os.path.join(str(tmpdir), 'a.pgm')
    pnm.write_pgm(path, [[0., 0.5, 1.2], [-1., 0.999, 0.1]])
    np.testing.assert_array_equal(np.rint(pnm.read_pgm(path) * 255),
                                  [[0, 128, 255], [0, 255, 26]])


def test_ppm_layout(tmpdir):
    rgb = rng.random_integers(0, 255, (3, 4, 3)) / 255.
    path = os.path.join(str(tmpdir), 'sub', 'a.ppm')
    pnm.write_ppm(path, rgb)
    np.testing.assert_array_equal(pnm.read_ppm(path), rgb)
    with pytest.raises(DimensionError):
        pnm.write_ppm(path, np.zeros((3, 4)))


def test_pnm_header_comments(tmpdir):
    path = os.path.join(str(tmpdir), 'c.pgm')
    with open(path, 'wb') as f:
        f.write(b'P5\n# made by hand\n2 1\n255\n\x00\xff')
    np.testing.assert_array_equal(pnm.read_pgm(path), [[0., 1.]])


def test_pnm_errors(tmpdir):
    path = os.path.join(str(tmpdir), 'bad.pgm')
    with open(path, 'wb') as f:
        f.write(b'P5\n4 4\n255\n\x00')
    with pytest.raises(DataError) as e:
        pnm.read_pgm(path)
    assert path in str(e.value)
    with pytest.raises(DataError):
        pnm.read_ppm(path)
    with pytest.raises(DataError):
        pnm.read_pgm(os.path.join(str(tmpdir), 'missing.pgm'))


def test_raw_map_is_exact(tmpdir):
    values = rng.normal(0, 1, (4, 6)) / 3.
    path = os.path.join(str(tmpdir), 'm.txt')
    pnm.write_raw_map(path, values)
    np.testing.assert_array_equal(pnm.read_raw_map(path), values)


def test_raw_map_errors_carry_line_numbers(tmpdir):
    path = os.path.join(str(tmpdir), 'm.txt')
    with open(path, 'w') as f:
        f.write('2 2\n0 1\n0 x\n')
    with pytest.raises(DataError) as e:
        pnm.read_raw_map(path)
    assert e.value.line == 3
    assert '{}:3'.format(path) in str(e.value)
    with open(path, 'w') as f:
        f.write('3 2\n0 1\n')
    with pytest.raises(DataError):
        pnm.read_raw_map(path)


def test_heat_palette():
    rgb = pnm.heat_rgb([0., 0.5, 1.])
    np.testing.assert_array_equal(rgb, [[0., 0., 0.], [1., 0., 0.], [1., 1., 0.]])


def test_overlay_keeps_gray_where_heat_is_zero():
    gray = np.full((2, 2), 0.4)
    out = pnm.overlay_rgb(gray, np.zeros((2, 2)))
    assert out.shape == (2, 2, 3)
    np.testing.assert_allclose(out[..., 1], gray)


def test_persist_helpers(tmpdir):
    root = str(tmpdir)
    assert not is_nonempty_dir(os.path.join(root, 'nothing'))
    path = ensure_dirs_exist(os.path.join(root, 'a', 'b', 'c.txt'))
    assert os.path.isdir(os.path.join(root, 'a', 'b'))
    write_lines(path, ['x', 'y'])
    with open(path) as f:
        assert f.read() == 'x\ny\n'
    assert is_nonempty_dir(os.path.join(root, 'a'))
