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
Portable any-map (P5 graymap, P6 pixmap) and raw text map codecs.

Graymaps and pixmaps store 8-bit samples; values in [0, 1] are scaled by 255 and
rounded.  The raw text format keeps 17 significant digits and round-trips 64-bit
floats exactly.
"""
from __future__ import division

import numpy as np

from augraph.util.errors import DataError, DimensionError
from augraph.util.persist import ensure_dirs_exist

maxval = 255


def to_bytes(values):
    """
    Quantize values in [0, 1] to 8-bit samples.
    """
    values = np.asarray(values, dtype=np.float64)
    return np.rint(np.clip(values, 0., 1.) * maxval).astype(np.uint8)


def from_bytes(samples):
    return np.asarray(samples, dtype=np.float64) / maxval


def _write_pnm(path, magic, width, height, payload):
    with open(ensure_dirs_exist(path), 'wb') as f:
        f.write('{}\n{} {}\n{}\n'.format(magic, width, height, maxval).encode('ascii'))
        f.write(payload.tobytes())


def _read_header(path, data):
    """
    Parse the magic number, width, height and maxval, skipping # comments.

    Returns:
        (magic, width, height, offset of the first sample byte)
    """
    tokens = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise DataError('truncated header', path=path)
        ch = data[pos:pos + 1]
        if ch == b'#':
            end = data.find(b'\n', pos)
            pos = len(data) if end < 0 else end + 1
        elif ch.isspace():
            pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos:pos + 1].isspace():
                pos += 1
            tokens.append(data[start:pos].decode('ascii', 'replace'))
    # exactly one whitespace byte separates the header from the samples
    pos += 1
    magic = tokens[0]
    try:
        width, height, depth = (int(t) for t in tokens[1:])
    except ValueError:
        raise DataError('non-integer header field in {}'.format(tokens), path=path)
    if depth != maxval:
        raise DataError('maxval {} not supported'.format(depth), path=path)
    if width < 1 or height < 1:
        raise DataError('empty image {}x{}'.format(width, height), path=path)
    return magic, width, height, pos


def _read_pnm(path, magic, planes):
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except IOError as e:
        raise DataError('cannot read: {}'.format(e.strerror), path=path)
    found, width, height, offset = _read_header(path, data)
    if found != magic:
        raise DataError('expected {} file, found {}'.format(magic, found), path=path)
    count = width * height * planes
    samples = np.frombuffer(data, dtype=np.uint8, count=-1, offset=offset)
    if samples.size < count:
        raise DataError('expected {} samples, found {}'.format(count, samples.size),
                        path=path)
    shape = (height, width) if planes == 1 else (height, width, planes)
    return from_bytes(samples[:count].reshape(shape))


def write_pgm(path, values):
    """
    Write a (h, w) map of values in [0, 1] as a binary graymap.
    """
    values = np.asarray(values)
    if values.ndim != 2:
        raise DimensionError('graymap must be (h, w)', axis='rank', expected=2,
                             actual=values.ndim)
    _write_pnm(path, 'P5', values.shape[1], values.shape[0], to_bytes(values))


def read_pgm(path):
    """
    Returns:
        (h, w) float array in [0, 1].
    """
    return _read_pnm(path, 'P5', 1)


def write_ppm(path, rgb):
    """
    Write a (h, w, 3) image of values in [0, 1] as a binary pixmap.
    """
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise DimensionError('pixmap must be (h, w, 3)', axis='shape', expected='(h, w, 3)',
                             actual=rgb.shape)
    _write_pnm(path, 'P6', rgb.shape[1], rgb.shape[0], to_bytes(rgb))


def read_ppm(path):
    """
    Returns:
        (h, w, 3) float array in [0, 1].
    """
    return _read_pnm(path, 'P6', 3)


def write_raw_map(path, values):
    """
    Write a (h, w) float map as text: an "h w" header, then one row per line.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2:
        raise DimensionError('raw map must be (h, w)', axis='rank', expected=2,
                             actual=values.ndim)
    with open(ensure_dirs_exist(path), 'w') as f:
        f.write('{} {}\n'.format(*values.shape))
        for row in values:
            f.write(' '.join('%.17g' % v for v in row))
            f.write('\n')


def read_raw_map(path):
    """
    Read a map written by write_raw_map.
    """
    try:
        with open(path) as f:
            lines = [line.split() for line in f]
    except IOError as e:
        raise DataError('cannot read: {}'.format(e.strerror), path=path)
    if not lines or len(lines[0]) != 2:
        raise DataError('expected "h w" header', path=path, line=1)
    try:
        h, w = int(lines[0][0]), int(lines[0][1])
    except ValueError:
        raise DataError('expected "h w" header', path=path, line=1)
    rows = lines[1:]
    while rows and not rows[-1]:
        rows.pop()
    if len(rows) != h:
        raise DataError('expected {} rows, found {}'.format(h, len(rows)), path=path)
    values = np.empty((h, w), dtype=np.float64)
    for r, row in enumerate(rows):
        if len(row) != w:
            raise DataError('expected {} values, found {}'.format(w, len(row)),
                            path=path, line=r + 2)
        try:
            values[r] = [float(v) for v in row]
        except ValueError:
            raise DataError('non-numeric value', path=path, line=r + 2)
    return values


def heat_rgb(values):
    """
    Map values in [0, 1] to a black-red-yellow heat palette.
    """
    v = np.clip(np.asarray(values, dtype=np.float64), 0., 1.)
    red = np.clip(2. * v, 0., 1.)
    green = np.clip(2. * v - 1., 0., 1.)
    blue = np.zeros_like(v)
    return np.stack([red, green, blue], axis=-1)


def overlay_rgb(gray, heat, alpha=0.5):
    """
    Blend a grayscale image with a red-channel heat overlay.

    Arguments:
        gray: (h, w) image in [0, 1].
        heat: (h, w) map in [0, 1], same shape as gray.
        alpha: Weight of the overlay where heat is 1.

    Returns:
        (h, w, 3) image in [0, 1].
    """
    gray = np.asarray(gray, dtype=np.float64)
    heat = np.clip(np.asarray(heat, dtype=np.float64), 0., 1.)
    if gray.shape != heat.shape:
        raise DimensionError('overlay and image differ', axis='shape', expected=gray.shape,
                             actual=heat.shape)
    base = np.stack([gray, gray, gray], axis=-1)
    weight = (alpha * heat)[..., np.newaxis]
    red = np.zeros_like(base)
    red[..., 0] = 1.
    return (1. - weight) * base + weight * red
