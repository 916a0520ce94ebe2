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
Classification accuracy, CAM and attention localization against AU maps, and the
per-class average maps used to visualize them.

Every metric is measurement only: it runs the model without recording, reads labels
and landmarks to build reference maps, and never writes to the model.
"""
from __future__ import division
from builtins import object

import logging
from collections import OrderedDict

import numpy as np

import augraph as ag
from augraph.facs.aumap import cosine
from augraph.frontends.fer import cam as cams
from augraph.frontends.fer.model import check_layer, forward_record, layer_attention, \
    predict
from augraph.util import pnm
from augraph.util.errors import DataError, UnsupportedHeadError

logger = logging.getLogger(__name__)


class MetricsReport(object):
    """
    Accuracy plus mean localization cosines of one model on one split.

    Arguments:
        cl (float): Accuracy.
        cam_cos (dict): CAM method -> mean cosine against the AU maps.
        att_cos (float): Mean cosine of the layer attention against the AU maps.
        layer (int): The stage measured.
        with_au (bool): Whether the model was trained with the alignment term.
        n_samples (int): Samples in the split.
        n_scored (int): Samples with a nonzero AU map, the ones the cosines average.
    """

    def __init__(self, cl, cam_cos, att_cos, layer, with_au, n_samples, n_scored=None):
        self.cl = cl
        self.cam_cos = OrderedDict(cam_cos)
        self.att_cos = att_cos
        self.layer = layer
        self.with_au = with_au
        self.n_samples = n_samples
        self.n_scored = n_samples if n_scored is None else n_scored

    def to_lines(self):
        """
        The report as "key = value" lines.
        """
        lines = [
            'cl = {!r}'.format(self.cl),
            'att_cos = {!r}'.format(self.att_cos),
        ]
        for method, value in self.cam_cos.items():
            lines.append('cam_cos.{} = {!r}'.format(method, value))
        lines.extend([
            'layer = {}'.format(self.layer),
            'with_au = {}'.format(str(self.with_au).lower()),
            'n_samples = {}'.format(self.n_samples),
            'n_scored = {}'.format(self.n_scored),
        ])
        return lines

    def table_rows(self):
        """
        One (method, with_au, cl, cam_cos, att_cos) row per CAM method.
        """
        return [(method, self.with_au, self.cl, value, self.att_cos)
                for method, value in self.cam_cos.items()]


table_header = ('method', 'with_au', 'cl', 'cam_cos', 'att_cos')


def write_report(report, path):
    with open(path, 'w') as f:
        for line in report.to_lines():
            f.write(line + '\n')


def write_table(reports, path):
    """
    Tab-delimited rows for every report, one line per CAM method.
    """
    with open(path, 'w') as f:
        f.write('\t'.join(table_header) + '\n')
        for report in reports:
            for method, with_au, cl, cam_cos, att_cos in report.table_rows():
                f.write('{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\n'.format(
                    method, str(with_au).lower(), cl, cam_cos, att_cos))


def _require(dataset):
    if len(dataset) == 0:
        raise DataError('cannot evaluate on an empty dataset')


def accuracy(state, dataset):
    """
    Fraction of samples whose predicted class equals the label.
    """
    _require(dataset)
    correct = sum(predict(state, sample.image) == sample.label for sample in dataset)
    return correct / len(dataset)


def reference_map(state, sample, l, au_cfg):
    """
    The AU map of a sample at stage l's resolution.

    Raises:
        DataError: when the sample has no landmarks.
    """
    if sample.landmarks is None:
        raise DataError('sample {} has no landmarks'.format(sample.id))
    return au_cfg.layer_map(sample.landmarks, sample.label, sample.image.shape[-2:],
                            state.layer_shape(l)).values


def _mean(scores):
    return float(np.mean(scores)) if scores else 0.


def attention_map(state, sample, l):
    with ag.no_record():
        result = forward_record(state, sample.image, record=False)
        return layer_attention(state, result, l).numpy()


def att_scores(state, dataset, l, au_cfg):
    """
    Per-sample cosines of the attention against the AU map; samples whose AU map is
    all zero are skipped.
    """
    l = check_layer(l, len(state.stages))
    scores = []
    for sample in dataset:
        reference = reference_map(state, sample, l, au_cfg)
        if not reference.any():
            continue
        scores.append(cosine(attention_map(state, sample, l), reference))
    return scores


def att_cos(state, dataset, l, au_cfg):
    """
    Mean attention-localization cosine over samples with a nonzero AU map.
    """
    _require(dataset)
    return _mean(att_scores(state, dataset, l, au_cfg))


def cam_scores(state, dataset, method, l, au_cfg):
    l = check_layer(l, len(state.stages))
    scores = []
    for sample in dataset:
        reference = reference_map(state, sample, l, au_cfg)
        if not reference.any():
            continue
        cam_map = cams.extract(method, state, sample.image, sample.label, l)
        scores.append(cosine(cam_map.values, reference))
    return scores


def cam_cos(state, dataset, method, l, au_cfg):
    """
    Mean CAM-localization cosine for the ground-truth class over samples with a
    nonzero AU map.  An all-zero CAM scores 0.
    """
    _require(dataset)
    return _mean(cam_scores(state, dataset, method, l, au_cfg))


def evaluate(state, dataset, au_cfg, l=None, methods=None, with_au=False):
    """
    Assemble a MetricsReport.

    Arguments:
        methods (list, optional): CAM methods to score.  Defaults to every method the
            model supports at l; naming an unsupported one raises.
    """
    _require(dataset)
    l = state.cfg.attention_layer if l is None else check_layer(l, len(state.stages))
    if methods is None:
        methods = [m for m in cams.methods if cams.supports(state, m, l)]
        skipped = [m for m in cams.methods if m not in methods]
        if skipped:
            logger.warning('skipping %s: not supported by a %s head at layer %d',
                           ', '.join(skipped), state.cfg.head, l)
    for method in methods:
        if not cams.supports(state, method, l):
            raise UnsupportedHeadError('{} is not supported by a {} head at layer {}'.format(
                method, state.cfg.head, l))
    scored = att_scores(state, dataset, l, au_cfg)
    cam_cos_values = OrderedDict(
        (method, _mean(cam_scores(state, dataset, method, l, au_cfg))) for method in methods)
    return MetricsReport(cl=accuracy(state, dataset), cam_cos=cam_cos_values,
                         att_cos=_mean(scored), layer=l, with_au=with_au,
                         n_samples=len(dataset), n_scored=len(scored))


def _group_by_class(dataset, class_names):
    groups = OrderedDict((i, []) for i in range(len(class_names)))
    for sample in dataset:
        groups[sample.label].append(sample)
    missing = [class_names[i] for i, samples in groups.items() if not samples]
    if missing:
        raise DataError('no samples for classes: {}'.format(', '.join(missing)))
    return groups


def per_class_average_maps(state, dataset, l, kind):
    """
    Mean of the normalized per-sample maps of each class.

    Arguments:
        kind (str): 'attention' or a CAM method name.

    Returns:
        OrderedDict class name -> (h, w) array, in class order.

    Raises:
        DataError: listing the classes without samples.
    """
    l = check_layer(l, len(state.stages))
    groups = _group_by_class(dataset, dataset.class_names)
    averages = OrderedDict()
    for label, samples in groups.items():
        total = np.zeros(state.layer_shape(l))
        for sample in samples:
            if kind == 'attention':
                total += cams.normalize_map(attention_map(state, sample, l))
            else:
                total += cams.extract(kind, state, sample.image, sample.label, l).values
        averages[dataset.class_names[label]] = total / len(samples)
    return averages


def per_class_reference_maps(dataset, shape, au_cfg):
    """
    Mean AU map of each class at (h, w) shape, the reference for the average maps.
    """
    groups = _group_by_class(dataset, dataset.class_names)
    averages = OrderedDict()
    for label, samples in groups.items():
        total = np.zeros(shape)
        for sample in samples:
            total += au_cfg.layer_map(sample.landmarks, sample.label, sample.image.shape[-2:],
                                      shape).values
        averages[dataset.class_names[label]] = total / len(samples)
    return averages


def upsample_nearest(values, h, w):
    """
    Nearest-neighbour resize of a map to (h, w).
    """
    values = np.asarray(values)
    rows = (np.arange(h) * values.shape[0]) // h
    cols = (np.arange(w) * values.shape[1]) // w
    return values[rows][:, cols]


def map_grid(maps, panel=64):
    """
    Side-by-side heat panels, one per map, each panel x panel pixels.

    Returns:
        (panel, panel * len(maps), 3) image.
    """
    panels = [pnm.heat_rgb(cams.normalize_map(upsample_nearest(m, panel, panel)))
              for m in maps]
    return np.concatenate(panels, axis=1)


def write_grid(path, maps, panel=64):
    """
    Write map_grid(maps) as a binary pixmap.
    """
    pnm.write_ppm(path, map_grid(list(maps), panel))


def write_overlay(path, image, values, alpha=0.5):
    """
    Write a grayscale image with a map blended in red on top.
    """
    image = np.asarray(image)
    pnm.write_ppm(path, pnm.overlay_rgb(
        image, upsample_nearest(values, image.shape[0], image.shape[1]), alpha))
