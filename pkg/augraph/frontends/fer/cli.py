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
The augraph command line: augraph <command> [flags].

Exit codes: 0 success, 1 data error, 2 configuration error, 3 numerical failure,
64 usage error.
"""
from __future__ import division, print_function

import logging
import os
import shutil
import sys
from collections import OrderedDict

from augraph.facs.aumap import AUConfig, cosine, default_sigma_fraction, export_au_map
from augraph.frontends.fer import cam as cams
from augraph.frontends.fer import metrics, synth
from augraph.frontends.fer.argparser import AugraphArgparser, resolved_config_name, \
    usage_exit_code
from augraph.frontends.fer.callbacks import make_default_callbacks
from augraph.frontends.fer.dataset import dataset_files, load_dataset, save_dataset
from augraph.frontends.fer.model import ModelConfig, attention_sources, heads, init_model, \
    load_model, read_checkpoint_attrs, save_model
from augraph.frontends.fer.trainer import TrainConfig, fit
from augraph.util.errors import AULookupError, ClassIndexError, ConfigurationError, DataError, \
    DimensionError, NumericalError, ParameterError, UnsupportedHeadError
from augraph.util.persist import is_nonempty_dir

logger = logging.getLogger(__name__)

exit_codes = OrderedDict([
    (DataError, 1),
    (ConfigurationError, 2),
    (ParameterError, 2),
    (UnsupportedHeadError, 2),
    (DimensionError, 2),
    (AULookupError, 2),
    (ClassIndexError, 2),
    (NumericalError, 3),
])


def _set_verbosity(args):
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')
    logging.getLogger().setLevel(level)


def _add_au_args(parser, sigma_default=default_sigma_fraction):
    parser.add_argument('--codebook', help='expression to action unit codebook file; '
                                           'defaults to the shipped one')
    parser.add_argument('--anchors', help='action unit anchor table file; defaults to '
                                          'the shipped one')
    parser.add_argument('--sigma', type=float, default=sigma_default,
                        help='AU blob width as a fraction of the image side')


def _au_config(args, class_names, recorded=None):
    recorded = recorded or {}
    sigma = args.sigma if args.sigma is not None else recorded.get(
        'sigma', default_sigma_fraction)
    return AUConfig.from_files(args.codebook or recorded.get('codebook'),
                               args.anchors or recorded.get('anchors'),
                               sigma_fraction=sigma, class_names=class_names)


def gen_data_parser():
    parser = AugraphArgparser(prog='augraph gen-data',
                              description='Render a synthetic expression dataset.')
    parser.add_argument('--out', required=True, help='dataset directory')
    parser.add_argument('--force', action='store_true',
                        help='replace a dataset already in --out')
    parser.add_argument('--samples_per_class', type=int, default=72)
    parser.add_argument('--height', type=int, default=64)
    parser.add_argument('--width', type=int, default=64)
    parser.add_argument('--jitter', type=float, default=0.01,
                        help='landmark jitter std, normalized units')
    parser.add_argument('--noise', type=float, default=0.05, help='pixel noise std')
    parser.add_argument('--flip_prob', type=float, default=0.5)
    parser.add_argument('--image_format', choices=['pgm', 'raw'], default='pgm')
    return parser


def cmd_gen_data(args, parser):
    if is_nonempty_dir(args.out):
        if not args.force:
            raise ConfigurationError('{} is not empty; pass --force to replace it'.format(
                args.out))
        for name in dataset_files + (resolved_config_name,):
            path = os.path.join(args.out, name)
            if os.path.isdir(path):
                shutil.rmtree(path)
            elif os.path.exists(path):
                os.remove(path)
    cfg = synth.SynthConfig(samples_per_class=args.samples_per_class,
                            image_size=(args.height, args.width), jitter=args.jitter,
                            noise=args.noise, flip_prob=args.flip_prob, seed=args.seed)
    save_dataset(synth.generate(cfg), args.out, image_format=args.image_format)
    parser.write_resolved_config(args, args.out)
    return 0


def build_aumaps_parser():
    parser = AugraphArgparser(prog='augraph build-aumaps',
                              description='Export the AU map of every sample.')
    parser.add_argument('--data', required=True, help='dataset directory')
    parser.add_argument('--out', required=True, help='output directory')
    parser.add_argument('--split', choices=['train', 'val', 'test', 'all'], default='train')
    _add_au_args(parser)
    return parser


def cmd_build_aumaps(args, parser):
    dataset = load_dataset(args.data, split=None if args.split == 'all' else args.split)
    au_config = _au_config(args, dataset.class_names)
    for sample in dataset:
        h, w = sample.image.shape[-2:]
        au_map = au_config.image_map(sample.landmarks, sample.label, h, w)
        if au_map.is_zero:
            logger.warning('sample %05d (%s) has no action units; writing a zero map',
                           sample.id, dataset.class_names[sample.label])
        export_au_map(au_map, os.path.join(args.out, 'aumaps', '{:05d}'.format(sample.id)))
    logger.info('wrote %d AU maps to %s', len(dataset), args.out)
    parser.write_resolved_config(args, args.out)
    return 0


def train_parser():
    parser = AugraphArgparser(prog='augraph train',
                              description='Train a classifier with AU-aligned attention.')
    parser.add_argument('--data', required=True, help='dataset directory')
    parser.add_argument('--out', required=True, help='run directory')
    parser.add_argument('--lambda', dest='lam', type=float, default=1.0,
                        help='weight of the attention alignment term; 0 trains on '
                             'cross-entropy alone')
    parser.add_argument('--lambda_warmup', dest='lam_warmup', type=int, default=4,
                        help='epochs over which the alignment weight ramps up from 0')
    parser.add_argument('--layer', type=int, default=5, help='1-based aligned stage')
    parser.add_argument('--epochs', type=int, default=12)
    parser.add_argument('--batch_size', type=int, default=16)
    parser.add_argument('--lr', type=float, default=0.01)
    parser.add_argument('--momentum', type=float, default=0.9)
    parser.add_argument('--no_shuffle', action='store_true')
    parser.add_argument('--head', choices=heads, default='gap-linear')
    parser.add_argument('--attention_source', choices=attention_sources, default='post')
    parser.add_argument('--checkpoint_every', type=int, default=0,
                        help='epochs between checkpoints; 0 saves only the final model')
    _add_au_args(parser)
    return parser


def cmd_train(args, parser):
    train_set = load_dataset(args.data, split='train')
    val_set = load_dataset(args.data, split='val')
    if not len(train_set):
        raise DataError('no training samples', path=args.data)
    h, w = train_set.image_shape[-2:]
    model_cfg = ModelConfig(input_size=(h, w, 1), head=args.head,
                            classes=len(train_set.class_names), attention_layer=args.layer,
                            seed=args.seed, attention_source=args.attention_source)
    train_cfg = TrainConfig(lam=args.lam, lam_warmup=args.lam_warmup, lr=args.lr,
                            momentum=args.momentum, epochs=args.epochs,
                            batch_size=args.batch_size, attention_layer=args.layer,
                            sigma=args.sigma, seed=args.seed, shuffle=not args.no_shuffle)
    au_config = _au_config(args, train_set.class_names)
    echo = dict(train_cfg.to_dict(), aus=au_config.to_dict())
    parser.write_resolved_config(args, args.out)

    state = init_model(model_cfg)
    iterations = -(-len(train_set) // train_cfg.batch_size) * train_cfg.epochs
    callbacks = make_default_callbacks(args.out, iterations, state, args.checkpoint_every,
                                       echo, use_progress_bar=args.progress_bar)
    try:
        fit(state, train_set, val_set if len(val_set) else None, train_cfg,
            au_config=au_config, callbacks=callbacks)
    finally:
        callbacks.close()
    save_model(state, os.path.join(args.out, 'model.h5'), echo)
    return 0


def _load_checkpoint(path, dataset):
    cfg, train = read_checkpoint_attrs(path)
    if cfg.classes != len(dataset.class_names):
        raise ConfigurationError('{} has {} classes, the dataset {}'.format(
            path, cfg.classes, len(dataset.class_names)))
    if len(dataset) and tuple(dataset.image_shape[-2:]) != cfg.image_shape[1:]:
        raise ConfigurationError('{} takes {} images, the dataset has {}'.format(
            path, cfg.image_shape[1:], dataset.image_shape))
    return load_model(path), train or {}


def eval_parser():
    parser = AugraphArgparser(prog='augraph eval',
                              description='Measure accuracy and localization.')
    parser.add_argument('--data', required=True, help='dataset directory')
    parser.add_argument('--checkpoint', required=True, help='model checkpoint')
    parser.add_argument('--out', required=True, help='report directory')
    parser.add_argument('--split', choices=['train', 'val', 'test'], default='test')
    parser.add_argument('--layer', type=int, help='1-based stage; defaults to the '
                                                  "model's attention layer")
    parser.add_argument('--method', choices=list(cams.methods) + ['all'], default='all')
    _add_au_args(parser, sigma_default=None)
    return parser


def cmd_eval(args, parser):
    dataset = load_dataset(args.data, split=args.split)
    state, train = _load_checkpoint(args.checkpoint, dataset)
    au_config = _au_config(args, dataset.class_names, train.get('aus'))
    methods = None if args.method == 'all' else [args.method]
    report = metrics.evaluate(state, dataset, au_config, l=args.layer, methods=methods,
                              with_au=train.get('lambda', 0) > 0)
    parser.write_resolved_config(args, args.out)
    metrics.write_report(report, os.path.join(args.out, 'metrics.txt'))
    metrics.write_table([report], os.path.join(args.out, 'metrics.tsv'))
    for line in report.to_lines():
        print(line)
    return 0


def export_maps_parser():
    parser = AugraphArgparser(prog='augraph export-maps',
                              description='Write per-class average maps and overlays.')
    parser.add_argument('--data', required=True, help='dataset directory')
    parser.add_argument('--checkpoint', required=True, action='append',
                        help='model checkpoint; repeat to compare several')
    parser.add_argument('--out', required=True, help='image directory')
    parser.add_argument('--split', choices=['train', 'val', 'test'], default='test')
    parser.add_argument('--layer', type=int, help='1-based stage; defaults to the '
                                                  "model's attention layer")
    parser.add_argument('--kind', action='append',
                        choices=['attention'] + list(cams.methods),
                        help='map kind; repeat for several.  Defaults to attention and '
                             'every supported CAM method')
    parser.add_argument('--panel', type=int, default=64, help='grid panel side in pixels')
    parser.add_argument('--overlays', type=int, default=1,
                        help='samples per class drawn with their CAM overlaid')
    _add_au_args(parser, sigma_default=None)
    return parser


def _checkpoint_tag(train, used):
    tag = 'with_au' if train.get('lambda', 0) > 0 else 'without_au'
    if tag in used:
        tag = '{}_{}'.format(tag, sum(1 for t in used if t.startswith(tag)) + 1)
    used.append(tag)
    return tag


def cmd_export_maps(args, parser):
    if args.panel < 1:
        raise ParameterError('panel must be >= 1, found {}'.format(args.panel))
    dataset = load_dataset(args.data, split=args.split)
    tags = []
    wrote_reference = False
    for path in args.checkpoint:
        state, train = _load_checkpoint(path, dataset)
        l = state.cfg.attention_layer if args.layer is None else args.layer
        kinds = args.kind or ['attention'] + [m for m in cams.methods
                                              if cams.supports(state, m, l)]
        tag = _checkpoint_tag(train, tags)
        if not wrote_reference:
            au_config = _au_config(args, dataset.class_names, train.get('aus'))
            reference = metrics.per_class_reference_maps(dataset, state.layer_shape(l),
                                                         au_config)
            metrics.write_grid(os.path.join(args.out, 'grid_aumap.ppm'),
                               reference.values(), args.panel)
            wrote_reference = True
        for kind in kinds:
            averages = metrics.per_class_average_maps(state, dataset, l, kind)
            metrics.write_grid(os.path.join(args.out, 'grid_{}_{}.ppm'.format(kind, tag)),
                               averages.values(), args.panel)
            logger.info('%s %s: per-class cosine to the AU maps %s', tag, kind,
                        ', '.join('{:.3f}'.format(cosine(averages[name], reference[name]))
                                  for name in averages))
        for label in range(len(dataset.class_names)):
            samples = [s for s in dataset if s.label == label][:args.overlays]
            for sample in samples:
                for kind in kinds:
                    if kind == 'attention':
                        values = cams.normalize_map(metrics.attention_map(state, sample, l))
                    else:
                        values = cams.extract(kind, state, sample.image, label, l).values
                    metrics.write_overlay(os.path.join(
                        args.out, 'overlay_{}_{}_{:05d}.ppm'.format(tag, kind, sample.id)),
                        sample.image, values)
    parser.write_resolved_config(args, args.out)
    return 0


commands = OrderedDict([
    ('gen-data', (gen_data_parser, cmd_gen_data)),
    ('build-aumaps', (build_aumaps_parser, cmd_build_aumaps)),
    ('train', (train_parser, cmd_train)),
    ('eval', (eval_parser, cmd_eval)),
    ('export-maps', (export_maps_parser, cmd_export_maps)),
])


def _usage(stream):
    print('usage: augraph {{{}}} [flags]\n'
          '       augraph <command> --help for the flags of a command'.format(
              ','.join(commands)), file=stream)


def main(argv=None):
    """
    Run one command.

    Returns:
        int: The exit code.
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ('-h', '--help'):
        _usage(sys.stdout if argv else sys.stderr)
        return 0 if argv else usage_exit_code
    if argv[0] not in commands:
        _usage(sys.stderr)
        print('augraph: error: unknown command {!r}'.format(argv[0]), file=sys.stderr)
        return usage_exit_code
    make_parser, command = commands[argv[0]]
    parser = make_parser()
    try:
        args = parser.parse_args(argv[1:])
        _set_verbosity(args)
        return command(args, parser)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else usage_exit_code
    except tuple(exit_codes) as e:
        code = next(c for error, c in exit_codes.items() if isinstance(e, error))
        print('augraph {}: error: {}'.format(argv[0], e), file=sys.stderr)
        return code