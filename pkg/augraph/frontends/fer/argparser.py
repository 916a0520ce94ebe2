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
from __future__ import print_function

import logging
import os
import sys
from collections import OrderedDict

import configargparse

from augraph.util.errors import ConfigurationError
from augraph.util.persist import ensure_dirs_exist

usage_exit_code = 64
resolved_config_name = 'resolved_config.cfg'
_unechoed = ('config', 'help', 'verbose')

logger = logging.getLogger(__name__)


class AugraphArgparser(configargparse.ArgumentParser):
    """
    Command line and "key = value" config file parsing shared by every command.

    Flags given on the command line override the config file.  Config file keys are
    the long flag names without dashes; keys that name no flag are rejected.
    """

    def __init__(self, *args, **kwargs):
        if 'add_config_file_help' not in kwargs:
            kwargs['add_config_file_help'] = False
        self.defaults = kwargs.pop('default_overrides', dict())
        super(AugraphArgparser, self).__init__(*args, **kwargs)

        # ensure that default values are display via --help
        self.formatter_class = configargparse.ArgumentDefaultsHelpFormatter

        self.setup_default_args()

    def setup_default_args(self):
        """
        Setup the default arguments used by every command
        """
        self.add_argument('-c', '--config', is_config_file=True,
                          help='Read values for these arguments from the '
                               'configuration file specified here first.')
        self.add_argument('-v', '--verbose', action='count',
                          default=self.defaults.get('verbose', 0),
                          help="verbosity level.  Add multiple v's to "
                               "further increase verbosity")
        self.add_argument('--no_progress_bar',
                          action="store_true",
                          help="suppress running display of progress bar")
        self.add_argument('--seed', type=int, default=self.defaults.get('seed', 0),
                          metavar='SEED',
                          help='random number generator seed')

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(usage_exit_code, '{}: error: {}\n'.format(self.prog, message))

    def config_keys(self):
        """
        Every key a config file may set.
        """
        keys = set()
        for action in self._actions:
            for option in action.option_strings:
                if option.startswith('--'):
                    keys.add(option[2:])
        return keys

    def check_config_file(self, path):
        """
        Raises:
            ConfigurationError: when the file is unreadable or sets unknown keys.
        """
        try:
            with open(path) as stream:
                items = configargparse.DefaultConfigFileParser().parse(stream)
        except (IOError, OSError) as e:
            raise ConfigurationError('cannot read config file {}: {}'.format(path, e))
        except configargparse.ConfigFileParserException as e:
            raise ConfigurationError('{}: {}'.format(path, e))
        unknown = sorted(key for key in items if key not in self.config_keys())
        if unknown:
            raise ConfigurationError('{}: unknown config keys: {}'.format(
                path, ', '.join(unknown)))

    def parse_args(self, args=None, namespace=None):
        args = list(sys.argv[1:] if args is None else args)
        for path in _config_paths(args):
            self.check_config_file(path)
        parsed = super(AugraphArgparser, self).parse_args(args, namespace)

        # invert no_progress_bar meaning and store in args.progress_bar
        parsed.progress_bar = not parsed.no_progress_bar
        return parsed

    def resolved_items(self, parsed):
        """
        The parsed values as config file items, enough to rerun the command.
        """
        items = OrderedDict()
        for action in self._actions:
            long_options = [o for o in action.option_strings if o.startswith('--')]
            if not long_options or action.dest in _unechoed:
                continue
            value = getattr(parsed, action.dest, None)
            if value is None or value is False:
                continue
            if value is True:
                value = 'true'
            items[long_options[0][2:]] = value
        return items

    def write_resolved_config(self, parsed, directory):
        """
        Write directory/resolved_config.cfg echoing every parsed value.
        """
        path = ensure_dirs_exist(os.path.join(directory, resolved_config_name))
        with open(path, 'w') as f:
            f.write(configargparse.DefaultConfigFileParser().serialize(
                self.resolved_items(parsed)))
        logger.debug('wrote %s', path)
        return path


def _config_paths(args):
    paths = []
    for i, arg in enumerate(args):
        if arg in ('-c', '--config') and i + 1 < len(args):
            paths.append(args[i + 1])
        elif arg.startswith('--config='):
            paths.append(arg.split('=', 1)[1])
    return paths
