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
Error types raised across augraph.

Each error subclasses the builtin exception that plain code would raise for the
same condition, so callers catching ``ValueError`` or ``KeyError`` keep working.
"""


class DimensionError(ValueError):
    """
    A tensor shape does not fit an operation.

    Arguments:
        message (str): What went wrong.
        axis: The offending axis (index or name), if known.
        expected: The expected length, if known.
        actual: The length that was found, if known.
    """

    def __init__(self, message, axis=None, expected=None, actual=None):
        if axis is not None:
            message = "{} (axis {}: expected {}, found {})".format(
                message, axis, expected, actual)
        super(DimensionError, self).__init__(message)
        self.axis = axis
        self.expected = expected
        self.actual = actual


class ContractError(ValueError):
    """An API was called outside its contract."""


class ParameterError(ValueError):
    """A numeric parameter is out of range."""


class ConfigurationError(ValueError):
    """A configuration is invalid or inconsistent with the data."""


class UnsupportedHeadError(ValueError):
    """A CAM method was requested for a head it cannot be computed on."""


class DataError(ValueError):
    """
    A file or sample is missing or ill-formed.

    Arguments:
        message (str): What went wrong.
        path (str, optional): The file involved.
        line (int, optional): 1-based line number inside path.
    """

    def __init__(self, message, path=None, line=None):
        where = ''
        if path is not None:
            where = str(path)
            if line is not None:
                where += ':{}'.format(line)
            message = '{}: {}'.format(where, message)
        super(DataError, self).__init__(message)
        self.path = path
        self.line = line


class AULookupError(KeyError):
    """An action unit identifier is not present in an anchor table."""

    def __init__(self, au):
        super(AULookupError, self).__init__(au)
        self.au = au

    def __str__(self):
        return 'unknown action unit {!r}'.format(self.au)


class ClassIndexError(IndexError):
    """A class index is outside [0, classes)."""


class NumericalError(ArithmeticError):
    """
    A loss or gradient became non-finite.

    Arguments:
        message (str): What went wrong.
        epoch (int, optional): The epoch being trained.
        sample (int, optional): Index of the offending sample inside its batch.
    """

    def __init__(self, message, epoch=None, sample=None):
        parts = [message]
        if epoch is not None:
            parts.append('epoch {}'.format(epoch))
        if sample is not None:
            parts.append('sample {}'.format(sample))
        super(NumericalError, self).__init__(', '.join(parts))
        self.reason = message
        self.epoch = epoch
        self.sample = sample
