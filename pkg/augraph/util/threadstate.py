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
import threading
from contextlib import contextmanager

__thread_state = threading.local()


def get_thread_state():
    """
    Returns:
        Thread state specific to augraph.
    """
    return __thread_state


def is_recording():
    """
    Returns:
        True if ops created on this thread record their arguments for backward.
    """
    return getattr(__thread_state, 'recording', [True])[-1]


@contextmanager
def recording(enabled):
    """
    Switch graph recording on or off for ops created inside the context.

    Arguments:
        enabled (bool): Whether new ops keep references to their arguments.
    """
    stack = getattr(__thread_state, 'recording', None)
    if stack is None:
        stack = __thread_state.recording = [True]
    stack.append(bool(enabled))
    try:
        yield
    finally:
        stack.pop()


def no_record():
    """
    Context in which ops compute values only; nothing can be differentiated.
    """
    return recording(False)
