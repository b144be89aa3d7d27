# Copyright 2018 Google LLC
# Copyright 2026 The rime-bench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Console output of the rime-bench commands.

Messages may contain <b>bold</b> markup. It becomes an ANSI escape on a
POSIX terminal and is stripped everywhere else.
"""

import abc
import contextlib
import os
import re
import sys
import time
from typing import Callable, Iterator, List, Optional, TextIO, Tuple

import progressbar

_BOLD_TAG = re.compile('<b>(.*?)</b>')
_ANSI_BOLD = '\033[1m\\1\033[0m'

Advance = Callable[..., None]


def render(value, stream: TextIO):
    """Resolves the markup of `value` for `stream`; non-strings pass through."""
    if not isinstance(value, str):
        return value
    return _BOLD_TAG.sub(_ANSI_BOLD if _is_terminal(stream) else r'\1', value)


def _is_terminal(stream: TextIO) -> bool:
    try:
        return os.name == 'posix' and os.isatty(stream.fileno())
    except (AttributeError, OSError, ValueError):
        return False


class RunProgress(object):
    """Counts finished runs on a stream.

    On a terminal this is a live progressbar2 bar:
        Running campaign  50% (42 of 84) |#######        | Elapsed Time: 0:00:31

    Elsewhere one line is written when the campaign starts and one when it
    finishes.
    """

    def __init__(self, total: int, message: str, stream: TextIO):
        self._total = total
        self._message = message
        self._stream = stream
        self._done = 0
        self._started = None
        self._bar = None
        if _is_terminal(stream):
            self._bar = progressbar.ProgressBar(
                max_value=max(total, 1),
                fd=stream,
                widgets=[
                    message,
                    progressbar.Percentage(), ' ',
                    progressbar.SimpleProgress(format='(%(value)d of '
                                               '%(max_value)d)'), ' ',
                    progressbar.Bar(), ' ',
                    progressbar.Timer()
                ])

    def __enter__(self) -> Advance:
        self._started = time.monotonic()
        if self._bar is None:
            self._stream.write('{}({} runs)\n'.format(self._message,
                                                      self._total))
        else:
            self._bar.start()
        return self.advance

    def __exit__(self, *exc_info):
        if self._bar is not None:
            self._bar.finish()
            return
        self._stream.write('{}{} of {} runs done in {:.0f} seconds\n'.format(
            self._message, self._done, self._total,
            time.monotonic() - self._started))

    def advance(self, steps: int = 1):
        self._done = min(self._total, self._done + steps)
        if self._bar is not None:
            self._bar.update(self._done)


class IO(abc.ABC):
    """Where the commands send what the user should see."""

    @abc.abstractmethod
    def tell(self, *args):
        """Shows `args` as one line of normal output."""

    @abc.abstractmethod
    def error(self, *args):
        """Shows `args` as one line of error output."""

    @abc.abstractmethod
    def progressbar(self, total: int, message: str):
        """A context manager yielding a callable that advances a progress bar.

        Args:
            total: Number of steps until the bar is full.
            message: A prefix of the progress bar showing what it is about.
        """


class ConsoleIO(IO):

    def __init__(self,
                 out: Optional[TextIO] = None,
                 err: Optional[TextIO] = None):
        self._out = out
        self._err = err

    @property
    def out(self) -> TextIO:
        return sys.stdout if self._out is None else self._out

    @property
    def err(self) -> TextIO:
        return sys.stderr if self._err is None else self._err

    def tell(self, *args):
        print(*(render(a, self.out) for a in args), file=self.out)

    def error(self, *args):
        print(*(render(a, self.err) for a in args), file=self.err)

    def progressbar(self, total: int, message: str):
        return RunProgress(total, message, self.err)


class TestIO(IO):
    """Records everything instead of printing it."""

    def __init__(self):
        self.tell_calls = []  # type: List[Tuple]
        self.error_calls = []  # type: List[Tuple]
        # (message, total, steps) per progress bar.
        self.progress = []

    def tell(self, *args):
        self.tell_calls.append(args)

    def error(self, *args):
        self.error_calls.append(args)

    @contextlib.contextmanager
    def progressbar(self, total: int, message: str) -> Iterator[Advance]:
        steps = []
        self.progress.append((message, total, steps))
        yield lambda n=1: steps.append(n)
