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
"""A module handles crashes of the tool."""

import os
import platform
import sys
import tempfile
import traceback
from typing import Optional

import jinja2
import numpy as np
import scipy

from rime_bench import __version__
from rime_bench import config
from rime_bench import harness
from rime_bench import stats
from rime_bench.cli import io
from rime_bench.optim import core


class UserError(Exception):
    """Error caused by the user's input rather than by the tool."""


# A list of exceptions that should be displayed to the user rather than
# producing a crash report.
_DISPLAYABLE_EXCEPTIONS = [
    UserError,
    core.ConfigurationError,
    config.InvalidConfigError,
    harness.CampaignError,
    stats.IncompleteMatrixError,
]

with open(
        os.path.join(os.path.dirname(__file__), 'template',
                     'crash_report.txt')) as f:
    _REPORT_TEMPLATE = f.read()


def handle_crash(err: Exception,
                 command: str,
                 console: io.IO = io.ConsoleIO(),
                 config_path: Optional[str] = None) -> Optional[str]:
    """The tool's crashing handler.

    Args:
        err: The exception that was raised.
        command: The command causing the exception to get thrown,
            e.g. 'rime-bench run'.
        console: Object to use for user I/O.
        config_path: Campaign configuration file to attach to the report, if
            the command read one.

    Returns:
        Path of the crash report, None when the error was only displayed.
    """
    if any(
            isinstance(err, exception_class)
            for exception_class in _DISPLAYABLE_EXCEPTIONS):
        console.error('<b>Error</b>: {}'.format(err))
        return None

    log_fd, log_file_path = tempfile.mkstemp(prefix='rime-bench-crash-report-')
    report_content = _create_report_body(command, err, config_path)
    with os.fdopen(log_fd, 'wt') as log_file:
        log_file.write(report_content)

    console.error(('Your "{}" failed due to an internal error: {}'
                   '\n\n'
                   'A crash report was written to: {}').format(
                       command, _describe(err), log_file_path))
    return log_file_path


def _describe(err: Exception) -> str:
    return '{}: {}'.format(type(err).__name__, str(err))


def _read_config(config_path: Optional[str]) -> Optional[str]:
    if not config_path:
        return None
    try:
        with open(config_path) as config_file:
            return config_file.read().strip()
    except OSError:
        return None


def _create_report_body(command: str, err: Exception,
                        config_path: Optional[str] = None) -> str:
    """Generate a crash report for the exception being handled.

    Args:
        command: The command causing the exception to get thrown,
            e.g. 'rime-bench run'.
        err: The exception that was raised.
        config_path: Campaign configuration file to include, if readable.

    Returns:
        The report in Markdown.
    """
    template = jinja2.Environment().from_string(_REPORT_TEMPLATE)
    return template.render(
        command=command,
        error=_describe(err),
        rime_bench_version=__version__.__version__,
        python_version=sys.version.replace('\n', ' '),
        numpy_version=np.__version__,
        scipy_version=scipy.__version__,
        platform=platform.platform(),
        cpu_count=os.cpu_count(),
        campaign_config=_read_config(config_path),
        traceback=traceback.format_exc())
