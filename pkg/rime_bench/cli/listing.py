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
"""List the benchmark functions and optimizer variants."""

import argparse

from rime_bench import config
from rime_bench.cli import io
from rime_bench.optim import mrime
from rime_bench.problems import constrained
from rime_bench.problems import suite


def add_function_arguments(parser):

    parser.add_argument('--suite',
                        dest='suite',
                        choices=config.SUITES,
                        help='Only list this suite.')


def list_functions(args: argparse.Namespace,
                   console: io.IO = io.ConsoleIO()):
    suites = [args.suite] if getattr(args, 'suite', None) else config.SUITES
    for suite_name in suites:
        console.tell('<b>{}</b>'.format(suite_name))
        if suite_name == config.CONSTRAINED_SUITE:
            for problem in constrained.problem_registry():
                console.tell('  {:<28} D={:<3} {}'.format(
                    problem.name, problem.dim, problem.description))
            continue
        for recipe in suite.load_recipes(suite_name)['functions']:
            console.tell('  F{:02d} {:<12} {}'.format(
                recipe['id'], suite.function_group(suite_name, recipe['id']),
                recipe['name']))


def list_variants(args: argparse.Namespace, console: io.IO = io.ConsoleIO()):
    del args  # Unused.
    for name, flags in mrime.VARIANTS.items():
        enabled = [
            strategy.upper()
            for strategy, on in zip(flags._fields, flags)
            if on
        ]
        console.tell('{:<10} {}'.format(name, ', '.join(enabled) or '-'))
