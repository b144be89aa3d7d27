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
"""Regenerate the statistics reports of a finished campaign."""

import argparse

from rime_bench.cli import io
from rime_bench import harness


def add_arguments(parser):

    parser.add_argument(
        '--input',
        dest='input_dir',
        required=True,
        help='Campaign directory holding config.yaml and results.csv.')


def main(args: argparse.Namespace, console: io.IO = io.ConsoleIO()):
    manager = harness.CampaignManager(console)
    campaign_report = manager.report(args.input_dir)
    for name, rank in campaign_report.mean_ranks.items():
        console.tell('{:<12} {:.4f}'.format(name, rank))
    return campaign_report
