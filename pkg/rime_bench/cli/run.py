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
"""Run a benchmarking campaign described by a configuration file."""

import argparse

from rime_bench import config
from rime_bench.cli import io
from rime_bench import harness


def add_arguments(parser):

    parser.add_argument('--config',
                        dest='config_path',
                        required=True,
                        help='Path of the YAML campaign configuration.')

    parser.add_argument(
        '--workers',
        dest='workers',
        type=int,
        help='Number of worker processes, overrides the configuration.')

    parser.add_argument('--seed',
                        dest='seed',
                        type=int,
                        help='Base seed, overrides the configuration.')

    parser.add_argument(
        '--output-dir',
        dest='output_dir',
        help='Directory to write results to, overrides the configuration.')


def main(args: argparse.Namespace, console: io.IO = io.ConsoleIO()):
    campaign_config = config.CampaignConfig.load(args.config_path).override(
        workers=getattr(args, 'workers', None),
        seed=getattr(args, 'seed', None),
        output_dir=getattr(args, 'output_dir', None))
    manager = harness.CampaignManager(console)
    return manager.run_campaign(campaign_config)


if __name__ == '__main__':
    parser = argparse.ArgumentParser(description='')
    add_arguments(parser)
    main(parser.parse_args())
