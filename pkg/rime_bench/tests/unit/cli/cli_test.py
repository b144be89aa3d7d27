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
"""Tests for the rime-bench subcommands."""

import argparse
import os
import shutil
import tempfile

from absl.testing import absltest

from rime_bench import config
from rime_bench import rime_bench
from rime_bench.cli import io
from rime_bench.cli import listing
from rime_bench.cli import report
from rime_bench.cli import run


def _told(console):
    return [args[0] for args in console.tell_calls]


class ListingTest(absltest.TestCase):

    def test_list_one_suite(self):
        console = io.TestIO()
        listing.list_functions(argparse.Namespace(suite='cec2022-like'),
                               console)
        lines = _told(console)
        self.assertEqual(lines[0], '<b>cec2022-like</b>')
        self.assertLen(lines, 13)
        self.assertTrue(lines[1].startswith('  F01 unimodal'))

    def test_list_constrained(self):
        console = io.TestIO()
        listing.list_functions(argparse.Namespace(suite='constrained'), console)
        lines = _told(console)
        self.assertLen(lines, 6)
        self.assertIn('welded_beam', lines[4])

    def test_list_all_suites(self):
        console = io.TestIO()
        listing.list_functions(argparse.Namespace(suite=None), console)
        headers = [line for line in _told(console) if line.startswith('<b>')]
        self.assertEqual(headers,
                         ['<b>{}</b>'.format(name) for name in config.SUITES])

    def test_list_variants(self):
        console = io.TestIO()
        listing.list_variants(argparse.Namespace(), console)
        lines = _told(console)
        self.assertLen(lines, 8)
        self.assertEqual(lines[0].split(), ['RIME', '-'])
        self.assertEqual(lines[-1], 'MRIME-CD   GCLS, ABS, SPDM')


class RunAndReportTest(absltest.TestCase):

    def setUp(self):
        self._root = tempfile.mkdtemp()
        self._config_path = os.path.join(self._root, 'campaign.yaml')
        config.CampaignConfig({
            'suite': 'cec2022-like',
            'functions': [1, 3],
            'dims': [2],
            'runs': 2,
            'np': 6,
            'fes_multiplier': 30,
            'output_dir': os.path.join(self._root, 'ignored'),
        }).save(self._config_path)

    def tearDown(self):
        shutil.rmtree(self._root)

    def test_run_overrides_configuration(self):
        output_dir = os.path.join(self._root, 'out')
        args = argparse.Namespace(config_path=self._config_path,
                                  workers=None,
                                  seed=9,
                                  output_dir=output_dir)
        matrix = run.main(args, io.TestIO())
        self.assertEqual(matrix.run_count(), 2)
        saved = config.CampaignConfig.load(
            os.path.join(output_dir, 'config.yaml'))
        self.assertEqual(saved.seed, 9)
        self.assertEqual(saved.output_dir, output_dir)
        self.assertFalse(os.path.exists(os.path.join(self._root, 'ignored')))

        console = io.TestIO()
        campaign_report = report.main(
            argparse.Namespace(input_dir=output_dir), console)
        self.assertEqual(list(campaign_report.mean_ranks),
                         ['RIME', 'MRIME-CD'])
        self.assertTrue(_told(console)[-1].startswith('MRIME-CD'))

    def test_missing_configuration(self):
        args = argparse.Namespace(config_path=os.path.join(
            self._root, 'missing.yaml'),
                                  workers=None,
                                  seed=None,
                                  output_dir=None)
        with self.assertRaises(config.InvalidConfigError):
            run.main(args, io.TestIO())


class ParserTest(absltest.TestCase):

    def test_subcommands(self):
        parser = rime_bench.build_parser()
        args = parser.parse_args(
            ['run', '--config', 'c.yaml', '--workers', '4', '--seed', '1'])
        self.assertEqual(args.config_path, 'c.yaml')
        self.assertEqual(args.workers, 4)
        self.assertEqual(args.seed, 1)
        args = parser.parse_args(['list-functions', '--suite', 'constrained'])
        self.assertEqual(args.suite, 'constrained')

    def test_run_needs_config(self):
        with self.assertRaises(SystemExit):
            rime_bench.build_parser().parse_args(['run'])


if __name__ == '__main__':
    absltest.main()
