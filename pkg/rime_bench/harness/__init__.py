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
"""A module to run benchmarking campaigns and report their statistics."""

from concurrent import futures
import os
from typing import Dict, List, Optional

from absl import logging

from rime_bench import config as config_lib
from rime_bench import stats
from rime_bench.cli import io
from rime_bench.harness import _artifacts
from rime_bench.harness import _report
from rime_bench.harness import _seeds
from rime_bench.harness import _tasks
from rime_bench.optim import core

CampaignConfig = config_lib.CampaignConfig
CampaignError = _artifacts.CampaignError
CampaignReport = _report.CampaignReport
OutputNotWritableError = _artifacts.OutputNotWritableError
RunTask = _tasks.RunTask
build_tasks = _tasks.build_tasks
campaign_instances = _tasks.campaign_instances
derive_seed = _seeds.derive_seed
run_seed = _seeds.run_seed


class CampaignManager(object):
    """A class to control the workflow of a benchmarking campaign."""

    def __init__(self, console: Optional[io.IO] = None):
        self._console_io = console or io.ConsoleIO()

    def run_campaign(self,
                     config: config_lib.CampaignConfig) -> stats.ResultMatrix:
        """Runs every (instance, variant, run) of a campaign.

        Convergence files, results.csv, summary.csv, manifest.yaml and
        config.yaml are written to config.output_dir, followed by the
        statistics reports when every run succeeded.

        Args:
            config: The campaign to run.

        Returns:
            The final best values of every successful run.

        Raises:
            OutputNotWritableError: If the output directory cannot be
                written. Nothing has been run in that case.
            core.ConfigurationError: If an instance cannot be generated.
        """
        output_dir = config.output_dir
        _artifacts.check_writable(output_dir)

        instances = _tasks.campaign_instances(config)
        manifests = [
            _tasks.instance_manifest(instance, config.penalty_factor,
                                     config.eq_tol) for instance in instances
        ]
        tasks = _tasks.build_tasks(config)

        self._console_io.tell(
            '<b>{}</b>: {} instances x {} variants x {} runs'.format(
                config.suite, len(instances), len(config.variants),
                config.runs))
        records = self._execute(tasks, config.workers)

        for task in tasks:
            record = records[task.key]
            if record.status == 'ok':
                _artifacts.write_run_csv(output_dir, record, task.run_index)
        _artifacts.write_results(output_dir,
                                 ((task.run_index, records[task.key])
                                  for task in tasks))
        matrix = stats.ResultMatrix.from_records(
            (records[task.key] for task in tasks),
            algorithms=config.variants,
            problems=[instance.id for instance in instances])
        _artifacts.write_summary(output_dir, matrix,
                                 (records[task.key] for task in tasks))
        _artifacts.write_manifest(output_dir, manifests, len(tasks))
        config.save(os.path.join(output_dir, _artifacts.CONFIG_FILE))

        failed = [task for task in tasks if records[task.key].status != 'ok']
        for task in failed:
            self._console_io.error('Run {} of {} on {} failed: {}'.format(
                task.run_index, task.variant, task.instance.id,
                records[task.key].error))

        try:
            self._write_reports(output_dir, matrix, config, instances)
        except stats.IncompleteMatrixError as e:
            self._console_io.error(
                'Statistics reports were not written: {}'.format(e))
        return matrix

    def report(self, input_dir: str) -> _report.CampaignReport:
        """Regenerates the statistics reports of a campaign directory.

        Args:
            input_dir: Directory written by run_campaign.

        Returns:
            The recomputed statistics.

        Raises:
            config_lib.InvalidConfigError: If config.yaml is unusable.
            CampaignError: If results.csv is missing or malformed.
            stats.IncompleteMatrixError: If some runs are missing.
        """
        config = config_lib.CampaignConfig.load(
            os.path.join(input_dir, _artifacts.CONFIG_FILE))
        _artifacts.check_writable(input_dir)
        records = _artifacts.read_results(input_dir)
        instances = _tasks.campaign_instances(config)
        matrix = stats.ResultMatrix.from_records(
            records,
            algorithms=config.variants,
            problems=[instance.id for instance in instances])
        return self._write_reports(input_dir, matrix, config, instances)

    def _write_reports(self, output_dir: str, matrix: stats.ResultMatrix,
                       config: config_lib.CampaignConfig,
                       instances: List[_tasks.InstanceSpec]
                      ) -> _report.CampaignReport:
        campaign_report = _report.write_reports(
            output_dir,
            matrix,
            {instance.id: instance.dim for instance in instances},
            config.candidate,
            config.stats_alpha,
            expected_runs=config.runs)
        for notice in campaign_report.notices:
            self._console_io.tell(notice)
        self._console_io.tell('Reports written to <b>{}</b>'.format(output_dir))
        return campaign_report

    def _execute(self, tasks: List[_tasks.RunTask],
                 workers: int) -> Dict[tuple, core.RunRecord]:
        """Runs the tasks and returns their records keyed by task key.

        Records do not depend on the worker count or completion order.
        """
        records = {}
        with self._console_io.progressbar(len(tasks),
                                          'Running campaign ') as advance:
            if workers <= 1:
                for task in tasks:
                    records[task.key] = _tasks.execute(task)
                    advance(1)
            else:
                with futures.ProcessPoolExecutor(max_workers=workers) as pool:
                    pending = {
                        pool.submit(_tasks.execute, task): task
                        for task in tasks
                    }
                    for future in futures.as_completed(pending):
                        task = pending[future]
                        try:
                            records[task.key] = future.result()
                        except Exception as e:  # pylint: disable=broad-except
                            logging.warning('worker failed on %s: %s',
                                            task.key, e)
                            records[task.key] = _tasks.failed_record(task, e)
                        advance(1)
        return records
