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
"""Statistics reports of a finished campaign."""

import collections
import csv
import os
from typing import Dict, List, NamedTuple, Optional

import jinja2

from rime_bench import stats
from rime_bench.harness import _artifacts

MEAN_RANK_FILE = 'mean_rank.csv'
FRIEDMAN_FILE = 'friedman.csv'
WEL_FILE = 'wel.csv'
KRUSKAL_FILE = 'kruskal_wallis.csv'
REPORT_FILE = 'report.txt'

with open(os.path.join(os.path.dirname(__file__), 'templates',
                       'report.txt')) as f:
    _REPORT_TEMPLATE = f.read()


class CampaignReport(NamedTuple):
    mean_ranks: Dict[str, float]
    friedman: Optional[stats.FriedmanResult]
    candidate: str
    # Dimension -> opponent -> counts.
    wel: Dict[int, Dict[str, stats.WinEqualLoss]]
    kruskal: Dict[str, stats.KruskalResult]
    notices: List[str]
    files: List[str]


def _write(output_dir: str, name: str, header: List[str], rows) -> str:
    path = os.path.join(output_dir, name)
    with open(path, 'w', newline='') as csv_file:
        writer = csv.writer(csv_file, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_reports(output_dir: str,
                  matrix: stats.ResultMatrix,
                  instance_dims: Dict[str, int],
                  candidate: str,
                  alpha: float = stats.DEFAULT_ALPHA,
                  expected_runs: Optional[int] = None) -> CampaignReport:
    """Computes the statistics of a complete matrix and writes them.

    Args:
        output_dir: Campaign directory to write to.
        matrix: Final values of every run.
        instance_dims: Dimension of every problem in the matrix, used to
            split the w/e/l counts into one column per dimension.
        candidate: Algorithm whose w/e/l counts are reported.
        alpha: Significance level of the rank-sum tests.
        expected_runs: Runs every cell must hold.

    Returns:
        The computed statistics.

    Raises:
        stats.IncompleteMatrixError: If a cell misses runs, naming every
            such cell.
    """
    matrix.check_complete(expected_runs)
    notices = []
    files = []

    mean_ranks = stats.mean_rank_table(matrix)
    files.append(
        _write(output_dir, MEAN_RANK_FILE, ['algorithm', 'mean_rank'],
               ([a, _artifacts.format_float(r)]
                for a, r in mean_ranks.items())))

    friedman = None
    wel = collections.OrderedDict()
    kruskal = collections.OrderedDict()
    if len(matrix.algorithms) < 2:
        notices.append(
            'Friedman, w/e/l and Kruskal-Wallis skipped: a single algorithm.')
    else:
        if len(matrix.problems) < 2:
            notices.append('Friedman test skipped: a single problem.')
        else:
            friedman = stats.friedman_test(matrix)
            files.append(
                _write(output_dir, FRIEDMAN_FILE,
                       ['statistic', 'p_value', 'algorithms', 'problems'],
                       [[
                           _artifacts.format_float(friedman.statistic),
                           _artifacts.format_float(friedman.p_value),
                           len(matrix.algorithms),
                           len(matrix.problems)
                       ]]))

        dims = sorted(set(instance_dims[p] for p in matrix.problems))
        for dim in dims:
            wel[dim] = stats.wel_table(
                matrix,
                candidate,
                alpha,
                problems=[
                    p for p in matrix.problems if instance_dims[p] == dim
                ])
        opponents = [a for a in matrix.algorithms if a != candidate]
        files.append(
            _write(output_dir, WEL_FILE,
                   ['opponent'] + ['D{}'.format(d) for d in dims],
                   ([o] + [str(wel[d][o]) for d in dims] for o in opponents)))

        kruskal = stats.kruskal_by_problem(matrix)
        files.append(
            _write(output_dir, KRUSKAL_FILE,
                   ['instance', 'statistic', 'p_value'],
                   ([
                       p,
                       _artifacts.format_float(r.statistic),
                       _artifacts.format_float(r.p_value)
                   ] for p, r in kruskal.items())))

    report = CampaignReport(mean_ranks, friedman, candidate, wel, kruskal,
                            notices, files)
    template = jinja2.Environment(keep_trailing_newline=True).from_string(
        _REPORT_TEMPLATE)
    text = template.render(report=report,
                           algorithms=matrix.algorithms,
                           problems=matrix.problems,
                           runs=matrix.run_count(),
                           alpha=alpha)
    report_path = os.path.join(output_dir, REPORT_FILE)
    with open(report_path, 'w') as report_file:
        report_file.write(text)
    files.append(report_path)
    return report
