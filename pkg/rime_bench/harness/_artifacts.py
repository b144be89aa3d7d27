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
"""Reads and writes the files of a campaign directory.

A campaign directory looks like:

    config.yaml
    manifest.yaml
    results.csv
    summary.csv
    runs/<instance>/<variant>/run_<k>.csv
    ... and the statistics reports written by _report.
"""

import csv
import os
import tempfile
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as scipy_stats
import yaml

from rime_bench.optim import core
from rime_bench import stats

RUNS_DIR = 'runs'
RESULTS_FILE = 'results.csv'
SUMMARY_FILE = 'summary.csv'
MANIFEST_FILE = 'manifest.yaml'
CONFIG_FILE = 'config.yaml'

RUN_FIELDS = ('evals', 'best_fitness')
RESULTS_FIELDS = ('instance', 'variant', 'run', 'seed', 'final_best',
                  'evaluations', 'spdm_triggers', 'status', 'feasible',
                  'max_violation')
# Written before the feasibility columns existed.
_LEGACY_RESULTS_FIELDS = RESULTS_FIELDS[:8]
SUMMARY_ROWS = ('Best', 'Ave', 'Std', 'Rank')
FEASIBLE_ROW = 'Feasible'


class CampaignError(Exception):
    """A campaign cannot be run or reported."""


class OutputNotWritableError(CampaignError, OSError):
    """The campaign output directory cannot be written."""


def format_float(value: float) -> str:
    """Formats a float so that it reads back bit-identically."""
    return '{:.17g}'.format(value)


def check_writable(output_dir: str):
    """Creates output_dir if needed and checks that files can be written.

    Raises:
        OutputNotWritableError: If the directory cannot be created or written.
    """
    try:
        os.makedirs(output_dir, exist_ok=True)
        with tempfile.TemporaryFile(dir=output_dir):
            pass
    except OSError as e:
        raise OutputNotWritableError(
            'output directory [{}] is not writable: {}'.format(output_dir, e))


def _write_rows(path: str, header: Sequence[str], rows: Iterable[Sequence]):
    with open(path, 'w', newline='') as csv_file:
        writer = csv.writer(csv_file, lineterminator='\n')
        writer.writerow(header)
        writer.writerows(rows)


def run_csv_path(output_dir: str, instance_id: str, variant: str,
                 run_index: int) -> str:
    return os.path.join(output_dir, RUNS_DIR, instance_id, variant,
                        'run_{}.csv'.format(run_index))


def write_run_csv(output_dir: str, record: core.RunRecord,
                  run_index: int) -> str:
    """Writes a run's convergence history and returns the file path."""
    path = run_csv_path(output_dir, record.instance_id, record.variant,
                        run_index)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    _write_rows(path, RUN_FIELDS,
                ((evals, format_float(best)) for evals, best in record.history))
    return path


def read_run_csv(path: str) -> List[Tuple[int, float]]:
    with open(path, newline='') as csv_file:
        return [(int(row['evals']), float(row['best_fitness']))
                for row in csv.DictReader(csv_file)]


def _format_feasible(feasible: Optional[bool]) -> str:
    if feasible is None:
        return ''
    return 'true' if feasible else 'false'


def _parse_feasible(value: Optional[str]) -> Optional[bool]:
    if not value:
        return None
    if value not in ('true', 'false'):
        raise ValueError('feasible must be true or false, got {}'.format(value))
    return value == 'true'


def write_results(output_dir: str,
                  runs: Iterable[Tuple[int, core.RunRecord]]) -> str:
    """Writes results.csv, one row per (run index, record).

    The feasibility columns are empty for unconstrained problems.
    """
    path = os.path.join(output_dir, RESULTS_FILE)
    _write_rows(path, RESULTS_FIELDS,
                ((record.instance_id, record.variant, run_index, record.seed,
                  format_float(record.final_best), record.evaluations,
                  record.spdm_triggers, record.status,
                  _format_feasible(record.feasible),
                  '' if record.max_violation is None else format_float(
                      record.max_violation)) for run_index, record in runs))
    return path


def read_results(output_dir: str) -> List[core.RunRecord]:
    """Reads results.csv back into records without histories.

    Raises:
        CampaignError: If the file is missing or malformed.
    """
    path = os.path.join(output_dir, RESULTS_FILE)
    try:
        with open(path, newline='') as csv_file:
            reader = csv.DictReader(csv_file)
            if tuple(reader.fieldnames or ()) not in (_LEGACY_RESULTS_FIELDS,
                                                      RESULTS_FIELDS):
                raise CampaignError('[{}] does not have the columns {}'.format(
                    path, ','.join(RESULTS_FIELDS)))
            return [
                core.RunRecord(variant=row['variant'],
                               instance_id=row['instance'],
                               seed=int(row['seed']),
                               history=(),
                               final_best=float(row['final_best']),
                               final_position=(),
                               evaluations=int(row['evaluations']),
                               spdm_triggers=int(row['spdm_triggers']),
                               status=row['status'],
                               feasible=_parse_feasible(row.get('feasible')),
                               max_violation=(float(row['max_violation'])
                                              if row.get('max_violation') else
                                              None)) for row in reader
            ]
    except (OSError, ValueError) as e:
        raise CampaignError('cannot read results [{}]: {}'.format(path, e))


def _cell_summary(values: np.ndarray) -> Tuple[float, float, float]:
    if not values.size:
        return float('nan'), float('nan'), float('nan')
    std = float(np.std(values, ddof=1)) if values.size > 1 else 0.0
    return float(values.min()), float(values.mean()), std


def _feasible_fractions(records: Iterable[core.RunRecord]
                       ) -> Dict[Tuple[str, str], float]:
    """Maps (instance, variant) to the share of feasible successful runs."""
    checked = {}  # type: Dict[Tuple[str, str], List[bool]]
    for record in records:
        if record.status == 'ok' and record.feasible is not None:
            checked.setdefault((record.instance_id, record.variant),
                               []).append(record.feasible)
    return {key: float(np.mean(flags)) for key, flags in checked.items()}


def write_summary(output_dir: str,
                  matrix: stats.ResultMatrix,
                  records: Iterable[core.RunRecord] = ()) -> str:
    """Writes the Best/Ave/Std/Rank rows of every instance.

    Ranks are by mean value; an instance with an empty cell gets no ranks.
    Instances whose records carry a feasibility check also get a Feasible
    row with the share of feasible runs, nan where a cell has none.
    """
    feasible = _feasible_fractions(records)
    rows = []
    for problem in matrix.problems:
        cells = [
            _cell_summary(matrix.cell(algorithm, problem))
            for algorithm in matrix.algorithms
        ]
        best, mean, std = (np.array(column) for column in zip(*cells))
        if np.all(np.isfinite(mean)):
            rank = scipy_stats.rankdata(mean)
        else:
            rank = np.full(mean.shape, np.nan)
        for label, values in zip(SUMMARY_ROWS, (best, mean, std, rank)):
            rows.append([problem, label] + [format_float(v) for v in values])
        if any((problem, algorithm) in feasible
               for algorithm in matrix.algorithms):
            rows.append([problem, FEASIBLE_ROW] + [
                format_float(feasible.get((problem, algorithm), float('nan')))
                for algorithm in matrix.algorithms
            ])
    path = os.path.join(output_dir, SUMMARY_FILE)
    _write_rows(path, ['instance', 'statistic'] + matrix.algorithms, rows)
    return path


def write_manifest(output_dir: str, instances: Sequence[Dict[str, Any]],
                   run_count: int) -> str:
    path = os.path.join(output_dir, MANIFEST_FILE)
    with open(path, 'w') as manifest_file:
        yaml.safe_dump({
            'instances': list(instances),
            'runs': run_count
        },
                       manifest_file,
                       default_flow_style=False)
    return path
