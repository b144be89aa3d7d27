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
"""Nonparametric comparison of optimizers over a set of problems.

All tests treat smaller values as better. Ties always receive average
ranks.
"""

import collections
import enum
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as scipy_stats

from rime_bench.optim import core

DEFAULT_ALPHA = 0.05

# Smaller samples than this use the exact rank-sum distribution.
EXACT_WILCOXON_BELOW = 8

Cell = Tuple[str, str]


class StatisticsError(ValueError):
    """The data cannot be analysed by the requested test."""


class IncompleteMatrixError(StatisticsError):
    """Some (algorithm, problem) cells are empty or have too few runs."""

    def __init__(self, missing: Sequence[Cell]):
        self.missing = list(missing)
        super().__init__(
            'incomplete result matrix, missing runs for: {}'.format(', '.join(
                '{}/{}'.format(a, p) for a, p in self.missing)))


class Verdict(enum.Enum):
    WIN = 'w'
    EQUAL = 'e'
    LOSS = 'l'


class FriedmanResult(NamedTuple):
    mean_ranks: Dict[str, float]
    statistic: float
    p_value: float


class WilcoxonResult(NamedTuple):
    p_value: float
    verdict: Verdict


class KruskalResult(NamedTuple):
    statistic: float
    p_value: float


class WinEqualLoss(NamedTuple):
    wins: int
    equals: int
    losses: int

    def __str__(self):
        return '{}/{}/{}'.format(self.wins, self.equals, self.losses)


class ResultMatrix(object):
    """Final best-fitness values per (algorithm, problem) across runs."""

    def __init__(self, algorithms: Sequence[str], problems: Sequence[str],
                 cells: Dict[Cell, Sequence[float]]):
        """Creates a matrix.

        Args:
            algorithms: Algorithm names in report order.
            problems: Problem names in report order.
            cells: Run values keyed by (algorithm, problem). Absent keys
                are empty cells.
        """
        self.algorithms = list(algorithms)
        self.problems = list(problems)
        self._cells = {
            (a, p): np.asarray(cells.get((a, p), ()), dtype=float)
            for a in self.algorithms for p in self.problems
        }

    @classmethod
    def from_records(cls,
                     records: Iterable[core.RunRecord],
                     algorithms: Optional[Sequence[str]] = None,
                     problems: Optional[Sequence[str]] = None
                    ) -> 'ResultMatrix':
        """Builds a matrix from successful run records.

        Failed runs are skipped, which leaves their cells short.
        Algorithms and problems default to the sorted names found in the
        records.
        """
        values = collections.defaultdict(list)
        seen_algorithms, seen_problems = set(), set()
        for record in records:
            seen_algorithms.add(record.variant)
            seen_problems.add(record.instance_id)
            if record.status == 'ok':
                values[(record.variant, record.instance_id)].append(
                    record.final_best)
        return cls(algorithms or sorted(seen_algorithms), problems or
                   sorted(seen_problems), values)

    def cell(self, algorithm: str, problem: str) -> np.ndarray:
        return self._cells[(algorithm, problem)]

    def run_count(self) -> int:
        """Returns the largest number of runs in any cell."""
        return max((v.size for v in self._cells.values()), default=0)

    def missing_cells(self, expected_runs: Optional[int] = None) -> List[Cell]:
        """Returns the cells holding fewer than expected_runs values.

        expected_runs defaults to run_count().
        """
        expected = self.run_count() if expected_runs is None else expected_runs
        expected = max(expected, 1)
        return [(a, p)
                for a in self.algorithms
                for p in self.problems
                if self._cells[(a, p)].size < expected]

    def check_complete(self, expected_runs: Optional[int] = None):
        """Raises IncompleteMatrixError naming every short cell."""
        if not self.algorithms or not self.problems:
            raise StatisticsError('the result matrix is empty')
        missing = self.missing_cells(expected_runs)
        if missing:
            raise IncompleteMatrixError(missing)

    def means(self) -> np.ndarray:
        """Returns the (problems, algorithms) array of per-cell means."""
        self.check_complete()
        return np.array([[self._cells[(a, p)].mean()
                          for a in self.algorithms]
                         for p in self.problems])

    def __repr__(self):
        return 'ResultMatrix({} algorithms, {} problems, {} runs)'.format(
            len(self.algorithms), len(self.problems), self.run_count())


def _ranks(means: np.ndarray) -> np.ndarray:
    return np.array([scipy_stats.rankdata(row) for row in means])


def mean_rank_table(matrix: ResultMatrix) -> Dict[str, float]:
    """Ranks algorithms per problem by mean value and averages the ranks.

    Raises:
        StatisticsError: If the matrix is empty.
        IncompleteMatrixError: If some cells are short.
    """
    ranks = _ranks(matrix.means())
    return collections.OrderedDict(
        zip(matrix.algorithms, (float(r) for r in ranks.mean(axis=0))))


def friedman_test(matrix: ResultMatrix) -> FriedmanResult:
    """Friedman test over per-problem means, with tie correction.

    Raises:
        StatisticsError: If fewer than two algorithms or problems are given.
    """
    k, n = len(matrix.algorithms), len(matrix.problems)
    if k < 2 or n < 2:
        raise StatisticsError(
            'the Friedman test needs at least 2 algorithms and 2 problems, '
            'got {} and {}'.format(k, n))
    ranks = _ranks(matrix.means())
    mean_ranks = ranks.mean(axis=0)
    table = collections.OrderedDict(
        zip(matrix.algorithms, (float(r) for r in mean_ranks)))

    tie_sum = 0.0
    for row in ranks:
        _, counts = np.unique(row, return_counts=True)
        tie_sum += float(np.sum(counts**3 - counts))
    correction = 1 - tie_sum / (n * k * (k * k - 1))
    if correction <= 0:
        return FriedmanResult(table, 0.0, 1.0)

    statistic = (12 * n / (k * (k + 1)) *
                 (np.sum(mean_ranks**2) - k * (k + 1)**2 / 4)) / correction
    statistic = max(0.0, float(statistic))
    p_value = float(scipy_stats.chi2.sf(statistic, k - 1))
    return FriedmanResult(table, statistic, min(1.0, p_value))


def _exact_rank_sum_p_value(ranks: np.ndarray, n_a: int) -> float:
    """Exact two-sided p-value of the rank sum of the first n_a ranks.

    Ranks are doubled so that average ranks become integers, then the number
    of size-n_a subsets per rank sum is counted by dynamic programming.
    """
    doubled = np.rint(2 * ranks).astype(np.int64)
    total = int(doubled.sum())
    counts = np.zeros((n_a + 1, total + 1))
    counts[0, 0] = 1
    for value in doubled:
        for size in range(n_a, 0, -1):
            counts[size, value:] += counts[size - 1, :total + 1 - value]
    distribution = counts[n_a]
    expected = n_a * (len(doubled) + 1)
    observed = abs(int(doubled[:n_a].sum()) - expected)
    sums = np.arange(total + 1)
    extreme = np.abs(sums - expected) >= observed
    return float(distribution[extreme].sum() / distribution.sum())


def wilcoxon_rank_sum(sample_a: Sequence[float],
                      sample_b: Sequence[float],
                      alpha: float = DEFAULT_ALPHA) -> WilcoxonResult:
    """Two-sided Wilcoxon rank-sum test of a candidate against an opponent.

    Uses the exact distribution when the smaller sample has fewer than 8
    values and the normal approximation with tie-corrected variance and
    continuity correction otherwise.

    Args:
        sample_a: The candidate's values.
        sample_b: The opponent's values.
        alpha: Significance level.

    Returns:
        The p-value and whether the candidate wins, ties or loses. A
        significant difference is a win when the candidate's median is
        smaller, or when the medians are equal and its rank sum is smaller.

    Raises:
        StatisticsError: If a sample is empty.
    """
    a = np.asarray(sample_a, dtype=float)
    b = np.asarray(sample_b, dtype=float)
    if not a.size or not b.size:
        raise StatisticsError('both samples must be non-empty')
    combined = np.concatenate([a, b])
    if np.all(combined == combined[0]):
        return WilcoxonResult(1.0, Verdict.EQUAL)

    ranks = scipy_stats.rankdata(combined)
    if min(a.size, b.size) < EXACT_WILCOXON_BELOW:
        p_value = _exact_rank_sum_p_value(ranks, a.size)
    else:
        p_value = float(
            scipy_stats.mannwhitneyu(a,
                                     b,
                                     use_continuity=True,
                                     alternative='two-sided',
                                     method='asymptotic').pvalue)
    p_value = min(1.0, p_value)

    if p_value >= alpha:
        return WilcoxonResult(p_value, Verdict.EQUAL)
    median_a, median_b = np.median(a), np.median(b)
    if median_a != median_b:
        better = median_a < median_b
    else:
        better = ranks[:a.size].sum() < a.size * (combined.size + 1) / 2
    return WilcoxonResult(p_value, Verdict.WIN if better else Verdict.LOSS)


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> KruskalResult:
    """Kruskal-Wallis H test with tie correction.

    Raises:
        StatisticsError: If fewer than two groups are given or a group is
            empty.
    """
    groups = [np.asarray(g, dtype=float) for g in groups]
    if len(groups) < 2 or any(not g.size for g in groups):
        raise StatisticsError(
            'the Kruskal-Wallis test needs at least 2 non-empty groups')
    combined = np.concatenate(groups)
    if np.all(combined == combined[0]):
        return KruskalResult(0.0, 1.0)
    result = scipy_stats.kruskal(*groups)
    return KruskalResult(float(result.statistic), float(result.pvalue))


def kruskal_by_problem(matrix: ResultMatrix) -> Dict[str, KruskalResult]:
    """Runs kruskal_wallis over the algorithms' runs of every problem."""
    matrix.check_complete()
    return collections.OrderedDict(
        (p, kruskal_wallis([matrix.cell(a, p) for a in matrix.algorithms]))
        for p in matrix.problems)


def wel_table(matrix: ResultMatrix,
              candidate: str,
              alpha: float = DEFAULT_ALPHA,
              opponents: Optional[Sequence[str]] = None,
              problems: Optional[Sequence[str]] = None
             ) -> Dict[str, WinEqualLoss]:
    """Counts the candidate's significant wins, ties and losses.

    Args:
        matrix: The results.
        candidate: Algorithm whose wins are counted.
        alpha: Significance level of every rank-sum test.
        opponents: Algorithms to compare against, every other algorithm
            when omitted.
        problems: Subset of problems to count, all when omitted.

    Returns:
        Counts per opponent; wins + equals + losses is the number of
        problems.

    Raises:
        StatisticsError: If candidate is not in the matrix.
    """
    if candidate not in matrix.algorithms:
        raise StatisticsError('"{}" is not one of the algorithms {}'.format(
            candidate, ', '.join(matrix.algorithms)))
    matrix.check_complete()
    if opponents is None:
        opponents = [a for a in matrix.algorithms if a != candidate]
    if problems is None:
        problems = matrix.problems
    table = collections.OrderedDict()
    for opponent in opponents:
        tally = collections.Counter(
            wilcoxon_rank_sum(matrix.cell(candidate, p), matrix.cell(
                opponent, p), alpha).verdict for p in problems)
        table[opponent] = WinEqualLoss(tally[Verdict.WIN],
                                       tally[Verdict.EQUAL],
                                       tally[Verdict.LOSS])
    return table
