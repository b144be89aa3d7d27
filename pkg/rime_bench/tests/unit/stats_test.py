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
"""Tests for the stats module."""

import itertools
import math

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np
from scipy import stats as scipy_stats

from rime_bench import stats
from rime_bench.optim import core


def _record(variant, instance, final_best, status='ok'):
    return core.RunRecord(variant=variant,
                          instance_id=instance,
                          seed=0,
                          history=((1, final_best),),
                          final_best=final_best,
                          final_position=(0.0,),
                          evaluations=1,
                          status=status)


def _brute_force_p_value(a, b):
    """Enumerates every split of the pooled ranks."""
    ranks = 2 * scipy_stats.rankdata(np.concatenate([a, b]))
    n_a = len(a)
    expected = n_a * (len(ranks) + 1)
    observed = abs(ranks[:n_a].sum() - expected)
    subsets = list(itertools.combinations(ranks, n_a))
    extreme = sum(1 for s in subsets if abs(sum(s) - expected) >= observed)
    return extreme / len(subsets)


# Every pair of sample sizes with at most 12 values in total.
_SIZE_PAIRS = [(n_a, n_b)
               for n_a in range(1, 12)
               for n_b in range(1, 13 - n_a)]


class ResultMatrixTest(absltest.TestCase):

    def test_from_records_skips_failed_runs(self):
        records = [
            _record('B', 'p1', 2.0),
            _record('A', 'p1', 1.0),
            _record('A', 'p1', 3.0),
            _record('B', 'p1', float('nan'), status='failed'),
        ]
        matrix = stats.ResultMatrix.from_records(records)
        self.assertEqual(matrix.algorithms, ['A', 'B'])
        self.assertEqual(matrix.problems, ['p1'])
        np.testing.assert_array_equal(matrix.cell('A', 'p1'), [1.0, 3.0])
        self.assertEqual(matrix.run_count(), 2)
        self.assertEqual(matrix.missing_cells(), [('B', 'p1')])

    def test_incomplete_matrix_names_cells(self):
        matrix = stats.ResultMatrix(['A', 'B'], ['p1', 'p2'], {
            ('A', 'p1'): [1.0],
            ('A', 'p2'): [1.0],
            ('B', 'p1'): [1.0],
        })
        with self.assertRaisesRegex(stats.IncompleteMatrixError, 'B/p2') as cm:
            matrix.check_complete()
        self.assertEqual(cm.exception.missing, [('B', 'p2')])

    def test_expected_runs(self):
        matrix = stats.ResultMatrix(['A'], ['p1'], {('A', 'p1'): [1.0, 2.0]})
        matrix.check_complete(2)
        with self.assertRaises(stats.IncompleteMatrixError):
            matrix.check_complete(3)

    def test_empty_matrix(self):
        with self.assertRaises(stats.StatisticsError):
            stats.ResultMatrix([], [], {}).check_complete()

    def test_means(self):
        matrix = stats.ResultMatrix(['A', 'B'], ['p1'], {
            ('A', 'p1'): [1.0, 3.0],
            ('B', 'p1'): [5.0],
        })
        np.testing.assert_array_equal(matrix.means(), [[2.0, 5.0]])


class RankTest(absltest.TestCase):

    def _matrix(self, rows):
        algorithms = ['A', 'B', 'C']
        problems = ['p{}'.format(i) for i in range(len(rows))]
        cells = {(a, p): [v]
                 for p, row in zip(problems, rows)
                 for a, v in zip(algorithms, row)}
        return stats.ResultMatrix(algorithms, problems, cells)

    def test_mean_ranks_with_ties(self):
        table = stats.mean_rank_table(self._matrix([[1.0, 1.0, 2.0],
                                                    [3.0, 2.0, 1.0]]))
        self.assertEqual(list(table), ['A', 'B', 'C'])
        self.assertEqual(table['A'], 2.25)
        self.assertEqual(table['B'], 1.75)
        self.assertEqual(table['C'], 2.0)

    def test_friedman_consistent_ordering(self):
        result = stats.friedman_test(self._matrix([[1.0, 2.0, 3.0]] * 4))
        self.assertEqual(dict(result.mean_ranks), {
            'A': 1.0,
            'B': 2.0,
            'C': 3.0
        })
        self.assertAlmostEqual(result.statistic, 8.0)
        self.assertAlmostEqual(result.p_value, math.exp(-4), places=6)

    def test_friedman_all_ties(self):
        result = stats.friedman_test(self._matrix([[1.0, 1.0, 1.0]] * 3))
        self.assertEqual(result.statistic, 0.0)
        self.assertEqual(result.p_value, 1.0)

    def test_friedman_needs_two_problems(self):
        with self.assertRaises(stats.StatisticsError):
            stats.friedman_test(self._matrix([[1.0, 2.0, 3.0]]))


class WilcoxonTest(parameterized.TestCase):

    def test_separated_samples(self):
        a, b = [1.0, 2.0, 3.0, 4.0, 5.0], [6.0, 7.0, 8.0, 9.0, 10.0]
        result = stats.wilcoxon_rank_sum(a, b)
        self.assertAlmostEqual(result.p_value, 2 / 252)
        self.assertEqual(result.verdict, stats.Verdict.WIN)
        self.assertEqual(stats.wilcoxon_rank_sum(b, a).verdict,
                         stats.Verdict.LOSS)

    def test_identical_samples(self):
        self.assertEqual(stats.wilcoxon_rank_sum([2.0] * 5, [2.0] * 5),
                         stats.WilcoxonResult(1.0, stats.Verdict.EQUAL))

    def test_overlapping_samples_are_equal(self):
        result = stats.wilcoxon_rank_sum([1.0, 3.0, 5.0], [2.0, 4.0, 6.0])
        self.assertEqual(result.verdict, stats.Verdict.EQUAL)

    @parameterized.parameters(
        ([0.1, 0.5, 0.2], [0.7, 0.3, 0.9, 0.8]),
        ([1.0, 1.0, 2.0, 3.0], [1.0, 2.0, 4.0, 4.0, 5.0]),
        ([5.0, 6.0], [1.0, 2.0, 3.0, 4.0, 7.0, 8.0]),
        ([1.0, 2.0, 2.0, 2.0, 9.0, 9.0], [2.0, 3.0, 4.0, 9.0, 10.0, 11.0]),
    )
    def test_exact_matches_enumeration(self, a, b):
        result = stats.wilcoxon_rank_sum(a, b)
        self.assertAlmostEqual(result.p_value, _brute_force_p_value(a, b))

    @parameterized.parameters(*_SIZE_PAIRS)
    def test_exact_path_for_small_sizes(self, n_a, n_b):
        rng = np.random.default_rng(100 * n_a + n_b)
        a = rng.integers(0, 8, n_a).astype(float)
        b = rng.integers(2, 10, n_b).astype(float)
        self.assertEqual(
            stats.wilcoxon_rank_sum(a, b).p_value, _brute_force_p_value(a, b))

    def test_exact_and_normal_approximation_agree_at_eight(self):
        rng = np.random.default_rng(8)
        for shift in np.linspace(0.0, 2.0, 21):
            a = rng.normal(0.0, 1.0, 8)
            b = rng.normal(shift, 1.0, 8)
            ranks = scipy_stats.rankdata(np.concatenate([a, b]))
            exact = stats._exact_rank_sum_p_value(ranks, 8)
            approximate = stats.wilcoxon_rank_sum(a, b).p_value
            self.assertAlmostEqual(exact, approximate, delta=0.02)

    @parameterized.named_parameters(
        ('affine_exact', lambda x: 2 * x + 7, 5, 7),
        ('cube_exact', lambda x: x**3, 5, 7),
        ('affine_normal', lambda x: 2 * x + 7, 9, 11),
        ('cube_normal', lambda x: x**3, 9, 11),
    )
    def test_monotone_transform_invariance(self, transform, n_a, n_b):
        rng = np.random.default_rng(n_a)
        a = rng.uniform(1.0, 10.0, n_a)
        b = rng.uniform(2.0, 12.0, n_b)
        expected = stats.wilcoxon_rank_sum(a, b)
        actual = stats.wilcoxon_rank_sum(transform(a), transform(b))
        self.assertAlmostEqual(actual.p_value, expected.p_value, places=12)
        self.assertEqual(actual.verdict, expected.verdict)

    def test_large_samples(self):
        a = np.arange(20.0)
        b = np.arange(20.0) + 100
        result = stats.wilcoxon_rank_sum(a, b)
        self.assertLess(result.p_value, 1e-6)
        self.assertEqual(result.verdict, stats.Verdict.WIN)

    def test_empty_sample(self):
        with self.assertRaises(stats.StatisticsError):
            stats.wilcoxon_rank_sum([], [1.0])


class KruskalWallisTest(absltest.TestCase):

    def test_two_groups(self):
        result = stats.kruskal_wallis([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        self.assertAlmostEqual(result.statistic, 27 / 7)
        self.assertAlmostEqual(result.p_value,
                               scipy_stats.chi2.sf(27 / 7, 1))

    def test_monotone_transform_invariance(self):
        rng = np.random.default_rng(3)
        groups = [rng.uniform(1.0, 10.0, n) for n in (4, 6, 9)]
        expected = stats.kruskal_wallis(groups)
        for transform in (lambda x: 2 * x + 7, lambda x: x**3):
            actual = stats.kruskal_wallis([transform(g) for g in groups])
            self.assertAlmostEqual(actual.statistic, expected.statistic,
                                   places=10)
            self.assertAlmostEqual(actual.p_value, expected.p_value,
                                   places=10)

    def test_constant_groups(self):
        self.assertEqual(stats.kruskal_wallis([[1.0, 1.0], [1.0]]),
                         stats.KruskalResult(0.0, 1.0))

    def test_needs_two_groups(self):
        with self.assertRaises(stats.StatisticsError):
            stats.kruskal_wallis([[1.0, 2.0]])

    def test_by_problem(self):
        matrix = stats.ResultMatrix(['A', 'B'], ['p1', 'p2'], {
            ('A', 'p1'): [1.0, 2.0, 3.0],
            ('B', 'p1'): [4.0, 5.0, 6.0],
            ('A', 'p2'): [1.0, 1.0, 1.0],
            ('B', 'p2'): [1.0, 1.0, 1.0],
        })
        results = stats.kruskal_by_problem(matrix)
        self.assertEqual(list(results), ['p1', 'p2'])
        self.assertAlmostEqual(results['p1'].statistic, 27 / 7)
        self.assertEqual(results['p2'].p_value, 1.0)


class WelTableTest(absltest.TestCase):

    def setUp(self):
        low = [1.0, 2.0, 3.0, 4.0, 5.0]
        high = [6.0, 7.0, 8.0, 9.0, 10.0]
        self.matrix = stats.ResultMatrix(['A', 'B', 'C'], ['p1', 'p2', 'p3'], {
            ('A', 'p1'): low,
            ('B', 'p1'): high,
            ('C', 'p1'): high,
            ('A', 'p2'): high,
            ('B', 'p2'): low,
            ('C', 'p2'): high,
            ('A', 'p3'): low,
            ('B', 'p3'): low,
            ('C', 'p3'): high,
        })

    def test_counts(self):
        table = stats.wel_table(self.matrix, 'A')
        self.assertEqual(list(table), ['B', 'C'])
        self.assertEqual(table['B'], stats.WinEqualLoss(1, 1, 1))
        self.assertEqual(table['C'], stats.WinEqualLoss(2, 1, 0))
        self.assertEqual(str(table['B']), '1/1/1')

    def test_counts_add_up(self):
        for counts in stats.wel_table(self.matrix, 'C').values():
            self.assertEqual(sum(counts), 3)

    def test_subsets(self):
        table = stats.wel_table(self.matrix,
                                'A',
                                opponents=['C'],
                                problems=['p1'])
        self.assertEqual(dict(table), {'C': stats.WinEqualLoss(1, 0, 0)})

    def test_unknown_candidate(self):
        with self.assertRaises(stats.StatisticsError):
            stats.wel_table(self.matrix, 'Z')

    def test_incomplete(self):
        matrix = stats.ResultMatrix(['A', 'B'], ['p1'], {('A', 'p1'): [1.0]})
        with self.assertRaises(stats.IncompleteMatrixError):
            stats.wel_table(matrix, 'A')


if __name__ == '__main__':
    absltest.main()
