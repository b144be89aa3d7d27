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
"""Tests for the optim.rime module."""

import math

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from rime_bench.optim import core
from rime_bench.optim import rime
from rime_bench.tests.lib import rng_fake


def _sphere(x):
    return float(np.sum(np.asarray(x)**2))


def _budget_at(used, total=100):
    budget = core.Budget(total)
    budget.consume(used)
    return budget


class CoefficientTest(parameterized.TestCase):

    @parameterized.parameters((0, 1.0), (10, 0.8), (50, 0.4), (69, 0.4),
                              (70, 0.2), (100, 0.0))
    def test_beta_steps(self, used, expected):
        self.assertAlmostEqual(rime.coeff_beta(_budget_at(used), 5), expected)

    def test_start_of_run(self):
        budget = _budget_at(0)
        self.assertEqual(rime.coeff_E(budget), 0.0)
        self.assertEqual(rime.coeff_theta(budget), 0.0)

    def test_end_of_run(self):
        budget = _budget_at(100)
        self.assertEqual(rime.coeff_E(budget), 1.0)
        self.assertAlmostEqual(rime.coeff_theta(budget), math.pi / 10)

    def test_beta_needs_steps(self):
        with self.assertRaises(core.ConfigurationError):
            rime.coeff_beta(_budget_at(0), 0)


class RimeParamsTest(parameterized.TestCase):

    @parameterized.parameters(
        dict(np=1, fes_max=100, w=5),
        dict(np=10, fes_max=100, w=0),
        dict(np=10, fes_max=9, w=5),
    )
    def test_invalid(self, **kwargs):
        with self.assertRaises(core.ConfigurationError):
            rime.RimeParams(**kwargs).validate()

    def test_valid(self):
        rime.RimeParams(np=10, fes_max=10, w=1).validate()


class SoftRimeTest(absltest.TestCase):

    def setUp(self):
        self.space = core.SearchSpace.box(3, -10, 10)
        positions = core.initialize_population(self.space, 8,
                                               np.random.default_rng(1))
        self.population = core.evaluate(_sphere, positions, core.Budget(8))

    def test_nothing_moves_when_e_is_zero(self):
        proposed = rime.soft_rime_step(self.population, self.space,
                                       _budget_at(0), 5,
                                       np.random.default_rng(0))
        np.testing.assert_array_equal(proposed, self.population.positions)

    def test_moved_coordinates(self):
        # E = 0.5: gate 0.2 opens every coordinate.
        rng = rng_fake.ScriptedGenerator(uniform=[0.5], random=[0.2, 0.25])
        budget = _budget_at(25)
        proposed = rime.soft_rime_step(self.population, self.space, budget, 5,
                                       rng)
        factor = (0.5 * math.cos(rime.coeff_theta(budget)) *
                  rime.coeff_beta(budget, 5))
        expected = self.space.clip(self.population.best_position + factor *
                                   (0.25 * 20 - 10) * np.ones((8, 3)))
        np.testing.assert_allclose(proposed, expected)
        self.assertEqual(rng.calls, ['uniform', 'random', 'random'])

    def test_proposals_stay_inside_box(self):
        proposed = rime.soft_rime_step(self.population, self.space,
                                       _budget_at(90), 5,
                                       np.random.default_rng(3))
        self.assertTrue(self.space.contains(proposed))


class HardRimeTest(absltest.TestCase):

    def setUp(self):
        self.population = core.Population(
            [[0.0, 0.0], [1.0, 1.0], [5.0, 5.0]], [0.0, 1.0, 2.0])
        self.proposed = np.array([[9.0, 9.0], [8.0, 8.0], [7.0, 7.0]])

    def test_normalize_fitness(self):
        np.testing.assert_allclose(rime.normalize_fitness(self.population),
                                   [0.0, 0.5, 1.0])

    def test_normalize_equal_fitness(self):
        population = core.Population(np.zeros((3, 2)), [4.0, 4.0, 4.0])
        np.testing.assert_array_equal(rime.normalize_fitness(population),
                                      [0.5, 0.5, 0.5])

    def test_normalize_non_finite(self):
        population = core.Population(np.zeros((2, 2)), [np.nan, 1.0])
        with self.assertRaises(core.NumericError):
            rime.normalize_fitness(population)

    def test_best_is_never_punctured_worst_always(self):
        for seed in range(20):
            punctured = rime.hard_rime_puncture(self.population, self.proposed,
                                                np.random.default_rng(seed))
            np.testing.assert_array_equal(punctured[0], [9.0, 9.0])
            np.testing.assert_array_equal(punctured[2], [0.0, 0.0])

    def test_middle_agent_follows_gate(self):
        rng = rng_fake.ScriptedGenerator(random=[[[0.9, 0.9], [0.4, 0.6],
                                                  [0.9, 0.9]]])
        punctured = rime.hard_rime_puncture(self.population, self.proposed,
                                            rng)
        np.testing.assert_array_equal(punctured[1], [0.0, 8.0])

    def test_punctured_fraction_follows_normalized_fitness(self):
        positions = np.zeros((3, 1000))
        positions[0] = 1.0
        population = core.Population(positions, [0.0, 1.0, 2.0])
        mask = rime.puncture_mask(population, np.random.default_rng(0))
        self.assertAlmostEqual(mask[1].mean(), 0.5, delta=0.05)
        self.assertFalse(mask[0].any())
        self.assertTrue(mask[2].all())


class GreedySelectTest(absltest.TestCase):

    def test_strict_improvement_only(self):
        parents = core.Population([[0.0], [1.0], [2.0]], [1.0, 1.0, 1.0],
                                  [2, 2, 2])
        offspring = core.Population([[5.0], [6.0], [7.0]], [0.5, 1.0, 3.0],
                                    [2, 2, 2])
        selected = rime.greedy_select(parents, offspring)
        np.testing.assert_array_equal(selected.positions, [[5.0], [1.0], [2.0]])
        np.testing.assert_array_equal(selected.fitness, [0.5, 1.0, 1.0])
        np.testing.assert_array_equal(selected.counts, [0, 3, 3])

    def test_shape_mismatch(self):
        parents = core.Population(np.zeros((2, 2)), [1.0, 1.0])
        offspring = core.Population(np.zeros((3, 2)), [1.0, 1.0, 1.0])
        with self.assertRaises(core.DimensionMismatchError):
            rime.greedy_select(parents, offspring)


class RunRimeTest(absltest.TestCase):

    def setUp(self):
        self.space = core.SearchSpace.box(5, -100, 100)
        self.params = rime.RimeParams(np=10, fes_max=2000)

    def test_budget_and_history(self):
        objective = core.CountingObjective(_sphere)
        record = rime.run_rime(objective, self.space, self.params, seed=3)
        self.assertLessEqual(record.evaluations, 2000)
        self.assertEqual(objective.calls, record.evaluations)
        evals = [e for e, _ in record.history]
        best = [b for _, b in record.history]
        self.assertEqual(evals, sorted(set(evals)))
        self.assertTrue(all(a >= b for a, b in zip(best, best[1:])))
        self.assertEqual(record.final_best, best[-1])
        self.assertEqual(record.history[0][0], 10)
        self.assertAlmostEqual(_sphere(record.final_position),
                               record.final_best)

    def test_improves_on_sphere(self):
        record = rime.run_rime(_sphere, self.space, self.params, seed=0)
        self.assertLess(record.final_best, record.history[0][1])

    def test_same_seed_same_run(self):
        a = rime.run_rime(_sphere, self.space, self.params, seed=11)
        b = rime.run_rime(_sphere, self.space, self.params, seed=11)
        self.assertEqual(a.history, b.history)
        self.assertEqual(a.final_position, b.final_position)

    def test_partial_generation_is_not_run(self):
        params = rime.RimeParams(np=10, fes_max=25)
        record = rime.run_rime(_sphere, self.space, params, seed=0)
        self.assertEqual(record.evaluations, 20)


if __name__ == '__main__':
    absltest.main()
