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
"""Tests for the problems.suite module."""

import pickle

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from rime_bench.optim import core
from rime_bench.problems import suite


def _all_functions():
    return [(name, fid) for name in suite.SUITES
            for fid in suite.function_ids(name)]


class BaseFunctionTest(parameterized.TestCase):

    @parameterized.parameters(*sorted(suite.BASE_FUNCTIONS))
    def test_zero_at_origin(self, tag):
        for dim in (2, 10):
            self.assertAlmostEqual(suite.base_function(tag, np.zeros(dim)),
                                   0.0,
                                   delta=1e-8)

    @parameterized.parameters(*sorted(suite.BASE_FUNCTIONS))
    def test_not_below_zero(self, tag):
        rng = np.random.default_rng(3)
        for z in rng.uniform(-5, 5, (20, 6)):
            self.assertGreaterEqual(suite.base_function(tag, z), -1e-8)

    def test_sphere(self):
        self.assertEqual(suite.base_function('sphere', [1.0, 1.0]), 2.0)

    def test_unknown_tag(self):
        with self.assertRaises(suite.UnknownFunctionError):
            suite.base_function('nope', [0.0])

    def test_empty_point(self):
        with self.assertRaises(core.DimensionMismatchError):
            suite.base_function('sphere', [])


class RecipeTest(absltest.TestCase):

    def test_function_counts(self):
        self.assertEqual(suite.function_ids('cec2017-like'),
                         list(range(1, 30)))
        self.assertEqual(suite.function_ids('cec2022-like'),
                         list(range(1, 13)))

    def test_groups(self):
        self.assertEqual(suite.function_group('cec2017-like', 1), 'unimodal')
        self.assertEqual(suite.function_group('cec2017-like', 15), 'hybrid')
        self.assertEqual(suite.function_group('cec2022-like', 12),
                         'composition')
        with self.assertRaises(suite.UnknownFunctionError):
            suite.function_group('cec2022-like', 13)

    def test_unknown_suite(self):
        with self.assertRaises(suite.UnknownFunctionError):
            suite.load_recipes('cec1999')

    def test_instance_id(self):
        self.assertEqual(suite.instance_id('cec2017-like', 3, 10),
                         'cec2017-like_F03_D10')


class HelpersTest(absltest.TestCase):

    def test_random_rotation_is_orthogonal(self):
        rotation = suite.random_rotation(7, np.random.default_rng(0))
        np.testing.assert_allclose(rotation @ rotation.T,
                                   np.eye(7),
                                   atol=1e-12)

    def test_hybrid_block_sizes(self):
        self.assertEqual(suite.hybrid_block_sizes(10, [0.5, 0.5]), [5, 5])
        self.assertEqual(suite.hybrid_block_sizes(3, [0.1, 0.1, 0.8]),
                         [1, 1, 1])
        for dim in (6, 10, 30, 50):
            sizes = suite.hybrid_block_sizes(
                dim, [0.1, 0.2, 0.2, 0.2, 0.1, 0.2])
            self.assertLen(sizes, 6)
            self.assertEqual(sum(sizes), dim)
            self.assertTrue(all(size >= 1 for size in sizes))

    def test_hybrid_needs_enough_dimensions(self):
        with self.assertRaises(core.ConfigurationError):
            suite.hybrid_block_sizes(2, [0.4, 0.4, 0.2])


class InstanceTest(parameterized.TestCase):

    @parameterized.parameters(*_all_functions())
    def test_optimum_value_is_bias(self, name, fid):
        instance = suite.make_instance(name, fid, 10, seed=1)
        self.assertAlmostEqual(instance(instance.shift),
                               instance.bias,
                               delta=1e-6)
        self.assertTrue(np.all(np.abs(instance.shift) <= suite.SHIFT_BOUND))

    def test_same_seed_same_instance(self):
        a = suite.make_instance('cec2017-like', 12, 10, seed=4)
        b = suite.make_instance('cec2017-like', 12, 10, seed=4)
        np.testing.assert_array_equal(a.shift, b.shift)
        np.testing.assert_array_equal(a.rotation, b.rotation)
        x = np.linspace(-50, 50, 10)
        self.assertEqual(a(x), b(x))

    def test_seed_changes_instance(self):
        a = suite.make_instance('cec2022-like', 1, 10, seed=4)
        b = suite.make_instance('cec2022-like', 1, 10, seed=5)
        self.assertFalse(np.array_equal(a.shift, b.shift))

    def test_rotation_seed(self):
        a = suite.make_instance('cec2022-like', 2, 10, seed=4)
        b = suite.make_instance('cec2022-like', 2, 10, seed=4, rotation_seed=9)
        np.testing.assert_array_equal(a.shift, b.shift)
        self.assertFalse(np.array_equal(a.rotation, b.rotation))
        self.assertEqual(b.to_manifest()['rotation_seed'], 9)

    def test_manifest(self):
        instance = suite.make_instance('cec2017-like', 20, 10, seed=2)
        manifest = instance.to_manifest()
        self.assertEqual(manifest['id'], 'cec2017-like_F20_D10')
        self.assertEqual(manifest['kind'], 'composition')
        self.assertEqual(manifest['seed'], 2)
        self.assertEqual(manifest['bias'], instance.bias)

    def test_space(self):
        space = suite.make_instance('cec2017-like', 1, 5, seed=0).space()
        np.testing.assert_array_equal(space.lower, [-100.0] * 5)
        np.testing.assert_array_equal(space.upper, [100.0] * 5)

    def test_wrong_dimension(self):
        instance = suite.make_instance('cec2017-like', 1, 5, seed=0)
        with self.assertRaises(core.DimensionMismatchError):
            instance(np.zeros(4))

    def test_unknown_function(self):
        with self.assertRaises(suite.UnknownFunctionError):
            suite.make_instance('cec2022-like', 13, 10, seed=0)

    def test_dimension_too_small_for_hybrid(self):
        with self.assertRaises(core.ConfigurationError):
            suite.make_instance('cec2022-like', 7, 2, seed=0)

    def test_pickles(self):
        instance = suite.make_instance('cec2017-like', 25, 10, seed=3)
        copy = pickle.loads(pickle.dumps(instance))
        x = np.full(10, 7.0)
        self.assertEqual(copy(x), instance(x))


if __name__ == '__main__':
    absltest.main()
