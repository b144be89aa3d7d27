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
"""Seeded CEC-style benchmark instances.

The suites follow the CEC2017 and CEC2022 function lists, but shift vectors,
rotations and dimension permutations are generated from a seed instead of
being read from the official data files. Instances of the same
(suite, function, dimension, seed) are identical on every call.

Every base function has its global minimum 0 at the origin. A basic
instance evaluates to

    f(x) = base(scale * R (x - o)) + bias

so f(o) == bias.
"""

import functools
import json
import math
import os
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from rime_bench.optim import core

SUITES = ('cec2017-like', 'cec2022-like')

SEARCH_BOUND = 100.0
SHIFT_BOUND = 80.0

_DATA_FILES = {
    'cec2017-like': 'cec2017_like.json',
    'cec2022-like': 'cec2022_like.json',
}

_SCHWEFEL_OFFSET = 420.9687462275036
_SCHWEFEL_PEAK = _SCHWEFEL_OFFSET * math.sin(math.sqrt(_SCHWEFEL_OFFSET))


class UnknownFunctionError(core.ConfigurationError):
    """A suite, function id or base-function tag does not exist."""


def _sphere(z):
    return np.sum(z**2)


def _bent_cigar(z):
    return z[0]**2 + 1e6 * np.sum(z[1:]**2)


def _zakharov(z):
    weighted = np.sum(0.5 * np.arange(1, z.size + 1) * z)
    return np.sum(z**2) + weighted**2 + weighted**4


def _rosenbrock(z):
    z = z + 1
    return np.sum(100 * (z[:-1]**2 - z[1:])**2 + (z[:-1] - 1)**2)


def _rastrigin(z):
    return np.sum(z**2 - 10 * np.cos(2 * np.pi * z) + 10)


def _expanded_schaffer_f6(z):
    squares = z**2 + np.roll(z, -1)**2
    return np.sum(0.5 + (np.sin(np.sqrt(squares))**2 - 0.5) /
                  (1 + 0.001 * squares)**2)


def _lunacek_bi_rastrigin(z):
    dim = z.size
    mu0 = 2.5
    s = 1 - 1 / (2 * math.sqrt(dim + 20) - 8.2)
    mu1 = -math.sqrt((mu0**2 - 1) / s)
    y = 2 * z
    t = y + mu0
    valleys = min(np.sum((t - mu0)**2), dim + s * np.sum((t - mu1)**2))
    return valleys + 10 * np.sum(1 - np.cos(2 * np.pi * y))


def _noncontinuous_rastrigin(z):
    y = np.where(np.abs(z) > 0.5, np.floor(2 * z + 0.5) / 2, z)
    return _rastrigin(y)


def _levy(z):
    w = 1 + z / 4
    head = np.sin(np.pi * w[0])**2
    body = np.sum((w[:-1] - 1)**2 * (1 + 10 * np.sin(np.pi * w[:-1] + 1)**2))
    tail = (w[-1] - 1)**2 * (1 + np.sin(2 * np.pi * w[-1])**2)
    return head + body + tail


def _schwefel(z):
    y = z + _SCHWEFEL_OFFSET
    inner = y * np.sin(np.sqrt(np.abs(y)))
    folded_high = 500 - np.fmod(y, 500)
    high = (folded_high * np.sin(np.sqrt(np.abs(folded_high))) -
            (y - 500)**2 / (10000 * z.size))
    folded_low = np.fmod(np.abs(y), 500) - 500
    low = (folded_low * np.sin(np.sqrt(np.abs(folded_low))) -
           (y + 500)**2 / (10000 * z.size))
    g = np.where(y > 500, high, np.where(y < -500, low, inner))
    return _SCHWEFEL_PEAK * z.size - np.sum(g)


def _elliptic(z):
    exponents = 6 * np.arange(z.size) / max(1, z.size - 1)
    return np.sum(10**exponents * z**2)


def _discus(z):
    return 1e6 * z[0]**2 + np.sum(z[1:]**2)


def _ackley(z):
    mean_square = np.mean(z**2)
    mean_cos = np.mean(np.cos(2 * np.pi * z))
    return (-20 * np.exp(-0.2 * np.sqrt(mean_square)) - np.exp(mean_cos) + 20 +
            np.e)


def _griewank(z):
    i = np.arange(1, z.size + 1)
    return np.sum(z**2) / 4000 - np.prod(np.cos(z / np.sqrt(i))) + 1


_WEIERSTRASS_K = np.arange(21)
_WEIERSTRASS_A = 0.5**_WEIERSTRASS_K
_WEIERSTRASS_B = 3.0**_WEIERSTRASS_K


def _weierstrass(z):
    terms = _WEIERSTRASS_A * np.cos(2 * np.pi * _WEIERSTRASS_B *
                                    (z[:, None] + 0.5))
    offset = np.sum(_WEIERSTRASS_A * np.cos(2 * np.pi * _WEIERSTRASS_B * 0.5))
    return np.sum(terms) - z.size * offset


def _happycat(z):
    z = z - 1
    r2 = np.sum(z**2)
    return (abs(r2 - z.size)**0.25 + (0.5 * r2 + np.sum(z)) / z.size + 0.5)


def _hgbat(z):
    z = z - 1
    r2 = np.sum(z**2)
    total = np.sum(z)
    return (math.sqrt(abs(r2**2 - total**2)) + (0.5 * r2 + total) / z.size +
            0.5)


_KATSUURA_POWERS = 2.0**np.arange(1, 33)


def _katsuura(z):
    scaled = _KATSUURA_POWERS * z[:, None]
    sums = np.sum(np.abs(scaled - np.floor(scaled + 0.5)) / _KATSUURA_POWERS,
                  axis=1)
    i = np.arange(1, z.size + 1)
    factor = 10 / z.size**2
    return factor * np.prod((1 + i * sums)**(10 / z.size**1.2)) - factor


def _griewank_rosenbrock(z):
    z = z + 1
    t = 100 * (z**2 - np.roll(z, -1))**2 + (z - 1)**2
    return np.sum(t**2 / 4000 - np.cos(t) + 1)


def _schaffer_f7(z):
    if z.size == 1:
        s = np.abs(z)
    else:
        s = np.sqrt(z[:-1]**2 + z[1:]**2)
    return (np.sum(np.sqrt(s) * (np.sin(50 * s**0.2) + 1)) / s.size)**2


class BaseFunction(NamedTuple):
    """A base function and the factor applied to R (x - o) before it."""
    evaluate: Callable[[np.ndarray], float]
    scale: float


BASE_FUNCTIONS = {
    'sphere': BaseFunction(_sphere, 1.0),
    'bent_cigar': BaseFunction(_bent_cigar, 1.0),
    'zakharov': BaseFunction(_zakharov, 1.0),
    'rosenbrock': BaseFunction(_rosenbrock, 2.048 / 100),
    'rastrigin': BaseFunction(_rastrigin, 5.12 / 100),
    'expanded_schaffer_f6': BaseFunction(_expanded_schaffer_f6, 1.0),
    'lunacek_bi_rastrigin': BaseFunction(_lunacek_bi_rastrigin, 10 / 100),
    'noncontinuous_rastrigin': BaseFunction(_noncontinuous_rastrigin,
                                            5.12 / 100),
    'levy': BaseFunction(_levy, 1.0),
    'schwefel': BaseFunction(_schwefel, 1000 / 100),
    'elliptic': BaseFunction(_elliptic, 1.0),
    'discus': BaseFunction(_discus, 1.0),
    'ackley': BaseFunction(_ackley, 1.0),
    'griewank': BaseFunction(_griewank, 600 / 100),
    'weierstrass': BaseFunction(_weierstrass, 0.5 / 100),
    'happycat': BaseFunction(_happycat, 5 / 100),
    'hgbat': BaseFunction(_hgbat, 5 / 100),
    'katsuura': BaseFunction(_katsuura, 5 / 100),
    'griewank_rosenbrock': BaseFunction(_griewank_rosenbrock, 5 / 100),
    'schaffer_f7': BaseFunction(_schaffer_f7, 1.0),
}


def _lookup(tag: str) -> BaseFunction:
    try:
        return BASE_FUNCTIONS[tag]
    except KeyError:
        raise UnknownFunctionError('unknown base function "{}"'.format(tag))


def base_function(tag: str, z: Sequence[float]) -> float:
    """Evaluates the base function tag at z.

    Raises:
        UnknownFunctionError: If tag is not in BASE_FUNCTIONS.
    """
    function = _lookup(tag)
    z = np.asarray(z, dtype=float).reshape(-1)
    if z.size < 1:
        raise core.DimensionMismatchError('z must not be empty')
    return float(function.evaluate(z))


@functools.lru_cache(maxsize=None)
def load_recipes(suite: str) -> Dict[str, Any]:
    """Loads the recipe table of a suite from the package data.

    Raises:
        UnknownFunctionError: If suite is not one of SUITES.
    """
    if suite not in _DATA_FILES:
        raise UnknownFunctionError(
            'unknown suite "{}", expected one of {}'.format(
                suite, ', '.join(SUITES)))
    data_dir = os.path.join(os.path.dirname(__file__), 'data')
    data_file_path = os.path.join(data_dir, _DATA_FILES[suite])
    with open(data_file_path) as data_file:
        return json.load(data_file)


def _recipe(suite: str, function_id: int) -> Dict[str, Any]:
    for recipe in load_recipes(suite)['functions']:
        if recipe['id'] == function_id:
            return recipe
    raise UnknownFunctionError('{} has no function F{}'.format(
        suite, function_id))


def function_ids(suite: str) -> List[int]:
    return [recipe['id'] for recipe in load_recipes(suite)['functions']]


def function_group(suite: str, function_id: int) -> str:
    """Returns the reporting group (unimodal, hybrid, ...) of a function."""
    for group in load_recipes(suite)['groups']:
        if group['first'] <= function_id <= group['last']:
            return group['name']
    raise UnknownFunctionError('{} has no function F{}'.format(
        suite, function_id))


def instance_id(suite: str, function_id: int, dim: int) -> str:
    return '{}_F{:02d}_D{}'.format(suite, function_id, dim)


def random_rotation(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Returns a random orthogonal matrix from the QR factors of a Gaussian."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1
    return q * signs


def hybrid_block_sizes(dim: int, proportions: Sequence[float]) -> List[int]:
    """Splits dim coordinates into blocks of the given proportions.

    Every block gets at least one coordinate; the last block takes the rest.

    Raises:
        core.ConfigurationError: If dim is smaller than the number of blocks.
    """
    count = len(proportions)
    if dim < count:
        raise core.ConfigurationError(
            'a hybrid of {} functions needs at least {} dimensions, got {}'.
            format(count, count, dim))
    sizes = [max(1, int(math.ceil(p * dim))) for p in proportions[:-1]]
    while sum(sizes) > dim - 1:
        sizes[int(np.argmax(sizes))] -= 1
    return sizes + [dim - sum(sizes)]


def _generator(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


class _Basic(object):

    def __init__(self, tag: str, shift: np.ndarray, rotation: np.ndarray):
        self.function = _lookup(tag)
        self.shift = shift
        self.rotation = rotation

    def raw(self, x: np.ndarray) -> float:
        z = self.function.scale * (self.rotation @ (x - self.shift))
        return float(self.function.evaluate(z))


class _Hybrid(object):

    def __init__(self, tags: Sequence[str], proportions: Sequence[float],
                 shift: np.ndarray, rotation: np.ndarray,
                 permutation: np.ndarray):
        self.functions = [_lookup(tag) for tag in tags]
        self.sizes = hybrid_block_sizes(shift.size, proportions)
        self.shift = shift
        self.rotation = rotation
        self.permutation = permutation

    def raw(self, x: np.ndarray) -> float:
        z = (self.rotation @ (x - self.shift))[self.permutation]
        total = 0.0
        start = 0
        for function, size in zip(self.functions, self.sizes):
            block = z[start:start + size]
            total += function.evaluate(function.scale * block)
            start += size
        return float(total)


class _Composition(object):

    def __init__(self, terms: Sequence[Any], lambdas: Sequence[float],
                 sigmas: Sequence[float], biases: Sequence[float]):
        self.terms = list(terms)
        self.shifts = np.array([term.shift for term in terms])
        self.lambdas = np.asarray(lambdas, dtype=float)
        self.sigmas = np.asarray(sigmas, dtype=float)
        self.biases = np.asarray(biases, dtype=float)

    def weights(self, x: np.ndarray) -> np.ndarray:
        """Normalized weights exp(-d^2 / (2 D sigma^2)) / d of the terms."""
        d2 = np.sum((x - self.shifts)**2, axis=1)
        at_optimum = d2 == 0
        if np.any(at_optimum):
            weights = at_optimum.astype(float)
        else:
            weights = np.exp(-d2 / (2 * x.size * self.sigmas**2)) / np.sqrt(d2)
        total = weights.sum()
        if total == 0 or not np.isfinite(total):
            return np.full(len(self.terms), 1 / len(self.terms))
        return weights / total

    def raw(self, x: np.ndarray) -> float:
        weights = self.weights(x)
        values = np.array([term.raw(x) for term in self.terms])
        return float(np.sum(weights * (self.lambdas * values + self.biases)))


class BenchmarkInstance(object):
    """A fully determined benchmark function.

    Instances are immutable and may be evaluated from several threads.
    """

    def __init__(self, suite: str, function_id: int, dim: int, seed: int,
                 rotation_seed: Optional[int], recipe: Dict[str, Any],
                 term: Any):
        self.suite = suite
        self.function_id = function_id
        self.dim = dim
        self.seed = seed
        self.rotation_seed = rotation_seed
        self.kind = recipe['kind']
        self.name = recipe['name']
        self.bias = float(recipe['bias'])
        self.base = recipe.get('base', recipe.get('components'))
        self._term = term

    @property
    def id(self) -> str:
        return instance_id(self.suite, self.function_id, self.dim)

    @property
    def shift(self) -> np.ndarray:
        """Location of the global optimum."""
        if isinstance(self._term, _Composition):
            return self._term.terms[0].shift
        return self._term.shift

    @property
    def rotation(self) -> np.ndarray:
        if isinstance(self._term, _Composition):
            return self._term.terms[0].rotation
        return self._term.rotation

    def space(self) -> core.SearchSpace:
        return core.SearchSpace.box(self.dim, -SEARCH_BOUND, SEARCH_BOUND)

    def __call__(self, x: np.ndarray) -> float:
        return evaluate_instance(self, x)

    def raw(self, x: np.ndarray) -> float:
        return self._term.raw(x)

    def to_manifest(self) -> Dict[str, Any]:
        """Returns a plain description that pins this exact instance."""
        return {
            'id': self.id,
            'suite': self.suite,
            'function_id': self.function_id,
            'name': self.name,
            'kind': self.kind,
            'dim': self.dim,
            'seed': self.seed,
            'rotation_seed': self.rotation_seed,
            'bias': self.bias,
        }

    def __repr__(self):
        return 'BenchmarkInstance({})'.format(self.id)


def _suite_key(suite: str) -> int:
    if suite not in SUITES:
        raise UnknownFunctionError(
            'unknown suite "{}", expected one of {}'.format(
                suite, ', '.join(SUITES)))
    return SUITES.index(suite)


def _build_term(recipe: Dict[str, Any], dim: int, seed: int,
                rotation_seed: int, key: Sequence[int]):
    shift = _generator(seed, *key, 0).uniform(-SHIFT_BOUND, SHIFT_BOUND, dim)
    rotation = random_rotation(dim, _generator(rotation_seed, *key, 1))
    if recipe['kind'] == 'basic':
        return _Basic(recipe['base'], shift, rotation)
    if recipe['kind'] == 'hybrid':
        permutation = _generator(seed, *key, 2).permutation(dim)
        return _Hybrid(recipe['components'], recipe['proportions'], shift,
                       rotation, permutation)
    raise core.ConfigurationError('cannot build a term of kind "{}"'.format(
        recipe['kind']))


def make_instance(suite: str,
                  function_id: int,
                  dim: int,
                  seed: int,
                  rotation_seed: Optional[int] = None) -> BenchmarkInstance:
    """Generates a benchmark instance.

    Args:
        suite: One of SUITES.
        function_id: 1-based function number within the suite.
        dim: Number of decision variables.
        seed: Seed of the shift vectors and dimension permutations.
        rotation_seed: Seed of the rotations, seed when omitted.

    Returns:
        The instance; equal arguments give identical instances.

    Raises:
        UnknownFunctionError: If the suite or function id does not exist.
        core.ConfigurationError: If dim is too small for the function.
    """
    suite_key = _suite_key(suite)
    if dim < 1:
        raise core.ConfigurationError(
            'dim must be positive, got {}'.format(dim))
    recipe = _recipe(suite, function_id)
    if rotation_seed is None:
        rotation_seed = seed
    key = (suite_key, function_id, dim)

    if recipe['kind'] != 'composition':
        term = _build_term(recipe, dim, seed, rotation_seed, key)
        return BenchmarkInstance(suite, function_id, dim, seed, rotation_seed,
                                 recipe, term)

    terms = []
    for k, component in enumerate(recipe['components']):
        if 'hybrid' in component:
            sub_recipe = _recipe(suite, component['hybrid'])
        else:
            sub_recipe = {'kind': 'basic', 'base': component['base']}
        terms.append(
            _build_term(sub_recipe, dim, seed, rotation_seed,
                        key + (3, k)))
    term = _Composition(terms, [c['lambda'] for c in recipe['components']],
                        [c['sigma'] for c in recipe['components']],
                        [c['bias'] for c in recipe['components']])
    return BenchmarkInstance(suite, function_id, dim, seed, rotation_seed,
                             recipe, term)


def evaluate_instance(instance: BenchmarkInstance, x: Sequence[float]) -> float:
    """Evaluates an instance at x, which may lie outside the search box."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != instance.dim:
        raise core.DimensionMismatchError(
            '{} expects {} variables, got {}'.format(instance.id, instance.dim,
                                                     x.size))
    return instance.raw(x) + instance.bias
