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
"""Domain types shared by every optimizer in the package.

All optimizers minimize. A run owns one RngStream and one Budget; everything
else is either immutable or replaced through the step functions below, so
independent runs can execute concurrently.
"""

from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

Objective = Callable[[np.ndarray], float]


class OptimError(Exception):
    """Base class of the errors raised by the optimizers."""


class ConfigurationError(OptimError, ValueError):
    """An optimizer or a problem was configured with invalid values."""


class DimensionMismatchError(ConfigurationError):
    """Vectors or matrices with incompatible shapes were combined."""


class NumericError(OptimError, ArithmeticError):
    """A numeric routine met non-finite values or could not factorize."""


class BudgetExhaustedError(OptimError):
    """The remaining budget cannot cover the requested evaluations."""


class SearchSpace(object):
    """Box bounds of a continuous search space."""

    def __init__(self, lower: Sequence[float], upper: Sequence[float]):
        """Creates a search space.

        Args:
            lower: Per-dimension lower bounds.
            upper: Per-dimension upper bounds.

        Raises:
            ConfigurationError: If the bounds have different lengths, are
                empty, are not finite or lower[j] >= upper[j] for some j.
        """
        lower = np.array(lower, dtype=float).reshape(-1)
        upper = np.array(upper, dtype=float).reshape(-1)
        if lower.size == 0 or lower.shape != upper.shape:
            raise ConfigurationError(
                'bounds must be non-empty and of equal length, got {} and {}'.
                format(lower.size, upper.size))
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigurationError('bounds must be finite')
        bad = np.flatnonzero(lower >= upper)
        if bad.size:
            raise ConfigurationError(
                'lower bound must be below upper bound in dimension {}'.format(
                    int(bad[0])))
        lower.setflags(write=False)
        upper.setflags(write=False)
        self._lower = lower
        self._upper = upper

    @classmethod
    def box(cls, dim: int, low: float, high: float) -> 'SearchSpace':
        """Returns the hypercube [low, high]^dim."""
        if dim < 1:
            raise ConfigurationError('dim must be positive, got {}'.format(dim))
        return cls([low] * dim, [high] * dim)

    @property
    def dim(self) -> int:
        return self._lower.size

    @property
    def lower(self) -> np.ndarray:
        return self._lower

    @property
    def upper(self) -> np.ndarray:
        return self._upper

    @property
    def width(self) -> np.ndarray:
        return self._upper - self._lower

    def clip(self, positions: np.ndarray) -> np.ndarray:
        """Clamps positions componentwise into the box."""
        return np.clip(positions, self._lower, self._upper)

    def contains(self, positions: np.ndarray) -> bool:
        positions = np.asarray(positions)
        return bool(
            np.all(positions >= self._lower) and
            np.all(positions <= self._upper))

    def __repr__(self):
        return 'SearchSpace(dim={})'.format(self.dim)


class Agent(NamedTuple):
    """A read-only view of one population member.

    fitness is None while the agent is unevaluated.
    """
    position: np.ndarray
    fitness: Optional[float]
    count: int


class Population(object):
    """An ordered set of agents stored as arrays.

    Instances are never modified in place; the step functions return new
    populations.
    """

    def __init__(self,
                 positions: np.ndarray,
                 fitness: Optional[np.ndarray] = None,
                 counts: Optional[np.ndarray] = None):
        """Creates a population.

        Args:
            positions: Array of shape (NP, D).
            fitness: Fitness of every agent, or None when the population has
                not been evaluated.
            counts: Stagnation counters, zero when omitted.

        Raises:
            ConfigurationError: If fewer than two agents are given or the
                array shapes disagree.
        """
        positions = np.array(positions, dtype=float)
        if positions.ndim != 2 or positions.shape[0] < 2:
            raise ConfigurationError(
                'a population needs a (NP, D) array with NP >= 2, got shape '
                '{}'.format(positions.shape))
        size = positions.shape[0]
        if counts is None:
            counts = np.zeros(size, dtype=np.int64)
        counts = np.array(counts, dtype=np.int64)
        if counts.shape != (size,):
            raise DimensionMismatchError(
                'counts must have length {}'.format(size))
        if fitness is not None:
            fitness = np.array(fitness, dtype=float)
            if fitness.shape != (size,):
                raise DimensionMismatchError(
                    'fitness must have length {}'.format(size))
            fitness.setflags(write=False)
        positions.setflags(write=False)
        counts.setflags(write=False)
        self._positions = positions
        self._fitness = fitness
        self._counts = counts
        self._best_index = (None if fitness is None else
                            int(np.argmin(fitness)))

    @property
    def size(self) -> int:
        return self._positions.shape[0]

    @property
    def dim(self) -> int:
        return self._positions.shape[1]

    @property
    def positions(self) -> np.ndarray:
        return self._positions

    @property
    def counts(self) -> np.ndarray:
        return self._counts

    @property
    def evaluated(self) -> bool:
        return self._fitness is not None

    @property
    def fitness(self) -> np.ndarray:
        if self._fitness is None:
            raise OptimError('population has not been evaluated')
        return self._fitness

    @property
    def best_index(self) -> int:
        if self._best_index is None:
            raise OptimError('population has not been evaluated')
        return self._best_index

    @property
    def best_position(self) -> np.ndarray:
        return self._positions[self.best_index]

    @property
    def best_fitness(self) -> float:
        return float(self.fitness[self.best_index])

    def agent(self, index: int) -> Agent:
        fitness = None if self._fitness is None else float(self._fitness[index])
        return Agent(self._positions[index], fitness, int(self._counts[index]))

    @property
    def agents(self) -> List[Agent]:
        return [self.agent(i) for i in range(self.size)]

    def with_positions(self, positions: np.ndarray) -> 'Population':
        """Returns an unevaluated population at new positions, same counts."""
        positions = np.asarray(positions, dtype=float)
        if positions.shape != self._positions.shape:
            raise DimensionMismatchError(
                'expected positions of shape {}, got {}'.format(
                    self._positions.shape, positions.shape))
        return Population(positions, None, self._counts)

    def replace_agent(self, index: int, position: np.ndarray, fitness: float,
                      count: int) -> 'Population':
        """Returns a copy with one agent replaced."""
        positions = self._positions.copy()
        positions[index] = position
        fitness_values = np.array(self.fitness)
        fitness_values[index] = fitness
        counts = self._counts.copy()
        counts[index] = count
        return Population(positions, fitness_values, counts)

    def __repr__(self):
        return 'Population(size={}, dim={}, evaluated={})'.format(
            self.size, self.dim, self.evaluated)


class Budget(object):
    """Counts objective evaluations against FEs_max.

    A Budget belongs to a single run and is advanced only by evaluate and
    evaluate_position.
    """

    def __init__(self, max_evaluations: int):
        if max_evaluations < 1:
            raise ConfigurationError(
                'the budget must allow at least one evaluation, got {}'.format(
                    max_evaluations))
        self._max = int(max_evaluations)
        self._used = 0

    @property
    def used(self) -> int:
        return self._used

    @property
    def max(self) -> int:
        return self._max

    @property
    def remaining(self) -> int:
        return self._max - self._used

    @property
    def exhausted(self) -> bool:
        return self._used >= self._max

    @property
    def fraction(self) -> float:
        """FEs / FEs_max."""
        return self._used / self._max

    def consume(self, evaluations: int = 1):
        if self._used + evaluations > self._max:
            raise BudgetExhaustedError(
                '{} evaluations requested but only {} remain'.format(
                    evaluations, self.remaining))
        self._used += evaluations

    def __repr__(self):
        return 'Budget(used={}, max={})'.format(self._used, self._max)


class RngStream(object):
    """Deterministic source of random generators for one run.

    Child generators are derived from numpy.random.SeedSequence with fixed
    spawn keys: (0,) for the initial population and (1, g) for generation g.
    Equal seeds therefore give bit-identical draws, and the draws of one
    generation do not depend on how many numbers earlier generations used.
    """

    def __init__(self, seed: int):
        seed = int(seed)
        if seed < 0:
            raise ConfigurationError(
                'seed must be non-negative, got {}'.format(seed))
        self._seed = seed

    @property
    def seed(self) -> int:
        return self._seed

    def _child(self, *spawn_key: int) -> np.random.Generator:
        sequence = np.random.SeedSequence(self._seed, spawn_key=spawn_key)
        return np.random.Generator(np.random.PCG64(sequence))

    def initial(self) -> np.random.Generator:
        return self._child(0)

    def generation(self, index: int) -> np.random.Generator:
        return self._child(1, index)


class CountingObjective(object):
    """Wraps an objective and counts how often it is called."""

    def __init__(self, objective: Objective):
        self._objective = objective
        self.calls = 0

    def __call__(self, x: np.ndarray) -> float:
        self.calls += 1
        return self._objective(x)


class RunRecord(NamedTuple):
    """Outcome of one seeded run.

    history holds (evaluations used, best-so-far fitness) once per
    generation, starting after the initial population.
    """
    variant: str
    instance_id: str
    seed: int
    history: Tuple[Tuple[int, float], ...]
    final_best: float
    final_position: Tuple[float, ...]
    evaluations: int
    spdm_triggers: int = 0
    nvol_history: Tuple[float, ...] = ()
    events: Tuple[str, ...] = ()
    wall_time: float = 0.0
    status: str = 'ok'
    error: str = ''
    # Set for constrained problems only, from the unpenalized constraints.
    feasible: Optional[bool] = None
    max_violation: Optional[float] = None


class ConvergenceTrace(object):
    """Accumulates the per-generation history of a run."""

    def __init__(self):
        self._history = []  # type: List[Tuple[int, float]]
        self._nvol = []  # type: List[float]
        self._events = []  # type: List[str]
        self._best_fitness = float('inf')
        self._best_position = None

    def record(self, budget: Budget, population: Population,
               nvol: Optional[float] = None):
        if population.best_fitness < self._best_fitness:
            self._best_fitness = population.best_fitness
            self._best_position = np.array(population.best_position)
        # Evaluation counts in the history are strictly increasing.
        if self._history and self._history[-1][0] == budget.used:
            self._history[-1] = (budget.used, self._best_fitness)
            if nvol is not None and self._nvol:
                self._nvol[-1] = float(nvol)
            return
        self._history.append((budget.used, self._best_fitness))
        if nvol is not None:
            self._nvol.append(float(nvol))

    def event(self, message: str):
        self._events.append(message)

    def to_record(self,
                  variant: str,
                  seed: int,
                  budget: Budget,
                  spdm_triggers: int = 0) -> RunRecord:
        return RunRecord(variant=variant,
                         instance_id='',
                         seed=seed,
                         history=tuple(self._history),
                         final_best=self._best_fitness,
                         final_position=tuple(
                             float(v) for v in self._best_position),
                         evaluations=budget.used,
                         spdm_triggers=spdm_triggers,
                         nvol_history=tuple(self._nvol),
                         events=tuple(self._events))


def initialize_population(space: SearchSpace, size: int,
                          rng: np.random.Generator) -> Population:
    """Samples an unevaluated population uniformly inside the box.

    Every coordinate is LB + rand * (UB - LB).

    Args:
        space: The search space.
        size: Number of agents (NP).
        rng: Generator to draw from.

    Returns:
        An unevaluated population with zero counts.

    Raises:
        ConfigurationError: If size < 2.
    """
    if size < 2:
        raise ConfigurationError(
            'population size must be at least 2, got {}'.format(size))
    positions = space.lower + rng.random((size, space.dim)) * space.width
    return Population(positions)


def evaluate(objective: Objective, population: Population,
             budget: Budget) -> Population:
    """Evaluates every agent of an unevaluated population.

    The budget is advanced by exactly one per objective call. If the budget
    cannot cover the whole batch nothing is evaluated.

    Returns:
        The evaluated population; an already evaluated population is
        returned unchanged.

    Raises:
        BudgetExhaustedError: If fewer evaluations remain than agents.
    """
    if population.evaluated:
        return population
    if population.size > budget.remaining:
        raise BudgetExhaustedError(
            '{} evaluations requested but only {} remain'.format(
                population.size, budget.remaining))
    fitness = np.empty(population.size)
    for i, position in enumerate(population.positions):
        fitness[i] = float(objective(position))
        budget.consume(1)
    return Population(population.positions, fitness, population.counts)


def evaluate_position(objective: Objective, position: np.ndarray,
                      budget: Budget) -> float:
    """Evaluates a single position, consuming one evaluation."""
    budget.consume(1)
    return float(objective(position))
