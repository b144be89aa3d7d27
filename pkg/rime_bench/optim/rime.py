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
"""The basic RIME optimizer.

One generation is: soft-rime proposal, hard-rime puncture of the proposal,
evaluation, positive greedy selection. Draws within a generation happen in
this order:

    1. alpha, one uniform(-1, 1) per agent.
    2. The soft-rime gate, one uniform per agent and dimension.
    3. The soft-rime position factor, one uniform per agent and dimension.
    4. The puncture gate, one uniform per agent and dimension.
"""

import math
import time

from absl import logging
import numpy as np

from rime_bench.optim import core

DEFAULT_W = 5


class RimeParams(object):
    """Parameters of a RIME run."""

    def __init__(self, np: int = 30, fes_max: int = 30000, w: int = DEFAULT_W):
        """Creates the parameters.

        Args:
            np: Population size.
            fes_max: Maximum number of objective evaluations, including the
                initial population.
            w: Number of steps of the beta schedule.
        """
        self.np = np
        self.fes_max = fes_max
        self.w = w

    def validate(self):
        """Raises core.ConfigurationError if the parameters are unusable."""
        if self.np < 2:
            raise core.ConfigurationError(
                'np must be at least 2, got {}'.format(self.np))
        if self.w < 1:
            raise core.ConfigurationError(
                'w must be at least 1, got {}'.format(self.w))
        if self.fes_max < self.np:
            raise core.ConfigurationError(
                'fes_max ({}) cannot cover the initial population of {}'.format(
                    self.fes_max, self.np))

    def __repr__(self):
        return 'RimeParams(np={}, fes_max={}, w={})'.format(
            self.np, self.fes_max, self.w)


def coeff_E(budget: core.Budget) -> float:
    """Returns sqrt(FEs / FEs_max)."""
    return math.sqrt(budget.fraction)


def coeff_theta(budget: core.Budget) -> float:
    """Returns FEs * pi / (10 * FEs_max), in [0, pi/10]."""
    return budget.fraction * math.pi / 10


def coeff_beta(budget: core.Budget, w: int) -> float:
    """Returns the step schedule 1 - round(w * FEs / FEs_max) / w.

    round() is half away from zero, so coeff_beta at half the budget with
    w=5 is 0.4.
    """
    if w < 1:
        raise core.ConfigurationError('w must be at least 1, got {}'.format(w))
    return 1 - math.floor(w * budget.fraction + 0.5) / w


def soft_rime_step(population: core.Population, space: core.SearchSpace,
                   budget: core.Budget, w: int,
                   rng: np.random.Generator) -> np.ndarray:
    """Proposes soft-rime positions for every agent.

    Each coordinate moves, with probability E, to
    X_best + alpha * cos(theta) * beta * (rand * (UB - LB) + LB) and keeps
    its current value otherwise.

    Args:
        population: An evaluated population.
        space: The search space.
        budget: The run's budget, read for the time-varying coefficients.
        w: Number of steps of the beta schedule.
        rng: The generation's random generator.

    Returns:
        Array of shape (NP, D) of clamped positions.
    """
    size, dim = population.size, population.dim
    e = coeff_E(budget)
    factor = math.cos(coeff_theta(budget)) * coeff_beta(budget, w)
    alpha = rng.uniform(-1.0, 1.0, size)
    gate = rng.random((size, dim)) < e
    rand = rng.random((size, dim))
    moved = population.best_position + (alpha * factor)[:, None] * (
        rand * space.width + space.lower)
    return space.clip(np.where(gate, moved, population.positions))


def normalize_fitness(population: core.Population) -> np.ndarray:
    """Min-max normalizes the fitness; an all-equal population maps to 0.5.

    Raises:
        core.NumericError: If some fitness is NaN or infinite.
    """
    fitness = population.fitness
    if not np.all(np.isfinite(fitness)):
        raise core.NumericError('cannot normalize non-finite fitness values')
    low, high = fitness.min(), fitness.max()
    if high == low:
        return np.full(population.size, 0.5)
    return (fitness - low) / (high - low)


def puncture_mask(population: core.Population,
                  rng: np.random.Generator) -> np.ndarray:
    """Draws the (NP, D) mask of coordinates with rand < nrom(Fit_i)."""
    nrom = normalize_fitness(population)
    return rng.random((population.size, population.dim)) < nrom[:, None]


def hard_rime_puncture(population: core.Population, proposed: np.ndarray,
                       rng: np.random.Generator) -> np.ndarray:
    """Copies coordinates of the best agent into the proposal.

    Coordinate j of agent i is replaced by X_best,j when a fresh uniform draw
    is below the agent's normalized fitness, so the best agent is never
    punctured and the worst almost always is.
    """
    mask = puncture_mask(population, rng)
    return np.where(mask, population.best_position, proposed)


def greedy_select(parents: core.Population,
                  offspring: core.Population) -> core.Population:
    """Keeps every offspring that strictly improves on its parent.

    Kept agents get a zero count, the others increment theirs.
    """
    if parents.positions.shape != offspring.positions.shape:
        raise core.DimensionMismatchError(
            'parents {} and offspring {} differ in shape'.format(
                parents.positions.shape, offspring.positions.shape))
    improved = offspring.fitness < parents.fitness
    positions = np.where(improved[:, None], offspring.positions,
                         parents.positions)
    fitness = np.where(improved, offspring.fitness, parents.fitness)
    counts = np.where(improved, 0, parents.counts + 1)
    return core.Population(positions, fitness, counts)


def rime_generation(objective: core.Objective, space: core.SearchSpace,
                    population: core.Population, budget: core.Budget,
                    params: RimeParams,
                    rng: np.random.Generator) -> core.Population:
    """Runs one generation of basic RIME.

    Raises:
        core.BudgetExhaustedError: If the budget cannot cover the offspring;
            the population is then left as it was.
    """
    proposed = soft_rime_step(population, space, budget, params.w, rng)
    proposed = hard_rime_puncture(population, proposed, rng)
    offspring = core.evaluate(objective, population.with_positions(proposed),
                              budget)
    return greedy_select(population, offspring)


def run_rime(objective: core.Objective,
             space: core.SearchSpace,
             params: RimeParams,
             seed: int,
             name: str = 'RIME') -> core.RunRecord:
    """Runs basic RIME until the budget cannot cover another generation.

    Args:
        objective: Function to minimize.
        space: The search space.
        params: The run's parameters.
        seed: Seed of the run's RngStream.
        name: Variant name stored in the record.

    Returns:
        The run's record, with one history entry per generation.
    """
    params.validate()
    start = time.perf_counter()
    stream = core.RngStream(seed)
    budget = core.Budget(params.fes_max)
    population = core.initialize_population(space, params.np, stream.initial())
    population = core.evaluate(objective, population, budget)
    trace = core.ConvergenceTrace()
    trace.record(budget, population)
    logging.info('%s: starting run with seed %d, %r', name, seed, params)

    generation = 0
    while not budget.exhausted:
        generation += 1
        try:
            population = rime_generation(objective, space, population,
                                         budget, params,
                                         stream.generation(generation))
        except core.BudgetExhaustedError:
            break
        trace.record(budget, population)

    record = trace.to_record(name, seed, budget)
    logging.info('%s: finished after %d evaluations, best %g', name,
                 budget.used, record.final_best)
    return record._replace(wall_time=time.perf_counter() - start)
