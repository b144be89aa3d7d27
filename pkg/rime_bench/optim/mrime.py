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
"""RIME extended with covariance learning, bootstrapping and diversity restarts.

Three strategies can be switched on independently through StrategyFlags:

    gcls: early-phase proposals sampled from a Gaussian fitted to a FIFO
        archive of dominant individuals.
    abs: early-phase puncture toward the midpoint of the best agent and the
        Gaussian mean.
    spdm: a restart proposal for every agent whose count and the
        population's normalized volume signal stagnation.

With every flag off the optimizer draws exactly the same numbers as
rime.run_rime and produces the same history.

Per generation the draws happen in this order: the dominant group
roulette, the soft-rime step (see rime), then per agent the exploration
switch followed by the Gaussian proposal of that agent, then the puncture
gate, then per stagnating agent the restart proposal.
"""

import collections
import enum
import math
import time
from typing import Iterable, List, NamedTuple, Optional, Tuple

from absl import logging
import numpy as np

from rime_bench.optim import core
from rime_bench.optim import linalg
from rime_bench.optim import rime

DEFAULT_NVOL_THRESHOLD = 0.01
DEFAULT_COUNT_FACTOR = 2.0


class StrategyFlags(NamedTuple):
    gcls: bool
    abs: bool
    spdm: bool

    @property
    def any(self) -> bool:
        return self.gcls or self.abs or self.spdm


VARIANTS = collections.OrderedDict([
    ('RIME', StrategyFlags(False, False, False)),
    ('RIME-G', StrategyFlags(True, False, False)),
    ('RIME-A', StrategyFlags(False, True, False)),
    ('RIME-S', StrategyFlags(False, False, True)),
    ('RIME-GA', StrategyFlags(True, True, False)),
    ('RIME-GS', StrategyFlags(True, False, True)),
    ('RIME-AS', StrategyFlags(False, True, True)),
    ('MRIME-CD', StrategyFlags(True, True, True)),
])


class UnknownVariantError(core.ConfigurationError):
    """A variant name is not one of VARIANTS."""


def variant_by_name(name: str) -> StrategyFlags:
    """Returns the flags of a named variant.

    Raises:
        UnknownVariantError: If name is not a known variant.
    """
    try:
        return VARIANTS[name]
    except KeyError:
        raise UnknownVariantError(
            'unknown variant "{}", expected one of {}'.format(
                name, ', '.join(VARIANTS)))


def variant_name(flags: StrategyFlags) -> str:
    for name, candidate in VARIANTS.items():
        if candidate == flags:
            return name
    raise UnknownVariantError('no variant with flags {}'.format(flags))


class Branch(enum.Enum):
    SOFT_RIME = 'soft_rime'
    GCLS = 'gcls'


class MrimeParams(object):
    """Parameters of an MRIME-CD run.

    archive_capacity defaults to NP and group_size to ceil(NP / 2).
    """

    def __init__(self,
                 rime_params: rime.RimeParams,
                 archive_capacity: Optional[int] = None,
                 group_size: Optional[int] = None,
                 nvol_threshold: float = DEFAULT_NVOL_THRESHOLD,
                 count_factor: float = DEFAULT_COUNT_FACTOR,
                 weight_mode: linalg.WeightMode = linalg.WeightMode.CORRECTED):
        self.rime = rime_params
        self._archive_capacity = archive_capacity
        self._group_size = group_size
        self.nvol_threshold = nvol_threshold
        self.count_factor = count_factor
        self.weight_mode = linalg.WeightMode(weight_mode)

    @property
    def archive_capacity(self) -> int:
        if self._archive_capacity is None:
            return self.rime.np
        return self._archive_capacity

    @property
    def group_size(self) -> int:
        if self._group_size is None:
            return int(math.ceil(self.rime.np / 2))
        return self._group_size

    def validate(self):
        """Raises core.ConfigurationError if the parameters are unusable."""
        self.rime.validate()
        if self.group_size < 1 or self.group_size > self.rime.np:
            raise core.ConfigurationError(
                'group_size must be in [1, {}], got {}'.format(
                    self.rime.np, self.group_size))
        if self.archive_capacity < 1:
            raise core.ConfigurationError(
                'archive_capacity must be positive, got {}'.format(
                    self.archive_capacity))
        if self.nvol_threshold <= 0:
            raise core.ConfigurationError(
                'nvol_threshold must be positive, got {}'.format(
                    self.nvol_threshold))
        if self.count_factor < 0:
            raise core.ConfigurationError(
                'count_factor must not be negative, got {}'.format(
                    self.count_factor))

    def __repr__(self):
        return ('MrimeParams(rime={!r}, archive_capacity={}, group_size={}, '
                'nvol_threshold={}, count_factor={}, weight_mode={})'.format(
                    self.rime, self.archive_capacity, self.group_size,
                    self.nvol_threshold, self.count_factor,
                    self.weight_mode.value))


ArchiveEntry = Tuple[np.ndarray, float]


class DominantArchive(object):
    """A bounded FIFO of (position, fitness) pairs.

    Instances are immutable; archive_update returns a new archive.
    """

    def __init__(self, capacity: int, entries: Iterable[ArchiveEntry] = ()):
        if capacity < 1:
            raise core.ConfigurationError(
                'archive capacity must be positive, got {}'.format(capacity))
        entries = [(np.array(position, dtype=float), float(fitness))
                   for position, fitness in entries]
        self._capacity = capacity
        self._entries = tuple(entries[-capacity:])

    @property
    def capacity(self) -> int:
        return self._capacity

    @property
    def entries(self) -> Tuple[ArchiveEntry, ...]:
        return self._entries

    def __len__(self):
        return len(self._entries)

    def best_first(self) -> np.ndarray:
        """Returns the archived positions sorted by fitness, ties by age."""
        fitness = np.array([f for _, f in self._entries])
        order = np.argsort(fitness, kind='stable')
        return np.array([self._entries[i][0] for i in order])


def archive_update(archive: DominantArchive,
                   new_members: Iterable[ArchiveEntry]) -> DominantArchive:
    """Appends members in order, evicting the oldest beyond capacity."""
    return DominantArchive(archive.capacity,
                           list(archive.entries) + list(new_members))


def build_model(archive: DominantArchive,
                weight_mode: linalg.WeightMode = linalg.WeightMode.CORRECTED
               ) -> linalg.GaussianModel:
    """Fits the Gaussian model to the archive's entries."""
    if not len(archive):
        raise core.ConfigurationError(
            'cannot build a model from an empty archive')
    return linalg.GaussianModel.fit(archive.best_first(), mode=weight_mode)


def select_dominant_group(population: core.Population, group_size: int,
                          rng: np.random.Generator) -> np.ndarray:
    """Selects a roulette anchor and its nearest neighbours.

    The anchor is drawn with probability proportional to
    1 - nrom(Fit_i), uniform when all fitness values are equal. The group is
    the anchor plus the group_size - 1 agents closest to it in Euclidean
    distance, ties broken by index. An agent whose position repeats one
    already in the group is taken only after every distinct position.

    Returns:
        Indices of the group sorted best fitness first.

    Raises:
        core.ConfigurationError: If group_size is not in [1, NP].
    """
    if group_size < 1 or group_size > population.size:
        raise core.ConfigurationError(
            'group_size must be in [1, {}], got {}'.format(
                population.size, group_size))
    weights = 1 - rime.normalize_fitness(population)
    anchor = int(rng.choice(population.size, p=weights / weights.sum()))
    distances = np.linalg.norm(
        population.positions - population.positions[anchor], axis=1)
    seen = {population.positions[anchor].tobytes()}
    distinct, repeated = [], []
    for i in np.argsort(distances, kind='stable'):
        if i == anchor:
            continue
        key = population.positions[i].tobytes()
        if key in seen:
            repeated.append(int(i))
        else:
            seen.add(key)
            distinct.append(int(i))
    nearest = (distinct + repeated)[:group_size - 1]
    group = np.array([anchor] + nearest, dtype=np.int64)
    return group[np.argsort(population.fitness[group], kind='stable')]


def exploration_switch(agent_index: int, budget: core.Budget,
                       rng: np.random.Generator) -> Tuple[Branch, float]:
    """Draws r1 for one agent; r1 < E selects soft-rime, otherwise GCLS.

    Args:
        agent_index: The agent the draw is for. The draw does not depend on
            it; it only names the agent in debug logs.
        budget: The run's budget, read for E.
        rng: The generation's random generator.
    """
    r1 = float(rng.random())
    logging.vlog(3, 'agent %d: r1 %g', agent_index, r1)
    if r1 < rime.coeff_E(budget):
        return Branch.SOFT_RIME, r1
    return Branch.GCLS, r1


def gcls_position(position: np.ndarray, model: linalg.GaussianModel,
                  space: core.SearchSpace,
                  rng: np.random.Generator) -> np.ndarray:
    """Returns Gaussian(mean, C) + u * (mean - X_i), clamped."""
    sample = linalg.mvn_sample(model, rng)
    u = rng.random()
    return space.clip(sample + u * (model.mean - position))


def abs_update(population: core.Population, proposed: np.ndarray,
               model: linalg.GaussianModel, r1: np.ndarray, e: float,
               rng: np.random.Generator) -> np.ndarray:
    """Punctures the proposal toward the best agent or the bootstrap midpoint.

    Punctured coordinates of agents with r1 >= E take
    (X_best + X_mean) / 2, those of the other agents take X_best.

    Args:
        population: The evaluated parents.
        proposed: Positions after the exploration step.
        model: The generation's Gaussian model.
        r1: Per-agent exploration switch draws.
        e: The generation's E coefficient.
        rng: The generation's random generator.
    """
    mask = rime.puncture_mask(population, rng)
    best = population.best_position
    midpoint = (best + model.mean) / 2
    early = (np.asarray(r1) >= e)[:, None]
    target = np.where(early, midpoint, best)
    return np.where(mask, target, proposed)


def diversity_nvol(space: core.SearchSpace,
                   population: core.Population) -> float:
    """Returns the normalized population volume sqrt(V_pop / V_lim).

    Computed in log space; a dimension with zero spread gives 0.
    """
    positions = population.positions
    extent = positions.max(axis=0) - positions.min(axis=0)
    if np.any(extent <= 0):
        return 0.0
    log_limit = 0.5 * np.sum(np.log(space.width))
    log_population = 0.5 * np.sum(np.log(extent / 2))
    return float(np.exp(0.5 * (log_population - log_limit)))


def spdm_position(index: int, population: core.Population,
                  model: linalg.GaussianModel, space: core.SearchSpace,
                  rng: np.random.Generator) -> Optional[np.ndarray]:
    """Returns a restart proposal for agent index, or None if NP < 3.

    The proposal is Gaussian(mean, C) + u1 (X_a - X_i) + u2 (X_b - X_i) with
    a, b distinct agents other than i, clamped.
    """
    if population.size < 3:
        return None
    sample = linalg.mvn_sample(model, rng)
    others = [k for k in range(population.size) if k != index]
    a, b = rng.choice(others, 2, replace=False)
    u1 = rng.random()
    u2 = rng.random()
    positions = population.positions
    current = positions[index]
    return space.clip(sample + u1 * (positions[a] - current) + u2 *
                      (positions[b] - current))


def stagnation_triggered(space: core.SearchSpace, population: core.Population,
                         index: int, nvol_threshold: float,
                         count_factor: float) -> bool:
    """True iff nVOL < nvol_threshold and Count_i > count_factor * D."""
    if population.counts[index] <= count_factor * space.dim:
        return False
    return diversity_nvol(space, population) < nvol_threshold


class _Run(object):
    """Mutable state of one MRIME-CD run."""

    def __init__(self, objective: core.Objective, space: core.SearchSpace,
                 params: MrimeParams, flags: StrategyFlags,
                 budget: core.Budget, population: core.Population,
                 trace: core.ConvergenceTrace):
        self.objective = objective
        self.space = space
        self.params = params
        self.flags = flags
        self.budget = budget
        self.population = population
        self.trace = trace
        self.spdm_triggers = 0
        self.archive = None  # type: Optional[DominantArchive]
        self._spdm_skip_logged = False
        if flags.any:
            best = np.argsort(population.fitness,
                              kind='stable')[:params.group_size]
            self.archive = DominantArchive(params.archive_capacity,
                                           self._entries(best))

    def _entries(self, indices: Iterable[int]) -> List[ArchiveEntry]:
        return [(self.population.positions[i],
                 float(self.population.fitness[i])) for i in indices]

    def generation(self, rng: np.random.Generator):
        """Runs one generation, updating self.population in place.

        Raises:
            core.BudgetExhaustedError: When the budget runs out. Work done
                before that point is kept.
        """
        flags, params, space = self.flags, self.params, self.space
        population = self.population
        e = rime.coeff_E(self.budget)

        model = None
        if flags.any:
            group = select_dominant_group(population, params.group_size, rng)
            self.archive = archive_update(self.archive, self._entries(group))
            model = build_model(self.archive, params.weight_mode)

        proposed = rime.soft_rime_step(population, space, self.budget,
                                       params.rime.w, rng)
        r1 = None
        gcls_moves = 0
        if flags.gcls or flags.abs:
            r1 = np.empty(population.size)
            for i in range(population.size):
                branch, r1[i] = exploration_switch(i, self.budget, rng)
                if flags.gcls and branch is Branch.GCLS:
                    proposed[i] = gcls_position(population.positions[i], model,
                                                space, rng)
                    gcls_moves += 1
        if model is not None:
            logging.vlog(2, 'E %.3f: %d gcls moves, model jitter %g', e,
                         gcls_moves, model.jitter)

        if flags.abs:
            proposed = abs_update(population, proposed, model, r1, e, rng)
        else:
            proposed = rime.hard_rime_puncture(population, proposed, rng)

        offspring = core.evaluate(self.objective,
                                  population.with_positions(proposed),
                                  self.budget)
        self.population = rime.greedy_select(population, offspring)

        if flags.spdm:
            self._restart_stagnating(model, rng)

    def _restart_stagnating(self, model: linalg.GaussianModel,
                            rng: np.random.Generator):
        params = self.params
        if self.population.size < 3:
            if not self._spdm_skip_logged:
                self.trace.event('spdm skipped: population smaller than 3')
                logging.warning('spdm skipped: population smaller than 3')
                self._spdm_skip_logged = True
            return
        for i in range(self.population.size):
            if not stagnation_triggered(self.space, self.population, i,
                                        params.nvol_threshold,
                                        params.count_factor):
                continue
            candidate = spdm_position(i, self.population, model, self.space,
                                      rng)
            fitness = core.evaluate_position(self.objective, candidate,
                                             self.budget)
            self.spdm_triggers += 1
            logging.vlog(1, 'spdm restart of agent %d: %g', i, fitness)
            if fitness < self.population.fitness[i]:
                self.population = self.population.replace_agent(
                    i, candidate, fitness, 0)
            else:
                self.population = self.population.replace_agent(
                    i, self.population.positions[i],
                    self.population.fitness[i], self.population.counts[i] + 1)


def run_mrime_cd(objective: core.Objective,
                 space: core.SearchSpace,
                 params: MrimeParams,
                 flags: StrategyFlags = VARIANTS['MRIME-CD'],
                 seed: int = 0,
                 name: Optional[str] = None) -> core.RunRecord:
    """Runs MRIME-CD, or one of its ablations, until the budget runs out.

    Args:
        objective: Function to minimize.
        space: The search space.
        params: The run's parameters.
        flags: Strategies to enable.
        seed: Seed of the run's RngStream.
        name: Variant name stored in the record, derived from flags when
            omitted.

    Returns:
        The run's record with best-so-far and nVOL per generation.
    """
    params.validate()
    if name is None:
        name = variant_name(flags)
    start = time.perf_counter()
    stream = core.RngStream(seed)
    budget = core.Budget(params.rime.fes_max)
    population = core.initialize_population(space, params.rime.np,
                                            stream.initial())
    population = core.evaluate(objective, population, budget)
    trace = core.ConvergenceTrace()
    trace.record(budget, population, diversity_nvol(space, population))
    logging.info('%s: starting run with seed %d, %r', name, seed, params)

    run = _Run(objective, space, params, flags, budget, population, trace)
    generation = 0
    while not budget.exhausted:
        generation += 1
        try:
            run.generation(stream.generation(generation))
        except core.BudgetExhaustedError:
            # Restarts may have been accepted before the budget ran out.
            trace.record(budget, run.population,
                         diversity_nvol(space, run.population))
            break
        trace.record(budget, run.population,
                     diversity_nvol(space, run.population))

    record = trace.to_record(name, seed, budget, run.spdm_triggers)
    logging.info('%s: finished after %d evaluations, best %g, %d restarts',
                 name, budget.used, record.final_best, run.spdm_triggers)
    return record._replace(wall_time=time.perf_counter() - start)


class Optimizer(object):
    """A named variant ready to run."""

    def __init__(self, name: str, flags: StrategyFlags):
        self.name = name
        self.flags = flags

    def run(self, objective: core.Objective, space: core.SearchSpace,
            params: MrimeParams, seed: int) -> core.RunRecord:
        return run_mrime_cd(objective, space, params, self.flags, seed,
                            self.name)

    def __repr__(self):
        return 'Optimizer({})'.format(self.name)


def make_variant(flags: StrategyFlags) -> Optimizer:
    """Returns the optimizer for a flag combination.

    Disabled strategies fall back to the basic RIME mechanisms.
    """
    flags = StrategyFlags(*flags)
    return Optimizer(variant_name(flags), flags)
