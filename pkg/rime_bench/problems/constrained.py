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
"""Constrained engineering design problems and the static penalty method.

Inequality constraints are satisfied when g(x) <= 0, equality constraints
when |h(x)| <= eq_tol.
"""

import collections
import math
from typing import Callable, List, Optional, Sequence

import numpy as np

from rime_bench.optim import core

DEFAULT_PENALTY_FACTOR = 1e10
DEFAULT_EQ_TOL = 1e-4
DEFAULT_FEASIBILITY_TOL = 1e-6

Constraint = Callable[[np.ndarray], float]


class ProblemExistsError(core.ConfigurationError):
    """A problem with the same name is already registered."""


class UnknownProblemError(core.ConfigurationError):
    """No problem with the requested name is registered."""


class ConstrainedProblem(object):
    """A constrained minimization problem with box bounds."""

    def __init__(self,
                 name: str,
                 space: core.SearchSpace,
                 objective: core.Objective,
                 inequality: Sequence[Constraint] = (),
                 equality: Sequence[Constraint] = (),
                 witness: Optional[Sequence[float]] = None,
                 best_known: Optional[float] = None,
                 description: str = ''):
        """Creates a problem.

        Args:
            name: Registry name.
            space: Bounds of the decision variables.
            objective: The raw objective f(x).
            inequality: Constraints g(x) <= 0.
            equality: Constraints h(x) = 0.
            witness: A feasible point, used by smoke tests.
            best_known: Best objective value reported in the literature.
            description: One line shown by list commands.
        """
        self.name = name
        self.space = space
        self.objective = objective
        self.inequality = tuple(inequality)
        self.equality = tuple(equality)
        self.witness = (None if witness is None else
                        np.array(witness, dtype=float))
        self.best_known = best_known
        self.description = description

    @property
    def dim(self) -> int:
        return self.space.dim

    def __repr__(self):
        return 'ConstrainedProblem({}, dim={})'.format(self.name, self.dim)


def _violations(problem: ConstrainedProblem, x: np.ndarray,
                eq_tol: float) -> np.ndarray:
    values = [max(0.0, float(g(x))) for g in problem.inequality]
    values += [max(0.0, abs(float(h(x))) - eq_tol) for h in problem.equality]
    return np.array(values)


class PenalizedObjective(object):
    """F(x) = f(x) + factor * sum of squared constraint violations."""

    def __init__(self, problem: ConstrainedProblem, factor: float,
                 eq_tol: float):
        self.problem = problem
        self.factor = factor
        self.eq_tol = eq_tol

    def __call__(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float)
        value = float(self.problem.objective(x))
        violations = _violations(self.problem, x, self.eq_tol)
        if not violations.size:
            return value
        return value + self.factor * float(np.sum(violations**2))


def penalized(problem: ConstrainedProblem,
              factor: float = DEFAULT_PENALTY_FACTOR,
              eq_tol: float = DEFAULT_EQ_TOL) -> PenalizedObjective:
    """Returns the unconstrained penalty objective of a problem.

    Raises:
        core.ConfigurationError: If factor is not positive or eq_tol is
            negative.
    """
    if factor <= 0:
        raise core.ConfigurationError(
            'penalty factor must be positive, got {}'.format(factor))
    if eq_tol < 0:
        raise core.ConfigurationError(
            'eq_tol must not be negative, got {}'.format(eq_tol))
    return PenalizedObjective(problem, factor, eq_tol)


def max_violation(problem: ConstrainedProblem,
                  x: Sequence[float],
                  eq_tol: float = DEFAULT_EQ_TOL) -> float:
    """Returns the largest constraint violation at x, 0 when feasible."""
    violations = _violations(problem, np.asarray(x, dtype=float), eq_tol)
    return float(violations.max()) if violations.size else 0.0


def is_feasible(problem: ConstrainedProblem,
                x: Sequence[float],
                tol: float = DEFAULT_FEASIBILITY_TOL,
                eq_tol: float = DEFAULT_EQ_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return (problem.space.contains(x) and
            max_violation(problem, x, eq_tol) <= tol)


# Tension/compression spring: x = (wire diameter d, coil diameter D,
# active coils N).


def _spring_weight(x):
    return (x[2] + 2) * x[1] * x[0]**2


def _spring_deflection(x):
    return 1 - x[1]**3 * x[2] / (71785 * x[0]**4)


def _spring_shear(x):
    return ((4 * x[1]**2 - x[0] * x[1]) / (12566 *
                                          (x[1] * x[0]**3 - x[0]**4)) +
            1 / (5108 * x[0]**2) - 1)


def _spring_surge(x):
    return 1 - 140.45 * x[0] / (x[1]**2 * x[2])


def _spring_diameter(x):
    return (x[0] + x[1]) / 1.5 - 1


# Pressure vessel: x = (shell thickness, head thickness, inner radius,
# cylinder length).


def _vessel_cost(x):
    return (0.6224 * x[0] * x[2] * x[3] + 1.7781 * x[1] * x[2]**2 +
            3.1661 * x[0]**2 * x[3] + 19.84 * x[0]**2 * x[2])


def _vessel_shell(x):
    return -x[0] + 0.0193 * x[2]


def _vessel_head(x):
    return -x[1] + 0.00954 * x[2]


def _vessel_volume(x):
    return -math.pi * x[2]**2 * x[3] - 4 / 3 * math.pi * x[2]**3 + 1296000


def _vessel_length(x):
    return x[3] - 240


# Three-bar truss: x = (cross sections A1, A2).
_TRUSS_LENGTH = 100.0
_TRUSS_LOAD = 2.0
_TRUSS_STRESS = 2.0


def _truss_volume(x):
    return (2 * math.sqrt(2) * x[0] + x[1]) * _TRUSS_LENGTH


def _truss_stress_1(x):
    return ((math.sqrt(2) * x[0] + x[1]) /
            (math.sqrt(2) * x[0]**2 + 2 * x[0] * x[1]) * _TRUSS_LOAD -
            _TRUSS_STRESS)


def _truss_stress_2(x):
    return (x[1] / (math.sqrt(2) * x[0]**2 + 2 * x[0] * x[1]) * _TRUSS_LOAD -
            _TRUSS_STRESS)


def _truss_stress_3(x):
    return 1 / (math.sqrt(2) * x[1] + x[0]) * _TRUSS_LOAD - _TRUSS_STRESS


# Welded beam: x = (weld thickness h, weld length l, bar height t,
# bar thickness b).
_BEAM_LOAD = 6000.0
_BEAM_LENGTH = 14.0
_BEAM_E = 30e6
_BEAM_G = 12e6


def _beam_cost(x):
    return 1.10471 * x[0]**2 * x[1] + 0.04811 * x[2] * x[3] * (14 + x[1])


def _beam_shear_stress(x):
    tau1 = _BEAM_LOAD / (math.sqrt(2) * x[0] * x[1])
    moment = _BEAM_LOAD * (_BEAM_LENGTH + x[1] / 2)
    radius = math.sqrt(x[1]**2 / 4 + ((x[0] + x[2]) / 2)**2)
    inertia = 2 * (math.sqrt(2) * x[0] * x[1] *
                   (x[1]**2 / 12 + ((x[0] + x[2]) / 2)**2))
    tau2 = moment * radius / inertia
    tau = math.sqrt(tau1**2 + 2 * tau1 * tau2 * x[1] / (2 * radius) + tau2**2)
    return tau - 13600


def _beam_bending_stress(x):
    return 6 * _BEAM_LOAD * _BEAM_LENGTH / (x[3] * x[2]**2) - 30000


def _beam_thickness_order(x):
    return x[0] - x[3]


def _beam_cost_limit(x):
    return 0.10471 * x[0]**2 + 0.04811 * x[2] * x[3] * (14 + x[1]) - 5


def _beam_min_weld(x):
    return 0.125 - x[0]


def _beam_deflection(x):
    return (4 * _BEAM_LOAD * _BEAM_LENGTH**3 / (_BEAM_E * x[2]**3 * x[3]) -
            0.25)


def _beam_buckling(x):
    critical = (4.013 * _BEAM_E * math.sqrt(x[2]**2 * x[3]**6 / 36) /
                _BEAM_LENGTH**2 *
                (1 - x[2] / (2 * _BEAM_LENGTH) * math.sqrt(_BEAM_E /
                                                          (4 * _BEAM_G))))
    return _BEAM_LOAD - critical


# Gear train: x = (teeth of gears A, B, C, D), integers.


def _gear_ratio_error(x):
    teeth = np.round(x)
    return (1 / 6.931 - teeth[1] * teeth[2] / (teeth[0] * teeth[3]))**2


def _canonical_problems() -> List[ConstrainedProblem]:
    return [
        ConstrainedProblem(
            'tension_compression_spring',
            core.SearchSpace([0.05, 0.25, 2.0], [2.0, 1.3, 15.0]),
            _spring_weight,
            inequality=[
                _spring_deflection, _spring_shear, _spring_surge,
                _spring_diameter
            ],
            witness=[0.06, 0.4, 15.0],
            best_known=0.012665232788,
            description='Tension/compression spring weight'),
        ConstrainedProblem(
            'pressure_vessel',
            core.SearchSpace([0.0, 0.0, 10.0, 10.0],
                             [99.0, 99.0, 200.0, 200.0]),
            _vessel_cost,
            inequality=[
                _vessel_shell, _vessel_head, _vessel_volume, _vessel_length
            ],
            witness=[1.0, 0.5, 50.0, 200.0],
            best_known=5885.3327736,
            description='Pressure vessel manufacturing cost'),
        ConstrainedProblem(
            'three_bar_truss',
            core.SearchSpace([1e-3, 1e-3], [1.0, 1.0]),
            _truss_volume,
            inequality=[_truss_stress_1, _truss_stress_2, _truss_stress_3],
            witness=[0.8, 0.5],
            best_known=263.8958434,
            description='Three-bar truss volume'),
        ConstrainedProblem(
            'welded_beam',
            core.SearchSpace([0.1, 0.1, 0.1, 0.1], [2.0, 10.0, 10.0, 2.0]),
            _beam_cost,
            inequality=[
                _beam_shear_stress, _beam_bending_stress,
                _beam_thickness_order, _beam_cost_limit, _beam_min_weld,
                _beam_deflection, _beam_buckling
            ],
            witness=[0.5, 3.0, 8.0, 0.6],
            best_known=1.724852,
            description='Welded beam fabrication cost'),
        ConstrainedProblem(
            'gear_train',
            core.SearchSpace([12.0] * 4, [60.0] * 4),
            _gear_ratio_error,
            witness=[43.0, 16.0, 19.0, 49.0],
            best_known=2.700857e-12,
            description='Gear train ratio error, integer teeth'),
    ]


_REGISTRY = collections.OrderedDict(
    (problem.name, problem) for problem in _canonical_problems())


def problem_registry() -> List[ConstrainedProblem]:
    """Returns the registered problems in registration order."""
    return list(_REGISTRY.values())


def register_problem(problem: ConstrainedProblem):
    """Adds a user-supplied problem to the registry.

    Raises:
        ProblemExistsError: If the name is already taken.
    """
    if problem.name in _REGISTRY:
        raise ProblemExistsError('a problem named "{}" already exists'.format(
            problem.name))
    _REGISTRY[problem.name] = problem


def get_problem(name: str) -> ConstrainedProblem:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownProblemError(
            'unknown problem "{}", expected one of {}'.format(
                name, ', '.join(_REGISTRY)))
