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
"""Expands a campaign configuration into independent run tasks.

Tasks only hold plain values so that they can be sent to worker processes;
every worker rebuilds its own objective.
"""

import time
from typing import Any, Dict, List, NamedTuple, Tuple, Union

from absl import logging

from rime_bench import config as config_lib
from rime_bench.harness import _seeds
from rime_bench.optim import core
from rime_bench.optim import mrime
from rime_bench.problems import constrained
from rime_bench.problems import suite as suite_lib

FAILED = 'failed'


class InstanceSpec(NamedTuple):
    """One problem of a campaign at one dimension."""
    id: str
    suite: str
    function: Union[int, str]
    dim: int
    seed: int


class RunTask(NamedTuple):
    instance: InstanceSpec
    variant: str
    run_index: int
    seed: int
    params: mrime.MrimeParams
    penalty_factor: float
    eq_tol: float

    @property
    def key(self) -> Tuple[str, str, int]:
        return (self.instance.id, self.variant, self.run_index)


def campaign_instances(
        config: config_lib.CampaignConfig) -> List[InstanceSpec]:
    """Lists the campaign's problems, sorted by dimension then id.

    Constrained problems have a fixed dimension and ignore config dims.
    """
    instances = []
    if config.suite == config_lib.CONSTRAINED_SUITE:
        for name in config.function_ids():
            problem = constrained.get_problem(name)
            instances.append(
                InstanceSpec(name, config.suite, name, problem.dim,
                             _seeds.instance_seed(config.seed, name)))
    else:
        for dim in config.dims:
            for function_id in config.function_ids():
                instance_id = suite_lib.instance_id(config.suite, function_id,
                                                    dim)
                instances.append(
                    InstanceSpec(instance_id, config.suite, function_id, dim,
                                 _seeds.instance_seed(config.seed,
                                                      instance_id)))
    return sorted(instances, key=lambda spec: (spec.dim, spec.id))


def build_tasks(config: config_lib.CampaignConfig) -> List[RunTask]:
    """Returns every run of the campaign, sorted by (instance, variant, run)."""
    tasks = []
    for instance in campaign_instances(config):
        params = config.mrime_params(config.np, config.fes_max(instance.dim))
        for variant in config.variants:
            for run_index in range(config.runs):
                tasks.append(
                    RunTask(instance=instance,
                            variant=variant,
                            run_index=run_index,
                            seed=_seeds.run_seed(config.seed, variant,
                                                 instance.id, run_index),
                            params=params,
                            penalty_factor=config.penalty_factor,
                            eq_tol=config.eq_tol))
    return sorted(tasks, key=lambda task: task.key)


def build_objective(instance: InstanceSpec, penalty_factor: float,
                    eq_tol: float) -> Tuple[core.Objective, core.SearchSpace]:
    """Materializes an instance into an objective and its search space.

    Raises:
        core.ConfigurationError: If the instance cannot be generated.
    """
    if instance.suite == config_lib.CONSTRAINED_SUITE:
        problem = constrained.get_problem(instance.function)
        return (constrained.penalized(problem, penalty_factor, eq_tol),
                problem.space)
    benchmark = suite_lib.make_instance(instance.suite, instance.function,
                                        instance.dim, instance.seed)
    return benchmark, benchmark.space()


def instance_manifest(instance: InstanceSpec, penalty_factor: float,
                      eq_tol: float) -> Dict[str, Any]:
    """Describes an instance for manifest.yaml.

    Raises:
        core.ConfigurationError: If the instance cannot be generated.
    """
    if instance.suite == config_lib.CONSTRAINED_SUITE:
        problem = constrained.get_problem(instance.function)
        return {
            'id': instance.id,
            'suite': instance.suite,
            'problem': problem.name,
            'dim': problem.dim,
            'best_known': problem.best_known,
            'penalty_factor': penalty_factor,
            'eq_tol': eq_tol,
        }
    benchmark = suite_lib.make_instance(instance.suite, instance.function,
                                        instance.dim, instance.seed)
    return benchmark.to_manifest()


def failed_record(task: RunTask, err: Exception) -> core.RunRecord:
    return core.RunRecord(variant=task.variant,
                          instance_id=task.instance.id,
                          seed=task.seed,
                          history=(),
                          final_best=float('nan'),
                          final_position=(),
                          evaluations=0,
                          status=FAILED,
                          error='{}: {}'.format(type(err).__name__, err))


def check_feasibility(instance: InstanceSpec, record: core.RunRecord,
                      eq_tol: float) -> core.RunRecord:
    """Re-checks a constrained run's final position without the penalty.

    Records of other suites and failed runs are returned unchanged.
    """
    if (instance.suite != config_lib.CONSTRAINED_SUITE or
            not record.final_position):
        return record
    problem = constrained.get_problem(instance.function)
    violation = constrained.max_violation(problem, record.final_position,
                                          eq_tol)
    feasible = constrained.is_feasible(problem,
                                       record.final_position,
                                       constrained.DEFAULT_FEASIBILITY_TOL,
                                       eq_tol)
    if not feasible:
        logging.warning('%s on %s ends infeasible, max violation %g',
                        record.variant, instance.id, violation)
    return record._replace(feasible=feasible, max_violation=violation)


def execute(task: RunTask) -> core.RunRecord:
    """Runs one task.

    Any exception raised by the objective or the optimizer fails this run
    only; the returned record then has status "failed".
    """
    start = time.perf_counter()
    try:
        objective, space = build_objective(task.instance, task.penalty_factor,
                                           task.eq_tol)
        optimizer = mrime.Optimizer(task.variant,
                                    mrime.variant_by_name(task.variant))
        record = optimizer.run(objective, space, task.params, task.seed)
    except Exception as e:  # pylint: disable=broad-except
        logging.warning('%s on %s, run %d failed: %s', task.variant,
                        task.instance.id, task.run_index, e)
        return failed_record(task, e)._replace(wall_time=time.perf_counter() -
                                               start)
    record = record._replace(instance_id=task.instance.id)
    return check_feasibility(task.instance, record, task.eq_tol)
