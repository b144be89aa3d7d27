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
"""YAML campaign configuration files.

A configuration file looks like:

    schema_version: 1
    suite: cec2022-like
    functions: all
    dims: [10]
    variants: [RIME, MRIME-CD]
    runs: 21
    np: 30
    fes_multiplier: 1000
    seed: 2024
    output_dir: results/cec2022
    mrime:
      nvol_threshold: 0.01
"""

import copy
from typing import Any, Dict, List, Optional, Union

import yaml

from rime_bench.optim import linalg
from rime_bench.optim import mrime
from rime_bench.optim import rime
from rime_bench.problems import constrained
from rime_bench.problems import suite as suite_lib

SCHEMA_VERSION = 1
CONSTRAINED_SUITE = 'constrained'
SUITES = suite_lib.SUITES + (CONSTRAINED_SUITE,)

_DEFAULTS = {
    'schema_version': SCHEMA_VERSION,
    'suite': 'cec2017-like',
    'functions': 'all',
    'dims': [10],
    'variants': ['RIME', 'MRIME-CD'],
    'runs': 21,
    'np': 30,
    'fes_multiplier': 3000,
    'seed': 0,
    'output_dir': 'rime-bench-output',
    'stats_alpha': 0.05,
    'candidate': None,
    'workers': 1,
    'penalty_factor': constrained.DEFAULT_PENALTY_FACTOR,
    'eq_tol': constrained.DEFAULT_EQ_TOL,
    'mrime': {},
}

_MRIME_KEYS = ('nvol_threshold', 'count_factor', 'weight_mode',
               'archive_capacity', 'group_size', 'w')


class InvalidConfigError(ValueError):
    """A configuration file or value is not usable."""


class CampaignConfig(object):
    """The knobs of one benchmarking campaign."""

    _HEADER = '# Generated file, do not edit'
    FILE_NAME = 'config.yaml'

    def __init__(self, data: Optional[Dict[str, Any]] = None):
        """Creates a configuration from a dictionary of file values.

        Missing keys take their defaults.

        Raises:
            InvalidConfigError: If a key is unknown or a value is invalid.
        """
        data = dict(data or {})
        unknown = sorted(set(data) - set(_DEFAULTS))
        if unknown:
            raise InvalidConfigError('unknown configuration key "{}"'.format(
                unknown[0]))
        self._data = copy.deepcopy(_DEFAULTS)
        self._data.update(copy.deepcopy(data))
        self.validate()

    @classmethod
    def load(cls, path: str) -> 'CampaignConfig':
        """Reads a configuration file.

        Raises:
            InvalidConfigError: If the file cannot be read or parsed.
        """
        try:
            with open(path) as config_file:
                data = yaml.safe_load(config_file)
        except (OSError, yaml.YAMLError) as e:
            raise InvalidConfigError(
                'cannot read configuration [{}]: {}'.format(path, e))
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise InvalidConfigError(
                'configuration [{}] must be a mapping'.format(path))
        return cls(data)

    def save(self, path: str):
        """Writes the configuration in YAML format."""
        yaml_text = '\n'.join([
            self._HEADER,
            yaml.safe_dump(self.to_dict(), default_flow_style=False)
        ])
        with open(path, 'w') as config_file:
            config_file.write(yaml_text)

    def to_dict(self) -> Dict[str, Any]:
        return copy.deepcopy(self._data)

    def get(self, attr: str) -> Any:
        return self._data.get(attr)

    def override(self, **values: Any) -> 'CampaignConfig':
        """Returns a copy where every non-None value replaces the file value."""
        data = self.to_dict()
        data.update({k: v for k, v in values.items() if v is not None})
        return CampaignConfig(data)

    def _fail(self, key: str, expectation: str):
        raise InvalidConfigError('"{}" {}, got {!r}'.format(
            key, expectation, self._data.get(key)))

    def validate(self):
        """Raises InvalidConfigError naming the first invalid key."""
        data = self._data
        if data['schema_version'] != SCHEMA_VERSION:
            self._fail('schema_version', 'must be {}'.format(SCHEMA_VERSION))
        if data['suite'] not in SUITES:
            self._fail('suite', 'must be one of {}'.format(', '.join(SUITES)))
        if not (data['functions'] == 'all' or
                (isinstance(data['functions'], list) and data['functions'])):
            self._fail('functions', 'must be "all" or a non-empty list')
        if (not isinstance(data['dims'], list) or not data['dims'] or
                not all(_is_int(d) and d >= 1 for d in data['dims'])):
            self._fail('dims', 'must be a non-empty list of positive integers')
        if not isinstance(data['variants'], list) or not data['variants']:
            self._fail('variants', 'must be a non-empty list')
        for name in data['variants']:
            if name not in mrime.VARIANTS:
                self._fail(
                    'variants',
                    'must only name {}'.format(', '.join(mrime.VARIANTS)))
        if len(set(data['variants'])) != len(data['variants']):
            self._fail('variants', 'must not repeat a variant')
        if not _is_int(data['runs']) or data['runs'] < 1:
            self._fail('runs', 'must be a positive integer')
        if not _is_int(data['np']) or data['np'] < 2:
            self._fail('np', 'must be an integer of at least 2')
        value = data['fes_multiplier']
        if not _is_number(value) or value <= 0:
            self._fail('fes_multiplier', 'must be a positive number')
        if not _is_int(data['seed']) or data['seed'] < 0:
            self._fail('seed', 'must be a non-negative integer')
        if not isinstance(data['output_dir'], str) or not data['output_dir']:
            self._fail('output_dir', 'must be a path')
        if (not _is_number(data['stats_alpha']) or
                not 0 < data['stats_alpha'] < 1):
            self._fail('stats_alpha', 'must lie in (0, 1)')
        if (data['candidate'] is not None and
                data['candidate'] not in data['variants']):
            self._fail('candidate', 'must be one of the variants')
        if not _is_int(data['workers']) or data['workers'] < 1:
            self._fail('workers', 'must be a positive integer')
        value = data['penalty_factor']
        if not _is_number(value) or value <= 0:
            self._fail('penalty_factor', 'must be a positive number')
        if not _is_number(data['eq_tol']) or data['eq_tol'] < 0:
            self._fail('eq_tol', 'must be a non-negative number')
        self._validate_mrime()
        for dim in self.problem_dims():
            self.fes_max(dim)

    def _validate_mrime(self):
        overrides = self._data['mrime']
        if not isinstance(overrides, dict):
            self._fail('mrime', 'must be a mapping')
        unknown = sorted(set(overrides) - set(_MRIME_KEYS))
        if unknown:
            raise InvalidConfigError(
                'unknown configuration key "mrime.{}"'.format(unknown[0]))
        try:
            self.mrime_params(np=self.np, fes_max=max(self.np, 1)).validate()
        except (ValueError, TypeError) as e:
            raise InvalidConfigError('"mrime" is invalid: {}'.format(e))

    @property
    def suite(self) -> str:
        return self._data['suite']

    @property
    def dims(self) -> List[int]:
        return list(self._data['dims'])

    @property
    def variants(self) -> List[str]:
        return list(self._data['variants'])

    @property
    def runs(self) -> int:
        return self._data['runs']

    @property
    def np(self) -> int:
        return self._data['np']

    @property
    def seed(self) -> int:
        return self._data['seed']

    @property
    def workers(self) -> int:
        return self._data['workers']

    @property
    def output_dir(self) -> str:
        return self._data['output_dir']

    @property
    def stats_alpha(self) -> float:
        return float(self._data['stats_alpha'])

    @property
    def penalty_factor(self) -> float:
        return float(self._data['penalty_factor'])

    @property
    def eq_tol(self) -> float:
        return float(self._data['eq_tol'])

    @property
    def candidate(self) -> str:
        """The variant whose w/e/l counts are reported.

        Defaults to MRIME-CD when it is part of the campaign, otherwise the
        last variant.
        """
        if self._data['candidate'] is not None:
            return self._data['candidate']
        if 'MRIME-CD' in self.variants:
            return 'MRIME-CD'
        return self.variants[-1]

    @property
    def mrime_overrides(self) -> Dict[str, Any]:
        return dict(self._data['mrime'])

    def function_ids(self) -> List[Union[int, str]]:
        """Returns the suite's function ids or constrained problem names.

        Raises:
            InvalidConfigError: If a listed function is not in the suite.
        """
        functions = self._data['functions']
        if self.suite == CONSTRAINED_SUITE:
            known = [p.name for p in constrained.problem_registry()]
        else:
            known = suite_lib.function_ids(self.suite)
        if functions == 'all':
            return known
        for function in functions:
            if function not in known:
                self._fail('functions',
                           'must only name functions of {}'.format(self.suite))
        return list(functions)

    def problem_dims(self) -> List[int]:
        """Returns the distinct dimensions the campaign runs at.

        Constrained problems fix their own dimension, so dims does not
        apply to them.

        Raises:
            InvalidConfigError: If a listed function is not in the suite.
        """
        if self.suite == CONSTRAINED_SUITE:
            return sorted({
                constrained.get_problem(name).dim
                for name in self.function_ids()
            })
        self.function_ids()
        return sorted(set(self.dims))

    def fes_max(self, dim: int) -> int:
        """Returns the evaluation budget of a dim-dimensional problem."""
        fes = int(round(self._data['fes_multiplier'] * dim))
        if fes < self.np:
            raise InvalidConfigError(
                '"fes_multiplier" gives {} evaluations at dimension {}, fewer '
                'than np={}'.format(fes, dim, self.np))
        return fes

    def mrime_params(self, np: int, fes_max: int) -> mrime.MrimeParams:
        """Returns the optimizer parameters with the mrime overrides applied."""
        overrides = self.mrime_overrides
        rime_params = rime.RimeParams(np=np,
                                      fes_max=fes_max,
                                      w=overrides.get('w', rime.DEFAULT_W))
        return mrime.MrimeParams(
            rime_params,
            archive_capacity=overrides.get('archive_capacity'),
            group_size=overrides.get('group_size'),
            nvol_threshold=overrides.get('nvol_threshold',
                                         mrime.DEFAULT_NVOL_THRESHOLD),
            count_factor=overrides.get('count_factor',
                                       mrime.DEFAULT_COUNT_FACTOR),
            weight_mode=linalg.WeightMode(
                overrides.get('weight_mode',
                              linalg.WeightMode.CORRECTED.value)))


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)
