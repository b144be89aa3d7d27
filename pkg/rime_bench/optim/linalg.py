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
"""Weighted statistics and Gaussian sampling for the covariance strategies."""

import enum
from typing import Optional, Tuple

from absl import logging
import numpy as np

from rime_bench.optim import core

_MAX_JITTER_RETRIES = 8
_JITTER_SCALE = 1e-10


class WeightMode(enum.Enum):
    """How the rank weights of the dominant group are computed."""

    # (ln(s+1) - ln i) / sum_k (ln(s+1) - ln k), decaying with rank.
    CORRECTED = 'corrected'

    # ln(s+1) / sum_k (ln(s+1) - ln k) for every member. The weights are
    # equal and need not sum to 1.
    VERBATIM = 'verbatim'


def rank_weights(s: int, mode: WeightMode = WeightMode.CORRECTED) -> np.ndarray:
    """Returns the weights of s members ordered best-first.

    Args:
        s: Number of members.
        mode: Weighting scheme, see WeightMode.

    Returns:
        A vector of s weights. With CORRECTED they are strictly decreasing
        and sum to 1.

    Raises:
        core.ConfigurationError: If s < 1.
    """
    if s < 1:
        raise core.ConfigurationError(
            'rank weights need at least one member, got {}'.format(s))
    mode = WeightMode(mode)
    log_ranks = np.log(np.arange(1, s + 1))
    decay = np.log(s + 1) - log_ranks
    if mode is WeightMode.CORRECTED:
        return decay / decay.sum()
    return np.full(s, np.log(s + 1)) / decay.sum()


def weighted_mean(members: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Returns sum_i weights[i] * members[i].

    Raises:
        core.DimensionMismatchError: If there is not one weight per member.
    """
    members = np.atleast_2d(np.asarray(members, dtype=float))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (members.shape[0],):
        raise core.DimensionMismatchError(
            '{} weights given for {} members'.format(weights.size,
                                                     members.shape[0]))
    return weights @ members


def scatter_covariance(members: np.ndarray, mean: np.ndarray) -> np.ndarray:
    """Returns (1/|S|) sum_i (X_i - mean)(X_i - mean)^T, symmetrized."""
    members = np.atleast_2d(np.asarray(members, dtype=float))
    mean = np.asarray(mean, dtype=float)
    if mean.shape != (members.shape[1],):
        raise core.DimensionMismatchError(
            'mean of length {} for members of dimension {}'.format(
                mean.size, members.shape[1]))
    deviations = members - mean
    cov = deviations.T @ deviations / members.shape[0]
    return (cov + cov.T) / 2


def cholesky_jittered(cov: np.ndarray) -> Tuple[np.ndarray, float]:
    """Factorizes cov, adding diagonal jitter when it is not positive definite.

    The first attempt uses no jitter. After that the jitter starts at
    1e-10 * trace / dim (or 1e-10 when the trace is not positive) and grows
    tenfold per retry.

    Args:
        cov: A symmetric matrix.

    Returns:
        The lower-triangular factor L with L L^T = cov + jitter * I and the
        jitter that was used.

    Raises:
        core.NumericError: If cov has non-finite entries or no jitter within
            the retry limit makes it factorizable.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise core.DimensionMismatchError(
            'covariance must be square, got shape {}'.format(cov.shape))
    if not np.all(np.isfinite(cov)):
        raise core.NumericError('covariance has non-finite entries')
    try:
        return np.linalg.cholesky(cov), 0.0
    except np.linalg.LinAlgError:
        pass

    dim = cov.shape[0]
    trace = float(np.trace(cov))
    jitter = _JITTER_SCALE * (trace / dim if trace > 0 else 1.0)
    identity = np.eye(dim)
    for _ in range(_MAX_JITTER_RETRIES):
        try:
            factor = np.linalg.cholesky(cov + jitter * identity)
        except np.linalg.LinAlgError:
            jitter *= 10
            continue
        logging.vlog(1, 'covariance factorized with jitter %g', jitter)
        return factor, jitter
    raise core.NumericError(
        'covariance is not factorizable after {} jitter retries'.format(
            _MAX_JITTER_RETRIES))


class GaussianModel(object):
    """A multivariate normal with a cached Cholesky factor."""

    def __init__(self, mean: np.ndarray, cov: np.ndarray):
        """Creates a model and factorizes its covariance.

        Raises:
            core.DimensionMismatchError: If mean and cov disagree in size.
            core.NumericError: If cov cannot be factorized.
        """
        mean = np.array(mean, dtype=float)
        cov = np.array(cov, dtype=float)
        if cov.shape != (mean.size, mean.size):
            raise core.DimensionMismatchError(
                'mean of length {} with covariance of shape {}'.format(
                    mean.size, cov.shape))
        self.chol, self.jitter = cholesky_jittered(cov)
        mean.setflags(write=False)
        cov.setflags(write=False)
        self.mean = mean
        self.cov = cov

    @classmethod
    def fit(cls,
            members: np.ndarray,
            weights: Optional[np.ndarray] = None,
            mode: WeightMode = WeightMode.CORRECTED) -> 'GaussianModel':
        """Fits a model to members ordered best-first.

        Args:
            members: Array of shape (S, D).
            weights: One weight per member; rank_weights(S, mode) when None.
            mode: Weighting scheme used when weights is None.

        Returns:
            The model with the weighted mean and the scatter covariance.
        """
        members = np.atleast_2d(np.asarray(members, dtype=float))
        if weights is None:
            weights = rank_weights(members.shape[0], mode)
        mean = weighted_mean(members, weights)
        return cls(mean, scatter_covariance(members, mean))

    @property
    def dim(self) -> int:
        return self.mean.size

    def sample_many(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Returns n samples as an (n, D) array."""
        z = rng.standard_normal((n, self.dim))
        return self.mean + z @ self.chol.T


def mvn_sample(model: GaussianModel, rng: np.random.Generator) -> np.ndarray:
    """Returns mean + L z with z a vector of standard normals."""
    return model.mean + model.chol @ rng.standard_normal(model.dim)
