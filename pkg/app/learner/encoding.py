# This file is part of Stratum.
#
# Stratum is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# Stratum is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE. See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with Stratum. If not, see <https://www.gnu.org/licenses/>.

"""
Token features of instance-strategy pairs: [standardized varying parameters | tight-row indicator | standardized
integer values].
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import dataclasses
import numpy as np
from typing import List
from pydantic import BaseModel, ConfigDict
from core.utils import InvalidDataError
from core.models.strategy import StrategyLibrary

STD_GUARD = 1e-8


def _guarded(std: np.ndarray) -> np.ndarray:
    return np.where(std < STD_GUARD, 1.0, std)


@dataclasses.dataclass(frozen=True)
class NormStats:
    """
    Feature statistics fitted on training data. Features with (near) zero spread keep a unit divisor, so they
    encode as zero on the training set.
    """
    theta_mean: np.ndarray
    theta_std: np.ndarray
    integer_mean: np.ndarray
    integer_std: np.ndarray
    n_rows: int

    @property
    def n_features(self) -> int:
        return len(self.theta_mean) + self.n_rows + len(self.integer_mean)

    def to_model(self) -> NormStatsModel:
        return NormStatsModel(
            theta_mean=self.theta_mean.tolist(),
            theta_std=self.theta_std.tolist(),
            integer_mean=self.integer_mean.tolist(),
            integer_std=self.integer_std.tolist(),
            n_rows=self.n_rows
        )


class NormStatsModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    theta_mean: List[float]
    theta_std: List[float]
    integer_mean: List[float]
    integer_std: List[float]
    n_rows: int

    def to_stats(self) -> NormStats:
        return NormStats(
            theta_mean=np.array(self.theta_mean, dtype=np.float64),
            theta_std=np.array(self.theta_std, dtype=np.float64),
            integer_mean=np.array(self.integer_mean, dtype=np.float64),
            integer_std=np.array(self.integer_std, dtype=np.float64),
            n_rows=self.n_rows
        )


def integer_matrix(library: StrategyLibrary, n_integers: int) -> np.ndarray:
    values = np.zeros((len(library), n_integers))
    for j, strategy in enumerate(library):
        values[j] = strategy.integer_values
    return values


def indicator_matrix(library: StrategyLibrary, n_rows: int) -> np.ndarray:
    result = np.zeros((len(library), n_rows))
    for j, strategy in enumerate(library):
        result[j, list(strategy.tight_set)] = 1.0
    return result


def fit_norm_stats(thetas: np.ndarray, library: StrategyLibrary, n_rows: int) -> NormStats:
    """
    Fits mean and spread of the varying parameters over the training instances and of the integer values over
    the library strategies.
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
    if len(library) == 0:
        raise InvalidDataError("Cannot fit feature statistics on an empty library.")
    n_integers = len(library[0].integer_values)
    values = integer_matrix(library, n_integers)
    return NormStats(
        theta_mean=thetas.mean(axis=0),
        theta_std=_guarded(thetas.std(axis=0)),
        integer_mean=values.mean(axis=0),
        integer_std=_guarded(values.std(axis=0)),
        n_rows=n_rows
    )


@dataclasses.dataclass(frozen=True)
class StrategyFeatures:
    """
    The instance independent part of all tokens of a library.
    """
    features: np.ndarray

    @staticmethod
    def create(library: StrategyLibrary, stats: NormStats) -> StrategyFeatures:
        values = integer_matrix(library, len(stats.integer_mean))
        return StrategyFeatures(features=np.hstack([
            indicator_matrix(library, stats.n_rows),
            (values - stats.integer_mean) / stats.integer_std
        ]))


def encode_thetas(thetas: np.ndarray, library: StrategyLibrary | StrategyFeatures, stats: NormStats) -> np.ndarray:
    """
    Encodes many instances at once.
    :return: Tokens of shape (N, M, F).
    """
    thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
    if thetas.shape[1] != len(stats.theta_mean):
        raise InvalidDataError(
            f"Instances have {thetas.shape[1]} varying parameters but the encoder expects {len(stats.theta_mean)}."
        )
    strategy = library if isinstance(library, StrategyFeatures) else StrategyFeatures.create(library, stats)
    theta = (thetas - stats.theta_mean) / stats.theta_std
    n, m = thetas.shape[0], strategy.features.shape[0]
    return np.concatenate([
        np.broadcast_to(theta[:, None, :], (n, m, theta.shape[1])),
        np.broadcast_to(strategy.features[None, :, :], (n, m, strategy.features.shape[1]))
    ], axis=2)


def encode_batch(theta: np.ndarray, library: StrategyLibrary | StrategyFeatures, stats: NormStats) -> np.ndarray:
    """
    Encodes one instance against every library strategy.
    :return: Tokens of shape (M, F).
    """
    return encode_thetas(np.asarray(theta, dtype=np.float64)[None, :], library, stats)[0]
