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
Pairwise training samples. Ranked mode keeps only the adjacent pairs of the reward ordering of an instance; the
NR baseline draws unordered pairs at random.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import math
import dataclasses
import numpy as np
from typing import Sequence
from core.utils import InvalidDataError

TIE_TOL = 1e-9


@dataclasses.dataclass(frozen=True)
class PreferenceSet:
    """
    Pairs (first[p], second[p]) of strategy indices where first is preferred (or tied). mu is the preference label
    (1 or 0.5 on ties) and delta the non-negative true reward difference.
    """
    order: np.ndarray
    first: np.ndarray
    second: np.ndarray
    mu: np.ndarray
    delta: np.ndarray

    def __len__(self) -> int:
        return len(self.first)


def _labels(rewards: np.ndarray, first: np.ndarray, second: np.ndarray, tie_tol: float):
    delta = rewards[first] - rewards[second]
    ties = np.abs(delta) <= tie_tol
    delta = np.where(ties, 0.0, delta)
    mu = np.where(ties, 0.5, 1.0)
    return mu, delta


def _checked(reward_row: Sequence[float]) -> np.ndarray:
    rewards = np.asarray(reward_row, dtype=np.float64)
    if rewards.ndim != 1 or len(rewards) == 0:
        raise InvalidDataError("A reward row must be a non-empty vector.")
    if not np.all(np.isfinite(rewards)):
        raise InvalidDataError("Reward rows must be finite.")
    return rewards


def build_preference_set(reward_row: Sequence[float], tie_tol: float = TIE_TOL) -> PreferenceSet:
    """
    Sorts the strategies by descending reward (stable, so ties keep index order) and pairs every strategy with its
    successor in that order. Yields exactly M - 1 pairs.
    """
    rewards = _checked(reward_row)
    order = np.argsort(-rewards, kind="stable")
    first, second = order[:-1], order[1:]
    mu, delta = _labels(rewards, first, second, tie_tol)
    return PreferenceSet(order=order, first=first, second=second, mu=mu, delta=delta)


def nr_budget(n_strategies: int, budget: int | None = None) -> int:
    """
    Number of random pairs per instance, clamped so that every strategy can appear in a pair and no pair repeats.
    """
    total = math.comb(n_strategies, 2)
    minimum = min(math.ceil(n_strategies / 2), total)
    budget = n_strategies if budget is None else budget
    return max(minimum, min(budget, total))


def sample_nr_pairs(n_strategies: int, budget: int | None, rng: np.random.Generator) -> np.ndarray:
    """
    Draws distinct unordered pairs such that every strategy occurs in at least one of them.
    :return: Array of shape (budget, 2), each row sorted ascending.
    """
    if n_strategies < 2:
        return np.zeros((0, 2), dtype=np.int64)
    budget = nr_budget(n_strategies, budget)
    permutation = rng.permutation(n_strategies)
    pairs = set()
    for k in range(0, n_strategies - 1, 2):
        pairs.add(tuple(sorted((int(permutation[k]), int(permutation[k + 1])))))
    if n_strategies % 2 == 1:
        last = int(permutation[-1])
        partner = int(permutation[0])
        pairs.add(tuple(sorted((last, partner))))
    while len(pairs) < budget:
        j, k = rng.choice(n_strategies, size=2, replace=False)
        pairs.add(tuple(sorted((int(j), int(k)))))
    return np.array(sorted(pairs), dtype=np.int64)


def orient_pairs(reward_row: Sequence[float], pairs: np.ndarray, tie_tol: float = TIE_TOL) -> PreferenceSet:
    """
    Orients random pairs so that the first strategy has the higher (or equal) true reward.
    """
    rewards = _checked(reward_row)
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    swap = rewards[pairs[:, 1]] > rewards[pairs[:, 0]]
    first = np.where(swap, pairs[:, 1], pairs[:, 0])
    second = np.where(swap, pairs[:, 0], pairs[:, 1])
    mu, delta = _labels(rewards, first, second, tie_tol)
    return PreferenceSet(
        order=np.argsort(-rewards, kind="stable"), first=first, second=second, mu=mu, delta=delta
    )


@dataclasses.dataclass(frozen=True)
class PairBatch:
    """
    Preference sets of several instances stacked into (B, P) arrays.
    """
    first: np.ndarray
    second: np.ndarray
    mu: np.ndarray
    delta: np.ndarray

    @staticmethod
    def stack(items: Sequence[PreferenceSet]) -> PairBatch:
        sizes = {len(item) for item in items}
        if len(sizes) > 1:
            raise InvalidDataError(f"Preference sets of one batch must have equal size but have sizes {sorted(sizes)}.")
        return PairBatch(
            first=np.vstack([item.first for item in items]),
            second=np.vstack([item.second for item in items]),
            mu=np.vstack([item.mu for item in items]),
            delta=np.vstack([item.delta for item in items])
        )
