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
Instance-strategy bipartite graph and greedy set-cover pruning of the strategy library.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import logging
import dataclasses
import numpy as np
from typing import List, Sequence, Tuple
from core.utils import InvalidDataError, PreconditionError
from core.models.strategy import StrategyLibrary
from datagen import Dataset, RewardTable

logger = logging.getLogger(__name__)

DEFAULT_EPS = 1e-4


@dataclasses.dataclass(frozen=True)
class BipartiteGraph:
    """
    Edge (i, j) means strategy j solves instance i within eps_p and eps_d.
    """
    n_instances: int
    n_strategies: int
    adjacency: Tuple[Tuple[int, ...], ...]
    eps_p: float
    eps_d: float

    @property
    def instance_degree(self) -> np.ndarray:
        degree = np.zeros(self.n_instances, dtype=np.int64)
        for covered in self.adjacency:
            degree[list(covered)] += 1
        return degree

    @property
    def uncovered(self) -> List[int]:
        """
        Instances without any edge.
        """
        return [int(i) for i in np.flatnonzero(self.instance_degree == 0)]

    @property
    def n_edges(self) -> int:
        return sum(len(item) for item in self.adjacency)

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((i, j) for j, covered in enumerate(self.adjacency) for i in covered)

    def bitsets(self) -> List[int]:
        return [sum(1 << i for i in covered) for covered in self.adjacency]


def build_bipartite(ds: Dataset | RewardTable, eps_p: float = DEFAULT_EPS, eps_d: float = DEFAULT_EPS) -> BipartiteGraph:
    """
    Builds the bipartite graph from a complete reward table.
    """
    table = ds.reward_table if isinstance(ds, Dataset) else ds
    if table is None or not table.complete:
        raise PreconditionError("reward table incomplete")
    mask = (table.p <= eps_p) & (table.d <= eps_d)
    n_instances, n_strategies = table.shape
    graph = BipartiteGraph(
        n_instances=n_instances,
        n_strategies=n_strategies,
        adjacency=tuple(tuple(int(i) for i in np.flatnonzero(mask[:, j])) for j in range(n_strategies)),
        eps_p=eps_p,
        eps_d=eps_d
    )
    uncovered = graph.uncovered
    if uncovered:
        logger.warning(
            "%d instances have no edge at eps_p=%g, eps_d=%g (first: %s).",
            len(uncovered), eps_p, eps_d, uncovered[:10]
        )
    return graph


def greedy_cover_indices(graph: BipartiteGraph) -> List[int]:
    """
    Repeatedly picks the strategy covering the most uncovered instances (lowest index on ties).
    """
    if graph.uncovered:
        raise PreconditionError(
            f"{len(graph.uncovered)} instances cannot be covered by any strategy: {graph.uncovered[:10]}"
        )
    sets = graph.bitsets()
    uncovered = (1 << graph.n_instances) - 1
    selected = []
    while uncovered:
        gains = [(item & uncovered).bit_count() for item in sets]
        j = int(np.argmax(gains))
        selected.append(j)
        uncovered &= ~sets[j]
    return selected


def greedy_set_cover(graph: BipartiteGraph, library: StrategyLibrary) -> StrategyLibrary:
    if len(library) != graph.n_strategies:
        raise InvalidDataError(
            f"Graph has {graph.n_strategies} strategies but the library holds {len(library)}."
        )
    selected = greedy_cover_indices(graph)
    logger.info("Set cover selected %d of %d strategies.", len(selected), len(library))
    return library.subset(selected)


@dataclasses.dataclass(frozen=True)
class CoverageReport:
    counts: Tuple[int, ...]
    fractions: Tuple[float, ...]
    mean_fraction: float
    max_fraction: float
    multi_cover_strategies: int

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def coverage_report(graph: BipartiteGraph, strategies: Sequence[int] | None = None) -> CoverageReport:
    """
    Per-strategy number and fraction of covered instances.
    """
    strategies = range(graph.n_strategies) if strategies is None else strategies
    counts = tuple(len(graph.adjacency[j]) for j in strategies)
    n = max(graph.n_instances, 1)
    fractions = tuple(item / n for item in counts)
    return CoverageReport(
        counts=counts,
        fractions=fractions,
        mean_fraction=float(np.mean(fractions)) if fractions else 0.0,
        max_fraction=max(fractions, default=0.0),
        multi_cover_strategies=sum(1 for item in counts if item >= 2)
    )


def cover_holds(graph: BipartiteGraph, selected: Sequence[int]) -> bool:
    sets = graph.bitsets()
    covered = 0
    for j in selected:
        covered |= sets[j]
    return covered == (1 << graph.n_instances) - 1


def prune_dataset(
        ds: Dataset,
        eps_p: float = DEFAULT_EPS,
        eps_d: float = DEFAULT_EPS
) -> Tuple[BipartiteGraph, StrategyLibrary]:
    graph = build_bipartite(ds, eps_p, eps_d)
    return graph, greedy_set_cover(graph, ds.library)
