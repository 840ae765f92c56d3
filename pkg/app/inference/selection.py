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
Top-k candidate generation and selection of the candidate with the lowest infeasibility.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import math
import logging
import dataclasses
import numpy as np
from typing import List, Sequence, Tuple
from core.utils import InvalidDataError
from core.utils.workers import parallel_map
from core.models.instance import MILPInstance
from core.models.solution import Solution, SolveStatus
from core.models.strategy import Strategy, StrategyLibrary
from reduction import EvalRecord, ReducedSolve, score_reduced, solve_reduced

logger = logging.getLogger(__name__)

P_TIE_TOL = 1e-9


def top_k(predictions: Sequence[float], k: int) -> List[int]:
    """
    Indices of the k largest predictions in descending order, lower index first on ties.
    """
    predictions = np.asarray(predictions, dtype=np.float64)
    if not 1 <= k <= len(predictions):
        raise InvalidDataError(f"k must be between 1 and {len(predictions)} but is {k}.")
    return [int(j) for j in np.argsort(-predictions, kind="stable")[:k]]


@dataclasses.dataclass(frozen=True)
class Selection:
    """
    The chosen candidate. Without a reference objective, d and r of the record are NaN.
    """
    index: int
    strategy: Strategy
    solution: Solution
    record: EvalRecord
    candidates: Tuple[int, ...]
    all_infeasible: bool = False

    @property
    def solve_time_s(self) -> float:
        return self.record.solve_time_s


def _solve_candidate(task: Tuple[MILPInstance, Strategy]) -> ReducedSolve:
    inst, strategy = task
    return solve_reduced(inst, strategy)


def _score_without_reference(inst: MILPInstance, reduced: ReducedSolve) -> Tuple[Solution, EvalRecord]:
    solution, record = score_reduced(inst, reduced, f_star=math.nan)
    if not reduced.has_solution:
        return solution, record
    return solution, dataclasses.replace(record, d=math.nan, r=math.nan)


def select_strategy(
        inst: MILPInstance,
        candidates: Sequence[int],
        library: StrategyLibrary,
        f_star: float | None = None,
        workers: int = 1
) -> Selection:
    """
    Applies every candidate strategy and keeps the one with the lowest infeasibility. Infeasibilities within
    P_TIE_TOL of the lowest count as ties, which are broken by the lower suboptimality (or the lower objective
    when f_star is unknown) and then by the lower library index.
    :param inst: The instance, with materialized bounds.
    :param candidates: Library indices, usually from top_k.
    :param library: The strategy library.
    :param f_star: Optimal objective of inst if known.
    :param workers: Number of processes evaluating candidates concurrently.
    """
    candidates = tuple(int(j) for j in candidates)
    if not candidates:
        raise InvalidDataError("Strategy selection needs at least one candidate.")
    reduced = parallel_map(_solve_candidate, [(inst, library[j]) for j in candidates], workers)
    scored = []
    for j, item in zip(candidates, reduced):
        if f_star is None:
            solution, record = _score_without_reference(inst, item)
            tie_break = solution.objective
        else:
            solution, record = score_reduced(inst, item, f_star)
            tie_break = record.d
        scored.append(((tie_break, j), j, solution, record))
    feasible = [item for item in scored if item[3].has_solution]
    total_time = sum(item.solve_time_s for item in reduced)
    if not feasible:
        logger.debug("None of the %d candidates yields a solution for %s.", len(candidates), inst.name)
        return Selection(
            index=candidates[0],
            strategy=library[candidates[0]],
            solution=Solution(x=None, objective=math.inf, status=SolveStatus.infeasible, solve_time_s=total_time),
            record=EvalRecord.infeasible(total_time, sum(item.iterations for item in reduced)),
            candidates=candidates,
            all_infeasible=True
        )
    p_min = min(item[3].p for item in feasible)
    tied = [item for item in feasible if item[3].p <= p_min + P_TIE_TOL]
    _, j, solution, record = min(tied, key=lambda item: item[0])
    return Selection(
        index=j,
        strategy=library[j],
        solution=solution,
        record=dataclasses.replace(record, solve_time_s=total_time),
        candidates=candidates
    )
