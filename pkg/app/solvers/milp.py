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

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import time
import heapq
import logging
import itertools
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from core.utils import BudgetExceededError
from core.models.instance import MILPInstance
from core.models.solution import LPResult, Solution, SolveStatus
from .lp import solve_lp

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_INTEGERS = 10
EXHAUSTIVE_MAX_WIDTH = 4


class BnBConfig(BaseModel):
    """
    Limits and tolerances of the branch-and-bound solver.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")
    integrality_tol: float = Field(default=1e-6, gt=0)
    abs_gap: float = Field(default=1e-9, gt=0)
    node_limit: int = Field(default=10 ** 6, gt=0)
    time_limit_s: float = Field(default=300.0, gt=0)


def _empty(status: SolveStatus, nodes: int, start: float) -> Solution:
    objective = -np.inf if status == SolveStatus.unbounded else np.inf
    return Solution(
        x=None,
        objective=objective,
        status=status,
        nodes=nodes,
        solve_time_s=time.perf_counter() - start
    )


def _polish(inst: MILPInstance, x: np.ndarray) -> np.ndarray:
    """
    Rounds the integer entries and re-solves the continuous slice so that the returned point is a vertex with
    exact integers.
    """
    index = inst.integer_index
    values = np.round(x[index])
    lo = np.array(inst.lo)
    hi = np.array(inst.hi)
    lo[index] = values
    hi[index] = values
    result = solve_lp(inst, lo=lo, hi=hi)
    if result.is_optimal:
        polished = np.array(result.x)
    else:
        logger.warning("Polishing solve of %s returned %s; keeping the rounded incumbent.", inst.name, result.status)
        polished = np.array(x)
    polished[index] = values
    return polished


def _most_fractional(x: np.ndarray, index: np.ndarray, tol: float) -> int | None:
    best = None
    best_distance = tol
    for j in index:
        distance = abs(x[j] - np.round(x[j]))
        if distance > best_distance:
            best = int(j)
            best_distance = distance
    return best


def solve_milp(inst: MILPInstance, cfg: BnBConfig | None = None) -> Solution:
    """
    Solves inst to global optimality by best-bound branch-and-bound on the most fractional variable.
    :param inst: The instance.
    :param cfg: Tolerances and limits.
    :return: The optimal solution, or the incumbent (if any) with status LIMIT.
    """
    cfg = cfg or BnBConfig()
    start = time.perf_counter()
    root = solve_lp(inst)
    if not root.is_optimal:
        return _empty(root.status, 1, start)
    counter = itertools.count()
    heap = [(root.objective, next(counter), np.array(inst.lo), np.array(inst.hi), root)]
    incumbent: np.ndarray | None = None
    incumbent_objective = np.inf
    nodes = 0
    status = SolveStatus.optimal
    while heap:
        if nodes >= cfg.node_limit or time.perf_counter() - start > cfg.time_limit_s:
            status = SolveStatus.limit
            break
        bound, _, lo, hi, result = heapq.heappop(heap)
        if bound >= incumbent_objective - cfg.abs_gap:
            # Best-bound order: no remaining node can improve the incumbent.
            break
        nodes += 1
        j = _most_fractional(result.x, inst.integer_index, cfg.integrality_tol)
        if j is None:
            incumbent = np.array(result.x)
            incumbent_objective = result.objective
            logger.debug("New incumbent %.10g at node %d.", incumbent_objective, nodes)
            continue
        value = result.x[j]
        down_hi = np.array(hi)
        down_hi[j] = np.floor(value)
        up_lo = np.array(lo)
        up_lo[j] = np.ceil(value)
        for child_lo, child_hi in ((lo, down_hi), (up_lo, hi)):
            child = solve_lp(inst, lo=child_lo, hi=child_hi)
            if child.is_optimal and child.objective < incumbent_objective - cfg.abs_gap:
                heapq.heappush(heap, (child.objective, next(counter), child_lo, child_hi, child))
    if incumbent is None:
        if status == SolveStatus.limit:
            return _empty(SolveStatus.limit, nodes, start)
        return _empty(SolveStatus.infeasible, nodes, start)
    x = _polish(inst, incumbent)
    return Solution(
        x=x,
        objective=inst.objective(x),
        status=status,
        nodes=nodes,
        solve_time_s=time.perf_counter() - start
    )


def solve_milp_exhaustive(inst: MILPInstance) -> Solution:
    """
    Enumerates every integer assignment and solves the remaining LP for each. Ground truth for solve_milp on
    small instances.
    """
    start = time.perf_counter()
    index = inst.integer_index
    if len(index) > EXHAUSTIVE_MAX_INTEGERS:
        raise BudgetExceededError(
            f"Exhaustive enumeration supports at most {EXHAUSTIVE_MAX_INTEGERS} integer variables "
            f"but {inst.name} has {len(index)}."
        )
    ranges = []
    for j in index:
        lo, hi = inst.lo[j], inst.hi[j]
        if not (np.isfinite(lo) and np.isfinite(hi)) or hi - lo > EXHAUSTIVE_MAX_WIDTH:
            raise BudgetExceededError(
                f"Integer variable {inst.col_label(int(j))} needs finite bounds with a width of at most "
                f"{EXHAUSTIVE_MAX_WIDTH}."
            )
        ranges.append(range(int(np.ceil(lo)), int(np.floor(hi)) + 1))
    best: LPResult | None = None
    unbounded = False
    count = 0
    for assignment in itertools.product(*ranges):
        count += 1
        lo = np.array(inst.lo)
        hi = np.array(inst.hi)
        lo[index] = assignment
        hi[index] = assignment
        result = solve_lp(inst, lo=lo, hi=hi)
        if result.status == SolveStatus.unbounded:
            unbounded = True
        elif result.is_optimal and (best is None or result.objective < best.objective):
            best = result
    if unbounded:
        return _empty(SolveStatus.unbounded, count, start)
    if best is None:
        return _empty(SolveStatus.infeasible, count, start)
    x = np.array(best.x)
    x[index] = np.round(x[index])
    return Solution(
        x=x,
        objective=inst.objective(x),
        status=SolveStatus.optimal,
        nodes=count,
        solve_time_s=time.perf_counter() - start
    )
