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
import dataclasses
import logging
import numpy as np
from typing import Sequence, Tuple
from core.utils import InvalidDataError, PreconditionError
from core.models.instance import MILPInstance, RowSense
from core.models.solution import LPResult, Solution, SolveStatus
from core.models.strategy import Strategy
from solvers.lp import EPS_TIGHT, solve_lp, tight_set
from solvers.milp import BnBConfig, solve_milp
from .scoring import EvalRecord, ReducedStatus, infeasibility, reward, suboptimality

logger = logging.getLogger(__name__)

OBJECTIVE_CUT_TOL = 1e-10


def extract_strategy(inst: MILPInstance, sol: Solution, eps_tight: float = EPS_TIGHT) -> Strategy:
    """
    Reads the strategy (tight rows, rounded integer values) off an optimal solution.
    """
    if not sol.is_optimal or sol.x is None:
        raise PreconditionError(f"Cannot extract a strategy from a solution with status {sol.status.value}.")
    continuous = inst.continuous_index
    if not inst.bounds_materialized and np.isfinite(np.concatenate([inst.lo[continuous], inst.hi[continuous]])).any():
        logger.warning(
            "Instance %s has finite continuous bounds that are not rows. Active bounds cannot enter the tight set "
            "and the strategy may not reproduce the solution.", inst.name
        )
    values = np.round(sol.x[inst.integer_index]).astype(np.int64)
    return Strategy.create(tight_set(inst, sol.x, eps_tight), values.tolist())


def check_strategy(inst: MILPInstance, s: Strategy):
    if any(i < 0 or i >= inst.m for i in s.tight_set):
        raise InvalidDataError(f"Strategy {s.key[:12]} references rows outside 0..{inst.m - 1}.")
    if len(s.integer_values) != inst.d:
        raise InvalidDataError(
            f"Strategy {s.key[:12]} has {len(s.integer_values)} integer values but the instance has {inst.d}."
        )


def _fixed_bounds(inst: MILPInstance, s: Strategy) -> Tuple[np.ndarray, np.ndarray]:
    lo = np.array(inst.lo)
    hi = np.array(inst.hi)
    values = np.asarray(s.integer_values, dtype=np.float64)
    lo[inst.integer_index] = values
    hi[inst.integer_index] = values
    return lo, hi


def reduced_instance(inst: MILPInstance, s: Strategy) -> MILPInstance:
    """
    The LP keeping only the rows in the tight set, with the integer variables fixed. Rows keep their sense.
    """
    check_strategy(inst, s)
    rows = list(s.tight_set)
    lo, hi = _fixed_bounds(inst, s)
    return inst.replace(
        name=f"{inst.name}/reduced",
        A=inst.A[rows, :].reshape(len(rows), inst.n),
        b=inst.b[rows],
        row_sense=tuple(inst.row_sense[i] for i in rows),
        integer_index=np.zeros(0, dtype=np.int64),
        lo=lo,
        hi=hi,
        row_names=tuple(inst.row_label(i) for i in rows) if inst.row_names is not None else None,
        bounds_materialized=False
    )


def _is_tight(inst: MILPInstance, x: np.ndarray, rows: Sequence[int], eps_tight: float = EPS_TIGHT) -> bool:
    slack = inst.b[rows] - inst.activity(x)[rows]
    return bool(np.all(slack <= eps_tight * (1.0 + np.abs(inst.b[rows]))))


def tightest_optimum(reduced: MILPInstance, result: LPResult) -> LPResult:
    """
    Moves from an optimal point of the reduced LP to the optimal point with the least total slack over the
    kept LE rows. If the strategy was read off a vertex, that vertex is the unique optimal point where every kept
    row holds with equality, so alternate optima of the reduced LP cannot replace it.
    :param reduced: The reduced LP, as returned by reduced_instance.
    :param result: An optimal result of reduced.
    """
    rows = [i for i, sense in enumerate(reduced.row_sense) if sense == RowSense.le]
    if not rows or _is_tight(reduced, result.x, rows):
        return result
    cut = result.objective + OBJECTIVE_CUT_TOL * (1.0 + abs(result.objective))
    second = solve_lp(reduced.replace(
        c=-reduced.A[rows].sum(axis=0),
        A=np.vstack([reduced.A, reduced.c[None, :]]),
        b=np.append(reduced.b, cut),
        row_sense=reduced.row_sense + (RowSense.le,),
        row_names=reduced.row_names + ("objective_cut",) if reduced.row_names is not None else None
    ))
    if not second.is_optimal:
        logger.debug("Slack minimization on %s ended with %s.", reduced.name, second.status.value)
        return result
    x = np.array(second.x)
    return LPResult(
        status=SolveStatus.optimal,
        x=x,
        objective=reduced.objective(x),
        row_activity=reduced.activity(x),
        iterations=result.iterations + second.iterations
    )


def elastic_solve(inst: MILPInstance, s: Strategy) -> LPResult | None:
    """
    Minimizes the largest violation t of the tight rows with the integer variables fixed. Returns None if even
    this problem has no solution.
    """
    check_strategy(inst, s)
    n = inst.n
    rows = []
    rhs = []
    for i in s.tight_set:
        rows.append(np.append(inst.A[i], -1.0))
        rhs.append(inst.b[i])
        if inst.row_sense[i] == RowSense.eq:
            rows.append(np.append(-inst.A[i], -1.0))
            rhs.append(-inst.b[i])
    lo, hi = _fixed_bounds(inst, s)
    c = np.zeros(n + 1)
    c[n] = 1.0
    elastic = MILPInstance(
        name=f"{inst.name}/elastic",
        c=c,
        A=np.array(rows).reshape(len(rows), n + 1),
        b=rhs,
        row_sense=(RowSense.le,) * len(rows),
        integer_index=[],
        lo=np.append(lo, 0.0),
        hi=np.append(hi, np.inf)
    )
    result = solve_lp(elastic)
    if not result.is_optimal:
        return None
    x = np.array(result.x[:n])
    return LPResult(
        status=result.status,
        x=x,
        objective=inst.objective(x),
        row_activity=inst.activity(x),
        iterations=result.iterations
    )


@dataclasses.dataclass(frozen=True)
class ReducedSolve:
    """
    Outcome of the reduced LP of one strategy, after the elastic fallback if that was needed.
    """
    result: LPResult
    status: ReducedStatus
    solve_time_s: float
    iterations: int

    @property
    def has_solution(self) -> bool:
        return self.result.is_optimal


def solve_reduced(inst: MILPInstance, s: Strategy) -> ReducedSolve:
    """
    Solves the reduced LP of s, preferring the optimal point where the kept rows are tight, and falls back to the
    elastic problem when the reduced LP is infeasible.
    """
    start = time.perf_counter()
    reduced = reduced_instance(inst, s)
    result = solve_lp(reduced)
    if result.is_optimal:
        result = tightest_optimum(reduced, result)
    status = ReducedStatus.optimal
    iterations = result.iterations
    if result.status == SolveStatus.infeasible:
        elastic = elastic_solve(inst, s)
        if elastic is not None:
            result = elastic
            status = ReducedStatus.elastic
            iterations += elastic.iterations
    if not result.is_optimal:
        status = ReducedStatus.infeasible
    return ReducedSolve(
        result=result, status=status, solve_time_s=time.perf_counter() - start, iterations=iterations
    )


def score_reduced(inst: MILPInstance, reduced: ReducedSolve, f_star: float) -> Tuple[Solution, EvalRecord]:
    """
    Scores a reduced solve against all rows of inst and the optimal objective f_star.
    """
    if not reduced.has_solution:
        return (
            Solution(x=None, objective=np.inf, status=SolveStatus.infeasible, solve_time_s=reduced.solve_time_s),
            EvalRecord.infeasible(reduced.solve_time_s, reduced.iterations)
        )
    x = np.array(reduced.result.x)
    f_hat = inst.objective(x)
    p = infeasibility(inst, x)
    d = suboptimality(f_hat, f_star)
    record = EvalRecord(
        p=p,
        d=d,
        r=reward(p, d),
        reduced_status=reduced.status,
        solve_time_s=reduced.solve_time_s,
        iterations=reduced.iterations
    )
    return Solution(x=x, objective=f_hat, status=SolveStatus.optimal, solve_time_s=reduced.solve_time_s), record


def apply_strategy(
        inst: MILPInstance,
        s: Strategy,
        f_star: float | None = None,
        cfg: BnBConfig | None = None
) -> Tuple[Solution, EvalRecord]:
    """
    Solves the reduced LP of s on inst and scores the result against all rows of inst.
    :param inst: The instance.
    :param s: The strategy to apply.
    :param f_star: Optimal objective of inst. Computed with solve_milp if omitted.
    :param cfg: Branch-and-bound configuration used when f_star must be computed.
    """
    reduced = solve_reduced(inst, s)
    if reduced.has_solution and f_star is None:
        reference = solve_milp(inst, cfg)
        if not reference.is_optimal:
            raise PreconditionError(f"Instance {inst.name} has no optimal solution ({reference.status.value}).")
        f_star = reference.objective
    return score_reduced(inst, reduced, f_star)
