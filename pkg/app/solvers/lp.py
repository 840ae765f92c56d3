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
Two-phase revised simplex method. Returns basic feasible (vertex) solutions, which is what tight-set extraction
relies on.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import logging
import dataclasses
import numpy as np
import scipy.linalg
from typing import List, Tuple
from core.utils import SolverError
from core.models.instance import MILPInstance, RowSense
from core.models.solution import LPResult, SolveStatus

logger = logging.getLogger(__name__)

EPS_TIGHT = 1e-9
PRICING_TOL = 1e-9
PIVOT_TOL = 1e-9
RATIO_TIE_TOL = 1e-12
REFACTOR_PERIOD = 50


class _BasisFactor:
    """
    LU factorization of the basis matrix with product-form (eta) updates between refactorizations.
    """

    def __init__(self, A: np.ndarray, basis: List[int]):
        self._A = A
        self.refactor(basis)

    def refactor(self, basis: List[int]):
        B = self._A[:, basis]
        self._lu = scipy.linalg.lu_factor(B, check_finite=False)
        diagonal = np.abs(np.diag(self._lu[0]))
        if diagonal.size and diagonal.min() <= 1e-12 * max(1.0, diagonal.max()):
            raise SolverError("Simplex basis became singular.")
        self._etas: List[Tuple[int, np.ndarray]] = []

    @property
    def updates(self) -> int:
        return len(self._etas)

    def ftran(self, a: np.ndarray) -> np.ndarray:
        x = scipy.linalg.lu_solve(self._lu, a, check_finite=False)
        for r, eta in self._etas:
            xr = x[r]
            if xr != 0.0:
                x += xr * eta
        return x

    def btran(self, c: np.ndarray) -> np.ndarray:
        v = np.array(c, dtype=np.float64)
        for r, eta in reversed(self._etas):
            v[r] += eta @ v
        return scipy.linalg.lu_solve(self._lu, v, trans=1, check_finite=False)

    def update(self, r: int, d: np.ndarray):
        eta = -d / d[r]
        eta[r] = 1.0 / d[r] - 1.0
        self._etas.append((r, eta))


@dataclasses.dataclass
class _StandardForm:
    """
    min cost.y s.t. A y = rhs, y >= 0, with x = x0 + sum(sign * y_col) over the structural columns.
    """
    A: np.ndarray
    rhs: np.ndarray
    cost: np.ndarray
    artificial: np.ndarray
    basis: List[int]
    x0: np.ndarray
    columns: List[Tuple[int, float]]


def _standard_form(inst: MILPInstance, lo: np.ndarray, hi: np.ndarray) -> _StandardForm:
    n = inst.n
    x0 = np.zeros(n)
    columns: List[Tuple[int, float]] = []
    box_rows: List[Tuple[int, float]] = []
    for j in range(n):
        if np.isfinite(lo[j]) and np.isfinite(hi[j]) and lo[j] == hi[j]:
            x0[j] = lo[j]
        elif np.isfinite(lo[j]):
            x0[j] = lo[j]
            columns.append((j, 1.0))
            if np.isfinite(hi[j]):
                box_rows.append((len(columns) - 1, hi[j] - lo[j]))
        elif np.isfinite(hi[j]):
            x0[j] = hi[j]
            columns.append((j, -1.0))
        else:
            columns.append((j, 1.0))
            columns.append((j, -1.0))
    k = len(columns)
    T = np.zeros((n, k))
    for col, (j, sign) in enumerate(columns):
        T[j, col] = sign
    rows = inst.A @ T if k else np.zeros((inst.m, 0))
    rhs = inst.b - inst.A @ x0
    senses = list(inst.row_sense)
    if box_rows:
        extra = np.zeros((len(box_rows), k))
        for i, (col, width) in enumerate(box_rows):
            extra[i, col] = 1.0
        rows = np.vstack([rows, extra])
        rhs = np.concatenate([rhs, [width for _, width in box_rows]])
        senses += [RowSense.le] * len(box_rows)
    m = rows.shape[0]
    n_slack = sum(1 for item in senses if item == RowSense.le)
    slack = np.zeros((m, n_slack))
    basis: List[int] = [-1] * m
    s = 0
    for i, sense in enumerate(senses):
        if sense == RowSense.le:
            slack[i, s] = 1.0
            if rhs[i] >= 0:
                basis[i] = k + s
            s += 1
        if rhs[i] < 0:
            rows[i] *= -1.0
            slack[i] *= -1.0
            rhs[i] *= -1.0
    need_artificial = [i for i in range(m) if basis[i] < 0]
    artificial_cols = np.zeros((m, len(need_artificial)))
    for a, i in enumerate(need_artificial):
        artificial_cols[i, a] = 1.0
        basis[i] = k + n_slack + a
    A = np.hstack([rows, slack, artificial_cols])
    cost = np.zeros(A.shape[1])
    cost[:k] = [inst.c[j] * sign for j, sign in columns]
    artificial = np.zeros(A.shape[1], dtype=bool)
    artificial[k + n_slack:] = True
    return _StandardForm(A=A, rhs=rhs, cost=cost, artificial=artificial, basis=basis, x0=x0, columns=columns)


def _simplex(
        A: np.ndarray,
        rhs: np.ndarray,
        cost: np.ndarray,
        basis: List[int],
        allowed: np.ndarray,
        max_iterations: int,
        iterations: int
) -> Tuple[SolveStatus, List[int], np.ndarray, int]:
    """
    Primal simplex from a feasible basis. Dantzig pricing; Bland's rule after 3 * (n + m) consecutive degenerate
    pivots.
    """
    m, N = A.shape
    factor = _BasisFactor(A, basis)
    x_B = factor.ftran(rhs)
    bland = False
    degenerate = 0
    bland_after = 3 * (N + m)
    while True:
        if iterations >= max_iterations:
            raise SolverError(f"Simplex iteration limit of {max_iterations} reached.")
        y = factor.btran(cost[basis])
        reduced = cost - y @ A
        candidate = allowed.copy()
        candidate[basis] = False
        candidate &= reduced < -PRICING_TOL
        if not candidate.any():
            return SolveStatus.optimal, basis, x_B, iterations
        indices = np.flatnonzero(candidate)
        q = int(indices[0]) if bland else int(indices[np.argmin(reduced[indices])])
        d = factor.ftran(A[:, q])
        rows = np.flatnonzero(d > PIVOT_TOL)
        if rows.size == 0:
            return SolveStatus.unbounded, basis, x_B, iterations
        ratios = np.maximum(x_B[rows], 0.0) / d[rows]
        theta = ratios.min()
        ties = rows[ratios <= theta + RATIO_TIE_TOL]
        if bland:
            r = int(min(ties, key=lambda i: basis[i]))
        else:
            r = int(ties[np.argmax(d[ties])])
        x_B = x_B - theta * d
        x_B[r] = theta
        basis[r] = q
        iterations += 1
        if theta <= RATIO_TIE_TOL:
            degenerate += 1
            if not bland and degenerate > bland_after:
                logger.debug("Switching to Bland's rule after %d degenerate pivots.", degenerate)
                bland = True
        else:
            degenerate = 0
        factor.update(r, d)
        if factor.updates >= REFACTOR_PERIOD:
            factor.refactor(basis)
            x_B = factor.ftran(rhs)


def _drive_out_artificials(form: _StandardForm, basis: List[int]) -> List[int]:
    """
    Pivots basic artificial variables (at value zero) out of the basis. Rows of redundant equalities keep their
    artificial, which then stays at zero.
    """
    factor = _BasisFactor(form.A, basis)
    for r in range(len(basis)):
        if not form.artificial[basis[r]]:
            continue
        unit = np.zeros(len(basis))
        unit[r] = 1.0
        row = factor.btran(unit) @ form.A
        candidate = ~form.artificial
        candidate[basis] = False
        candidate &= np.abs(row) > PIVOT_TOL
        if not candidate.any():
            continue
        indices = np.flatnonzero(candidate)
        q = int(indices[np.argmax(np.abs(row[indices]))])
        d = factor.ftran(form.A[:, q])
        basis[r] = q
        factor.update(r, d)
        if factor.updates >= REFACTOR_PERIOD:
            factor.refactor(basis)
    return basis


def _result(
        inst: MILPInstance,
        status: SolveStatus,
        iterations: int,
        x: np.ndarray | None = None
) -> LPResult:
    if status != SolveStatus.optimal or x is None:
        objective = np.inf if status == SolveStatus.infeasible else -np.inf
        return LPResult(
            status=status,
            x=np.full(inst.n, np.nan),
            objective=objective,
            row_activity=np.full(inst.m, np.nan),
            iterations=iterations
        )
    return LPResult(
        status=status,
        x=x,
        objective=inst.objective(x),
        row_activity=inst.activity(x),
        iterations=iterations
    )


def solve_lp(
        inst: MILPInstance,
        lo: np.ndarray | None = None,
        hi: np.ndarray | None = None,
        max_iterations: int | None = None
) -> LPResult:
    """
    Solves the continuous relaxation of inst (integrality is ignored).
    :param inst: The instance.
    :param lo: Optional lower bounds overriding inst.lo (used by branch-and-bound nodes).
    :param hi: Optional upper bounds overriding inst.hi.
    :param max_iterations: Pivot limit; exceeding it raises SolverError.
    :return: A vertex-optimal solution or an INFEASIBLE/UNBOUNDED status.
    """
    lo = np.asarray(inst.lo if lo is None else lo, dtype=np.float64)
    hi = np.asarray(inst.hi if hi is None else hi, dtype=np.float64)
    if np.any(lo > hi):
        return _result(inst, SolveStatus.infeasible, 0)
    form = _standard_form(inst, lo, hi)
    m, N = form.A.shape
    k = len(form.columns)
    if max_iterations is None:
        max_iterations = 50 * (m + N) + 1000
    if m == 0:
        if np.any(form.cost < -PRICING_TOL):
            return _result(inst, SolveStatus.unbounded, 0)
        return _result(inst, SolveStatus.optimal, 0, form.x0.copy())
    basis = list(form.basis)
    iterations = 0
    if form.artificial.any():
        phase_one_cost = form.artificial.astype(np.float64)
        allowed = np.ones(N, dtype=bool)
        _, basis, x_B, iterations = _simplex(
            form.A, form.rhs, phase_one_cost, basis, allowed, max_iterations, iterations
        )
        infeasibility = float(phase_one_cost[basis] @ x_B)
        if infeasibility > 1e-9 * (1.0 + float(np.abs(form.rhs).max())):
            return _result(inst, SolveStatus.infeasible, iterations)
        basis = _drive_out_artificials(form, basis)
    allowed = ~form.artificial
    status, basis, x_B, iterations = _simplex(
        form.A, form.rhs, form.cost, basis, allowed, max_iterations, iterations
    )
    if status != SolveStatus.optimal:
        return _result(inst, status, iterations)
    # Fresh solve of the final basis for accuracy.
    x_B = _BasisFactor(form.A, basis).ftran(form.rhs)
    y = np.zeros(N)
    y[basis] = x_B
    x = form.x0.copy()
    for col, (j, sign) in enumerate(form.columns):
        x[j] += sign * y[col]
    return _result(inst, SolveStatus.optimal, iterations, x)


def tight_set(inst: MILPInstance, x: np.ndarray, eps_tight: float = EPS_TIGHT) -> List[int]:
    """
    Returns the sorted indices of rows that hold with equality at x, always including EQ rows.
    """
    residual = np.abs(inst.activity(x) - inst.b)
    active = residual <= eps_tight * (1.0 + np.abs(inst.b))
    for i in inst.eq_rows:
        active[i] = True
    return [int(i) for i in np.flatnonzero(active)]
