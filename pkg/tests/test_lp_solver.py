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


__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import itertools
import pytest
import numpy as np
from scipy.optimize import linprog
from core.models.instance import build_instance
from core.models.solution import SolveStatus
from solvers.lp import solve_lp, tight_set


def test_small_lp(small_lp):
    result = solve_lp(small_lp)
    assert result.status == SolveStatus.optimal
    assert result.objective == pytest.approx(-2.8, abs=1e-9)
    assert result.x == pytest.approx([1.6, 1.2], abs=1e-9)
    assert tight_set(small_lp, result.x) == [0, 1]


def test_infeasible_lp():
    inst = build_instance(name="infeasible", c=[1.0], A_ub=[[1.0]], b_ub=[-1.0])
    result = solve_lp(inst)
    assert result.status == SolveStatus.infeasible
    assert result.objective == np.inf


def test_unbounded_lp():
    inst = build_instance(name="unbounded", c=[0.0, -1.0], A_ub=[[1.0, -1.0]], b_ub=[1.0])
    assert solve_lp(inst).status == SolveStatus.unbounded


def test_unbounded_without_rows():
    inst = build_instance(name="no-rows", c=[-1.0])
    assert solve_lp(inst).status == SolveStatus.unbounded


def test_equality_rows():
    inst = build_instance(
        name="eq", c=[1.0, 2.0], A_ub=[[1.0, -1.0]], b_ub=[0.0], A_eq=[[1.0, 1.0]], b_eq=[2.0]
    )
    result = solve_lp(inst)
    assert result.is_optimal
    assert result.x == pytest.approx([1.0, 1.0], abs=1e-9)
    assert result.objective == pytest.approx(3.0, abs=1e-9)
    assert tight_set(inst, result.x) == [0, 1]


def test_free_variable():
    inst = build_instance(name="free", c=[1.0], A_ub=[[-1.0]], b_ub=[3.0], bounds=[(None, None)])
    result = solve_lp(inst)
    assert result.is_optimal
    assert result.x[0] == pytest.approx(-3.0, abs=1e-9)


def test_upper_bounded_variable():
    inst = build_instance(name="upper", c=[-1.0, 1.0], bounds=[(None, 2.5), (-1.0, 1.0)])
    result = solve_lp(inst)
    assert result.is_optimal
    assert result.x == pytest.approx([2.5, -1.0], abs=1e-9)


def test_bound_overrides(small_lp):
    result = solve_lp(small_lp, lo=np.array([0.0, 0.0]), hi=np.array([1.0, 1.0]))
    assert result.objective == pytest.approx(-2.0, abs=1e-9)
    assert solve_lp(small_lp, lo=np.array([2.0, 0.0]), hi=np.array([1.0, 1.0])).status == SolveStatus.infeasible


def test_fixed_variables(small_lp):
    result = solve_lp(small_lp, lo=np.array([1.0, 0.0]), hi=np.array([1.0, np.inf]))
    assert result.x == pytest.approx([1.0, 1.5], abs=1e-9)


def test_degenerate_lp_terminates():
    # Classic cycling example for the textbook pivoting rule.
    inst = build_instance(
        name="degenerate",
        c=[-0.75, 20.0, -0.5, 6.0],
        A_ub=[[0.25, -8.0, -1.0, 9.0], [0.5, -12.0, -0.5, 3.0], [0.0, 0.0, 1.0, 0.0]],
        b_ub=[0.0, 0.0, 1.0]
    )
    result = solve_lp(inst)
    assert result.is_optimal
    assert result.objective == pytest.approx(-1.25, abs=1e-9)


def test_redundant_equalities():
    inst = build_instance(
        name="redundant", c=[1.0, 1.0], A_eq=[[1.0, 1.0], [2.0, 2.0]], b_eq=[2.0, 4.0]
    )
    result = solve_lp(inst)
    assert result.is_optimal
    assert result.objective == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("seed", range(15))
def test_matches_reference_solver(seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(2, 8)), int(rng.integers(2, 8))
    A = rng.integers(-5, 6, size=(m, n)).astype(np.float64)
    point = rng.uniform(0.0, 5.0, size=n)
    b = A @ point + rng.uniform(0.0, 2.0, size=m)
    c = rng.integers(-10, 11, size=n).astype(np.float64)
    inst = build_instance(name=f"lp-{seed}", c=c, A_ub=A, b_ub=b, bounds=[(0.0, 10.0)] * n)
    expected = linprog(c, A_ub=A, b_ub=b, bounds=[(0.0, 10.0)] * n, method="highs")
    result = solve_lp(inst)
    assert result.is_optimal
    assert result.objective == pytest.approx(expected.fun, abs=1e-6)
    assert np.all(inst.activity(result.x) <= inst.b + 1e-9)


def _best_vertex(G: np.ndarray, h: np.ndarray, c: np.ndarray) -> float:
    """
    Minimum of c over all basic feasible points of G x <= h, found by solving every n-row subsystem.
    """
    n = G.shape[1]
    best = np.inf
    for rows in itertools.combinations(range(G.shape[0]), n):
        rows = list(rows)
        if abs(np.linalg.det(G[rows])) < 1e-9:
            continue
        x = np.linalg.solve(G[rows], h[rows])
        if np.all(G @ x <= h + 1e-9):
            best = min(best, float(c @ x))
    return best


@pytest.mark.parametrize("seed", range(50))
def test_matches_vertex_enumeration(seed):
    rng = np.random.default_rng(1000 + seed)
    n, m = int(rng.integers(2, 5)), int(rng.integers(1, 7))
    A = rng.integers(-5, 6, size=(m, n)).astype(np.float64)
    b = A @ rng.integers(0, 6, size=n) + rng.integers(0, 4, size=m)
    c = rng.integers(-10, 11, size=n).astype(np.float64)
    G = np.vstack([A, np.eye(n), -np.eye(n)])
    h = np.concatenate([b, np.full(n, 10.0), np.zeros(n)])
    result = solve_lp(build_instance(name=f"vertex-{seed}", c=c, A_ub=A, b_ub=b, bounds=[(0.0, 10.0)] * n))
    assert result.is_optimal
    assert result.objective == pytest.approx(_best_vertex(G, h, c), abs=1e-8)
