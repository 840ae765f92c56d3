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

import math
import pytest
import numpy as np
from core.utils import InvalidDataError, PreconditionError
from core.models.instance import build_instance, materialize_bounds
from core.models.family import sample_instance
from core.models.solution import LPResult, Solution, SolveStatus
from core.models.strategy import Strategy
from datagen import prepare_family
from reduction import (
    EPS_R, R_MIN, EvalRecord, ReducedStatus, apply_strategy, elastic_solve, extract_strategy, infeasibility,
    reduced_instance, reward, solve_reduced, suboptimality, tightest_optimum
)
from families import build_fuel_cell_family
from solvers.milp import solve_milp
from solvers.oracle import random_milp


def test_reward():
    assert reward(0.0, 0.0) == pytest.approx(-math.log(EPS_R))
    assert reward(0.5, 0.5) == pytest.approx(0.0, abs=1e-9)
    assert reward(1e10, 0.0) == R_MIN
    assert reward(math.inf, math.inf) == R_MIN


def test_suboptimality():
    assert suboptimality(11.0, 10.0) == pytest.approx(0.1)
    assert suboptimality(-9.0, -10.0) == pytest.approx(0.1)
    assert suboptimality(1e-12, 0.0) == pytest.approx(1e-2)
    assert suboptimality(1e-6, 0.0) == pytest.approx(1e4)
    assert suboptimality(3e-16, 0.0) == 0.0
    assert suboptimality(100.0 + 1e-14, 100.0) == 0.0


def test_infeasibility(small_lp):
    assert infeasibility(small_lp, np.array([1.6, 1.2])) == pytest.approx(0.0, abs=1e-12)
    # row 1 violated by 3, normalized by max |b| = 6
    assert infeasibility(small_lp, np.array([3.0, 0.0])) == pytest.approx(0.5)


def test_infeasibility_counts_equalities_both_ways():
    inst = build_instance(name="eq", c=[1.0], A_eq=[[1.0]], b_eq=[2.0])
    assert infeasibility(inst, np.array([1.0])) == pytest.approx(0.5)
    assert infeasibility(inst, np.array([3.0])) == pytest.approx(0.5)


def test_extract_strategy(materialized_knapsack):
    solution = solve_milp(materialized_knapsack)
    strategy = extract_strategy(materialized_knapsack, solution)
    assert strategy.integer_values == (1, 1, 0)
    # capacity, UB of x0 and x1, LB of x2
    assert strategy.tight_set == (0, 1, 3, 6)


def test_extract_strategy_needs_optimal_solution(knapsack):
    solution = Solution(x=None, objective=math.inf, status=SolveStatus.infeasible)
    with pytest.raises(PreconditionError):
        extract_strategy(knapsack, solution)


def test_reduced_instance(materialized_knapsack):
    reduced = reduced_instance(materialized_knapsack, Strategy.create([0, 6], [1, 1, 0]))
    assert reduced.m == 2
    assert reduced.d == 0
    assert list(reduced.lo) == [1.0, 1.0, 0.0]
    assert list(reduced.hi) == [1.0, 1.0, 0.0]


def test_strategy_shape_is_checked(materialized_knapsack):
    with pytest.raises(InvalidDataError):
        reduced_instance(materialized_knapsack, Strategy.create([99], [1, 1, 0]))
    with pytest.raises(InvalidDataError):
        reduced_instance(materialized_knapsack, Strategy.create([0], [1, 1]))


def test_apply_own_strategy(materialized_knapsack):
    solution = solve_milp(materialized_knapsack)
    strategy = extract_strategy(materialized_knapsack, solution)
    recovered, record = apply_strategy(materialized_knapsack, strategy, f_star=solution.objective)
    assert record.reduced_status == ReducedStatus.optimal
    assert record.p <= 1e-9
    assert record.d <= 1e-9
    assert recovered.objective == pytest.approx(-9.0)


def test_apply_strategy_computes_reference(materialized_knapsack):
    # x = (1, 0, 1) is feasible but worse than the optimum -9
    _, record = apply_strategy(materialized_knapsack, Strategy.create([], [1, 0, 1]))
    assert record.p == 0.0
    assert record.d == pytest.approx(1.0 / 9.0)


def test_infeasible_strategy_uses_elastic_fallback(materialized_knapsack):
    # all three items exceed the capacity by one
    strategy = Strategy.create([0], [1, 1, 1])
    _, record = apply_strategy(materialized_knapsack, strategy, f_star=-9.0)
    assert record.reduced_status == ReducedStatus.elastic
    assert record.p == pytest.approx(1.0 / 5.0)
    assert elastic_solve(materialized_knapsack, strategy) is not None


def test_unbounded_reduced_model_gets_minimum_reward():
    inst = materialize_bounds(build_instance(
        name="open", c=[-1.0, 0.0], A_ub=[[1.0, 1.0]], b_ub=[4.0], integer_index=[1], bounds=[(0.0, None), (0.0, 1.0)]
    ))
    _, record = apply_strategy(inst, Strategy.create([], [0]), f_star=-4.0)
    assert not record.has_solution
    assert record.r == R_MIN
    assert record == EvalRecord.infeasible(record.solve_time_s, record.iterations)


def test_label_strategies_reproduce_the_optimum(fuel_cell_family):
    family = prepare_family(fuel_cell_family)
    for seed in range(5):
        inst = sample_instance(family, seed)
        solution = solve_milp(inst)
        assert solution.is_optimal
        _, record = apply_strategy(inst, extract_strategy(inst, solution), f_star=solution.objective)
        assert record.p <= 1e-9
        assert record.d <= 1e-9


@pytest.fixture
def flat_face():
    """
    min -x - y over x + y <= 2, x <= 1.5, y <= 1.5: every point of the segment from (0.5, 1.5) to (1.5, 0.5)
    is optimal. The strategy of the vertex (0.5, 1.5) keeps rows 0 and 2 only.
    """
    inst = materialize_bounds(build_instance(
        name="flat",
        c=[-1.0, -1.0, 0.0],
        A_ub=[[1.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        b_ub=[2.0, 1.5, 1.5],
        integer_index=[2],
        bounds=[(0.0, None), (0.0, None), (0.0, 1.0)]
    ))
    return inst, Strategy.create([0, 2], [0])


def test_tightest_optimum_leaves_alternate_optima(flat_face):
    inst, strategy = flat_face
    reduced = reduced_instance(inst, strategy)
    x = np.array([2.0, 0.0, 0.0])
    alternate = LPResult(
        status=SolveStatus.optimal, x=x, objective=-2.0, row_activity=reduced.activity(x), iterations=0
    )
    result = tightest_optimum(reduced, alternate)
    assert result.is_optimal
    assert result.x == pytest.approx([0.5, 1.5, 0.0], abs=1e-9)
    assert result.objective == pytest.approx(-2.0, abs=1e-9)


def test_tightest_optimum_keeps_tight_points(flat_face):
    inst, strategy = flat_face
    reduced = reduced_instance(inst, strategy)
    x = np.array([0.5, 1.5, 0.0])
    result = LPResult(status=SolveStatus.optimal, x=x, objective=-2.0, row_activity=reduced.activity(x), iterations=0)
    assert tightest_optimum(reduced, result) is result


def test_reduced_solve_recovers_the_vertex_of_the_strategy(flat_face):
    inst, strategy = flat_face
    reduced = solve_reduced(inst, strategy)
    assert reduced.status == ReducedStatus.optimal
    assert reduced.result.x == pytest.approx([0.5, 1.5, 0.0], abs=1e-9)
    _, record = apply_strategy(inst, strategy, f_star=-2.0)
    assert record.p <= 1e-9
    assert record.d <= 1e-9


def test_labels_reproduce_their_optimum_on_random_instances():
    failures = []
    for seed in range(200):
        inst = materialize_bounds(random_milp(np.random.default_rng(seed), name=f"random-{seed}"))
        solution = solve_milp(inst)
        assert solution.is_optimal, seed
        strategy = extract_strategy(inst, solution)
        _, record = apply_strategy(inst, strategy, f_star=solution.objective)
        if record.p > 1e-9 or record.d > 1e-9:
            failures.append((seed, record.p, record.d))
    assert failures == []


def test_labels_reproduce_their_optimum_on_fuel_cell_instances():
    family = prepare_family(build_fuel_cell_family(5, r=0.25))
    failures = []
    for seed in range(30):
        inst = sample_instance(family, seed)
        solution = solve_milp(inst)
        assert solution.is_optimal, seed
        _, record = apply_strategy(inst, extract_strategy(inst, solution), f_star=solution.objective)
        if record.p > 1e-9 or record.d > 1e-9:
            failures.append((seed, record.p, record.d))
    assert failures == []
