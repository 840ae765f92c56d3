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

import pytest
import numpy as np
from pydantic import ValidationError
from core.utils import InvalidDataError
from core.models.family import ParameterKind, sample_instance, validate_family
from core.models.instance import RowSense, materialize_bounds, validate_instance
from core.models.solution import SolveStatus
from families import (
    FuelCellParams, InstanceBuilder, InventoryParams, build_fuel_cell_family, build_fuel_cell_instance,
    build_inventory_family, build_inventory_instance
)
from solvers.milp import solve_milp, solve_milp_exhaustive
from utils.config import FamilyConfig, FamilyKind, PipelineConfig


def test_builder_assembles_named_rows():
    builder = InstanceBuilder()
    x = builder.variable("x", 0.0, 4.0, cost=-1.0)
    y = builder.binary("y", cost=2.0)
    builder.row("link", {x: 1.0, y: -4.0}, RowSense.le, 0.0)
    inst = builder.build("linked")
    assert inst.col_names == ("x", "y")
    assert inst.row_names == ("link",)
    assert inst.integer_index.tolist() == [y]
    np.testing.assert_array_equal(inst.A, [[1.0, -4.0]])
    assert builder.row_index("link") == 0
    assert builder.col_index("y") == 1


def test_builder_rejects_duplicates():
    builder = InstanceBuilder()
    builder.variable("x")
    with pytest.raises(InvalidDataError):
        builder.variable("x")
    builder.row("r", {0: 1.0}, RowSense.le, 1.0)
    with pytest.raises(InvalidDataError):
        builder.row("r", {0: 1.0}, RowSense.le, 1.0)


def test_fuel_cell_layout():
    inst = build_fuel_cell_instance(3)
    assert inst.n == 24
    assert inst.m == 24
    assert inst.d == 12
    assert validate_instance(inst).ok
    e0 = inst.col_names.index("E_0")
    assert (inst.lo[e0], inst.hi[e0]) == (5.2, 10.2)
    assert inst.b[inst.row_names.index("balance_0")] == pytest.approx(-0.5)
    s0 = inst.col_names.index("s_0")
    assert inst.lo[s0] == -np.inf


def test_fuel_cell_past_window():
    inst = build_fuel_cell_instance(3, FuelCellParams(d_past=[1.0, 0.5, 2.0]))
    rhs = [inst.b[inst.row_names.index(f"count_{t}")] for t in range(3)]
    assert rhs == [-1.0, -0.5, -2.0]
    with pytest.raises(InvalidDataError):
        build_fuel_cell_instance(2, FuelCellParams(d_past=[1.0, 0.5, 2.0]))


def test_fuel_cell_family_varies_every_parameter(fuel_cell_family):
    inst = fuel_cell_family.base_instance
    rows = [inst.row_names[item.row] for item in fuel_cell_family.varying]
    assert rows == [
        "init_E", "init_z", "init_s", "count_0", "count_1", "count_2", "balance_0", "balance_1", "balance_2"
    ]
    assert all(item.kind == ParameterKind.b for item in fuel_cell_family.varying)
    assert validate_family(fuel_cell_family).ok
    assert build_fuel_cell_family(5).dim == 13


def test_fuel_cell_family_rejects_zero_center():
    family = build_fuel_cell_family(3, FuelCellParams(z_init=0.0))
    assert not validate_family(family).ok


def test_fuel_cell_base_instance_is_solvable():
    solution = solve_milp(materialize_bounds(build_fuel_cell_instance(3)))
    assert solution.status == SolveStatus.optimal


def test_fuel_cell_perturbed_initial_state_is_feasible():
    params = FuelCellParams(z_init=0.8, s_init=1.1, d_past=[0.9, 1.2, 1.0])
    solution = solve_milp(materialize_bounds(build_fuel_cell_instance(3, params)))
    assert solution.status == SolveStatus.optimal


def test_fuel_cell_without_load_stays_off():
    inst = build_fuel_cell_instance(2, FuelCellParams(p_load=0.0, z_init=0.0))
    solution = solve_milp(inst)
    reference = solve_milp_exhaustive(inst)
    assert solution.status == SolveStatus.optimal
    assert solution.objective == pytest.approx(0.0, abs=1e-9)
    assert reference.objective == pytest.approx(solution.objective, abs=1e-9)


@pytest.mark.parametrize("params", [FuelCellParams(p_load=5.0), FuelCellParams(e_init=12.0)])
def test_fuel_cell_energy_bounds_infeasible(params):
    solution = solve_milp(materialize_bounds(build_fuel_cell_instance(3, params)))
    assert solution.status == SolveStatus.infeasible
    assert solution.nodes <= 1


def test_fuel_cell_load_profile():
    inst = build_fuel_cell_instance(2, FuelCellParams(p_load=[1.0, 2.0]))
    assert inst.b[inst.row_names.index("balance_1")] == pytest.approx(-1.0)
    with pytest.raises(InvalidDataError):
        build_fuel_cell_instance(3, FuelCellParams(p_load=[1.0, 2.0]))


@pytest.mark.parametrize("T, params", [
    (3, FuelCellParams(alpha=1.0)),
    (1, FuelCellParams()),
    (3, FuelCellParams(e_min=11.0, e_max=10.0))
])
def test_fuel_cell_rejects_invalid_parameters(T, params):
    with pytest.raises(InvalidDataError):
        build_fuel_cell_instance(T, params)


def test_inventory_without_demand_costs_nothing():
    inst = build_inventory_instance(InventoryParams(n_items=1, n_periods=1, demand=0.0))
    solution = solve_milp(inst)
    assert solution.status == SolveStatus.optimal
    assert solution.objective == pytest.approx(0.0, abs=1e-9)


def test_inventory_demand_above_capacity_is_infeasible():
    inst = build_inventory_instance(InventoryParams(n_items=1, n_periods=1, demand=20.0, capacity=10.0))
    assert solve_milp(inst).status == SolveStatus.infeasible


def test_inventory_demand_cycle():
    assert InventoryParams(n_items=2, n_periods=4, demand=4.0).demands() == [
        [4.0, 5.0, 6.0, 4.0],
        [5.0, 6.0, 4.0, 5.0]
    ]
    with pytest.raises(InvalidDataError):
        InventoryParams(n_items=2, n_periods=2, demand_profile=[[1.0, 1.0]]).demands()


def test_inventory_family():
    family = build_inventory_family(r=0.1)
    assert family.dim == 24
    assert validate_family(family).ok
    assert sum(1 for item in family.varying if item.kind == ParameterKind.c) == 12
    inst = sample_instance(family, 3)
    assert solve_milp(materialize_bounds(inst)).status == SolveStatus.optimal


def test_family_config_builds_every_kind(fixtures_dir):
    assert FamilyConfig(horizon=3, radius=0.1).build().dim == 9
    config = FamilyConfig(kind=FamilyKind.inventory, inventory=InventoryParams(n_items=1, n_periods=2))
    assert config.build().base_instance.name == "inventory_1x2"
    family = FamilyConfig(
        kind=FamilyKind.mps, mps_path=fixtures_dir / "tiny.mps", varying=[{"kind": "b", "row": 0}], radius=0.5
    ).build()
    assert family.name == "tiny"
    assert family.center.tolist() == [4.0]


def test_family_config_validation(fixtures_dir):
    with pytest.raises(ValidationError):
        FamilyConfig(kind=FamilyKind.mps)
    with pytest.raises(ValidationError):
        FamilyConfig(kind=FamilyKind.mps, mps_path=fixtures_dir / "tiny.mps")
    with pytest.raises(ValidationError):
        FamilyConfig(mps_path=fixtures_dir / "missing.mps")
    with pytest.raises(ValidationError):
        FamilyConfig(horizon=1)


def test_pipeline_config_seed_and_updates():
    config = PipelineConfig().with_seed(42)
    assert config.datagen.base_seed == 42
    assert config.train.seed == 42
    assert config.datagen.test_seed == 42 + 1_000_000
    updated = config.updated("inference", k=3, n_bench=None)
    assert updated.inference.k == 3
    assert updated.inference.n_bench == config.inference.n_bench
    with pytest.raises(ValidationError):
        config.updated("inference", k=0)
    with pytest.raises(ValidationError):
        PipelineConfig.model_validate({"datagen": {"min_n": 5, "max_n": 2}})
