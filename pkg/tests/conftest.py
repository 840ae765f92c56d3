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
from pathlib import Path
from core.models.instance import MILPInstance, build_instance, materialize_bounds
from core.models.family import ParameterizedFamily
from core.models.strategy import Strategy, StrategyLibrary
from datagen import Dataset, generate_dataset
from families import build_fuel_cell_family
from solvers.oracle import random_milp

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def knapsack() -> MILPInstance:
    """
    max 5 x0 + 4 x1 + 3 x2 s.t. 2 x0 + 3 x1 + x2 <= 5, x binary. Optimum -9 at (1, 1, 0).
    """
    return build_instance(
        name="knapsack",
        c=[-5.0, -4.0, -3.0],
        A_ub=[[2.0, 3.0, 1.0]],
        b_ub=[5.0],
        integer_index=[0, 1, 2],
        bounds=[(0.0, 1.0)] * 3
    )


@pytest.fixture
def materialized_knapsack(knapsack) -> MILPInstance:
    return materialize_bounds(knapsack)


@pytest.fixture
def small_lp() -> MILPInstance:
    """
    min -x - y s.t. x + 2 y <= 4, 3 x + y <= 6, x, y >= 0. Optimum -2.8 at (1.6, 1.2).
    """
    return build_instance(name="small_lp", c=[-1.0, -1.0], A_ub=[[1.0, 2.0], [3.0, 1.0]], b_ub=[4.0, 6.0])


@pytest.fixture
def fuel_cell_family() -> ParameterizedFamily:
    return build_fuel_cell_family(3, r=0.1)


@pytest.fixture
def random_milp_factory():
    def factory(seed: int, **kwargs) -> MILPInstance:
        return random_milp(np.random.default_rng(seed), name=f"random-{seed}", **kwargs)
    return factory


@pytest.fixture(scope="session")
def fuel_cell_dataset() -> Dataset:
    """
    A small labeled dataset of the T=3 fuel cell family. Tests must not modify it.
    """
    return generate_dataset(build_fuel_cell_family(3, r=0.1), gt_threshold=0.5, min_N=12, max_N=12, base_seed=7)


@pytest.fixture
def toy_library() -> StrategyLibrary:
    return StrategyLibrary([
        Strategy.create([0], [1, 0]),
        Strategy.create([1], [0, 1]),
        Strategy.create([0, 1], [1, 1]),
        Strategy.create([], [0, 0])
    ])


@pytest.fixture(scope="session")
def labeled_dataset() -> Dataset:
    """
    The same instances as fuel_cell_dataset with a complete reward table. Tests must not modify it.
    """
    from datagen import fill_reward_table
    ds = generate_dataset(build_fuel_cell_family(3, r=0.1), gt_threshold=0.5, min_N=12, max_N=12, base_seed=7)
    return fill_reward_table(ds)
