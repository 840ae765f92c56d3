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
Synthetic multi-item warehouse planning: per item and period an order quantity x with a fixed ordering cost, a
stock balance and a shared warehouse capacity.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field
from core.utils import InvalidDataError
from core.models.instance import MILPInstance, RowSense
from core.models.family import Coordinate, ParameterizedFamily
from .builder import InstanceBuilder


class InventoryParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    n_items: int = Field(default=3, ge=1)
    n_periods: int = Field(default=4, ge=1)
    capacity: float = Field(default=10.0, ge=0)
    warehouse: float = Field(default=25.0, ge=0)
    demand: float = Field(default=4.0, ge=0)
    demand_profile: Optional[List[List[float]]] = None
    holding_cost: float = Field(default=0.1, ge=0)
    unit_cost: float = Field(default=1.0, ge=0)
    fixed_cost: float = Field(default=5.0, ge=0)
    initial_stock: float = Field(default=0.0, ge=0)

    def demands(self) -> List[List[float]]:
        """
        Demand per item and period. Without an explicit profile, demand cycles through 1, 1.25 and 1.5 times the
        base demand.
        """
        if self.demand_profile is not None:
            if len(self.demand_profile) != self.n_items or any(len(row) != self.n_periods for row in self.demand_profile):
                raise InvalidDataError(
                    f"Demand profile must have {self.n_items} rows of {self.n_periods} periods."
                )
            return [list(row) for row in self.demand_profile]
        return [
            [self.demand * (1.0 + 0.25 * ((i + t) % 3)) for t in range(self.n_periods)]
            for i in range(self.n_items)
        ]


def build_inventory_instance(params: InventoryParams | None = None, name: str | None = None) -> MILPInstance:
    params = params or InventoryParams()
    demand = params.demands()
    I, T = params.n_items, params.n_periods
    builder = InstanceBuilder()
    x = [[builder.variable(f"x_{i}_{t}", 0.0, params.capacity, cost=params.unit_cost) for t in range(T)] for i in range(I)]
    y = [[builder.binary(f"y_{i}_{t}", cost=params.fixed_cost) for t in range(T)] for i in range(I)]
    h = [
        [builder.variable(f"h_{i}_{t}", 0.0, cost=params.holding_cost if t > 0 else 0.0) for t in range(T + 1)]
        for i in range(I)
    ]
    for i in range(I):
        builder.row(f"stock_{i}", {h[i][0]: 1.0}, RowSense.eq, params.initial_stock)
        for t in range(T):
            builder.row(
                f"flow_{i}_{t}", {h[i][t + 1]: 1.0, h[i][t]: -1.0, x[i][t]: -1.0}, RowSense.eq, -demand[i][t]
            )
            builder.row(f"order_{i}_{t}", {x[i][t]: 1.0, y[i][t]: -params.capacity}, RowSense.le, 0.0)
    for t in range(T):
        builder.row(f"warehouse_{t}", {h[i][t + 1]: 1.0 for i in range(I)}, RowSense.le, params.warehouse)
    return builder.build(name or f"inventory_{I}x{T}")


def inventory_varying(inst: MILPInstance, params: InventoryParams) -> List[Coordinate]:
    """
    Nonzero demands and unit ordering costs.
    """
    result = []
    for i in range(params.n_items):
        for t in range(params.n_periods):
            row = inst.row_names.index(f"flow_{i}_{t}")
            if inst.b[row] != 0.0:
                result.append(Coordinate.of_b(row))
    for i in range(params.n_items):
        for t in range(params.n_periods):
            col = inst.col_names.index(f"x_{i}_{t}")
            if inst.c[col] != 0.0:
                result.append(Coordinate.of_c(col))
    return result


def build_inventory_family(params: InventoryParams | None = None, r: float = 0.1) -> ParameterizedFamily:
    params = params or InventoryParams()
    inst = build_inventory_instance(params)
    return ParameterizedFamily(
        base_instance=inst, varying=tuple(inventory_varying(inst, params)), radius=r, name=inst.name
    )
