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
Fuel cell energy management over a horizon of T periods. A battery with state of charge E_t serves a load and is
recharged by a fuel cell with output P_t that is switched on (z_t = 1) or off. Switching events are counted and
limited. The quadratic fuel cost term is dropped (alpha = 0) so that the problem is an MILP.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import math
import logging
from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field
from core.utils import InvalidDataError
from core.models.instance import MILPInstance, RowSense
from core.models.family import Coordinate, ParameterizedFamily
from .builder import InstanceBuilder

logger = logging.getLogger(__name__)

MIN_HORIZON = 2


class FuelCellParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    alpha: float = 0.0
    beta: float = Field(default=0.2, ge=0)
    gamma: float = Field(default=0.5, ge=0)
    tau: float = Field(default=0.5, gt=0)
    e_min: float = 5.2
    e_max: float = 10.2
    p_max: float = Field(default=1.2, gt=0)
    n_switch: float = Field(default=4.0, ge=0)
    e_init: float = 6.0
    z_init: float = Field(default=1.0, ge=0, le=1)
    s_init: float = 1.0
    d_past: float | List[float] = 1.0
    p_load: float | List[float] = 1.0

    @staticmethod
    def _profile(name: str, value: float | List[float], T: int) -> List[float]:
        if isinstance(value, list):
            if len(value) != T:
                raise InvalidDataError(f"{name} has {len(value)} entries but the horizon is {T}.")
            return list(value)
        return [value] * T

    def load_profile(self, T: int) -> List[float]:
        return self._profile("Load profile", self.p_load, T)

    def past_switches(self, T: int) -> List[float]:
        """
        Switching events d_{-T}, ..., d_{-1} of the window preceding the horizon.
        """
        return self._profile("Past switching window", self.d_past, T)


def _check(T: int, params: FuelCellParams):
    if params.alpha != 0:
        raise InvalidDataError("Only the linear fuel cell model (alpha = 0) is supported.")
    if T < MIN_HORIZON:
        raise InvalidDataError(f"The horizon must be at least {MIN_HORIZON} but is {T}.")
    if params.e_min > params.e_max:
        raise InvalidDataError(f"Energy bounds are inverted: {params.e_min} > {params.e_max}.")


def build_fuel_cell_instance(T: int, params: FuelCellParams | None = None, name: str | None = None) -> MILPInstance:
    """
    Builds the instance with variables E_0..E_T, P_t, z_t, switch indicators w+_t, w-_t, d_t (t < T), switch
    counts s_0..s_T and the residual r_z of the initial state.

    z_init is the state before period 0. w_t = w+_t - w-_t takes the values -1, 0 and 1 and d_t = w+_t + w-_t
    marks a switching event at period t. The count follows s_{t+1} = s_t + d_t - d_{t-T} with the past window
    d_{-T}..d_{-1}. r_z in [-0.5, 0.5] absorbs the distance of a perturbed z_init to the nearest state.
    """
    params = params or FuelCellParams()
    _check(T, params)
    load = params.load_profile(T)
    past = params.past_switches(T)
    builder = InstanceBuilder()
    E = [builder.variable(f"E_{t}", params.e_min, params.e_max) for t in range(T + 1)]
    P = [builder.variable(f"P_{t}", 0.0, params.p_max, cost=params.beta) for t in range(T)]
    z = [builder.binary(f"z_{t}", cost=params.gamma) for t in range(T)]
    w_up = [builder.binary(f"wp_{t}") for t in range(T)]
    w_down = [builder.binary(f"wm_{t}") for t in range(T)]
    d = [builder.binary(f"d_{t}") for t in range(T)]
    s = [builder.variable(f"s_{t}", -math.inf) for t in range(T + 1)]
    residual = builder.variable("r_z", -0.5, 0.5)

    builder.row("init_E", {E[0]: 1.0}, RowSense.eq, params.e_init)
    for t in range(T):
        builder.row(
            f"balance_{t}", {E[t + 1]: 1.0, E[t]: -1.0, P[t]: -params.tau}, RowSense.eq, -params.tau * load[t]
        )
    for t in range(T):
        builder.row(f"power_{t}", {P[t]: 1.0, z[t]: -params.p_max}, RowSense.le, 0.0)
    builder.row("init_z", {z[0]: 1.0, w_up[0]: -1.0, w_down[0]: 1.0, residual: 1.0}, RowSense.eq, params.z_init)
    for t in range(1, T):
        builder.row(f"switch_{t}", {z[t]: 1.0, z[t - 1]: -1.0, w_up[t]: -1.0, w_down[t]: 1.0}, RowSense.eq, 0.0)
    for t in range(T):
        builder.row(f"event_lo_{t}", {w_up[t]: 1.0, w_down[t]: 1.0, d[t]: -1.0}, RowSense.le, 0.0)
        builder.row(f"event_hi_{t}", {d[t]: 1.0, w_up[t]: -1.0, w_down[t]: -1.0}, RowSense.le, 0.0)
    builder.row("init_s", {s[0]: 1.0}, RowSense.eq, params.s_init)
    for t in range(T):
        builder.row(f"count_{t}", {s[t + 1]: 1.0, s[t]: -1.0, d[t]: -1.0}, RowSense.eq, -past[t])
    for t in range(T + 1):
        builder.row(f"limit_{t}", {s[t]: 1.0}, RowSense.le, params.n_switch)
    return builder.build(name or f"fuel_cell_T{T}")


def fuel_cell_varying(inst: MILPInstance, T: int) -> List[Coordinate]:
    """
    The parameters that vary between instances: initial charge, initial state, initial switch count, the past
    switching window and the load of every period.
    """
    names = ["init_E", "init_z", "init_s"] + [f"count_{t}" for t in range(T)] + [f"balance_{t}" for t in range(T)]
    return [Coordinate.of_b(inst.row_names.index(name)) for name in names]


def build_fuel_cell_family(
        T: int,
        params: FuelCellParams | None = None,
        r: float = 0.25,
        varying: Optional[List[Coordinate]] = None
) -> ParameterizedFamily:
    """
    The family centered at the instance of params. Every varying entry of the center must be nonzero, so z_init,
    s_init, the past window and the load all need nonzero values unless varying is given explicitly.
    """
    inst = build_fuel_cell_instance(T, params)
    varying = fuel_cell_varying(inst, T) if varying is None else varying
    logger.debug("Fuel cell family with T=%d varies %d coordinates.", T, len(varying))
    return ParameterizedFamily(base_instance=inst, varying=tuple(varying), radius=r, name=inst.name)
