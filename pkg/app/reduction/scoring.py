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

import enum
import math
import dataclasses
import numpy as np
from core.models.instance import MILPInstance, RowSense

EPS_R = 1e-12
R_MIN = -20.0
EPS_DEN = 1e-10
OBJECTIVE_NOISE = 1e-13


class ReducedStatus(str, enum.Enum):
    optimal = "OPTIMAL"
    infeasible = "INFEASIBLE"
    elastic = "ELASTIC"


@dataclasses.dataclass(frozen=True)
class EvalRecord:
    """
    Score of one (instance, strategy) pair. p and d are +inf when the reduced model has no solution.
    """
    p: float
    d: float
    r: float
    reduced_status: ReducedStatus
    solve_time_s: float = 0.0
    iterations: int = 0

    @property
    def has_solution(self) -> bool:
        return self.reduced_status != ReducedStatus.infeasible

    def accurate(self, eps_p: float, eps_d: float) -> bool:
        return self.has_solution and self.p <= eps_p and self.d <= eps_d

    @staticmethod
    def infeasible(solve_time_s: float = 0.0, iterations: int = 0) -> EvalRecord:
        return EvalRecord(
            p=math.inf,
            d=math.inf,
            r=R_MIN,
            reduced_status=ReducedStatus.infeasible,
            solve_time_s=solve_time_s,
            iterations=iterations
        )


def infeasibility(inst: MILPInstance, xhat: np.ndarray) -> float:
    """
    Largest violation of any original row at xhat, relative to the infinity norm of b.
    EQ rows count with the absolute residual.
    """
    if inst.m == 0:
        return 0.0
    residual = inst.activity(xhat) - inst.b
    eq = np.array([sense == RowSense.eq for sense in inst.row_sense])
    residual[eq] = np.abs(residual[eq])
    violation = float(np.max(np.maximum(residual, 0.0)))
    return violation / max(float(np.max(np.abs(inst.b))), EPS_DEN)


def suboptimality(f_hat: float, f_star: float) -> float:
    """
    Relative objective gap. Gaps at the level of floating point noise, OBJECTIVE_NOISE * (1 + |f_star|), are zero.
    """
    gap = abs(f_hat - f_star)
    if gap <= OBJECTIVE_NOISE * (1.0 + abs(f_star)):
        return 0.0
    return gap / max(abs(f_star), EPS_DEN)


def reward(p: float, d: float) -> float:
    """
    r = -log(p + d + EPS_R), clamped below at R_MIN.
    """
    total = p + d + EPS_R
    if not math.isfinite(total):
        return R_MIN
    return max(-math.log(total), R_MIN)
