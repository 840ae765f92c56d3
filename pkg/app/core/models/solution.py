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
import dataclasses
import numpy as np


class SolveStatus(str, enum.Enum):
    optimal = "OPTIMAL"
    infeasible = "INFEASIBLE"
    unbounded = "UNBOUNDED"
    limit = "LIMIT"


@dataclasses.dataclass(frozen=True)
class LPResult:
    """
    Outcome of one simplex solve. x, objective and row_activity are only meaningful when status is optimal.
    """
    status: SolveStatus
    x: np.ndarray
    objective: float
    row_activity: np.ndarray
    iterations: int

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.optimal


@dataclasses.dataclass(frozen=True)
class Solution:
    """
    Outcome of a MILP solve. When status is limit, x holds the incumbent if one was found.
    """
    x: np.ndarray | None
    objective: float
    status: SolveStatus
    nodes: int = 0
    solve_time_s: float = 0.0

    @property
    def is_optimal(self) -> bool:
        return self.status == SolveStatus.optimal

    @property
    def has_point(self) -> bool:
        return self.x is not None
