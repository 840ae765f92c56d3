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
import logging
import dataclasses
import numpy as np
from typing import List
from core.models.instance import MILPInstance, build_instance
from core.models.solution import SolveStatus
from .milp import BnBConfig, solve_milp, solve_milp_exhaustive

logger = logging.getLogger(__name__)

ORACLE_TOLERANCE = 1e-6


def random_milp(
        rng: np.random.Generator,
        max_binary: int = 8,
        max_continuous: int = 6,
        max_rows: int = 12,
        name: str = "random"
) -> MILPInstance:
    """
    Draws a small feasible and bounded MILP with integer data. Feasibility is guaranteed by building b around a
    random point of the box.
    """
    n_binary = int(rng.integers(1, max_binary + 1))
    n_continuous = int(rng.integers(0, max_continuous + 1))
    m = int(rng.integers(1, max_rows + 1))
    n = n_binary + n_continuous
    A = rng.integers(-5, 6, size=(m, n)).astype(np.float64)
    point = np.concatenate([rng.integers(0, 2, size=n_binary), rng.integers(0, 6, size=n_continuous)])
    b = A @ point + rng.integers(0, 4, size=m)
    c = rng.integers(-10, 11, size=n).astype(np.float64)
    bounds = [(0.0, 1.0)] * n_binary + [(0.0, 10.0)] * n_continuous
    return build_instance(
        name=name,
        c=c,
        A_ub=A,
        b_ub=b,
        integer_index=range(n_binary),
        bounds=bounds
    )


@dataclasses.dataclass
class OracleCase:
    name: str
    status: SolveStatus
    oracle_status: SolveStatus
    objective: float
    oracle_objective: float

    @property
    def agrees(self) -> bool:
        if self.status != self.oracle_status:
            return False
        if self.status != SolveStatus.optimal:
            return True
        return abs(self.objective - self.oracle_objective) <= ORACLE_TOLERANCE


@dataclasses.dataclass
class OracleReport:
    cases: List[OracleCase]
    runtime_s: float

    @property
    def mismatches(self) -> List[OracleCase]:
        return [item for item in self.cases if not item.agrees]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    @property
    def max_abs_diff(self) -> float:
        diffs = [
            abs(item.objective - item.oracle_objective)
            for item in self.cases if item.status == item.oracle_status == SolveStatus.optimal
        ]
        return max(diffs, default=0.0)


def run_oracle_suite(n_cases: int = 50, seed: int = 0, cfg: BnBConfig | None = None) -> OracleReport:
    """
    Cross-checks branch-and-bound against exhaustive enumeration on random instances.
    """
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    cases = []
    for i in range(n_cases):
        inst = random_milp(rng, name=f"random-{seed}-{i}")
        solution = solve_milp(inst, cfg)
        oracle = solve_milp_exhaustive(inst)
        case = OracleCase(
            name=inst.name,
            status=solution.status,
            oracle_status=oracle.status,
            objective=solution.objective,
            oracle_objective=oracle.objective
        )
        if not case.agrees:
            logger.error(
                "Oracle mismatch on %s: %s %.10g vs %s %.10g",
                inst.name, case.status.value, case.objective, case.oracle_status.value, case.oracle_objective
            )
        cases.append(case)
    return OracleReport(cases=cases, runtime_s=time.perf_counter() - start)
