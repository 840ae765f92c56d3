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

import math
import numpy as np
from typing import Dict, List
from core.utils import InvalidDataError
from core.models.instance import MILPInstance, RowSense


class InstanceBuilder:
    """
    Collects named variables and rows and assembles a dense MILPInstance.
    """

    def __init__(self):
        self.col_names: List[str] = []
        self.lo: List[float] = []
        self.hi: List[float] = []
        self.cost: List[float] = []
        self.integer: List[int] = []
        self.row_names: List[str] = []
        self.rows: List[Dict[int, float]] = []
        self.rhs: List[float] = []
        self.senses: List[RowSense] = []
        self._columns: Dict[str, int] = {}
        self._rows: Dict[str, int] = {}

    def variable(
            self,
            name: str,
            lo: float = 0.0,
            hi: float = math.inf,
            cost: float = 0.0,
            integer: bool = False
    ) -> int:
        if name in self._columns:
            raise InvalidDataError(f"Variable {name} is defined twice.")
        index = len(self.col_names)
        self._columns[name] = index
        self.col_names.append(name)
        self.lo.append(lo)
        self.hi.append(hi)
        self.cost.append(cost)
        if integer:
            self.integer.append(index)
        return index

    def binary(self, name: str, cost: float = 0.0) -> int:
        return self.variable(name, 0.0, 1.0, cost, integer=True)

    def row(self, name: str, coefficients: Dict[int, float], sense: RowSense, rhs: float) -> int:
        if name in self._rows:
            raise InvalidDataError(f"Row {name} is defined twice.")
        index = len(self.row_names)
        self._rows[name] = index
        self.row_names.append(name)
        self.rows.append(dict(coefficients))
        self.senses.append(sense)
        self.rhs.append(rhs)
        return index

    def row_index(self, name: str) -> int:
        return self._rows[name]

    def col_index(self, name: str) -> int:
        return self._columns[name]

    def build(self, name: str) -> MILPInstance:
        A = np.zeros((len(self.rows), len(self.col_names)))
        for i, coefficients in enumerate(self.rows):
            for j, value in coefficients.items():
                A[i, j] += value
        return MILPInstance(
            name=name,
            c=self.cost,
            A=A,
            b=self.rhs,
            row_sense=tuple(self.senses),
            integer_index=self.integer,
            lo=self.lo,
            hi=self.hi,
            row_names=self.row_names,
            col_names=self.col_names
        )
