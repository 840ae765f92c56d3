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
from typing import Sequence, Tuple
from .instance import MILPInstance, ValidationReport, validate_instance

SEED_MASK = (1 << 64) - 1


class ParameterKind(str, enum.Enum):
    b = "b"
    c = "c"
    a = "A"


class SamplingMethod(str, enum.Enum):
    uniform_ball = "uniform_ball"


@dataclasses.dataclass(frozen=True)
class Coordinate:
    """
    Identifies one entry of b (row), c (col) or A (row, col).
    """
    kind: ParameterKind
    row: int | None = None
    col: int | None = None

    @staticmethod
    def of_b(row: int) -> Coordinate:
        return Coordinate(kind=ParameterKind.b, row=row)

    @staticmethod
    def of_c(col: int) -> Coordinate:
        return Coordinate(kind=ParameterKind.c, col=col)

    @staticmethod
    def of_a(row: int, col: int) -> Coordinate:
        return Coordinate(kind=ParameterKind.a, row=row, col=col)

    def read(self, inst: MILPInstance) -> float:
        if self.kind == ParameterKind.b:
            return float(inst.b[self.row])
        elif self.kind == ParameterKind.c:
            return float(inst.c[self.col])
        return float(inst.A[self.row, self.col])

    def in_range(self, inst: MILPInstance) -> bool:
        if self.kind == ParameterKind.b:
            return self.row is not None and 0 <= self.row < inst.m
        elif self.kind == ParameterKind.c:
            return self.col is not None and 0 <= self.col < inst.n
        return self.row is not None and self.col is not None and 0 <= self.row < inst.m and 0 <= self.col < inst.n


@dataclasses.dataclass(frozen=True)
class ParameterizedFamily:
    """
    A fixed MILP structure whose varying coordinates are drawn uniformly from the ball B(theta_bar, r).
    """
    base_instance: MILPInstance
    varying: Tuple[Coordinate, ...]
    radius: float
    sampling: SamplingMethod = SamplingMethod.uniform_ball
    name: str = "family"

    def __post_init__(self):
        object.__setattr__(self, "varying", tuple(self.varying))

    @property
    def dim(self) -> int:
        return len(self.varying)

    @property
    def center(self) -> np.ndarray:
        return varying_vector(self, self.base_instance)


def validate_family(family: ParameterizedFamily) -> ValidationReport:
    """
    Checks the base instance and every family invariant. Never raises.
    """
    report = validate_instance(family.base_instance)
    if not np.isfinite(family.radius) or family.radius < 0:
        report.add("radius", f"Radius must be a finite nonnegative number but is {family.radius}.")
    seen = set()
    for coordinate in family.varying:
        if not coordinate.in_range(family.base_instance):
            report.add("coordinate-range", f"Varying coordinate {coordinate} does not index an existing entry.")
            continue
        if coordinate in seen:
            report.add("duplicate-coordinate", f"Varying coordinate {coordinate} is listed twice.")
        seen.add(coordinate)
        if coordinate.read(family.base_instance) == 0.0:
            report.add("zero-entry", f"Varying coordinate {coordinate} is zero in the base instance.")
    return report


def varying_vector(family: ParameterizedFamily, inst: MILPInstance) -> np.ndarray:
    """
    Reads the varying coordinates of the family out of the given instance.
    """
    return np.array([item.read(inst) for item in family.varying], dtype=np.float64)


def with_varying(inst: MILPInstance, varying: Sequence[Coordinate], values: np.ndarray, name: str) -> MILPInstance:
    """
    Returns a copy of inst whose varying coordinates are replaced by values.
    """
    A = np.array(inst.A)
    b = np.array(inst.b)
    c = np.array(inst.c)
    for coordinate, value in zip(varying, values):
        if coordinate.kind == ParameterKind.b:
            b[coordinate.row] = value
        elif coordinate.kind == ParameterKind.c:
            c[coordinate.col] = value
        else:
            A[coordinate.row, coordinate.col] = value
    return inst.replace(A=A, b=b, c=c, name=name)


def sample_ball(rng: np.random.Generator, dim: int, radius: float) -> np.ndarray:
    """
    Draws one point uniformly from the Euclidean ball of the given radius around the origin.
    """
    if dim == 0 or radius == 0:
        return np.zeros(dim)
    direction = rng.standard_normal(dim)
    norm = np.linalg.norm(direction)
    while norm == 0.0:
        direction = rng.standard_normal(dim)
        norm = np.linalg.norm(direction)
    return direction / norm * radius * rng.random() ** (1.0 / dim)


def sample_instance(family: ParameterizedFamily, seed: int) -> MILPInstance:
    """
    Returns the base instance with the varying coordinates replaced by theta_bar + u, u ~ Uniform(B(0, r)).
    The result is a pure function of (family, seed).
    """
    if family.radius == 0 or family.dim == 0:
        return family.base_instance
    rng = np.random.default_rng(int(seed) & SEED_MASK)
    values = family.center + sample_ball(rng, family.dim, family.radius)
    return with_varying(family.base_instance, family.varying, values, name=f"{family.base_instance.name}#{seed}")
