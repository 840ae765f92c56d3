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
Versioned on-disk schemas. Infinite bounds and missing scores are stored as null.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import math
import numpy as np
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional
from pydantic import BaseModel, ConfigDict, Field
from core.models.instance import MILPInstance, RowSense
from core.models.family import Coordinate, ParameterizedFamily, ParameterKind, SamplingMethod
from core.models.strategy import LibraryOrigin, Strategy, StrategyLibrary
from core.utils import InvalidDataError
from .files import read_json, write_json

FORMAT_VERSION = 1


def finite_or_none(value: float) -> float | None:
    value = float(value)
    return value if math.isfinite(value) else None


def none_to(value: float | None, default: float) -> float:
    return default if value is None else float(value)


class Document(BaseModel):
    model_config = ConfigDict(extra="forbid")
    format_version: Literal[1] = FORMAT_VERSION


class InstanceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    name: str
    c: List[float]
    A: List[List[float]]
    b: List[float]
    row_sense: List[RowSense]
    integer_index: List[int]
    lo: List[Optional[float]]
    hi: List[Optional[float]]
    row_names: Optional[List[str]] = None
    col_names: Optional[List[str]] = None
    bounds_materialized: bool = False

    @staticmethod
    def from_instance(inst: MILPInstance) -> InstanceModel:
        return InstanceModel(
            name=inst.name,
            c=inst.c.tolist(),
            A=inst.A.tolist(),
            b=inst.b.tolist(),
            row_sense=list(inst.row_sense),
            integer_index=inst.integer_index.tolist(),
            lo=[finite_or_none(item) for item in inst.lo],
            hi=[finite_or_none(item) for item in inst.hi],
            row_names=list(inst.row_names) if inst.row_names is not None else None,
            col_names=list(inst.col_names) if inst.col_names is not None else None,
            bounds_materialized=inst.bounds_materialized
        )

    def to_instance(self) -> MILPInstance:
        n = len(self.c)
        return MILPInstance(
            name=self.name,
            c=self.c,
            A=np.array(self.A, dtype=np.float64).reshape(len(self.b), n),
            b=self.b,
            row_sense=tuple(self.row_sense),
            integer_index=self.integer_index,
            lo=[none_to(item, -math.inf) for item in self.lo],
            hi=[none_to(item, math.inf) for item in self.hi],
            row_names=self.row_names,
            col_names=self.col_names,
            bounds_materialized=self.bounds_materialized
        )


class CoordinateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    kind: ParameterKind
    row: Optional[int] = None
    col: Optional[int] = None


class FamilyDocument(Document):
    name: str
    base_instance: InstanceModel
    varying: List[CoordinateModel]
    radius: float = Field(ge=0)
    sampling: SamplingMethod = SamplingMethod.uniform_ball
    generator: Dict[str, Any] = Field(default_factory=dict)

    @staticmethod
    def from_family(family: ParameterizedFamily, generator: Dict[str, Any] | None = None) -> FamilyDocument:
        return FamilyDocument(
            name=family.name,
            base_instance=InstanceModel.from_instance(family.base_instance),
            varying=[CoordinateModel(kind=item.kind, row=item.row, col=item.col) for item in family.varying],
            radius=family.radius,
            sampling=family.sampling,
            generator=generator or {}
        )

    def to_family(self) -> ParameterizedFamily:
        return ParameterizedFamily(
            base_instance=self.base_instance.to_instance(),
            varying=tuple(Coordinate(kind=item.kind, row=item.row, col=item.col) for item in self.varying),
            radius=self.radius,
            sampling=self.sampling,
            name=self.name
        )


class StrategyModel(BaseModel):
    model_config = ConfigDict(extra="forbid")
    tight_set: List[int]
    integer_values: List[int]
    key: str


class LibraryDocument(Document):
    origin: LibraryOrigin
    strategies: List[StrategyModel]
    provenance: List[int]
    parent_index: Optional[List[int]] = None

    @staticmethod
    def from_library(library: StrategyLibrary) -> LibraryDocument:
        return LibraryDocument(
            origin=library.origin,
            strategies=[StrategyModel(**item.to_dict()) for item in library],
            provenance=list(library.provenance),
            parent_index=library.parent_index
        )

    def to_library(self) -> StrategyLibrary:
        strategies = []
        for item in self.strategies:
            strategy = Strategy.create(item.tight_set, item.integer_values)
            if strategy.key != item.key:
                raise InvalidDataError(f"Stored key {item.key} does not match the strategy content.")
            strategies.append(strategy)
        return StrategyLibrary(
            strategies=strategies,
            origin=self.origin,
            provenance=self.provenance,
            parent_index=self.parent_index
        )


def save_family(path: str | Path, family: ParameterizedFamily, generator: Dict[str, Any] | None = None):
    write_json(path, FamilyDocument.from_family(family, generator).model_dump(mode="json"))


def load_family(path: str | Path) -> ParameterizedFamily:
    return FamilyDocument.model_validate(read_json(path)).to_family()


def save_library(path: str | Path, library: StrategyLibrary):
    write_json(path, LibraryDocument.from_library(library).model_dump(mode="json"))


def load_library(path: str | Path) -> StrategyLibrary:
    return LibraryDocument.model_validate(read_json(path)).to_library()
