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

import os
import enum
from pathlib import Path
from typing import List, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from core.utils.config import SettingsBase
from core.models.family import Coordinate, ParameterizedFamily
from core.storage import CoordinateModel
from solvers.milp import BnBConfig
from learner import TrainConfig
from families import (
    FuelCellParams, InventoryParams, build_fuel_cell_family, build_inventory_family, read_mps
)

TEST_SEED_OFFSET = 1_000_000


class Settings(SettingsBase):
    """
    This class manages the settings of the command line application.
    """
    def __init__(self):
        super().__init__()
        self.config_path = os.getenv("STRATUM_CONFIG") or None
        self.output_dir = Path(os.getenv("STRATUM_OUTPUT_DIR", "runs"))


class FamilyKind(str, enum.Enum):
    fuel_cell = "fuel_cell"
    inventory = "inventory"
    mps = "mps"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class FamilyConfig(_Section):
    """
    A built-in family with its parameters or an MPS base instance with explicit varying coordinates.
    """
    kind: FamilyKind = FamilyKind.fuel_cell
    horizon: int = Field(default=5, ge=2)
    radius: float = Field(default=0.25, ge=0)
    fuel_cell: FuelCellParams = Field(default_factory=FuelCellParams)
    inventory: InventoryParams = Field(default_factory=InventoryParams)
    mps_path: Optional[Path] = None
    mps_fixed: bool = False
    varying: List[CoordinateModel] = Field(default_factory=list)

    @field_validator("mps_path")
    @classmethod
    def check_path(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"MPS file {value} does not exist.")
        return value

    @model_validator(mode="after")
    def check_mps(self) -> "FamilyConfig":
        if self.kind == FamilyKind.mps and (self.mps_path is None or not self.varying):
            raise ValueError("MPS families need mps_path and at least one varying coordinate.")
        return self

    def build(self) -> ParameterizedFamily:
        if self.kind == FamilyKind.fuel_cell:
            return build_fuel_cell_family(self.horizon, self.fuel_cell, self.radius)
        elif self.kind == FamilyKind.inventory:
            return build_inventory_family(self.inventory, self.radius)
        inst = read_mps(self.mps_path, self.mps_fixed)
        return ParameterizedFamily(
            base_instance=inst,
            varying=tuple(Coordinate(kind=item.kind, row=item.row, col=item.col) for item in self.varying),
            radius=self.radius,
            name=inst.name
        )


class DatagenConfig(_Section):
    gt_threshold: float = Field(default=0.05, gt=0, le=1)
    min_n: int = Field(default=100, ge=1)
    max_n: int = Field(default=10_000, ge=1)
    n_test: int = Field(default=200, ge=1)
    base_seed: int = 0
    bnb: BnBConfig = Field(default_factory=BnBConfig)

    @model_validator(mode="after")
    def check_sizes(self) -> "DatagenConfig":
        if self.min_n > self.max_n:
            raise ValueError(f"min_n ({self.min_n}) must not exceed max_n ({self.max_n}).")
        return self

    @property
    def test_seed(self) -> int:
        return self.base_seed + TEST_SEED_OFFSET


class PruningConfig(_Section):
    eps_p: float = Field(default=1e-4, ge=0)
    eps_d: float = Field(default=1e-4, ge=0)


class InferenceConfig(_Section):
    k: int = Field(default=10, ge=1)
    eps_p: float = Field(default=1e-4, ge=0)
    eps_d: float = Field(default=1e-4, ge=0)
    n_bench: int = Field(default=50, ge=1)


class PipelineConfig(_Section):
    """
    Configuration document of all pipeline stages.
    """
    family: FamilyConfig = Field(default_factory=FamilyConfig)
    datagen: DatagenConfig = Field(default_factory=DatagenConfig)
    pruning: PruningConfig = Field(default_factory=PruningConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    inference: InferenceConfig = Field(default_factory=InferenceConfig)
    output_dir: Path = Field(default_factory=lambda: settings.output_dir)

    def with_seed(self, seed: int | None) -> "PipelineConfig":
        if seed is None:
            return self
        return self.model_validate({
            **self.model_dump(),
            "datagen": {**self.datagen.model_dump(), "base_seed": seed},
            "train": {**self.train.model_dump(), "seed": seed}
        })

    def updated(self, section: str, **changes) -> "PipelineConfig":
        """
        Returns a re-validated copy with the non-None changes applied to the given section.
        """
        changes = {key: value for key, value in changes.items() if value is not None}
        if not changes:
            return self
        data = self.model_dump()
        data[section] = {**data[section], **changes}
        return self.model_validate(data)


settings = Settings()
