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

import numpy as np
from pathlib import Path
from typing import List
from pydantic import Field
from core.utils import InvalidDataError
from core.models.family import Coordinate
from core.storage import CoordinateModel, Document, read_json, write_json
from .encoding import NormStatsModel
from .network import MODEL_VERSION, RewardModel


class CheckpointDocument(Document):
    version: str
    n_layers: int = Field(ge=0)
    n_features: int = Field(ge=1)
    Wq: List[List[List[float]]]
    Wk: List[List[List[float]]]
    Wv: List[List[List[float]]]
    w_out: List[float]
    b_out: float
    norm_stats: NormStatsModel
    reward_mean: float
    reward_std: float = Field(gt=0)
    varying: List[CoordinateModel]
    library_keys: List[str]
    loss_trace: List[float] = Field(default_factory=list)

    @staticmethod
    def from_model(model: RewardModel) -> CheckpointDocument:
        return CheckpointDocument(
            version=model.version,
            n_layers=model.n_layers,
            n_features=model.n_features,
            Wq=[item.tolist() for item in model.Wq],
            Wk=[item.tolist() for item in model.Wk],
            Wv=[item.tolist() for item in model.Wv],
            w_out=model.w_out.tolist(),
            b_out=float(model.b_out[0]),
            norm_stats=model.norm_stats.to_model(),
            reward_mean=model.reward_mean,
            reward_std=model.reward_std,
            varying=[CoordinateModel(kind=item.kind, row=item.row, col=item.col) for item in model.varying],
            library_keys=list(model.library_keys),
            loss_trace=list(model.loss_trace)
        )

    def to_model(self) -> RewardModel:
        if self.version != MODEL_VERSION:
            raise InvalidDataError(f"Unsupported model version {self.version}.")
        F = self.n_features
        weights = []
        for name in ("Wq", "Wk", "Wv"):
            layers = [np.array(item, dtype=np.float64) for item in getattr(self, name)]
            if len(layers) != self.n_layers or any(item.shape != (F, F) for item in layers):
                raise InvalidDataError(f"Checkpoint weights {name} do not match {self.n_layers} layers of size {F}.")
            weights.append(layers)
        norm_stats = self.norm_stats.to_stats()
        if len(self.w_out) != F or norm_stats.n_features != F:
            raise InvalidDataError(f"Checkpoint readout or feature statistics do not match {F} features.")
        return RewardModel(
            Wq=weights[0],
            Wk=weights[1],
            Wv=weights[2],
            w_out=np.array(self.w_out, dtype=np.float64),
            b_out=np.array([self.b_out], dtype=np.float64),
            norm_stats=norm_stats,
            varying=tuple(Coordinate(kind=item.kind, row=item.row, col=item.col) for item in self.varying),
            reward_mean=self.reward_mean,
            reward_std=self.reward_std,
            library_keys=tuple(self.library_keys),
            loss_trace=list(self.loss_trace),
            version=self.version
        )


def save_model(path: str | Path, model: RewardModel):
    write_json(path, CheckpointDocument.from_model(model).model_dump(mode="json"))


def load_model(path: str | Path) -> RewardModel:
    return CheckpointDocument.model_validate(read_json(path)).to_model()
