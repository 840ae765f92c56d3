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

import logging
import dataclasses
import numpy as np
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple
from pydantic import Field
from core.utils import InvalidDataError, NotFoundError
from core.models.instance import MILPInstance
from core.models.family import ParameterizedFamily, sample_instance
from core.models.solution import SolveStatus
from core.models.strategy import StrategyLibrary
from core.storage import (
    Document, finite_or_none, load_family, load_library, read_json, read_ndjson, save_family, save_library,
    write_json, write_ndjson
)
from reduction import EvalRecord, ReducedStatus

logger = logging.getLogger(__name__)

FAMILY_FILE = "family.json"
LIBRARY_FILE = "library.json"
RECORDS_FILE = "records.ndjson"
SKIPPED_FILE = "skipped.ndjson"
REWARDS_FILE = "rewards.ndjson"
MANIFEST_FILE = "dataset.json"


@dataclasses.dataclass(frozen=True)
class DatasetRecord:
    instance_id: int
    seed: int
    theta: np.ndarray
    f_star: float
    label_key: str


@dataclasses.dataclass(frozen=True)
class SkippedInstance:
    seed: int
    status: SolveStatus
    reason: str = ""


class RewardTable:
    """
    Dense N x M table of evaluation records. Entries that were not computed yet are None.
    """

    def __init__(self, n_instances: int, n_strategies: int):
        shape = (n_instances, n_strategies)
        self.p = np.full(shape, np.nan)
        self.d = np.full(shape, np.nan)
        self.r = np.full(shape, np.nan)
        self.status = np.full(shape, None, dtype=object)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.r.shape

    @property
    def filled(self) -> np.ndarray:
        return self.status != None  # noqa: E711

    @property
    def complete(self) -> bool:
        return bool(self.filled.all())

    def set(self, i: int, j: int, record: EvalRecord):
        self.p[i, j] = record.p
        self.d[i, j] = record.d
        self.r[i, j] = record.r
        self.status[i, j] = record.reduced_status

    def get(self, i: int, j: int) -> EvalRecord | None:
        if self.status[i, j] is None:
            return None
        return EvalRecord(p=self.p[i, j], d=self.d[i, j], r=self.r[i, j], reduced_status=self.status[i, j])

    def missing(self, instances: Sequence[int], strategies: Sequence[int]) -> Dict[int, List[int]]:
        """
        Returns the strategies still to evaluate per instance.
        """
        result = {}
        for i in instances:
            todo = [j for j in strategies if self.status[i, j] is None]
            if todo:
                result[i] = todo
        return result

    def _take(self, rows: Sequence[int] | slice, columns: Sequence[int] | slice) -> RewardTable:
        rows = np.arange(self.shape[0])[rows] if isinstance(rows, slice) else np.asarray(rows, dtype=np.int64)
        columns = np.arange(self.shape[1])[columns] if isinstance(columns, slice) else np.asarray(columns, dtype=np.int64)
        result = RewardTable(len(rows), len(columns))
        index = np.ix_(rows, columns)
        result.p = self.p[index].copy()
        result.d = self.d[index].copy()
        result.r = self.r[index].copy()
        result.status = self.status[index].copy()
        return result

    def rows(self, indices: Sequence[int]) -> RewardTable:
        return self._take(indices, slice(None))

    def columns(self, indices: Sequence[int]) -> RewardTable:
        return self._take(slice(None), indices)

    def to_rows(self) -> List[Dict[str, Any]]:
        result = []
        for i in range(self.shape[0]):
            status = [item.value if item is not None else None for item in self.status[i]]
            result.append(RewardRowDocument(
                instance_id=i,
                p=[finite_or_none(item) for item in self.p[i]],
                d=[finite_or_none(item) for item in self.d[i]],
                r=[finite_or_none(item) for item in self.r[i]],
                status=status
            ).model_dump(mode="json"))
        return result

    @staticmethod
    def from_rows(rows: List[Dict[str, Any]], n_strategies: int) -> RewardTable:
        table = RewardTable(len(rows), n_strategies)
        for i, row in enumerate(rows):
            document = RewardRowDocument.model_validate(row)
            if document.instance_id != i or len(document.status) != n_strategies:
                raise InvalidDataError(f"Reward row {i} does not match the dataset layout.")
            for j, status in enumerate(document.status):
                if status is None:
                    continue
                if status == ReducedStatus.infeasible:
                    table.set(i, j, EvalRecord.infeasible())
                else:
                    table.set(i, j, EvalRecord(
                        p=document.p[j], d=document.d[j], r=document.r[j], reduced_status=status
                    ))
        return table


class RecordDocument(Document):
    instance_id: int = Field(ge=0)
    seed: int
    theta: List[float]
    f_star: float
    label_key: str


class SkippedDocument(Document):
    seed: int
    status: SolveStatus
    reason: str = ""


class RewardRowDocument(Document):
    instance_id: int = Field(ge=0)
    p: List[Optional[float]]
    d: List[Optional[float]]
    r: List[Optional[float]]
    status: List[Optional[ReducedStatus]]


class DatasetManifest(Document):
    name: str
    n_instances: int
    n_strategies: int
    n_skipped: int
    good_turing: Optional[float] = None
    settings: Dict[str, Any] = Field(default_factory=dict)


@dataclasses.dataclass
class Dataset:
    """
    Labeled instances of one family together with the raw strategy library and an optional reward table.
    """
    family: ParameterizedFamily
    records: List[DatasetRecord]
    library: StrategyLibrary
    skipped: List[SkippedInstance] = dataclasses.field(default_factory=list)
    reward_table: RewardTable | None = None
    good_turing: float | None = None
    settings: Dict[str, Any] = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        for i, record in enumerate(self.records):
            if record.instance_id != i:
                raise InvalidDataError(f"Instance ids must be contiguous but record {i} has id {record.instance_id}.")
            if record.label_key not in self.library:
                raise InvalidDataError(f"Label {record.label_key} of instance {i} is not in the library.")

    def __len__(self) -> int:
        return len(self.records)

    def instance(self, i: int) -> MILPInstance:
        """
        Regenerates instance i from the family and its seed.
        """
        return sample_instance(self.family, self.records[i].seed)

    @property
    def thetas(self) -> np.ndarray:
        if not self.records:
            return np.zeros((0, self.family.dim))
        return np.vstack([item.theta for item in self.records])

    @property
    def f_stars(self) -> np.ndarray:
        return np.array([item.f_star for item in self.records])

    @property
    def labels(self) -> List[int]:
        return [self.library.index_of(item.label_key) for item in self.records]

    def subset(self, indices: Sequence[int]) -> Dataset:
        """
        Returns the given instances renumbered 0..len-1. Library and family are shared.
        """
        records = [
            dataclasses.replace(self.records[i], instance_id=k) for k, i in enumerate(indices)
        ]
        return Dataset(
            family=self.family,
            records=records,
            library=self.library,
            reward_table=self.reward_table.rows(indices) if self.reward_table is not None else None,
            settings=dict(self.settings)
        )

    def split(self, n_first: int) -> Tuple[Dataset, Dataset]:
        n_first = max(0, min(n_first, len(self)))
        return self.subset(range(n_first)), self.subset(range(n_first, len(self)))

    def save(self, directory: str | Path):
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        save_family(directory / FAMILY_FILE, self.family)
        save_library(directory / LIBRARY_FILE, self.library)
        write_ndjson(directory / RECORDS_FILE, [
            RecordDocument(
                instance_id=item.instance_id,
                seed=item.seed,
                theta=item.theta.tolist(),
                f_star=item.f_star,
                label_key=item.label_key
            ).model_dump(mode="json") for item in self.records
        ])
        write_ndjson(directory / SKIPPED_FILE, [
            SkippedDocument(seed=item.seed, status=item.status, reason=item.reason).model_dump(mode="json")
            for item in self.skipped
        ])
        if self.reward_table is not None:
            write_ndjson(directory / REWARDS_FILE, self.reward_table.to_rows())
        write_json(directory / MANIFEST_FILE, DatasetManifest(
            name=self.family.name,
            n_instances=len(self.records),
            n_strategies=len(self.library),
            n_skipped=len(self.skipped),
            good_turing=self.good_turing,
            settings=self.settings
        ).model_dump(mode="json"))
        logger.debug("Dataset with %d instances saved to %s.", len(self.records), directory)

    @staticmethod
    def load(directory: str | Path) -> Dataset:
        directory = Path(directory)
        if not directory.is_dir():
            raise NotFoundError(f"Dataset directory {directory} not found.")
        manifest = DatasetManifest.model_validate(read_json(directory / MANIFEST_FILE))
        library = load_library(directory / LIBRARY_FILE)
        records = []
        for row in read_ndjson(directory / RECORDS_FILE):
            document = RecordDocument.model_validate(row)
            records.append(DatasetRecord(
                instance_id=document.instance_id,
                seed=document.seed,
                theta=np.array(document.theta, dtype=np.float64),
                f_star=document.f_star,
                label_key=document.label_key
            ))
        skipped = []
        if (directory / SKIPPED_FILE).is_file():
            for row in read_ndjson(directory / SKIPPED_FILE):
                document = SkippedDocument.model_validate(row)
                skipped.append(SkippedInstance(seed=document.seed, status=document.status, reason=document.reason))
        reward_table = None
        if (directory / REWARDS_FILE).is_file():
            reward_table = RewardTable.from_rows(read_ndjson(directory / REWARDS_FILE), len(library))
            if reward_table.shape[0] != len(records):
                raise InvalidDataError("Reward table and records disagree on the number of instances.")
        if manifest.n_instances != len(records) or manifest.n_strategies != len(library):
            raise InvalidDataError(f"Manifest of {directory} does not match its records or library.")
        return Dataset(
            family=load_family(directory / FAMILY_FILE),
            records=records,
            library=library,
            skipped=skipped,
            reward_table=reward_table,
            good_turing=manifest.good_turing,
            settings=manifest.settings
        )
