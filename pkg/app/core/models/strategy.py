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
import hashlib
import dataclasses
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple
from core.utils import InvalidDataError


class LibraryOrigin(str, enum.Enum):
    raw = "RAW"
    pruned = "PRUNED"


def canonical_strategy_key(strategy: Strategy) -> str:
    """
    Deterministic key of (sorted tight set, exact integer values).
    """
    return _key(strategy.tight_set, strategy.integer_values)


def _key(tight_set: Sequence[int], integer_values: Sequence[int]) -> str:
    text = "T:" + ",".join(str(int(item)) for item in sorted(set(tight_set)))
    text += "|I:" + ",".join(str(int(item)) for item in integer_values)
    return hashlib.sha256(text.encode("ascii")).hexdigest()


@dataclasses.dataclass(frozen=True)
class Strategy:
    """
    A reduced model: the tight row set together with the values of the integer variables.
    """
    tight_set: Tuple[int, ...]
    integer_values: Tuple[int, ...]
    key: str = ""

    def __post_init__(self):
        tight_set = tuple(sorted(set(int(item) for item in self.tight_set)))
        values = []
        for item in self.integer_values:
            if float(item) != int(round(float(item))):
                raise InvalidDataError(f"Integer value {item} of a strategy is not integral.")
            values.append(int(round(float(item))))
        object.__setattr__(self, "tight_set", tight_set)
        object.__setattr__(self, "integer_values", tuple(values))
        object.__setattr__(self, "key", _key(tight_set, values))

    @staticmethod
    def create(tight_set: Iterable[int], integer_values: Iterable[int]) -> Strategy:
        return Strategy(tight_set=tuple(tight_set), integer_values=tuple(integer_values))

    def to_dict(self) -> dict:
        return {"tight_set": list(self.tight_set), "integer_values": list(self.integer_values), "key": self.key}


class StrategyLibrary:
    """
    Deduplicated, ordered strategy set. Indices are stable once assigned.
    """

    def __init__(
            self,
            strategies: Sequence[Strategy] = (),
            origin: LibraryOrigin = LibraryOrigin.raw,
            provenance: Sequence[int] | None = None,
            parent_index: Sequence[int] | None = None
    ):
        self.origin = origin
        self._strategies: List[Strategy] = []
        self._index: Dict[str, int] = {}
        self.provenance: List[int] = []
        for strategy in strategies:
            if strategy.key in self._index:
                raise InvalidDataError(f"Strategy {strategy.key} is contained twice in the library.")
            self._index[strategy.key] = len(self._strategies)
            self._strategies.append(strategy)
            self.provenance.append(0)
        if provenance is not None:
            if len(provenance) != len(self._strategies):
                raise InvalidDataError("Provenance counts do not match the number of strategies.")
            self.provenance = [int(item) for item in provenance]
        self.parent_index = list(parent_index) if parent_index is not None else None

    def add(self, strategy: Strategy) -> Tuple[int, bool]:
        """
        Adds the strategy unless an identical one exists and counts the labeling.
        :return: The index of the strategy and whether it was new.
        """
        index = self._index.get(strategy.key)
        created = index is None
        if created:
            index = len(self._strategies)
            self._index[strategy.key] = index
            self._strategies.append(strategy)
            self.provenance.append(0)
        self.provenance[index] += 1
        return index, created

    def index_of(self, key: str) -> int | None:
        return self._index.get(key)

    def subset(self, indices: Sequence[int]) -> StrategyLibrary:
        """
        Returns a pruned library holding the given strategies in the given order.
        """
        return StrategyLibrary(
            strategies=[self._strategies[j] for j in indices],
            origin=LibraryOrigin.pruned,
            provenance=[self.provenance[j] for j in indices],
            parent_index=[int(j) for j in indices]
        )

    @property
    def keys(self) -> List[str]:
        return [item.key for item in self._strategies]

    @property
    def strategies(self) -> List[Strategy]:
        return list(self._strategies)

    def __len__(self) -> int:
        return len(self._strategies)

    def __getitem__(self, index: int) -> Strategy:
        return self._strategies[index]

    def __iter__(self) -> Iterator[Strategy]:
        return iter(self._strategies)

    def __contains__(self, key: str) -> bool:
        return key in self._index
