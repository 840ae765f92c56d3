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
import scipy.sparse
from typing import List, Sequence, Tuple


class RowSense(str, enum.Enum):
    le = "L"
    eq = "E"


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    result = np.array(values, dtype=dtype, copy=True)
    result.setflags(write=False)
    return result


@dataclasses.dataclass(frozen=True, eq=False)
class MILPInstance:
    """
    One concrete problem: min c.x s.t. A_i x <= b_i (LE rows), A_i x = b_i (EQ rows), lo <= x <= hi and x_I integer.

    The constructor does not validate; use validate_instance to obtain a report.
    """
    name: str
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    row_sense: Tuple[RowSense, ...]
    integer_index: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    row_names: Tuple[str, ...] | None = None
    col_names: Tuple[str, ...] | None = None
    bounds_materialized: bool = False

    def __post_init__(self):
        A = self.A
        if scipy.sparse.issparse(A):
            A = A.toarray()
        A = np.atleast_2d(np.asarray(A, dtype=np.float64))
        if A.size == 0:
            A = A.reshape(len(self.b), len(self.c))
        object.__setattr__(self, "A", _frozen_array(A))
        object.__setattr__(self, "c", _frozen_array(self.c))
        object.__setattr__(self, "b", _frozen_array(self.b))
        object.__setattr__(self, "lo", _frozen_array(self.lo))
        object.__setattr__(self, "hi", _frozen_array(self.hi))
        object.__setattr__(self, "integer_index", _frozen_array(self.integer_index, dtype=np.int64))
        object.__setattr__(self, "row_sense", tuple(RowSense(item) for item in self.row_sense))
        if self.row_names is not None:
            object.__setattr__(self, "row_names", tuple(self.row_names))
        if self.col_names is not None:
            object.__setattr__(self, "col_names", tuple(self.col_names))

    @property
    def n(self) -> int:
        return int(self.A.shape[1]) if self.A.ndim == 2 else 0

    @property
    def m(self) -> int:
        return int(self.A.shape[0])

    @property
    def d(self) -> int:
        return int(len(self.integer_index))

    @property
    def eq_rows(self) -> List[int]:
        return [i for i, sense in enumerate(self.row_sense) if sense == RowSense.eq]

    @property
    def continuous_index(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[self.integer_index] = False
        return np.flatnonzero(mask)

    def activity(self, x: np.ndarray) -> np.ndarray:
        """
        Returns the row activity g(A, x).
        """
        return self.A @ np.asarray(x, dtype=np.float64)

    def objective(self, x: np.ndarray) -> float:
        return float(self.c @ np.asarray(x, dtype=np.float64))

    def replace(self, **changes) -> MILPInstance:
        return dataclasses.replace(self, **changes)

    def row_label(self, i: int) -> str:
        return self.row_names[i] if self.row_names else f"R{i}"

    def col_label(self, j: int) -> str:
        return self.col_names[j] if self.col_names else f"C{j}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, MILPInstance):
            return NotImplemented
        return (
            self.name == other.name
            and self.A.shape == other.A.shape
            and np.array_equal(self.A, other.A)
            and np.array_equal(self.b, other.b)
            and np.array_equal(self.c, other.c)
            and self.row_sense == other.row_sense
            and np.array_equal(self.integer_index, other.integer_index)
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
            and self.row_names == other.row_names
            and self.col_names == other.col_names
            and self.bounds_materialized == other.bounds_materialized
        )

    __hash__ = None


@dataclasses.dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str


@dataclasses.dataclass
class ValidationReport:
    """
    Lists every invariant violation of an instance or family. An empty report means well-formed.
    """
    issues: List[ValidationIssue] = dataclasses.field(default_factory=list)

    def add(self, code: str, message: str):
        self.issues.append(ValidationIssue(code=code, message=message))

    def extend(self, other: ValidationReport):
        self.issues.extend(other.issues)

    @property
    def ok(self) -> bool:
        return len(self.issues) == 0

    @property
    def codes(self) -> List[str]:
        return [item.code for item in self.issues]

    def __len__(self) -> int:
        return len(self.issues)

    def __str__(self) -> str:
        return "; ".join(item.message for item in self.issues)


def validate_instance(inst: MILPInstance) -> ValidationReport:
    """
    Checks all structural invariants of an instance. Never raises.
    """
    report = ValidationReport()
    m, n = inst.A.shape if inst.A.ndim == 2 else (0, 0)
    if n == 0:
        report.add("no-variables", "Instance has no variables.")
    if len(inst.c) != n:
        report.add("dimension-mismatch", f"Objective has {len(inst.c)} coefficients but A has {n} columns.")
    if len(inst.b) != m:
        report.add("dimension-mismatch", f"Right-hand side has {len(inst.b)} entries but A has {m} rows.")
    if len(inst.row_sense) != m:
        report.add("dimension-mismatch", f"{len(inst.row_sense)} row senses given for {m} rows.")
    if len(inst.lo) != n or len(inst.hi) != n:
        report.add("dimension-mismatch", f"Bounds have lengths {len(inst.lo)}/{len(inst.hi)} for {n} variables.")
    index = [int(item) for item in inst.integer_index]
    if len(set(index)) != len(index):
        report.add("duplicate-integer-index", "Integer index set contains duplicates.")
    if index != sorted(index):
        report.add("unsorted-integer-index", "Integer index set is not sorted.")
    if any(item < 0 or item >= n for item in index):
        report.add("integer-index-range", f"Integer index set is not a subset of 0..{n - 1}.")
    if len(inst.lo) == len(inst.hi):
        for j in np.flatnonzero(inst.lo > inst.hi):
            report.add("inverted-bounds", f"Variable {inst.col_label(int(j))} has lo > hi.")
        if np.isnan(inst.lo).any() or np.isnan(inst.hi).any():
            report.add("non-finite", "Bounds contain NaN.")
        if np.isposinf(inst.lo).any() or np.isneginf(inst.hi).any():
            report.add("inverted-bounds", "A lower bound of +inf or an upper bound of -inf makes the instance empty.")
    for label, values in (("A", inst.A), ("b", inst.b), ("c", inst.c)):
        if values.size and not np.isfinite(values).all():
            report.add("non-finite", f"{label} contains non-finite entries.")
    if inst.row_names is not None and len(inst.row_names) != m:
        report.add("dimension-mismatch", "Number of row names does not match the row count.")
    if inst.col_names is not None and len(inst.col_names) != n:
        report.add("dimension-mismatch", "Number of column names does not match the column count.")
    return report


def materialize_bounds(inst: MILPInstance) -> MILPInstance:
    """
    Turns every finite variable bound into an explicit LE row so that active bounds can be members of a tight
    set. Continuous variables become free afterwards; integer variables keep their bounds as domain.
    """
    if inst.bounds_materialized:
        return inst
    rows: List[np.ndarray] = []
    rhs: List[float] = []
    names: List[str] = []
    for j in range(inst.n):
        if np.isfinite(inst.hi[j]):
            row = np.zeros(inst.n)
            row[j] = 1.0
            rows.append(row)
            rhs.append(float(inst.hi[j]))
            names.append(f"UB_{inst.col_label(j)}")
        if np.isfinite(inst.lo[j]):
            row = np.zeros(inst.n)
            row[j] = -1.0
            rows.append(row)
            rhs.append(-float(inst.lo[j]))
            names.append(f"LB_{inst.col_label(j)}")
    lo = np.full(inst.n, -np.inf)
    hi = np.full(inst.n, np.inf)
    lo[inst.integer_index] = inst.lo[inst.integer_index]
    hi[inst.integer_index] = inst.hi[inst.integer_index]
    A = np.vstack([inst.A] + rows) if rows else inst.A
    row_names = None
    if inst.row_names is not None or inst.col_names is not None:
        row_names = tuple(inst.row_label(i) for i in range(inst.m)) + tuple(names)
    return inst.replace(
        A=A,
        b=np.concatenate([inst.b, np.asarray(rhs, dtype=np.float64)]),
        row_sense=inst.row_sense + (RowSense.le,) * len(rows),
        lo=lo,
        hi=hi,
        row_names=row_names,
        bounds_materialized=True
    )


def build_instance(
        name: str,
        c: Sequence[float],
        A_ub: Sequence[Sequence[float]] | None = None,
        b_ub: Sequence[float] | None = None,
        A_eq: Sequence[Sequence[float]] | None = None,
        b_eq: Sequence[float] | None = None,
        integer_index: Sequence[int] = (),
        bounds: Sequence[Tuple[float, float]] | None = None
) -> MILPInstance:
    """
    Convenience constructor in the (A_eq, b_eq, A_ineq, b_ineq, c, lb, ub, I) layout. LE rows come first.
    """
    n = len(c)
    blocks = []
    rhs = []
    senses = []
    if A_ub is not None and len(A_ub):
        blocks.append(np.asarray(A_ub, dtype=np.float64).reshape(-1, n))
        rhs.extend(b_ub)
        senses.extend([RowSense.le] * len(b_ub))
    if A_eq is not None and len(A_eq):
        blocks.append(np.asarray(A_eq, dtype=np.float64).reshape(-1, n))
        rhs.extend(b_eq)
        senses.extend([RowSense.eq] * len(b_eq))
    A = np.vstack(blocks) if blocks else np.zeros((0, n))
    if bounds is None:
        bounds = [(0.0, np.inf)] * n
    lo = [-np.inf if item[0] is None else item[0] for item in bounds]
    hi = [np.inf if item[1] is None else item[1] for item in bounds]
    return MILPInstance(
        name=name,
        c=c,
        A=A,
        b=rhs,
        row_sense=tuple(senses),
        integer_index=sorted(integer_index),
        lo=lo,
        hi=hi
    )
