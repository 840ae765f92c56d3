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
Reading and writing of MPS files. Data lines are read in free format by default. Fixed format splits them at the
standard field columns instead, which allows names with spaces. Writing always uses free format. GE rows are negated into LE rows, RANGES add one extra LE row per
ranged row and OBJSENSE MAX negates the objective.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import math
import logging
import dataclasses
import numpy as np
from pathlib import Path
from typing import Dict, List, Tuple
from core.utils import ParseError
from core.models.instance import MILPInstance, RowSense
from core.storage import atomic_write_text, read_text

logger = logging.getLogger(__name__)

SECTIONS = {"NAME", "OBJSENSE", "ROWS", "COLUMNS", "RHS", "RANGES", "BOUNDS", "ENDATA"}
BOUND_TYPES_WITHOUT_VALUE = {"FR", "MI", "PL", "BV"}
BOUND_TYPES_WITH_VALUE = {"UP", "LO", "FX", "LI", "UI"}
RANGE_SUFFIX = "_rng"
OBJECTIVE_ROW = "OBJ"
# zero-based [start, end) of the six fixed format fields
FIXED_FIELDS = ((1, 3), (4, 12), (14, 22), (24, 36), (39, 47), (49, 61))


@dataclasses.dataclass
class _Column:
    name: str
    integer: bool
    lo: float = 0.0
    hi: float = math.inf
    lo_given: bool = False
    cost: float = 0.0
    entries: Dict[int, float] = dataclasses.field(default_factory=dict)


class _MpsReader:
    """
    Line-by-line state machine over the sections of an MPS file.
    """

    def __init__(self):
        self.name = ""
        self.maximize = False
        self.objective: str | None = None
        self.free_rows: set = set()
        self.row_types: List[str] = []
        self.row_names: List[str] = []
        self.rows: Dict[str, int] = {}
        self.columns: List[_Column] = []
        self.column_index: Dict[str, int] = {}
        self.rhs: Dict[int, float] = {}
        self.ranges: Dict[int, float] = {}
        self.integer_marker = False

    def _value(self, token: str, line_number: int) -> float:
        try:
            return float(token)
        except ValueError:
            raise ParseError(f"Expected a number but found '{token}'.", line_number)

    def _row(self, name: str, line_number: int) -> int:
        if name not in self.rows:
            raise ParseError(f"Unknown row '{name}'.", line_number)
        return self.rows[name]

    def _column(self, name: str, line_number: int) -> _Column:
        if name not in self.column_index:
            raise ParseError(f"Unknown column '{name}'.", line_number)
        return self.columns[self.column_index[name]]

    def _pairs(self, tokens: List[str], line_number: int) -> List[Tuple[str, str]]:
        """
        Strips an optional set name (odd token count) and returns the (row, value) pairs.
        """
        if len(tokens) % 2 == 1:
            tokens = tokens[1:]
        if not tokens:
            raise ParseError("Expected row/value pairs.", line_number)
        return [(tokens[k], tokens[k + 1]) for k in range(0, len(tokens), 2)]

    def objsense(self, tokens: List[str], line_number: int):
        sense = tokens[0].upper()
        if sense in ("MAX", "MAXIMIZE"):
            self.maximize = True
        elif sense in ("MIN", "MINIMIZE"):
            self.maximize = False
        else:
            raise ParseError(f"Unknown objective sense '{tokens[0]}'.", line_number)

    def row(self, tokens: List[str], line_number: int):
        if len(tokens) != 2:
            raise ParseError("ROWS entries need a type and a name.", line_number)
        kind, name = tokens[0].upper(), tokens[1]
        if kind == "N":
            if self.objective is None:
                self.objective = name
            else:
                logger.warning("Free row %s in line %d is ignored.", name, line_number)
                self.free_rows.add(name)
            return
        if kind not in ("L", "G", "E"):
            raise ParseError(f"Unknown row type '{tokens[0]}'.", line_number)
        if name in self.rows or name == self.objective:
            raise ParseError(f"Row '{name}' is defined twice.", line_number)
        self.rows[name] = len(self.row_names)
        self.row_names.append(name)
        self.row_types.append(kind)

    def column(self, tokens: List[str], line_number: int):
        if len(tokens) >= 3 and tokens[1].strip("'\"").upper() == "MARKER":
            marker = tokens[2].strip("'\"").upper()
            if marker == "INTORG":
                self.integer_marker = True
            elif marker == "INTEND":
                self.integer_marker = False
            else:
                raise ParseError(f"Unknown marker '{tokens[2]}'.", line_number)
            return
        if len(tokens) < 3 or len(tokens) % 2 == 0:
            raise ParseError("COLUMNS entries need a column name followed by row/value pairs.", line_number)
        name = tokens[0]
        if name not in self.column_index:
            self.column_index[name] = len(self.columns)
            self.columns.append(_Column(name=name, integer=self.integer_marker))
        column = self.columns[self.column_index[name]]
        for row, value in zip(tokens[1::2], tokens[2::2]):
            value = self._value(value, line_number)
            if row == self.objective:
                column.cost = value
            elif row in self.free_rows:
                continue
            else:
                column.entries[self._row(row, line_number)] = value

    def rhs_entry(self, tokens: List[str], line_number: int):
        for row, value in self._pairs(tokens, line_number):
            value = self._value(value, line_number)
            if row == self.objective:
                logger.warning("Objective constant in line %d is ignored.", line_number)
            elif row not in self.free_rows:
                self.rhs[self._row(row, line_number)] = value

    def range_entry(self, tokens: List[str], line_number: int):
        for row, value in self._pairs(tokens, line_number):
            self.ranges[self._row(row, line_number)] = self._value(value, line_number)

    def bound(self, tokens: List[str], line_number: int):
        kind = tokens[0].upper()
        if kind in BOUND_TYPES_WITHOUT_VALUE and len(tokens) in (2, 3, 4):
            if kind == "BV" and len(tokens) == 4:
                name = tokens[2]
            else:
                name = tokens[-1] if len(tokens) <= 3 else tokens[2]
            value = None
        elif kind in BOUND_TYPES_WITH_VALUE and len(tokens) in (3, 4):
            name = tokens[-2]
            value = self._value(tokens[-1], line_number)
        elif kind in BOUND_TYPES_WITHOUT_VALUE or kind in BOUND_TYPES_WITH_VALUE:
            raise ParseError(f"Malformed {kind} bound.", line_number)
        else:
            raise ParseError(f"Unknown bound type '{tokens[0]}'.", line_number)
        column = self._column(name, line_number)
        if kind in ("UP", "UI"):
            if value < 0 and column.lo == 0 and not column.lo_given:
                logger.warning("Negative upper bound of %s in line %d makes the lower bound -inf.", name, line_number)
                column.lo = -math.inf
            column.hi = value
        elif kind in ("LO", "LI"):
            column.lo = value
            column.lo_given = True
        elif kind == "FX":
            column.lo = column.hi = value
            column.lo_given = True
        elif kind == "FR":
            column.lo, column.hi = -math.inf, math.inf
            column.lo_given = True
        elif kind == "MI":
            column.lo = -math.inf
            column.lo_given = True
        elif kind == "PL":
            column.hi = math.inf
        elif kind == "BV":
            column.lo, column.hi = 0.0, 1.0
            column.lo_given = True
        if kind in ("BV", "LI", "UI"):
            column.integer = True

    def instance(self) -> MILPInstance:
        m, n = len(self.row_names), len(self.columns)
        A = np.zeros((m, n))
        for j, column in enumerate(self.columns):
            for i, value in column.entries.items():
                A[i, j] = value
        b = np.array([self.rhs.get(i, 0.0) for i in range(m)])
        rows: List[np.ndarray] = []
        rhs: List[float] = []
        senses: List[RowSense] = []
        names: List[str] = []
        extra: List[Tuple[np.ndarray, float, str]] = []

        def add(a: np.ndarray, bi: float, sense: RowSense, name: str):
            rows.append(a)
            rhs.append(bi)
            senses.append(sense)
            names.append(name)

        for i, kind in enumerate(self.row_types):
            a, bi, name = A[i], float(b[i]), self.row_names[i]
            R = self.ranges.get(i)
            if kind == "L":
                add(a, bi, RowSense.le, name)
                if R is not None:
                    extra.append((-a, -(bi - abs(R)), name + RANGE_SUFFIX))
            elif kind == "G":
                add(-a, -bi, RowSense.le, name)
                if R is not None:
                    extra.append((a, bi + abs(R), name + RANGE_SUFFIX))
            elif R is None or R == 0:
                add(a, bi, RowSense.eq, name)
            elif R > 0:
                add(a, bi + R, RowSense.le, name)
                extra.append((-a, -bi, name + RANGE_SUFFIX))
            else:
                add(a, bi, RowSense.le, name)
                extra.append((-a, -(bi + R), name + RANGE_SUFFIX))
        for a, bi, name in extra:
            add(a, bi, RowSense.le, name)
        c = np.array([column.cost for column in self.columns])
        if self.maximize:
            c = -c
        return MILPInstance(
            name=self.name or "mps",
            c=c,
            A=np.vstack(rows) if rows else np.zeros((0, n)),
            b=rhs,
            row_sense=tuple(senses),
            integer_index=[j for j, column in enumerate(self.columns) if column.integer],
            lo=[column.lo for column in self.columns],
            hi=[column.hi for column in self.columns],
            row_names=names,
            col_names=[column.name for column in self.columns]
        )


def _fixed_tokens(line: str) -> List[str]:
    return [line[start:end].strip() for start, end in FIXED_FIELDS if line[start:end].strip()]


def parse_mps(text: str, fixed: bool = False) -> MILPInstance:
    """
    Parses MPS text. Integer columns without bounds get the bounds [0, inf).
    :param fixed: Reads data lines in fixed format, so row and column names may contain spaces.
    :raises ParseError: For malformed lines and unsupported sections, with the line number.
    """
    reader = _MpsReader()
    section = None
    handlers = {
        "OBJSENSE": reader.objsense,
        "ROWS": reader.row,
        "COLUMNS": reader.column,
        "RHS": reader.rhs_entry,
        "RANGES": reader.range_entry,
        "BOUNDS": reader.bound
    }
    ended = False
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("*"):
            continue
        tokens = line.split()
        if fixed and line[0].isspace():
            tokens = _fixed_tokens(line)
        if not line[0].isspace():
            keyword = tokens[0].upper()
            if keyword not in SECTIONS:
                raise ParseError(f"Unsupported section '{tokens[0]}'.", line_number)
            if keyword == "ENDATA":
                ended = True
                break
            if keyword == "NAME":
                reader.name = " ".join(tokens[1:])
                section = None
            elif keyword == "OBJSENSE" and len(tokens) > 1:
                reader.objsense(tokens[1:], line_number)
                section = None
            else:
                section = keyword
            continue
        if section is None:
            raise ParseError("Data line outside of a section.", line_number)
        handlers[section](tokens, line_number)
    if not ended:
        logger.warning("MPS input ends without ENDATA.")
    if reader.objective is None:
        logger.warning("MPS input has no objective row, the objective is zero.")
    return reader.instance()


def read_mps(path: str | Path, fixed: bool = False) -> MILPInstance:
    return parse_mps(read_text(path), fixed)


def _objective_name(row_names: List[str]) -> str:
    name = OBJECTIVE_ROW
    while name in row_names:
        name += "_"
    return name


def _bounds(lo: float, hi: float) -> List[Tuple[str, float | None]]:
    if lo == hi:
        return [("FX", lo)]
    if lo == -math.inf and hi == math.inf:
        return [("FR", None)]
    result = []
    if lo == -math.inf:
        result.append(("MI", None))
    elif lo != 0 or hi < 0:
        result.append(("LO", lo))
    if hi != math.inf:
        result.append(("UP", hi))
    return result


def serialize_mps(inst: MILPInstance) -> str:
    """
    Writes inst as free format MPS with L and E rows only. parse_mps(serialize_mps(inst)) reproduces inst.
    """
    row_names = [inst.row_label(i) for i in range(inst.m)]
    col_names = [inst.col_label(j) for j in range(inst.n)]
    objective = _objective_name(row_names)
    integer = set(int(item) for item in inst.integer_index)
    lines = [f"NAME {inst.name}", "ROWS", f" N {objective}"]
    for name, sense in zip(row_names, inst.row_sense):
        lines.append(f" {'E' if sense == RowSense.eq else 'L'} {name}")
    lines.append("COLUMNS")
    in_marker = False
    markers = 0
    for j, name in enumerate(col_names):
        if (j in integer) != in_marker:
            tag = "'INTORG'" if not in_marker else "'INTEND'"
            lines.append(f"    MARKER{markers} 'MARKER' {tag}")
            markers += 1
            in_marker = not in_marker
        lines.append(f"    {name} {objective} {float(inst.c[j])!r}")
        for i in np.flatnonzero(inst.A[:, j]):
            lines.append(f"    {name} {row_names[i]} {float(inst.A[i, j])!r}")
    if in_marker:
        lines.append(f"    MARKER{markers} 'MARKER' 'INTEND'")
    lines.append("RHS")
    for i in np.flatnonzero(inst.b):
        lines.append(f"    RHS {row_names[i]} {float(inst.b[i])!r}")
    lines.append("BOUNDS")
    for j, name in enumerate(col_names):
        for kind, value in _bounds(float(inst.lo[j]), float(inst.hi[j])):
            lines.append(f" {kind} BND {name}" + (f" {value!r}" if value is not None else ""))
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"


def write_mps(path: str | Path, inst: MILPInstance):
    atomic_write_text(path, serialize_mps(inst))
