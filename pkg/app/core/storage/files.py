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

import io
import os
import csv
import json
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence
from core.utils import InvalidDataError, NotFoundError


def atomic_write_text(path: str | Path, text: str):
    """
    Writes text to a temporary file next to path and renames it into place.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle = tempfile.NamedTemporaryFile(
        mode="w", encoding="utf-8", newline="", dir=path.parent, prefix=f".{path.name}.", delete=False
    )
    try:
        with handle:
            handle.write(text)
        os.replace(handle.name, path)
    except BaseException:
        if os.path.exists(handle.name):
            os.unlink(handle.name)
        raise


def read_text(path: str | Path) -> str:
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"File {path} not found.")
    return path.read_text(encoding="utf-8")


def write_json(path: str | Path, data: Any):
    atomic_write_text(path, json.dumps(data, indent=2, allow_nan=False) + "\n")


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as ex:
        raise InvalidDataError(f"File {path} is not valid JSON: {ex}")


def write_ndjson(path: str | Path, rows: Iterable[Dict[str, Any]]):
    lines = [json.dumps(row, separators=(",", ":"), allow_nan=False) for row in rows]
    atomic_write_text(path, "".join(line + "\n" for line in lines))


def read_ndjson(path: str | Path) -> List[Dict[str, Any]]:
    result = []
    for number, line in enumerate(read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            result.append(json.loads(line))
        except json.JSONDecodeError as ex:
            raise InvalidDataError(f"{path}, line {number}: invalid JSON ({ex}).")
    return result


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    atomic_write_text(path, buffer.getvalue())


def read_csv(path: str | Path) -> List[Dict[str, str]]:
    return list(csv.DictReader(io.StringIO(read_text(path))))
