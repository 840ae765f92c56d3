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
import json
import math
import pytest
from pydantic import ValidationError
from core.utils import InvalidDataError, NotFoundError
from core.models.strategy import LibraryOrigin
from core.storage import (
    atomic_write_text, finite_or_none, load_family, load_library, read_csv, read_json, read_ndjson, read_text,
    save_family, save_library, write_csv, write_json, write_ndjson
)


def test_atomic_write_replaces_and_leaves_no_temporary_files(tmp_path):
    path = tmp_path / "nested" / "file.txt"
    atomic_write_text(path, "first")
    atomic_write_text(path, "second")
    assert read_text(path) == "second"
    assert os.listdir(path.parent) == ["file.txt"]


def test_atomic_write_keeps_old_content_on_failure(tmp_path, monkeypatch):
    path = tmp_path / "file.txt"
    atomic_write_text(path, "old")

    def fail(*args, **kwargs):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", fail)
    with pytest.raises(OSError):
        atomic_write_text(path, "new")
    assert path.read_text() == "old"
    assert os.listdir(tmp_path) == ["file.txt"]


def test_missing_file(tmp_path):
    with pytest.raises(NotFoundError):
        read_json(tmp_path / "missing.json")


def test_json(tmp_path):
    path = tmp_path / "data.json"
    write_json(path, {"a": [1, 2.5, None]})
    assert read_json(path) == {"a": [1, 2.5, None]}
    with pytest.raises(ValueError):
        write_json(path, {"a": math.nan})
    path.write_text("{broken")
    with pytest.raises(InvalidDataError):
        read_json(path)


def test_ndjson(tmp_path):
    path = tmp_path / "rows.ndjson"
    write_ndjson(path, [{"i": 0}, {"i": 1}])
    assert path.read_text() == '{"i":0}\n{"i":1}\n'
    assert read_ndjson(path) == [{"i": 0}, {"i": 1}]
    path.write_text('{"i":0}\n\n{oops\n')
    with pytest.raises(InvalidDataError, match="line 3"):
        read_ndjson(path)


def test_csv(tmp_path):
    path = tmp_path / "table.csv"
    write_csv(path, ["a", "b"], [[1, "x"], [2, "y, z"]])
    assert read_csv(path) == [{"a": "1", "b": "x"}, {"a": "2", "b": "y, z"}]


def test_finite_or_none():
    assert finite_or_none(1.5) == 1.5
    assert finite_or_none(math.inf) is None
    assert finite_or_none(math.nan) is None


def test_family_roundtrip(tmp_path, fuel_cell_family):
    path = tmp_path / "family.json"
    save_family(path, fuel_cell_family, generator={"kind": "fuel_cell", "horizon": 3})
    document = json.loads(path.read_text())
    assert document["format_version"] == 1
    assert document["generator"]["horizon"] == 3
    # infinite bounds are stored as null
    assert None in document["base_instance"]["hi"]
    family = load_family(path)
    assert family.base_instance == fuel_cell_family.base_instance
    assert family.varying == fuel_cell_family.varying
    assert family.radius == fuel_cell_family.radius
    assert family.name == fuel_cell_family.name


def test_library_roundtrip(tmp_path, toy_library):
    toy_library.add(toy_library[1])
    pruned = toy_library.subset([2, 1])
    path = tmp_path / "library.json"
    save_library(path, pruned)
    library = load_library(path)
    assert library.keys == pruned.keys
    assert library.origin == LibraryOrigin.pruned
    assert library.parent_index == [2, 1]
    assert library.provenance == [0, 1]


def test_library_rejects_tampered_keys(tmp_path, toy_library):
    path = tmp_path / "library.json"
    save_library(path, toy_library)
    document = json.loads(path.read_text())
    document["strategies"][0]["integer_values"] = [7, 7]
    path.write_text(json.dumps(document))
    with pytest.raises(InvalidDataError):
        load_library(path)


def test_unknown_format_version(tmp_path, toy_library):
    path = tmp_path / "library.json"
    save_library(path, toy_library)
    document = json.loads(path.read_text())
    document["format_version"] = 2
    path.write_text(json.dumps(document))
    with pytest.raises(ValidationError):
        load_library(path)
