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

import json
import pytest
from pathlib import Path
from commands import EXIT_INPUT, EXIT_OK, build_parser, run
from core.storage import load_library, write_json
from datagen import Dataset
from families import build_fuel_cell_instance, write_mps


@pytest.fixture
def config_path(tmp_path) -> Path:
    path = tmp_path / "config.json"
    write_json(path, {
        "family": {"kind": "fuel_cell", "horizon": 3, "radius": 0.1},
        "datagen": {"gt_threshold": 0.5, "min_n": 8, "max_n": 8, "n_test": 4, "base_seed": 7},
        "train": {"epochs": 2, "n_layers": 1},
        "inference": {"k": 3, "n_bench": 2},
        "output_dir": str(tmp_path / "runs")
    })
    return path


def _json_output(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_usage_errors_exit_with_one(capsys):
    assert run(["generate", "--unknown"]) == EXIT_INPUT
    assert run(["nope"]) == EXIT_INPUT
    assert run([]) == EXIT_INPUT
    assert "usage" in capsys.readouterr().err


def test_help_exits_with_zero(capsys):
    assert run(["--help"]) == EXIT_OK
    assert "oracle-check" in capsys.readouterr().out


def test_config_and_seed_are_accepted_on_both_levels():
    parser = build_parser()
    args = parser.parse_args(["--config", "a.json", "label", "--dataset", "d"])
    assert args.config == "a.json" and args.seed is None
    args = parser.parse_args(["--config", "a.json", "label", "--dataset", "d", "--config", "b.json", "--seed", "3"])
    assert args.config == "b.json" and args.seed == 3


def test_missing_inputs_exit_with_one(tmp_path):
    assert run(["label", "--dataset", str(tmp_path / "missing")]) == EXIT_INPUT
    path = tmp_path / "bad.json"
    write_json(path, {"datagen": {"min_n": 5, "max_n": 2}})
    assert run(["oracle-check", "--config", str(path)]) == EXIT_INPUT


def test_pipeline(tmp_path, config_path, capsys, caplog):
    config = str(config_path)
    train_dir = tmp_path / "train"
    test_dir = tmp_path / "test"
    library_path = tmp_path / "pruned" / "library.json"
    model_path = tmp_path / "model.json"

    assert run(["generate", "--config", config, "--out", str(train_dir)]) == EXIT_OK
    assert "N=8" in capsys.readouterr().out
    assert run(["--config", config, "generate", "--split", "test", "--out", str(test_dir)]) == EXIT_OK
    assert len(Dataset.load(test_dir)) == 4

    assert run(["prune", "--config", config, "--dataset", str(train_dir), "--out", str(library_path)]) == EXIT_INPUT
    assert "reward table incomplete" in caplog.text

    assert run(["label", "--dataset", str(train_dir)]) == EXIT_OK
    assert "complete=True" in capsys.readouterr().out
    assert run(["prune", "--config", config, "--dataset", str(train_dir), "--out", str(library_path)]) == EXIT_OK
    library = load_library(library_path)
    assert 1 <= len(library) <= len(Dataset.load(train_dir).library)
    assert (library_path.parent / "coverage.json").is_file()
    capsys.readouterr()

    assert run([
        "train", "--config", config, "--dataset", str(train_dir), "--library", str(library_path),
        "--out", str(model_path)
    ]) == EXIT_OK
    assert "epochs=2" in capsys.readouterr().out

    assert run([
        "eval", "--config", config, "--dataset", str(test_dir), "--model", str(model_path),
        "--library", str(library_path), "--out", str(tmp_path / "eval")
    ]) == EXIT_OK
    summary = _json_output(capsys)
    assert summary["n_instances"] == 4
    assert summary["k"] == min(3, len(library))
    assert (tmp_path / "eval" / "summary.json").is_file()
    assert (tmp_path / "eval" / "metrics.csv").is_file()

    assert run([
        "solve", "--config", config, "--dataset", str(test_dir), "--index", "1", "--model", str(model_path),
        "--library", str(library_path)
    ]) == EXIT_OK
    result = _json_output(capsys)
    assert 0 <= result["strategy_index"] < len(library)
    assert "x" not in result
    assert run([
        "solve", "--config", config, "--dataset", str(test_dir), "--index", "9", "--model", str(model_path),
        "--library", str(library_path)
    ]) == EXIT_INPUT

    mps_path = tmp_path / "base.mps"
    write_mps(mps_path, build_fuel_cell_instance(3))
    assert run([
        "solve", "--config", config, "--instance", str(mps_path), "--reference", "--model", str(model_path),
        "--library", str(library_path)
    ]) == EXIT_OK
    result = _json_output(capsys)
    assert result["d"] is None or result["d"] >= -1e-6

    assert run([
        "bench", "--config", config, "--model", str(model_path), "--library", str(library_path),
        "--out", str(tmp_path / "bench.json")
    ]) == EXIT_OK
    report = _json_output(capsys)
    assert report["n_instances"] == 2
    assert json.loads((tmp_path / "bench.json").read_text()) == report


def test_oracle_check(config_path, capsys):
    assert run(["oracle-check", "--config", str(config_path), "--n-cases", "3"]) == EXIT_OK
    report = _json_output(capsys)
    assert report["n_cases"] == 3
    assert report["mismatches"] == 0


def _run_stages(config: str, root: Path) -> Path:
    train_dir, test_dir = root / "train", root / "test"
    library_path, model_path = root / "pruned" / "library.json", root / "model.json"
    assert run(["generate", "--config", config, "--out", str(train_dir)]) == EXIT_OK
    assert run(["generate", "--config", config, "--split", "test", "--out", str(test_dir)]) == EXIT_OK
    assert run(["label", "--dataset", str(train_dir)]) == EXIT_OK
    assert run(["prune", "--config", config, "--dataset", str(train_dir), "--out", str(library_path)]) == EXIT_OK
    assert run([
        "train", "--config", config, "--dataset", str(train_dir), "--library", str(library_path),
        "--out", str(model_path)
    ]) == EXIT_OK
    assert run([
        "eval", "--config", config, "--dataset", str(test_dir), "--model", str(model_path),
        "--library", str(library_path), "--out", str(root / "eval")
    ]) == EXIT_OK
    return root


def test_stages_write_identical_files_when_repeated(tmp_path, config_path):
    first = _run_stages(str(config_path), tmp_path / "first")
    second = _run_stages(str(config_path), tmp_path / "second")
    names = sorted(
        str(path.relative_to(first)) for path in first.rglob("*") if path.is_file() and path.name != "timings.csv"
    )
    assert "model.json" in names
    assert "eval/metrics.csv" in names
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name
