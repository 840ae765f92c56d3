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

import pytest
import dataclasses
import numpy as np
from core.utils import DatasetGenerationError, InvalidDataError, NotFoundError
from core.models.instance import build_instance
from core.models.family import Coordinate, ParameterizedFamily
from core.models.strategy import StrategyLibrary
from core.models.solution import SolveStatus
from datagen import (
    Dataset, GoodTuringStopper, SkippedInstance, fill_reward_table, generate_dataset, good_turing
)
from datagen import generate as generate_module
from families import build_fuel_cell_family
from reduction import EvalRecord, ReducedStatus, reward


def _records(ds: Dataset):
    return [(item.seed, item.f_star, item.label_key, item.theta.tolist()) for item in ds.records]


def test_good_turing():
    assert good_turing({"a": 1, "b": 1, "c": 2}) == 0.5
    assert good_turing([3, 3]) == 0.0
    with pytest.raises(InvalidDataError):
        good_turing({})


def test_stopper_respects_bounds():
    stopper = GoodTuringStopper(gt_threshold=0.5, min_n=3, max_n=5)
    assert not stopper.observe("a")
    assert not stopper.observe("a")
    assert stopper.observe("a")
    stopper = GoodTuringStopper(gt_threshold=0.01, min_n=1, max_n=3)
    assert [stopper.observe(key) for key in "xyz"] == [False, False, True]
    with pytest.raises(InvalidDataError):
        GoodTuringStopper(gt_threshold=0.0, min_n=1, max_n=1)
    with pytest.raises(InvalidDataError):
        GoodTuringStopper(gt_threshold=0.1, min_n=4, max_n=2)


def test_stopper_waits_for_the_first_low_estimate():
    stopper = GoodTuringStopper(gt_threshold=0.2, min_n=3, max_n=100)
    decisions = [stopper.observe(key) for key in "aabcab"]
    assert decisions == [False] * 5 + [True]
    assert stopper.estimate == pytest.approx(1 / 6)


def test_generate_dataset(fuel_cell_dataset):
    ds = fuel_cell_dataset
    assert len(ds) == 12
    assert [item.seed for item in ds.records] == list(range(7, 19))
    assert sum(ds.library.provenance) == 12
    assert ds.thetas.shape == (12, ds.family.dim)
    assert all(key in ds.library for key in (item.label_key for item in ds.records))
    assert ds.family.base_instance.bounds_materialized
    assert ds.skipped == []
    assert 0.0 <= ds.good_turing <= 1.0


def test_generate_dataset_is_deterministic(fuel_cell_dataset):
    again = generate_dataset(build_fuel_cell_family(3, r=0.1), gt_threshold=0.5, min_N=12, max_N=12, base_seed=7)
    assert _records(again) == _records(fuel_cell_dataset)
    assert again.library.keys == fuel_cell_dataset.library.keys


def test_generate_dataset_with_workers(fuel_cell_dataset):
    parallel = generate_dataset(
        build_fuel_cell_family(3, r=0.1), gt_threshold=0.5, min_N=12, max_N=12, base_seed=7, workers=2
    )
    assert _records(parallel) == _records(fuel_cell_dataset)


def test_unsolvable_family_aborts():
    inst = build_instance(name="odd", c=[1.0], A_eq=[[2.0]], b_eq=[1.0], integer_index=[0], bounds=[(0.0, 1.0)])
    family = ParameterizedFamily(base_instance=inst, varying=(Coordinate.of_b(0),), radius=0.1)
    with pytest.raises(DatasetGenerationError):
        generate_dataset(family, min_N=1, max_N=5)


def test_label_strategies_score_perfectly(labeled_dataset):
    table = labeled_dataset.reward_table
    assert table.complete
    for i, j in enumerate(labeled_dataset.labels):
        record = table.get(i, j)
        assert record.reduced_status == ReducedStatus.optimal
        assert record.p <= 1e-9
        assert record.d <= 1e-9


def test_fill_reward_table_resumes(fuel_cell_family):
    ds = generate_dataset(fuel_cell_family, gt_threshold=1.0, min_N=4, max_N=4, base_seed=3)
    fill_reward_table(ds, instances=[0, 1])
    assert ds.reward_table.filled[:2].all()
    assert not ds.reward_table.filled[2:].any()
    first = ds.reward_table.r[:2].copy()
    fill_reward_table(ds)
    assert ds.reward_table.complete
    assert np.array_equal(ds.reward_table.r[:2], first)


def test_dataset_roundtrip(labeled_dataset, tmp_path):
    labeled_dataset.save(tmp_path / "first")
    loaded = Dataset.load(tmp_path / "first")
    assert _records(loaded) == _records(labeled_dataset)
    assert loaded.library.keys == labeled_dataset.library.keys
    assert loaded.library.provenance == labeled_dataset.library.provenance
    assert loaded.family.base_instance == labeled_dataset.family.base_instance
    assert loaded.family.varying == labeled_dataset.family.varying
    assert np.array_equal(loaded.reward_table.r, labeled_dataset.reward_table.r)
    assert np.array_equal(loaded.reward_table.p, labeled_dataset.reward_table.p)
    loaded.save(tmp_path / "second")
    for name in ("dataset.json", "family.json", "library.json", "records.ndjson", "rewards.ndjson"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_regenerated_instances_match(labeled_dataset):
    for i in range(3):
        inst = labeled_dataset.instance(i)
        theta = np.array([item.read(inst) for item in labeled_dataset.family.varying])
        assert np.array_equal(theta, labeled_dataset.records[i].theta)


def test_subset_and_split(labeled_dataset):
    first, second = labeled_dataset.split(5)
    assert (len(first), len(second)) == (5, 7)
    assert [item.instance_id for item in second.records] == list(range(7))
    assert second.records[0].seed == labeled_dataset.records[5].seed
    assert np.array_equal(second.reward_table.r, labeled_dataset.reward_table.r[5:])


def test_load_missing_dataset(tmp_path):
    with pytest.raises(NotFoundError):
        Dataset.load(tmp_path / "missing")


def test_labels_must_be_in_library(fuel_cell_dataset):
    record = dataclasses.replace(fuel_cell_dataset.records[0], label_key="unknown")
    with pytest.raises(InvalidDataError):
        Dataset(family=fuel_cell_dataset.family, records=[record], library=StrategyLibrary())


def test_labels_that_do_not_reproduce_are_skipped(monkeypatch, caplog, fuel_cell_family):
    def broken(inst, strategy, f_star):
        return None, EvalRecord(p=0.5, d=0.0, r=reward(0.5, 0.0), reduced_status=ReducedStatus.optimal)

    monkeypatch.setattr(generate_module, "apply_strategy", broken)
    with pytest.raises(DatasetGenerationError):
        generate_dataset(fuel_cell_family, gt_threshold=1.0, min_N=2, max_N=20)
    assert "does not reproduce its optimum" in caplog.text


def test_skip_reason_roundtrip(fuel_cell_family, tmp_path):
    ds = generate_dataset(fuel_cell_family, gt_threshold=1.0, min_N=2, max_N=2, base_seed=3)
    ds.skipped.append(SkippedInstance(seed=99, status=SolveStatus.optimal, reason="roundtrip"))
    ds.save(tmp_path / "ds")
    assert Dataset.load(tmp_path / "ds").skipped == ds.skipped
