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
Accuracy, infeasibility and suboptimality of Top-k strategy selection on a test set.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import time
import logging
import dataclasses
import numpy as np
from pathlib import Path
from typing import Any, Dict, List, Tuple
from core.utils import InvalidDataError
from core.utils.workers import parallel_map
from core.models.family import ParameterizedFamily, sample_instance
from core.models.strategy import StrategyLibrary
from core.storage import finite_or_none, write_csv, write_json
from datagen import Dataset
from learner import RewardModel, predict
from .selection import select_strategy, top_k

logger = logging.getLogger(__name__)

DEFAULT_K = 10
DEFAULT_EPS = 1e-4

METRICS_FILE = "metrics.csv"
TIMINGS_FILE = "timings.csv"
SUMMARY_FILE = "summary.json"


@dataclasses.dataclass(frozen=True)
class InstanceOutcome:
    instance_id: int
    selected: int
    p: float
    d: float
    r: float
    accurate: bool
    has_solution: bool
    solve_time_s: float = 0.0
    inference_time_s: float = 0.0


@dataclasses.dataclass(frozen=True)
class Metrics:
    """
    Aggregates over all test instances. Infeasibility and suboptimality statistics only cover instances whose
    selected strategy produced a solution.
    """
    n_instances: int
    k: int
    eps_p: float
    eps_d: float
    accuracy: float
    n_accurate: int
    n_without_solution: int
    mean_p: float
    max_p: float
    mean_d: float
    max_d: float
    mean_inference_time_s: float = 0.0
    mean_solve_time_s: float = 0.0

    def summary(self) -> Dict[str, Any]:
        """
        Deterministic part of the metrics, free of timings.
        """
        result = dataclasses.asdict(self)
        result.pop("mean_inference_time_s")
        result.pop("mean_solve_time_s")
        return {key: finite_or_none(value) if isinstance(value, float) else value for key, value in result.items()}


@dataclasses.dataclass(frozen=True)
class EvaluationResult:
    metrics: Metrics
    outcomes: List[InstanceOutcome]

    def write(self, directory: str | Path):
        """
        Writes metrics.csv and summary.json (reproducible) and timings.csv.
        """
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        write_csv(
            directory / METRICS_FILE,
            ["instance_id", "selected", "p", "d", "r", "accurate", "has_solution"],
            [
                [item.instance_id, item.selected, repr(item.p), repr(item.d), repr(item.r), int(item.accurate),
                 int(item.has_solution)]
                for item in self.outcomes
            ]
        )
        write_csv(
            directory / TIMINGS_FILE,
            ["instance_id", "inference_time_s", "solve_time_s"],
            [[item.instance_id, repr(item.inference_time_s), repr(item.solve_time_s)] for item in self.outcomes]
        )
        write_json(directory / SUMMARY_FILE, self.metrics.summary())


def _aggregate(outcomes: List[InstanceOutcome], k: int, eps_p: float, eps_d: float) -> Metrics:
    solved = [item for item in outcomes if item.has_solution]
    p = np.array([item.p for item in solved])
    d = np.array([item.d for item in solved])
    n_accurate = sum(1 for item in outcomes if item.accurate)
    return Metrics(
        n_instances=len(outcomes),
        k=k,
        eps_p=eps_p,
        eps_d=eps_d,
        accuracy=n_accurate / len(outcomes) if outcomes else 0.0,
        n_accurate=n_accurate,
        n_without_solution=len(outcomes) - len(solved),
        mean_p=float(p.mean()) if len(p) else float("nan"),
        max_p=float(p.max()) if len(p) else float("nan"),
        mean_d=float(d.mean()) if len(d) else float("nan"),
        max_d=float(d.max()) if len(d) else float("nan"),
        mean_inference_time_s=float(np.mean([item.inference_time_s for item in outcomes])) if outcomes else 0.0,
        mean_solve_time_s=float(np.mean([item.solve_time_s for item in outcomes])) if outcomes else 0.0
    )


def _select(
        task: Tuple[ParameterizedFamily, int, int, float, List[int], StrategyLibrary, float, float]
) -> InstanceOutcome:
    family, instance_id, seed, f_star, candidates, library, eps_p, eps_d = task
    selection = select_strategy(sample_instance(family, seed), candidates, library, f_star=f_star)
    record = selection.record
    return InstanceOutcome(
        instance_id=instance_id,
        selected=selection.index,
        p=record.p,
        d=record.d,
        r=record.r,
        accurate=record.accurate(eps_p, eps_d),
        has_solution=record.has_solution,
        solve_time_s=record.solve_time_s
    )


def evaluate_predictions(
        ds_test: Dataset,
        library: StrategyLibrary,
        predictions: np.ndarray,
        k: int = DEFAULT_K,
        eps_p: float = DEFAULT_EPS,
        eps_d: float = DEFAULT_EPS,
        workers: int = 1
) -> EvaluationResult:
    """
    Selects a strategy for every test instance from the top k of the given predicted rewards.
    :param ds_test: Test instances with known optimal objectives.
    :param library: The strategy library the predictions refer to.
    :param predictions: Predicted rewards of shape (N, M).
    """
    predictions = np.atleast_2d(np.asarray(predictions, dtype=np.float64))
    if predictions.shape != (len(ds_test), len(library)):
        raise InvalidDataError(
            f"Predictions have shape {predictions.shape} but {(len(ds_test), len(library))} is expected."
        )
    tasks = [
        (ds_test.family, i, record.seed, record.f_star, top_k(predictions[i], k), library, eps_p, eps_d)
        for i, record in enumerate(ds_test.records)
    ]
    outcomes = parallel_map(_select, tasks, workers)
    metrics = _aggregate(outcomes, k, eps_p, eps_d)
    logger.info("Accuracy at k=%d: %.4f (%d of %d).", k, metrics.accuracy, metrics.n_accurate, metrics.n_instances)
    return EvaluationResult(metrics=metrics, outcomes=outcomes)


def evaluate(
        model: RewardModel,
        ds_test: Dataset,
        library: StrategyLibrary,
        k: int = DEFAULT_K,
        eps_p: float = DEFAULT_EPS,
        eps_d: float = DEFAULT_EPS,
        workers: int = 1
) -> EvaluationResult:
    """
    Evaluates the model on ds_test. Inference time is measured for the whole batch and split evenly.
    """
    start = time.perf_counter()
    predictions = predict(model, ds_test.thetas, library) if len(ds_test) else np.zeros((0, len(library)))
    inference_time_s = (time.perf_counter() - start) / max(len(ds_test), 1)
    result = evaluate_predictions(ds_test, library, predictions, k, eps_p, eps_d, workers)
    outcomes = [dataclasses.replace(item, inference_time_s=inference_time_s) for item in result.outcomes]
    return EvaluationResult(metrics=_aggregate(outcomes, k, eps_p, eps_d), outcomes=outcomes)
