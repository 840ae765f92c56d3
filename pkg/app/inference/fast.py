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
Single-instance solving with a trained model and timing comparisons against branch and bound.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import time
import logging
import statistics
import dataclasses
import numpy as np
from typing import Any, Dict, List, Sequence
from core.utils import InvalidDataError, PreconditionError
from core.models.instance import MILPInstance, materialize_bounds
from core.models.strategy import StrategyLibrary
from core.storage import finite_or_none
from solvers.milp import BnBConfig, solve_milp
from learner import RewardModel, StrategyFeatures, predict
from .selection import Selection, select_strategy, top_k

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class FastSolveResult:
    selection: Selection
    inference_time_s: float
    solve_time_s: float

    @property
    def total_time_s(self) -> float:
        return self.inference_time_s + self.solve_time_s

    def to_dict(self) -> Dict[str, Any]:
        return {
            "objective": finite_or_none(self.selection.solution.objective),
            "p": finite_or_none(self.selection.record.p),
            "d": finite_or_none(self.selection.record.d),
            "strategy_index": self.selection.index,
            "time_ms": self.total_time_s * 1000.0,
            "all_infeasible": self.selection.all_infeasible,
            "x": self.selection.solution.x.tolist() if self.selection.solution.x is not None else None
        }


def model_theta(model: RewardModel, inst: MILPInstance) -> np.ndarray:
    return np.array([item.read(inst) for item in model.varying], dtype=np.float64)


def prepare_instance(model: RewardModel, inst: MILPInstance) -> MILPInstance:
    """
    Materializes the bounds of inst and checks that its rows line up with the rows the model was trained on.
    """
    inst = materialize_bounds(inst)
    if inst.m != model.norm_stats.n_rows:
        raise InvalidDataError(
            f"Instance {inst.name} has {inst.m} rows after materializing bounds but the model expects "
            f"{model.norm_stats.n_rows}."
        )
    return inst


def fast_solve(
        inst: MILPInstance,
        model: RewardModel,
        library: StrategyLibrary,
        k: int,
        f_star: float | None = None,
        features: StrategyFeatures | None = None,
        workers: int = 1
) -> FastSolveResult:
    """
    Predicts rewards, evaluates the k best strategies and returns the selected one.
    :param features: Precomputed strategy features of library, saves encoding work on repeated calls.
    """
    inst = prepare_instance(model, inst)
    start = time.perf_counter()
    predictions = predict(model, model_theta(model, inst), features if features is not None else library)
    candidates = top_k(predictions, k)
    inference_time_s = time.perf_counter() - start
    start = time.perf_counter()
    selection = select_strategy(inst, candidates, library, f_star=f_star, workers=workers)
    solve_time_s = time.perf_counter() - start
    return FastSolveResult(selection=selection, inference_time_s=inference_time_s, solve_time_s=solve_time_s)


@dataclasses.dataclass(frozen=True)
class BenchCase:
    name: str
    fast_time_s: float
    bnb_time_s: float
    p: float
    d: float
    accurate: bool


@dataclasses.dataclass(frozen=True)
class BenchReport:
    cases: List[BenchCase]
    k: int

    @property
    def median_fast_s(self) -> float:
        return statistics.median(item.fast_time_s for item in self.cases)

    @property
    def median_bnb_s(self) -> float:
        return statistics.median(item.bnb_time_s for item in self.cases)

    @property
    def ratio(self) -> float:
        """
        Median fast time over median branch-and-bound time.
        """
        return self.median_fast_s / self.median_bnb_s if self.median_bnb_s > 0 else float("inf")

    @property
    def accuracy(self) -> float:
        return sum(1 for item in self.cases if item.accurate) / len(self.cases)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_instances": len(self.cases),
            "k": self.k,
            "median_fast_ms": self.median_fast_s * 1000.0,
            "median_bnb_ms": self.median_bnb_s * 1000.0,
            "ratio": finite_or_none(self.ratio),
            "accuracy": self.accuracy
        }


def bench(
        model: RewardModel,
        library: StrategyLibrary,
        instances: Sequence[MILPInstance],
        k: int,
        eps_p: float = 1e-4,
        eps_d: float = 1e-4,
        cfg: BnBConfig | None = None
) -> BenchReport:
    """
    Times the model path (inference plus reduced solves) and branch and bound on the same instances. Runs
    sequentially so that timings are comparable.
    """
    if not instances:
        raise PreconditionError("Benchmark needs at least one instance.")
    features = StrategyFeatures.create(library, model.norm_stats)
    cases = []
    for inst in instances:
        inst = prepare_instance(model, inst)
        reference = solve_milp(inst, cfg)
        if not reference.is_optimal:
            logger.warning("Instance %s skipped, branch and bound ended with %s.", inst.name, reference.status.value)
            continue
        result = fast_solve(inst, model, library, k, f_star=reference.objective, features=features)
        record = result.selection.record
        cases.append(BenchCase(
            name=inst.name,
            fast_time_s=result.total_time_s,
            bnb_time_s=reference.solve_time_s,
            p=record.p,
            d=record.d,
            accurate=record.accurate(eps_p, eps_d)
        ))
    if not cases:
        raise PreconditionError("No benchmark instance could be solved to optimality.")
    report = BenchReport(cases=cases, k=k)
    logger.info(
        "Median fast path %.3f ms, median branch and bound %.3f ms, ratio %.4f.",
        report.median_fast_s * 1000.0, report.median_bnb_s * 1000.0, report.ratio
    )
    return report
