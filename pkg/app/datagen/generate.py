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
import collections
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple
from core.utils import DatasetGenerationError, InvalidDataError, PreconditionError
from core.utils.workers import parallel_map
from core.models.instance import materialize_bounds
from core.models.family import ParameterizedFamily, sample_instance, validate_family, varying_vector
from core.models.solution import SolveStatus
from core.models.strategy import Strategy, StrategyLibrary
from solvers.milp import BnBConfig, solve_milp
from reduction import EvalRecord, apply_strategy, extract_strategy
from .dataset import Dataset, DatasetRecord, RewardTable, SkippedInstance

logger = logging.getLogger(__name__)

MAX_UNSOLVABLE_FRACTION = 0.5
ROUNDTRIP_TOL = 1e-9
MIN_SAMPLES_FOR_ABORT = 10


def good_turing(strategy_counts: Mapping[str, int] | Iterable[int]) -> float:
    """
    Good-Turing estimate N1/N of the probability that the next sample shows an unseen strategy.
    """
    counts = list(strategy_counts.values()) if isinstance(strategy_counts, Mapping) else list(strategy_counts)
    total = sum(counts)
    if total < 1:
        raise InvalidDataError("The Good-Turing estimator needs at least one observation.")
    return sum(1 for item in counts if item == 1) / total


class GoodTuringStopper:
    """
    Tracks label counts and decides after every labeled instance whether sampling may stop.
    """

    def __init__(self, gt_threshold: float, min_n: int, max_n: int):
        if not 0 < gt_threshold <= 1:
            raise InvalidDataError(f"Good-Turing threshold must be in (0, 1] but is {gt_threshold}.")
        if not 1 <= min_n <= max_n:
            raise InvalidDataError(f"Sample bounds must satisfy 1 <= min_N <= max_N but are {min_n}, {max_n}.")
        self.gt_threshold = gt_threshold
        self.min_n = min_n
        self.max_n = max_n
        self.counts: Dict[str, int] = collections.Counter()
        self.n = 0
        self.estimate = 1.0

    def observe(self, key: str) -> bool:
        """
        Counts one label and returns True if sampling should stop now.
        """
        self.counts[key] += 1
        self.n += 1
        self.estimate = good_turing(self.counts)
        if self.n >= self.min_n and self.estimate <= self.gt_threshold:
            return True
        return self.n >= self.max_n


@dataclasses.dataclass(frozen=True)
class _Labeled:
    seed: int
    status: SolveStatus
    theta: object = None
    f_star: float | None = None
    strategy: Strategy | None = None
    reason: str = ""


def _label(task: Tuple[ParameterizedFamily, int, BnBConfig]) -> _Labeled:
    family, seed, cfg = task
    inst = sample_instance(family, seed)
    solution = solve_milp(inst, cfg)
    if not solution.is_optimal:
        return _Labeled(seed=seed, status=solution.status)
    strategy = extract_strategy(inst, solution)
    _, record = apply_strategy(inst, strategy, f_star=solution.objective)
    if record.p > ROUNDTRIP_TOL or record.d > ROUNDTRIP_TOL:
        logger.warning(
            "Label of seed %d does not reproduce its optimum (p=%.3g, d=%.3g) and is skipped.", seed, record.p, record.d
        )
        return _Labeled(seed=seed, status=solution.status, reason="roundtrip")
    return _Labeled(
        seed=seed,
        status=solution.status,
        theta=varying_vector(family, inst),
        f_star=solution.objective,
        strategy=strategy
    )


def prepare_family(family: ParameterizedFamily) -> ParameterizedFamily:
    """
    Validates the family and materializes the bounds of its base instance.
    """
    report = validate_family(family)
    if not report.ok:
        raise InvalidDataError(f"Family {family.name} is invalid: {report}")
    if family.base_instance.bounds_materialized:
        return family
    return dataclasses.replace(family, base_instance=materialize_bounds(family.base_instance))


def _check_unsolvable(unsolvable: int, sampled: int):
    if unsolvable / sampled > MAX_UNSOLVABLE_FRACTION:
        raise DatasetGenerationError(
            f"{unsolvable} of {sampled} sampled instances could not be solved. The family is probably misconfigured."
        )


def generate_dataset(
        family: ParameterizedFamily,
        gt_threshold: float = 0.05,
        min_N: int = 100,
        max_N: int = 10_000,
        base_seed: int = 0,
        cfg: BnBConfig | None = None,
        workers: int = 1
) -> Dataset:
    """
    Samples and labels instances with seeds base_seed, base_seed + 1, ... until the Good-Turing estimate of the
    labels drops to gt_threshold (after at least min_N labels) or max_N labels exist.
    :param family: The instance family.
    :param gt_threshold: Stopping threshold for N1/N.
    :param min_N: Minimum number of labeled instances.
    :param max_N: Maximum number of labeled instances.
    :param base_seed: Seed of the first instance.
    :param cfg: Branch-and-bound configuration of the labeling solver.
    :param workers: Number of labeling processes. Results are merged in seed order.
    """
    stopper = GoodTuringStopper(gt_threshold, min_N, max_N)
    family = prepare_family(family)
    cfg = cfg or BnBConfig()
    library = StrategyLibrary()
    records: List[DatasetRecord] = []
    skipped: List[SkippedInstance] = []
    sampled = 0
    seed = base_seed
    batch_size = 1 if workers <= 1 else 4 * workers
    done = False
    while not done:
        tasks = [(family, seed + k, cfg) for k in range(batch_size)]
        seed += batch_size
        for item in parallel_map(_label, tasks, workers):
            sampled += 1
            if item.strategy is None:
                skipped.append(SkippedInstance(seed=item.seed, status=item.status, reason=item.reason))
                logger.debug("Instance with seed %d skipped (%s).", item.seed, item.reason or item.status.value)
                if sampled >= MIN_SAMPLES_FOR_ABORT:
                    _check_unsolvable(len(skipped), sampled)
                continue
            library.add(item.strategy)
            records.append(DatasetRecord(
                instance_id=len(records),
                seed=item.seed,
                theta=item.theta,
                f_star=item.f_star,
                label_key=item.strategy.key
            ))
            if stopper.observe(item.strategy.key):
                done = True
                break
        if len(records) and len(records) % 50 == 0 or done:
            logger.info("N=%d, M=%d, good_turing=%.4f", len(records), len(library), stopper.estimate)
    _check_unsolvable(len(skipped), sampled)
    return Dataset(
        family=family,
        records=records,
        library=library,
        skipped=skipped,
        good_turing=stopper.estimate,
        settings={
            "gt_threshold": gt_threshold,
            "min_N": min_N,
            "max_N": max_N,
            "base_seed": base_seed
        }
    )


def _evaluate(task: Tuple[ParameterizedFamily, int, float, List[Tuple[int, Strategy]]]) -> List[Tuple[int, EvalRecord]]:
    family, seed, f_star, strategies = task
    inst = sample_instance(family, seed)
    return [(j, apply_strategy(inst, strategy, f_star=f_star)[1]) for j, strategy in strategies]


def fill_reward_table(
        ds: Dataset,
        instances: Sequence[int] | None = None,
        strategies: Sequence[int] | None = None,
        workers: int = 1
) -> Dataset:
    """
    Computes the missing entries (i, j) of the reward table for the requested instances and library strategies.
    Entries that already exist are kept, so repeated calls resume where the last one stopped.
    """
    if not ds.records:
        raise PreconditionError("Dataset has no labeled instances.")
    if ds.reward_table is None or ds.reward_table.shape != (len(ds), len(ds.library)):
        if ds.reward_table is not None:
            logger.warning("Reward table shape does not match the dataset and is recomputed.")
        ds.reward_table = RewardTable(len(ds), len(ds.library))
    instances = range(len(ds)) if instances is None else instances
    strategies = range(len(ds.library)) if strategies is None else strategies
    todo = ds.reward_table.missing(instances, strategies)
    tasks = [
        (ds.family, ds.records[i].seed, ds.records[i].f_star, [(j, ds.library[j]) for j in columns])
        for i, columns in todo.items()
    ]
    for i, results in zip(todo.keys(), parallel_map(_evaluate, tasks, workers)):
        for j, record in results:
            ds.reward_table.set(i, j, record)
    logger.info("Reward table: %d of %d entries filled.", int(ds.reward_table.filled.sum()), ds.reward_table.r.size)
    return ds
