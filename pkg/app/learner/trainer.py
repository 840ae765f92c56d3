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
Mini-batch training of the preference model and reward prediction with a trained model.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import enum
import logging
import dataclasses
import numpy as np
from typing import List, Optional, Sequence, Tuple
from pydantic import BaseModel, ConfigDict, Field
from core.utils import InvalidDataError, PreconditionError, TrainingError
from core.models.strategy import StrategyLibrary
from datagen import Dataset
from .encoding import STD_GUARD, NormStats, StrategyFeatures, encode_thetas, fit_norm_stats
from .network import RewardModel, backward, forward, forward_with_cache
from .losses import loss_preference, loss_reward_fit, loss_total_with_gradient
from .optim import AdamW
from .preferences import TIE_TOL, PairBatch, PreferenceSet, build_preference_set, orient_pairs, sample_nr_pairs

logger = logging.getLogger(__name__)

MAX_BATCH_SIZE = 128


class LossMode(str, enum.Enum):
    preference = "PREFERENCE"
    reward_fit = "REWARD_FIT"


class SamplingMode(str, enum.Enum):
    ranked = "RANKED"
    nr = "NR"


class TrainConfig(BaseModel):
    """
    Hyperparameters of a training run. lambda_2 defaults to 1 - lambda_1.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)
    lambda_1: float = Field(default=0.85, ge=0)
    lambda_2: Optional[float] = Field(default=None, ge=0)
    learning_rate: float = Field(default=1e-3, ge=0)
    lr_decay: float = Field(default=0.9, gt=0, le=1)
    lr_decay_period: int = Field(default=10, ge=1)
    epochs: int = Field(default=100, ge=0)
    batch_size: Optional[int] = Field(default=None, ge=1)
    n_layers: int = Field(default=2, ge=0)
    beta_1: float = Field(default=0.9, ge=0, lt=1)
    beta_2: float = Field(default=0.999, ge=0, lt=1)
    weight_decay: float = Field(default=0.01, ge=0)
    loss_mode: LossMode = LossMode.preference
    sampling_mode: SamplingMode = SamplingMode.ranked
    nr_pair_budget: Optional[int] = Field(default=None, ge=1)
    tie_tol: float = Field(default=TIE_TOL, ge=0)
    seed: int = 0

    @property
    def loss_weights(self) -> Tuple[float, float]:
        lambda_2 = max(0.0, 1.0 - self.lambda_1) if self.lambda_2 is None else self.lambda_2
        return self.lambda_1, lambda_2

    def learning_rate_at(self, epoch: int) -> float:
        return self.learning_rate * self.lr_decay ** (epoch // self.lr_decay_period)

    def resolve_batch_size(self, n_instances: int) -> int:
        if self.batch_size is not None:
            return self.batch_size
        return min(MAX_BATCH_SIZE, max(1, n_instances // 4))


@dataclasses.dataclass(frozen=True)
class TrainingData:
    """
    Encoded tokens, standardized rewards and pair samples of all training instances.
    """
    tokens: np.ndarray
    rewards: np.ndarray
    preferences: List[PreferenceSet]
    reward_mean: float
    reward_std: float
    norm_stats: NormStats

    def __len__(self) -> int:
        return self.tokens.shape[0]

    def pairs(self, indices: Sequence[int]) -> PairBatch:
        return PairBatch.stack([self.preferences[i] for i in indices])


def library_columns(ds: Dataset, library: StrategyLibrary) -> List[int]:
    """
    Maps every strategy of library to its column in the reward table of ds.
    """
    columns = []
    for key in library.keys:
        j = ds.library.index_of(key)
        if j is None:
            raise InvalidDataError(f"Strategy {key} is not part of the dataset library.")
        columns.append(j)
    return columns


def reward_matrix(ds: Dataset, library: StrategyLibrary) -> np.ndarray:
    """
    Rewards of all dataset instances on the strategies of library, shape (N, M).
    """
    if ds.reward_table is None:
        raise PreconditionError("reward table incomplete")
    table = ds.reward_table.columns(library_columns(ds, library))
    if not table.complete:
        raise PreconditionError("reward table incomplete")
    rewards = table.r.astype(np.float64)
    if not np.all(np.isfinite(rewards)):
        raise InvalidDataError("Reward table contains non-finite rewards.")
    return rewards


def _preferences(
        rewards: np.ndarray,
        reward_std: float,
        cfg: TrainConfig,
        rng: np.random.Generator
) -> List[PreferenceSet]:
    result = []
    n_strategies = rewards.shape[1]
    for row in rewards:
        if cfg.sampling_mode == SamplingMode.nr:
            item = orient_pairs(row, sample_nr_pairs(n_strategies, cfg.nr_pair_budget, rng), cfg.tie_tol)
        else:
            item = build_preference_set(row, cfg.tie_tol)
        result.append(dataclasses.replace(item, delta=item.delta / reward_std))
    return result


def prepare_training_data(
        ds: Dataset,
        library: StrategyLibrary,
        cfg: TrainConfig,
        rng: np.random.Generator
) -> TrainingData:
    rewards = reward_matrix(ds, library)
    reward_mean = float(rewards.mean())
    reward_std = float(rewards.std())
    reward_std = reward_std if reward_std >= STD_GUARD else 1.0
    stats = fit_norm_stats(ds.thetas, library, ds.family.base_instance.m)
    features = StrategyFeatures.create(library, stats)
    return TrainingData(
        tokens=encode_thetas(ds.thetas, features, stats),
        rewards=(rewards - reward_mean) / reward_std,
        preferences=_preferences(rewards, reward_std, cfg, rng),
        reward_mean=reward_mean,
        reward_std=reward_std,
        norm_stats=stats
    )


def batch_loss(
        outputs: np.ndarray,
        cfg: TrainConfig,
        pairs: PairBatch | None = None,
        rewards: np.ndarray | None = None
) -> Tuple[float, np.ndarray]:
    """
    Loss of the configured mode and its gradient with respect to the outputs.
    """
    if cfg.loss_mode == LossMode.reward_fit:
        return loss_reward_fit(outputs, rewards)
    if cfg.sampling_mode == SamplingMode.nr:
        return loss_preference(outputs, pairs)
    lambda_1, lambda_2 = cfg.loss_weights
    return loss_total_with_gradient(outputs, pairs, lambda_1, lambda_2)


def batch_objective(
        model: RewardModel,
        tokens: np.ndarray,
        cfg: TrainConfig,
        pairs: PairBatch | None = None,
        rewards: np.ndarray | None = None
) -> Tuple[float, List[np.ndarray]]:
    """
    Loss of one batch and its gradients aligned with model.parameters().
    """
    outputs, cache = forward_with_cache(model, tokens)
    value, d_out = batch_loss(outputs, cfg, pairs, rewards)
    return value, backward(model, cache, d_out)


def train(ds: Dataset, library: StrategyLibrary, cfg: TrainConfig | None = None) -> RewardModel:
    """
    Trains the preference model on the training instances of ds restricted to the strategies of library.
    :param ds: Dataset with a complete reward table over library.
    :param library: The (pruned) strategy library the model ranks.
    :param cfg: Hyperparameters.
    :return: The trained model. Its loss_trace holds the mean loss of every epoch.
    """
    cfg = cfg or TrainConfig()
    if len(ds) == 0:
        raise PreconditionError("Dataset has no training instances.")
    if len(library) == 0:
        raise PreconditionError("Strategy library is empty.")
    if cfg.learning_rate == 0:
        logger.warning("Learning rate is zero, the parameters will not change.")
    if cfg.loss_mode == LossMode.preference and cfg.sampling_mode == SamplingMode.ranked and cfg.loss_weights == (0, 0):
        logger.warning("Both loss weights are zero, training has no effect.")
    rng = np.random.default_rng(cfg.seed)
    data = prepare_training_data(ds, library, cfg, rng)
    model = RewardModel.initialize(
        n_features=data.tokens.shape[2],
        n_layers=cfg.n_layers,
        rng=rng,
        norm_stats=data.norm_stats,
        varying=ds.family.varying,
        reward_mean=data.reward_mean,
        reward_std=data.reward_std,
        library_keys=tuple(library.keys)
    )
    optimizer = AdamW(
        model.parameters(),
        lr=cfg.learning_rate,
        beta_1=cfg.beta_1,
        beta_2=cfg.beta_2,
        weight_decay=cfg.weight_decay
    )
    batch_size = cfg.resolve_batch_size(len(data))
    logger.info(
        "Training on N=%d instances, M=%d strategies, F=%d features, batch size %d.",
        len(data), len(library), data.tokens.shape[2], batch_size
    )
    batch_index = 0
    for epoch in range(cfg.epochs):
        optimizer.lr = cfg.learning_rate_at(epoch)
        permutation = rng.permutation(len(data))
        total = 0.0
        for start in range(0, len(data), batch_size):
            indices = permutation[start:start + batch_size]
            value, gradients = batch_objective(
                model, data.tokens[indices], cfg, pairs=data.pairs(indices), rewards=data.rewards[indices]
            )
            if not np.isfinite(value) or not all(np.all(np.isfinite(item)) for item in gradients):
                raise TrainingError(f"Non-finite loss {value} in epoch {epoch}.", batch_index=batch_index)
            optimizer.step(gradients)
            total += value * len(indices)
            batch_index += 1
        model.loss_trace.append(total / len(data))
        if epoch % 10 == 0 or epoch == cfg.epochs - 1:
            logger.info("Epoch %d: loss=%.6f, lr=%.3g", epoch, model.loss_trace[-1], optimizer.lr)
    return model


def predict(model: RewardModel, theta: np.ndarray, library: StrategyLibrary | StrategyFeatures) -> np.ndarray:
    """
    Predicted rewards in reward units for one instance (shape (M,)) or several instances (shape (N, M)).
    """
    if isinstance(library, StrategyLibrary) and model.library_keys and tuple(library.keys) != model.library_keys:
        raise InvalidDataError("The strategy library does not match the library the model was trained on.")
    theta = np.asarray(theta, dtype=np.float64)
    tokens = encode_thetas(np.atleast_2d(theta), library, model.norm_stats)
    outputs = forward(model, tokens) * model.reward_std + model.reward_mean
    return outputs[0] if theta.ndim == 1 else outputs
