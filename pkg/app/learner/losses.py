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
Training losses on batches of predictions of shape (B, M). Every loss returns its value and the gradient with
respect to the predictions.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import logging
import numpy as np
from typing import Tuple
from scipy.special import expit
from .preferences import PairBatch

logger = logging.getLogger(__name__)


def _pair_differences(predictions: np.ndarray, pairs: PairBatch) -> np.ndarray:
    predictions = np.atleast_2d(predictions)
    return np.take_along_axis(predictions, pairs.first, axis=1) - np.take_along_axis(predictions, pairs.second, axis=1)


def _scatter(predictions: np.ndarray, pairs: PairBatch, g: np.ndarray) -> np.ndarray:
    grad = np.zeros_like(np.atleast_2d(predictions), dtype=np.float64)
    rows = np.broadcast_to(np.arange(grad.shape[0])[:, None], pairs.first.shape)
    np.add.at(grad, (rows, pairs.first), g)
    np.add.at(grad, (rows, pairs.second), -g)
    return grad


def pair_probabilities(predictions: np.ndarray, pairs: PairBatch) -> np.ndarray:
    """
    Probability that the first strategy of every pair is preferred: exp(r1) / (exp(r1) + exp(r2)).
    """
    return expit(_pair_differences(predictions, pairs))


def loss_preference(predictions: np.ndarray, pairs: PairBatch) -> Tuple[float, np.ndarray]:
    """
    Cross entropy between the preference labels and the pair probabilities, summed over pairs and averaged over
    instances. Uses -[mu log p + (1 - mu) log(1 - p)] = softplus(z) - mu z with z the predicted difference.
    """
    z = _pair_differences(predictions, pairs)
    n = z.shape[0]
    value = float(np.sum(np.logaddexp(0.0, z) - pairs.mu * z)) / n
    g = (expit(z) - pairs.mu) / n
    return value, _scatter(predictions, pairs, g)


def loss_diff(predictions: np.ndarray, pairs: PairBatch) -> Tuple[float, np.ndarray]:
    """
    Squared error between predicted and true reward differences, summed over pairs and averaged over instances.
    """
    residual = _pair_differences(predictions, pairs) - pairs.delta
    n = residual.shape[0]
    value = float(np.sum(residual ** 2)) / n
    return value, _scatter(predictions, pairs, 2.0 * residual / n)


def loss_reward_fit(predictions: np.ndarray, rewards: np.ndarray) -> Tuple[float, np.ndarray]:
    """
    Mean squared error between predicted and true rewards: (1/B) sum_i (1/M) sum_j (r_ij - r_hat_ij)^2.
    """
    predictions = np.atleast_2d(predictions)
    residual = predictions - np.atleast_2d(rewards)
    scale = 1.0 / residual.size
    return float(np.sum(residual ** 2)) * scale, 2.0 * scale * residual


def loss_total(l_p: float, l_d: float, lambda_1: float, lambda_2: float) -> float:
    if lambda_1 == 0 and lambda_2 == 0:
        logger.warning("Both loss weights are zero, the total loss is constant.")
    return lambda_1 * l_p + lambda_2 * l_d


def loss_total_with_gradient(
        predictions: np.ndarray,
        pairs: PairBatch,
        lambda_1: float,
        lambda_2: float
) -> Tuple[float, np.ndarray]:
    l_p, g_p = loss_preference(predictions, pairs)
    l_d, g_d = loss_diff(predictions, pairs)
    return loss_total(l_p, l_d, lambda_1, lambda_2), lambda_1 * g_p + lambda_2 * g_d
