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
Stacked single-head self-attention over the strategy tokens of an instance, followed by a per-token affine
readout. Forward and backward passes work on batches of shape (B, M, F).
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import dataclasses
import numpy as np
from typing import List, Tuple
from core.models.family import Coordinate
from .encoding import NormStats

MODEL_VERSION = "attention-v1"


def softmax(S: np.ndarray) -> np.ndarray:
    shifted = S - S.max(axis=-1, keepdims=True)
    E = np.exp(shifted)
    return E / E.sum(axis=-1, keepdims=True)


@dataclasses.dataclass
class LayerCache:
    X: np.ndarray
    Q: np.ndarray
    K: np.ndarray
    V: np.ndarray
    A: np.ndarray


def attention_layer(
        X: np.ndarray,
        Wq: np.ndarray,
        Wk: np.ndarray,
        Wv: np.ndarray,
        cache: List[LayerCache] | None = None
) -> np.ndarray:
    """
    softmax(X Wq (X Wk)^T / sqrt(F)) X Wv, row-wise softmax. X has shape (..., M, F).
    """
    F = X.shape[-1]
    Q = X @ Wq
    K = X @ Wk
    V = X @ Wv
    A = softmax(Q @ np.swapaxes(K, -1, -2) / np.sqrt(F))
    if cache is not None:
        cache.append(LayerCache(X=X, Q=Q, K=K, V=V, A=A))
    return A @ V


def attention_layer_backward(
        layer: LayerCache,
        Wq: np.ndarray,
        Wk: np.ndarray,
        Wv: np.ndarray,
        dO: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """
    :return: Gradients with respect to X, Wq, Wk and Wv.
    """
    F = layer.X.shape[-1]
    scale = 1.0 / np.sqrt(F)
    dA = dO @ np.swapaxes(layer.V, -1, -2)
    dV = np.swapaxes(layer.A, -1, -2) @ dO
    dS = layer.A * (dA - np.sum(layer.A * dA, axis=-1, keepdims=True))
    dQ = dS @ layer.K * scale
    dK = np.swapaxes(dS, -1, -2) @ layer.Q * scale
    dWq = np.einsum("bmf,bmg->fg", layer.X, dQ)
    dWk = np.einsum("bmf,bmg->fg", layer.X, dK)
    dWv = np.einsum("bmf,bmg->fg", layer.X, dV)
    dX = dQ @ Wq.T + dK @ Wk.T + dV @ Wv.T
    return dX, dWq, dWk, dWv


@dataclasses.dataclass
class RewardModel:
    """
    Parameters of the preference model together with everything needed to encode new instances.
    Outputs live in standardized reward units; predict maps them back.
    """
    Wq: List[np.ndarray]
    Wk: List[np.ndarray]
    Wv: List[np.ndarray]
    w_out: np.ndarray
    b_out: np.ndarray
    norm_stats: NormStats
    varying: Tuple[Coordinate, ...] = ()
    reward_mean: float = 0.0
    reward_std: float = 1.0
    library_keys: Tuple[str, ...] = ()
    loss_trace: List[float] = dataclasses.field(default_factory=list)
    version: str = MODEL_VERSION

    @property
    def n_layers(self) -> int:
        return len(self.Wq)

    @property
    def n_features(self) -> int:
        return len(self.w_out)

    def parameters(self) -> List[np.ndarray]:
        """
        All trainable arrays in a fixed order. Updates must happen in place.
        """
        return [*self.Wq, *self.Wk, *self.Wv, self.w_out, self.b_out]

    @staticmethod
    def initialize(n_features: int, n_layers: int, rng: np.random.Generator, norm_stats: NormStats, **kwargs) -> RewardModel:
        """
        Near-identity initialization: attention starts focused on each token itself and values pass the token
        through, so the readout initially sees per-strategy features.
        """
        F = n_features
        noise = 0.1 / np.sqrt(F)
        gain = np.sqrt(np.sqrt(F))
        eye = np.eye(F)
        return RewardModel(
            Wq=[gain * eye + noise * rng.standard_normal((F, F)) for _ in range(n_layers)],
            Wk=[gain * eye + noise * rng.standard_normal((F, F)) for _ in range(n_layers)],
            Wv=[eye + noise * rng.standard_normal((F, F)) for _ in range(n_layers)],
            w_out=rng.standard_normal(F) / np.sqrt(F),
            b_out=np.zeros(1),
            norm_stats=norm_stats,
            **kwargs
        )


@dataclasses.dataclass
class ForwardCache:
    layers: List[LayerCache]
    H: np.ndarray


def _batched(tokens: np.ndarray) -> Tuple[np.ndarray, bool]:
    tokens = np.asarray(tokens, dtype=np.float64)
    if tokens.ndim == 2:
        return tokens[None, :, :], True
    return tokens, False


def _forward(model: RewardModel, X: np.ndarray, layers: List[LayerCache] | None) -> Tuple[np.ndarray, np.ndarray]:
    for Wq, Wk, Wv in zip(model.Wq, model.Wk, model.Wv):
        X = attention_layer(X, Wq, Wk, Wv, layers)
    return X @ model.w_out + model.b_out[0], X


def forward(model: RewardModel, tokens: np.ndarray) -> np.ndarray:
    """
    Predicted (standardized) rewards for tokens of shape (M, F) or (B, M, F).
    """
    X, single = _batched(tokens)
    out, _ = _forward(model, X, None)
    return out[0] if single else out


def forward_with_cache(model: RewardModel, tokens: np.ndarray) -> Tuple[np.ndarray, ForwardCache]:
    """
    Batched forward pass that keeps the intermediates needed by backward. Outputs have shape (B, M).
    """
    X, _ = _batched(tokens)
    layers: List[LayerCache] = []
    out, H = _forward(model, X, layers)
    return out, ForwardCache(layers=layers, H=H)


def backward(model: RewardModel, cache: ForwardCache, d_out: np.ndarray) -> List[np.ndarray]:
    """
    Reverse pass through readout and attention stack.
    :param d_out: Gradient of the loss with respect to the batch outputs, shape (B, M).
    :return: Gradients aligned with model.parameters().
    """
    d_w = np.einsum("bmf,bm->f", cache.H, d_out)
    d_b = np.array([d_out.sum()])
    dX = d_out[:, :, None] * model.w_out[None, None, :]
    n = model.n_layers
    dWq: List[np.ndarray] = [None] * n
    dWk: List[np.ndarray] = [None] * n
    dWv: List[np.ndarray] = [None] * n
    for layer in reversed(range(n)):
        dX, dWq[layer], dWk[layer], dWv[layer] = attention_layer_backward(
            cache.layers[layer], model.Wq[layer], model.Wk[layer], model.Wv[layer], dX
        )
    return [*dWq, *dWk, *dWv, d_w, d_b]
