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

import numpy as np
from typing import List, Sequence


class AdamW:
    """
    Adam with decoupled weight decay, updating numpy parameter arrays in place.
    """

    def __init__(
            self,
            parameters: Sequence[np.ndarray],
            lr: float = 1e-3,
            beta_1: float = 0.9,
            beta_2: float = 0.999,
            eps: float = 1e-8,
            weight_decay: float = 0.0
    ):
        self.parameters = list(parameters)
        self.lr = lr
        self.beta_1 = beta_1
        self.beta_2 = beta_2
        self.eps = eps
        self.weight_decay = weight_decay
        self.step_count = 0
        self.m: List[np.ndarray] = [np.zeros_like(item) for item in self.parameters]
        self.v: List[np.ndarray] = [np.zeros_like(item) for item in self.parameters]

    def step(self, gradients: Sequence[np.ndarray]):
        if len(gradients) != len(self.parameters):
            raise ValueError(f"Expected {len(self.parameters)} gradients but got {len(gradients)}.")
        self.step_count += 1
        correction_1 = 1.0 - self.beta_1 ** self.step_count
        correction_2 = 1.0 - self.beta_2 ** self.step_count
        for parameter, gradient, m, v in zip(self.parameters, gradients, self.m, self.v):
            m *= self.beta_1
            m += (1.0 - self.beta_1) * gradient
            v *= self.beta_2
            v += (1.0 - self.beta_2) * gradient * gradient
            if self.weight_decay:
                parameter -= self.lr * self.weight_decay * parameter
            parameter -= self.lr * (m / correction_1) / (np.sqrt(v / correction_2) + self.eps)
