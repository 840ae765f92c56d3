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

from .encoding import NormStats, StrategyFeatures, encode_batch, encode_thetas, fit_norm_stats
from .network import RewardModel, attention_layer, backward, forward, forward_with_cache
from .preferences import PairBatch, PreferenceSet, build_preference_set, orient_pairs, sample_nr_pairs
from .losses import loss_diff, loss_preference, loss_reward_fit, loss_total
from .optim import AdamW
from .trainer import LossMode, SamplingMode, TrainConfig, predict, reward_matrix, train
from .checkpoint import load_model, save_model
