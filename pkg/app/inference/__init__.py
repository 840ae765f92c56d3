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

from .selection import Selection, select_strategy, top_k
from .evaluation import (
    DEFAULT_EPS, DEFAULT_K, EvaluationResult, InstanceOutcome, Metrics, evaluate, evaluate_predictions
)
from .fast import BenchCase, BenchReport, FastSolveResult, bench, fast_solve, model_theta, prepare_instance
