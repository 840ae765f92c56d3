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

from .scoring import EPS_R, R_MIN, EPS_DEN, EvalRecord, ReducedStatus, infeasibility, suboptimality, reward
from .reduce import (
    ReducedSolve, extract_strategy, apply_strategy, elastic_solve, reduced_instance, check_strategy, score_reduced,
    solve_reduced, tightest_optimum
)
