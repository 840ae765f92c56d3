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

import argparse
import logging
from solvers.oracle import run_oracle_suite
from .common import load_config, print_json

logger = logging.getLogger(__name__)

NAME = "oracle-check"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="compare branch and bound with exhaustive enumeration")
    parser.add_argument("--n-cases", type=int, default=50)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = load_config(args)
    report = run_oracle_suite(args.n_cases, seed=config.datagen.base_seed, cfg=config.datagen.bnb)
    print_json({
        "n_cases": len(report.cases),
        "mismatches": len(report.mismatches),
        "max_abs_diff": report.max_abs_diff,
        "runtime_s": report.runtime_s
    })
    if not report.ok:
        for case in report.mismatches:
            logger.error("Oracle mismatch: %s", case)
        return 2
    return 0
