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
from datagen import Dataset, fill_reward_table
from .common import add_workers_argument, workers

NAME = "label"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="fill the reward table of a dataset")
    parser.add_argument("--dataset", required=True, help="dataset directory, updated in place")
    add_workers_argument(parser)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    ds = Dataset.load(args.dataset)
    fill_reward_table(ds, workers=workers(args))
    ds.save(args.dataset)
    print(f"N={len(ds)}, M={len(ds.library)}, complete={ds.reward_table.complete}")
    return 0
