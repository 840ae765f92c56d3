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
from core.utils import InvalidDataError
from core.storage import load_library
from datagen import Dataset
from families import read_mps
from inference import fast_solve
from learner import load_model
from solvers.milp import solve_milp
from .common import add_workers_argument, load_config, print_json, workers

NAME = "solve"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="solve one instance with the model and the strategy library")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--instance", help="MPS file of the instance")
    source.add_argument("--dataset", help="dataset directory, used together with --index")
    parser.add_argument("--fixed-format", action="store_true", help="read --instance as fixed format MPS")
    parser.add_argument("--index", type=int, default=0, help="instance index within --dataset")
    parser.add_argument("--model", required=True, help="model checkpoint file")
    parser.add_argument("--library", required=True, help="pruned library file")
    parser.add_argument("--k", type=int)
    parser.add_argument(
        "--reference",
        action="store_true",
        help="solve the instance with branch and bound to report the suboptimality d"
    )
    add_workers_argument(parser)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = load_config(args).updated("inference", k=args.k)
    model = load_model(args.model)
    library = load_library(args.library)
    f_star = None
    if args.instance:
        inst = read_mps(args.instance, args.fixed_format)
    else:
        ds = Dataset.load(args.dataset)
        if not 0 <= args.index < len(ds):
            raise InvalidDataError(f"Index {args.index} is out of range for a dataset of {len(ds)} instances.")
        inst = ds.instance(args.index)
        f_star = ds.records[args.index].f_star
    if args.reference and f_star is None:
        reference = solve_milp(inst, config.datagen.bnb)
        f_star = reference.objective if reference.is_optimal else None
    k = min(config.inference.k, len(library))
    result = fast_solve(inst, model, library, k, f_star=f_star, workers=workers(args))
    data = result.to_dict()
    data.pop("x")
    print_json(data)
    return 0
