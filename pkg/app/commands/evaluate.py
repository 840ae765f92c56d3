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
from core.storage import load_library
from datagen import Dataset
from inference import evaluate
from learner import load_model
from .common import add_workers_argument, load_config, output_path, print_json, workers

NAME = "eval"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="measure Top-k accuracy on a test dataset")
    parser.add_argument("--dataset", required=True, help="test dataset directory")
    parser.add_argument("--model", required=True, help="model checkpoint file")
    parser.add_argument("--library", required=True, help="pruned library file")
    parser.add_argument("--out", help="directory for metrics.csv, timings.csv and summary.json")
    parser.add_argument("--k", type=int)
    parser.add_argument("--eps-p", type=float)
    parser.add_argument("--eps-d", type=float)
    add_workers_argument(parser)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = load_config(args).updated("inference", k=args.k, eps_p=args.eps_p, eps_d=args.eps_d)
    ds = Dataset.load(args.dataset)
    library = load_library(args.library)
    model = load_model(args.model)
    inference = config.inference
    k = min(inference.k, len(library))
    result = evaluate(model, ds, library, k, inference.eps_p, inference.eps_d, workers=workers(args))
    result.write(output_path(args, config, "eval"))
    print_json(result.metrics.summary())
    return 0
