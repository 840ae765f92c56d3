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
from core.models.family import sample_instance
from core.storage import load_library, write_json
from datagen import prepare_family
from inference import bench
from learner import load_model
from .common import load_config, output_path, print_json

NAME = "bench"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="compare the model path with branch and bound")
    parser.add_argument("--model", required=True, help="model checkpoint file")
    parser.add_argument("--library", required=True, help="pruned library file")
    parser.add_argument("--n", type=int, help="number of instances")
    parser.add_argument("--k", type=int)
    parser.add_argument("--out", help="report file")
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = load_config(args).updated("inference", k=args.k, n_bench=args.n)
    inference = config.inference
    family = prepare_family(config.family.build())
    seed = config.datagen.test_seed
    instances = [sample_instance(family, seed + i) for i in range(inference.n_bench)]
    model = load_model(args.model)
    library = load_library(args.library)
    report = bench(
        model,
        library,
        instances,
        min(inference.k, len(library)),
        inference.eps_p,
        inference.eps_d,
        config.datagen.bnb
    )
    data = report.to_dict()
    if args.out:
        write_json(output_path(args, config, "bench.json"), data)
    print_json(data)
    return 0
