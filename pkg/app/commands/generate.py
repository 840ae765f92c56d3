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
from core.storage import save_family
from datagen import generate_dataset
from .common import add_workers_argument, load_config, output_path, workers

logger = logging.getLogger(__name__)

NAME = "generate"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="sample and label instances of a family")
    parser.add_argument("--out", help="dataset directory")
    parser.add_argument(
        "--split",
        choices=["train", "test"],
        default="train",
        help="train stops on the Good-Turing estimate, test samples a fixed number of instances"
    )
    parser.add_argument("--family-out", help="additionally write the family document to this file")
    add_workers_argument(parser)
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = load_config(args)
    family = config.family.build()
    datagen = config.datagen
    if args.split == "train":
        ds = generate_dataset(
            family,
            gt_threshold=datagen.gt_threshold,
            min_N=datagen.min_n,
            max_N=datagen.max_n,
            base_seed=datagen.base_seed,
            cfg=datagen.bnb,
            workers=workers(args)
        )
    else:
        ds = generate_dataset(
            family,
            gt_threshold=1.0,
            min_N=datagen.n_test,
            max_N=datagen.n_test,
            base_seed=datagen.test_seed,
            cfg=datagen.bnb,
            workers=workers(args)
        )
    directory = output_path(args, config, args.split)
    ds.save(directory)
    if args.family_out:
        save_family(args.family_out, ds.family)
    print(f"N={len(ds)}, M={len(ds.library)}, good_turing={ds.good_turing:.4f}")
    logger.info("Dataset written to %s.", directory)
    return 0
