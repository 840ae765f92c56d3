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
from learner import LossMode, SamplingMode, save_model, train
from .common import load_config, output_path

NAME = "train"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="train the preference model")
    parser.add_argument("--dataset", required=True, help="labeled training dataset directory")
    parser.add_argument("--library", required=True, help="pruned library file")
    parser.add_argument("--out", help="model checkpoint file")
    parser.add_argument("--epochs", type=int)
    parser.add_argument("--learning-rate", type=float)
    parser.add_argument("--batch-size", type=int)
    parser.add_argument("--loss-mode", choices=[item.value for item in LossMode])
    parser.add_argument("--sampling-mode", choices=[item.value for item in SamplingMode])
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = load_config(args).updated(
        "train",
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        loss_mode=args.loss_mode,
        sampling_mode=args.sampling_mode
    )
    ds = Dataset.load(args.dataset)
    library = load_library(args.library)
    model = train(ds, library, config.train)
    path = output_path(args, config, "model.json")
    path.parent.mkdir(parents=True, exist_ok=True)
    save_model(path, model)
    final = model.loss_trace[-1] if model.loss_trace else float("nan")
    print(f"epochs={len(model.loss_trace)}, loss={final:.6f}")
    return 0
