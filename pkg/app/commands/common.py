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


"""
Helpers shared by all subcommands.
"""

from __future__ import annotations

__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import sys
import json
import argparse
from pathlib import Path
from typing import Any
from core.storage import read_json
from utils.config import PipelineConfig, settings


def load_config(args: argparse.Namespace) -> PipelineConfig:
    """
    Loads the configuration given by --config (or STRATUM_CONFIG) and applies --seed.
    """
    path = args.config or settings.config_path
    config = PipelineConfig.model_validate(read_json(path)) if path else PipelineConfig()
    return config.with_seed(args.seed)


def workers(args: argparse.Namespace) -> int:
    """
    Requested worker count, capped at MSK_THREADS.
    """
    requested = getattr(args, "workers", None)
    return min(requested, settings.threads) if requested else settings.threads


def output_path(args: argparse.Namespace, config: PipelineConfig, default: str) -> Path:
    return Path(args.out) if getattr(args, "out", None) else config.output_dir / default


def print_json(data: Any):
    sys.stdout.write(json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n")


def add_workers_argument(parser: argparse.ArgumentParser):
    parser.add_argument("--workers", type=int, help="number of worker processes (at most MSK_THREADS, which is also the default)")
