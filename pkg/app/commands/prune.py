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
from pathlib import Path
from core.storage import save_library, write_json
from datagen import Dataset
from pruning import build_bipartite, coverage_report, greedy_set_cover
from .common import load_config, output_path

NAME = "prune"
COVERAGE_FILE = "coverage.json"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="reduce the strategy library by greedy set cover")
    parser.add_argument("--dataset", required=True, help="labeled dataset directory")
    parser.add_argument("--out", help="pruned library file")
    parser.add_argument("--eps-p", type=float, help="infeasibility tolerance of an edge")
    parser.add_argument("--eps-d", type=float, help="suboptimality tolerance of an edge")
    parser.set_defaults(handler=execute)


def execute(args: argparse.Namespace) -> int:
    config = load_config(args).updated("pruning", eps_p=args.eps_p, eps_d=args.eps_d)
    ds = Dataset.load(args.dataset)
    graph = build_bipartite(ds, config.pruning.eps_p, config.pruning.eps_d)
    library = greedy_set_cover(graph, ds.library)
    path = output_path(args, config, "library.json")
    path.parent.mkdir(parents=True, exist_ok=True)
    save_library(path, library)
    write_json(Path(path).with_name(COVERAGE_FILE), coverage_report(graph).to_dict())
    print(f"M={len(ds.library)}, M_P={len(library)}, uncovered={len(graph.uncovered)}")
    return 0
