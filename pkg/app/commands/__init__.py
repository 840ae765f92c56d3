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

import sys
import logging
import argparse
from typing import Sequence
from pydantic import ValidationError
from core.utils import InvalidDataError, NotFoundError
from core.utils.logging import setup_logging
from utils.config import settings
from commands import bench, evaluate, generate, label, oracle, prune, solve, train

logger = logging.getLogger(__name__)

COMMANDS = [generate, label, prune, train, evaluate, solve, bench, oracle]

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    """
    Reports usage errors as InvalidDataError instead of exiting the interpreter.
    """
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise InvalidDataError(f"{self.prog}: {message}")


def _add_global_arguments(parser: argparse.ArgumentParser, default):
    parser.add_argument("--config", default=default, help="pipeline configuration file (JSON)")
    parser.add_argument("--seed", type=int, default=default, help="overrides all seeds of the configuration")


def add_commands(subparsers):
    """
    This method can be used to register all subcommands with the given subparsers object.
    :param subparsers: The return value of ArgumentParser.add_subparsers
    """
    for command in COMMANDS:
        command.add_parser(subparsers)
    # Given after the subcommand, --config and --seed override the global values.
    for parser in subparsers.choices.values():
        _add_global_arguments(parser, argparse.SUPPRESS)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stratum", description="Learned strategy prediction for parametric MILPs.")
    _add_global_arguments(parser, None)
    parser.add_argument("--log-level", default=settings.log_level, help="log level (default: STRATUM_LOG_LEVEL)")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    add_commands(subparsers)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """
    Parses the arguments, runs the selected subcommand and maps failures to exit codes.
    :return: 0 on success, 1 on invalid input and 2 on any other failure.
    """
    try:
        args = build_parser().parse_args(argv)
    except InvalidDataError as ex:
        sys.stderr.write(f"{ex}\n")
        return EXIT_INPUT
    except SystemExit as ex:
        # --help
        return EXIT_OK if not ex.code else EXIT_INPUT
    setup_logging(args.log_level, settings.log_file)
    try:
        return args.handler(args)
    except (InvalidDataError, NotFoundError, ValidationError) as ex:
        logger.error("%s", ex)
        return EXIT_INPUT
    except Exception as ex:
        logger.exception(ex)
        return EXIT_FAILURE
