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


class StratumError(Exception):
    """
    Base class of all exceptions raised by Stratum.
    """
    def __init__(self, message: str | None = None):
        super().__init__(message or "A general error occurred.")
        self.message = message or "A general error occurred."


class InvalidDataError(StratumError):
    """
    Raised if an instance, strategy, configuration or file content is malformed.
    """
    def __init__(self, message: str | None = None):
        super().__init__(message or "Incomplete or invalid data.")


class ParseError(InvalidDataError):
    """
    Raised if a model file cannot be parsed.
    """
    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class PreconditionError(InvalidDataError):
    """
    Raised if a pipeline stage is called on an artifact that is not ready for it.
    """


class BudgetExceededError(InvalidDataError):
    """
    Raised if an instance exceeds the enumeration budget of the exhaustive oracle.
    """


class NotFoundError(StratumError):
    """
    Raised if an artifact file does not exist.
    """
    def __init__(self, message: str | None = None):
        super().__init__(message or "Not found.")


class SolverError(StratumError):
    """
    Raised on numerical breakdown inside the simplex method.
    """


class DatasetGenerationError(StratumError):
    """
    Raised if too many sampled instances of a family cannot be solved.
    """


class TrainingError(StratumError):
    """
    Raised if training produces a non-finite loss.
    """
    def __init__(self, message: str, batch_index: int | None = None):
        self.batch_index = batch_index
        super().__init__(message)
