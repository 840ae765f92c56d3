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


__author__ = "Lukas Reiter"
__copyright__ = "Copyright (C) 2024 Lukas Reiter"
__license__ = "GPLv3"

import sys
from pathlib import Path
from dotenv import load_dotenv

# We load the environment variables from the .env files of the working directory.
load_dotenv(Path.cwd() / ".env")
load_dotenv(Path.cwd() / ".env.stratum")

from commands import run


def main():
    """
    Entry point of the stratum command line application.
    """
    sys.exit(run())


if __name__ == "__main__":
    main()
