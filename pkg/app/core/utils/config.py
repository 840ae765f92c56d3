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

import os


class SettingsBase:
    """
    This class manages the settings that are shared by all Stratum components.
    """
    def __init__(self):
        threads = os.getenv("MSK_THREADS", "1")
        try:
            self.threads = int(threads)
        except ValueError:
            raise ValueError(f"Environment variable MSK_THREADS must be an integer but is '{threads}'.")
        if self.threads < 1:
            raise ValueError("Environment variable MSK_THREADS must be at least 1.")
        self.log_level = os.getenv("STRATUM_LOG_LEVEL", "INFO").upper()
        self.log_file = os.getenv("STRATUM_LOG_FILE") or None
