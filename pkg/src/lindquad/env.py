# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Handle environment variables of the process."""

import logging
import os
from typing import NamedTuple

from . import APP_NAME_UPPER
from .logging import parse_level

logger = logging.getLogger(__name__)


class Env(NamedTuple):
    """Hold all the relevant environment information.

    Attributes:
        no_color: If the color on the output should be disabled.
        log_level: The logging level requested through the environment.
    """

    no_color: bool
    log_level: int | None


def get_env_variable(variable_name: str) -> str | None:
    """Get an environment variable prefixed with the app name.

    Args:
        variable_name: The name of the variable.

    Returns:
        The found variable or none.
    """

    return os.environ.get(f"{APP_NAME_UPPER}_{variable_name}")


def get_env() -> Env:
    """Get the relevant environment of the program.

    Returns:
        The environment of the program.
    """

    no_color = (
        "NO_COLOR" in os.environ or get_env_variable("NO_COLOR") is not None or os.environ.get("TERM", "") == "dumb"
    )

    log_level = None
    raw_level = get_env_variable("LOG_LEVEL")
    if raw_level is not None:
        log_level = parse_level(raw_level)
        if log_level is None:
            logger.warning(f"Ignoring the unknown log level '{raw_level}' of '{APP_NAME_UPPER}_LOG_LEVEL'")

    return Env(no_color=no_color, log_level=log_level)
