# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""The main module of the command line interface"""

import logging
import sys

from .cli import run
from .config import generate_new_config, get_config
from .env import get_env
from .errors import ConfigError, LindquadError
from .logging import setup_logging
from .options import get_options

logger = logging.getLogger(__name__)


def main() -> int:
    """The entry point of the program.

    Returns:
        The exit status: 0 on success, 1 when a validation fails, 2 on a config error and 3 on a numerical failure.
    """

    env = get_env()
    options = get_options(force_no_color=env.no_color)

    if options.debug >= 1:
        level = logging.DEBUG
    else:
        level = logging.INFO if env.log_level is None else env.log_level

    setup_logging(level, options.color)

    if options.generate_config:
        generate_new_config(options.config_path)
        return 0

    if options.command is None:
        return 0

    config = get_config(options.config_path, options.command, options.out_path, options.seed)
    if config is None:
        return ConfigError.exit_status

    try:
        return run(config)
    except LindquadError as e:
        logger.critical(f"[{e.code}] {e}")
        return e.exit_status


if __name__ == "__main__":
    sys.exit(main())
