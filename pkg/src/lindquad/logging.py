# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Handle the unified logging of the program."""

import logging
from typing import Final

from colorama import Fore, Style

# The relation between the logging level number and its prefix text and color
LOG_PREFIX: Final[dict[int, tuple[str, str]]] = {
    logging.DEBUG: ("DEBUG", Fore.GREEN),
    logging.INFO: ("INFO", Fore.BLUE),
    logging.WARNING: ("WARNING", Fore.YELLOW),
    logging.ERROR: ("ERROR", Fore.RED),
    logging.CRITICAL: ("CRITICAL", Fore.MAGENTA),
}


class ColoredFormatter(logging.Formatter):
    """A custom formatter that takes care of coloring the output, following the [CLIG](https://clig.dev/)."""

    def __init__(self, color: bool) -> None:
        """Constructor for the formatter.

        Args:
            color: If the output should be formatted.
        """

        super().__init__()
        self.color = color

    def format(self, record: logging.LogRecord) -> str:
        """Format the record taking care of output coloring.

        Args:
            record: The record to format.

        Returns:
            The formatted output.
        """

        # Levels between the standard ones are shown as the next standard level below them
        level = max((level for level in LOG_PREFIX if level <= record.levelno), default=logging.DEBUG)
        prefix_text, prefix_color = LOG_PREFIX[level]

        if self.color:
            prefix = f"{Style.BRIGHT}{prefix_color}{prefix_text}{Style.RESET_ALL}"
        else:
            prefix = prefix_text

        formatter = logging.Formatter(f"%(asctime)s - {prefix} - %(name)s: %(message)s")

        return formatter.format(record)


def parse_level(level: str) -> int | None:
    """Read a logging level given by its name or number.

    Args:
        level: The text to read, like `debug` or `10`.

    Returns:
        The level number or none if the text is not a level.
    """

    level = level.strip()
    if level.isdigit():
        return int(level)

    return logging.getLevelNamesMapping().get(level.upper())


def setup_logging(level: int, color: bool) -> None:
    """Setup the root logger.

    Args:
        level: The lowest level of the messages to show.
        color: If the level prefixes should be colored.
    """

    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    for handler in list(root_logger.handlers):
        if isinstance(handler.formatter, ColoredFormatter):
            root_logger.removeHandler(handler)

    stream_handler = logging.StreamHandler()
    stream_handler.setLevel(level)
    stream_handler.setFormatter(ColoredFormatter(color))

    root_logger.addHandler(stream_handler)
