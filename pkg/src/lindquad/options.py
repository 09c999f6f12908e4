# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Handle command line arguments."""

import argparse
from collections.abc import Sequence
from pathlib import Path
from typing import Final, NamedTuple

from . import APP_NAME, APP_NAME_LOWER, DEFAULT_CONFIG_PATH, __version__

COMMANDS: Final[tuple[str, ...]] = ("spectrum", "steady-state", "evolve", "speed", "ep-scan", "validate")


class Options(NamedTuple):
    """Holds all the global options for the program.

    Attributes:
        command: The job to run, none when only generating the config.
        debug: The level of verbosity of the output.
        color: If the output logs should be colored.
        generate_config: If the config should be generated.

        config_path: The path of the job config file.
        out_path: The directory the results are written to, overriding the config.
        seed: The seed of the random suites, overriding the config.
    """

    command: str | None
    debug: int
    color: bool
    generate_config: bool

    config_path: Path
    out_path: Path | None
    seed: int | None


def get_options(args: Sequence[str] | None = None, force_no_color: bool = False) -> Options:
    """Get the options declared by the user.

    Args:
        args: The arguments to parse, the ones of the process by default.
        force_no_color: If the color in the output of the program
            should be disabled.

    Returns:
        An object that holds all the options declared by the user.
    """

    parser = argparse.ArgumentParser(
        prog=APP_NAME_LOWER,
        description="Dynamics of multimode bosonic systems coupled to a Markovian bath.",
    )

    parser.add_argument("-v", "--version", action="version", version=f"{APP_NAME} - {__version__}")

    parser.add_argument("command", nargs="?", choices=COMMANDS, help="the job to run")

    parser.add_argument(
        "-d",
        "--debug",
        action="count",
        default=0,
        help="add extra debug info",
    )
    parser.add_argument("--no-color", action="store_true", help="disable color escape sequences from the logs")
    parser.add_argument("--generate-config", action="store_true", help="write the default job config file")

    parser.add_argument("-c", "--config", help="a custom job config file path")
    parser.add_argument("-o", "--out", help="a custom output directory path")
    parser.add_argument("--seed", type=int, help="the seed of the randomized validation suites")

    parsed = parser.parse_args(args)

    if parsed.command is None and not parsed.generate_config:
        parser.error("a command is required unless --generate-config is given")

    config_path = DEFAULT_CONFIG_PATH / "config.toml" if parsed.config is None else Path(parsed.config)
    out_path = None if parsed.out is None else Path(parsed.out)

    no_color = parsed.no_color or force_no_color

    return Options(
        command=parsed.command,
        debug=parsed.debug,
        color=not no_color,
        generate_config=parsed.generate_config,
        config_path=config_path,
        out_path=out_path,
        seed=parsed.seed,
    )
