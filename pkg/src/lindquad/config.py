# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Handle the job configuration defined by the user in the config file."""

import json
import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Final

import numpy as np
import numpy.typing as npt
import tomlkit
from tomlkit import comment, document, item, nl, table

from . import APP_NAME, APP_NAME_LOWER, DEFAULT_OUTPUT_PATH
from .errors import ConfigError, LindquadError
from .model import TILT_ANGLES, ParsedModel, parse_model, tilted_channel

logger = logging.getLogger(__name__)

CONFIG_VERSION: Final[int] = 1

# Commands comparing against the truncated Liouvillian
ORACLE_COMMANDS: Final[frozenset[str]] = frozenset({"steady-state", "evolve", "validate"})
MIN_ORACLE_CUTOFF: Final[int] = 4

_MISSING: Final = object()


@dataclass
class JobConfig:
    """Holds all the user defined config of a job.

    Attributes:
        version: The version of the config file.
        command: The job to run.
        model: The system, with its two-mode channel when given in that form.
        seed: The seed of the randomized validation suites.

        cutoff: The number of levels kept per mode.
        max_photons: The photon sector of the analytic spectrum and of the eigenmode expansion.
        n_T: The mean thermal photon numbers of the speed sweep.

        t_max: The end of the time grid.
        steps: The number of points of the time grid.

        output_directory: Where the results are written.
        plot: If SVG plots should be drawn next to the CSV tables.
        log_scale: If the plots should use a logarithmic ordinate.

        theta: The polar angle of the initial qubit.
        phi: The azimuth of the initial qubit.
        theta_steps: The number of polar angles of the speed surface, 0 to skip it.

        omega_min: The start of the exceptional point scan, in units of |γ⃗|.
        omega_max: The end of the exceptional point scan, in units of |γ⃗|.
        ep_steps: The number of points of the exceptional point scan.

        samples: The number of random samples of the randomized validation suites.
    """

    version: int
    command: str
    model: ParsedModel
    seed: int

    cutoff: int
    max_photons: int
    n_T: list[float]

    t_max: float
    steps: int

    output_directory: Path
    plot: bool
    log_scale: bool

    theta: float
    phi: float
    theta_steps: int

    omega_min: float
    omega_max: float
    ep_steps: int

    samples: int

    @property
    def times(self) -> npt.NDArray[np.float64]:
        return np.linspace(0.0, self.t_max, self.steps)


def generate_new_config_tip_message() -> None:
    """Print a tip about how to generate a default config"""

    logger.info(f"You can generate a default config file with: {APP_NAME_LOWER} --generate-config")


def missing_entry_error_message(missing_entry: str) -> None:
    """Print an error about a missing entry in the config file"""

    logger.critical(f"The provided config file is missing the '{missing_entry}' entry")
    generate_new_config_tip_message()


def generate_new_config(config_file: Path) -> None:
    """Generate a new config file

    Args:
        config_file: The path where the config file should be stored.
    """

    logger.info(f"Generating a new config file at '{config_file}'")

    config_file.parent.mkdir(parents=True, exist_ok=True)

    doc = document()
    doc.add(comment(f"{APP_NAME} job config file"))
    doc.add(nl())

    doc.add(comment("DO NOT MODIFY ME! Internal config file version"))
    # Ugly hack to avoid `mypy` errors when using numbers, the `tomlkit` typing is really bad
    doc.add("version", item(CONFIG_VERSION))
    doc.add(comment("The seed of the randomized validation suites"))
    doc.add("seed", item(1234))
    doc.add(comment("The number of levels kept per mode in the truncated Fock space"))
    doc.add("cutoff", item(5))
    doc.add(comment("The largest number of photons of the analytic spectrum and of the eigenmode expansion"))
    doc.add("max_photons", item(2))
    doc.add(comment("The mean numbers of thermal photons of the speed sweep"))
    doc.add("n_T", item([0.0, 0.1, 0.3]))

    doc.add(nl())

    time_table = table()
    time_table.add(comment("The end of the time grid, in the units of the rates of the model"))
    time_table.add("t_max", item(10.0))
    time_table.add(comment("The number of points of the time grid, starting at 0"))
    time_table.add("steps", item(201))
    doc.add("time", time_table)

    output_table = table()
    output_table.add(comment("The directory where the results are written, relative to this file"))
    output_table.add("directory", str(DEFAULT_OUTPUT_PATH))
    output_table.add(comment("Whether to draw SVG plots next to the CSV tables"))
    output_table.add("plot", True)
    output_table.add(comment("Whether the plots use a logarithmic ordinate"))
    output_table.add("log_scale", True)
    doc.add("output", output_table)

    qubit_table = table()
    qubit_table.add(comment("The polar angle and the azimuth of the initial polarization qubit"))
    qubit_table.add("theta", item(math.pi / 2))
    qubit_table.add("phi", item(0.0))
    qubit_table.add(comment("The number of polar angles of the speed surface, 0 to skip it"))
    qubit_table.add("theta_steps", item(0))
    doc.add("qubit", qubit_table)

    ep_table = table()
    ep_table.add(comment("The range of the exceptional point scan, in units of |gamma|"))
    ep_table.add("omega_min", item(0.0))
    ep_table.add("omega_max", item(3.0))
    ep_table.add("steps", item(61))
    doc.add("ep_scan", ep_table)

    validate_table = table()
    validate_table.add(comment("The number of random samples of the randomized validation suites"))
    validate_table.add("samples", item(50))
    doc.add("validate", validate_table)

    channel = tilted_channel(TILT_ANGLES[1])
    two_mode_table = table()
    two_mode_table.add(comment("A two-mode channel, Omega = omega0 + (omega, sigma), Gamma = gamma0 + (gamma, sigma)"))
    two_mode_table.add(comment("The model can also be a 'thermal' or 'general' table, or a JSON file in spec_file"))
    two_mode_table.add("omega0", item(channel.omega0))
    two_mode_table.add("omega", item(list(channel.omega_vec)))
    two_mode_table.add("gamma0", item(channel.gamma0))
    two_mode_table.add("gamma", item(list(channel.gamma_vec)))

    spec_table = table(True)
    spec_table.add("two_mode", two_mode_table)
    doc.add("spec", spec_table)

    with open(config_file, "w", encoding="utf-8") as f:
        f.write(doc.as_string())


def _get(config: Mapping[str, Any], entry: str, default: Any = _MISSING) -> Any:
    value: Any = config
    for part in entry.split("."):
        if not isinstance(value, Mapping) or part not in value:
            if default is _MISSING:
                raise KeyError(entry)

            return default

        value = value[part]

    return value


def _read_model(config: Mapping[str, Any], config_file: Path) -> ParsedModel:
    if "spec" in config and "spec_file" in config:
        raise ConfigError("Only one of 'spec' and 'spec_file' can be given")

    if "spec_file" in config:
        spec_file = config_file.parent / str(config["spec_file"])
        try:
            with open(spec_file, encoding="utf-8") as f:
                raw = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Could not read the model file '{spec_file}': {e}") from e

        if not isinstance(raw, Mapping):
            raise ConfigError(f"The model file '{spec_file}' must hold a JSON object")

        return parse_model(raw)

    return parse_model(_get(config, "spec"))


def job_violations(config: JobConfig) -> list[str]:
    """Check the invariants of a job.

    Args:
        config: The job to check.

    Returns:
        A description of every violated invariant.
    """

    violations = []
    if config.steps < 2:
        violations.append(f"time.steps must be at least 2, got {config.steps}")

    if not config.t_max > 0:
        violations.append(f"time.t_max must be positive, got {config.t_max}")

    if config.cutoff < 2:
        violations.append(f"cutoff must be at least 2, got {config.cutoff}")

    if config.command in ORACLE_COMMANDS:
        if config.cutoff < MIN_ORACLE_CUTOFF:
            violations.append(f"cutoff must be at least {MIN_ORACLE_CUTOFF} for {config.command}, got {config.cutoff}")

        if config.max_photons > config.cutoff - 3:
            violations.append(f"max_photons must be at most cutoff - 3 = {config.cutoff - 3}, got {config.max_photons}")

    if config.max_photons < 0:
        violations.append(f"max_photons must be nonnegative, got {config.max_photons}")

    if not config.n_T or any(not n_T >= 0 for n_T in config.n_T):
        violations.append(f"n_T must be a nonempty list of nonnegative numbers, got {config.n_T}")

    if config.theta_steps < 0 or config.theta_steps == 1:
        violations.append(f"qubit.theta_steps must be 0 or at least 2, got {config.theta_steps}")

    if config.ep_steps < 2 or not 0 <= config.omega_min < config.omega_max:
        violations.append("ep_scan needs 0 <= omega_min < omega_max and at least 2 steps")

    if config.samples < 1:
        violations.append(f"validate.samples must be positive, got {config.samples}")

    return violations


def get_config(
    config_file: Path,
    command: str,
    out_path: Path | None = None,
    seed: int | None = None,
) -> JobConfig | None:
    """Process the config file and returns it deserialized.

    Args:
        config_file: The path of the config file.
        command: The job to run.
        out_path: An output directory overriding the one of the file.
        seed: A seed overriding the one of the file.

    Returns:
        The job, or none after logging why the file cannot be used.
    """

    if not config_file.is_file():
        logger.critical(f"The config file '{config_file}' does not exist")
        generate_new_config_tip_message()
        return None

    with open(config_file, encoding="utf-8") as f:
        try:
            config: dict[str, Any] = tomlkit.load(f).unwrap()
        except tomlkit.exceptions.ParseError as e:
            logger.critical("The provided config file is not valid TOML")
            generate_new_config_tip_message()
            logger.critical(e)
            return None

    try:
        version = int(_get(config, "version"))
        if version != CONFIG_VERSION:
            logger.critical(f"Unsupported config file version {version}, expected {CONFIG_VERSION}")
            generate_new_config_tip_message()
            return None

        # Here old versions can be migrated

        directory = Path(str(_get(config, "output.directory", DEFAULT_OUTPUT_PATH)))
        if out_path is not None:
            directory = out_path
        elif not directory.is_absolute():
            directory = config_file.parent / directory

        job = JobConfig(
            version=version,
            command=command,
            model=_read_model(config, config_file),
            seed=int(_get(config, "seed", 0)) if seed is None else seed,
            cutoff=int(_get(config, "cutoff")),
            max_photons=int(_get(config, "max_photons", 2)),
            n_T=[float(n_T) for n_T in _get(config, "n_T", [0.0])],
            t_max=float(_get(config, "time.t_max")),
            steps=int(_get(config, "time.steps")),
            output_directory=directory,
            plot=bool(_get(config, "output.plot", True)),
            log_scale=bool(_get(config, "output.log_scale", False)),
            theta=float(_get(config, "qubit.theta", math.pi / 2)),
            phi=float(_get(config, "qubit.phi", 0.0)),
            theta_steps=int(_get(config, "qubit.theta_steps", 0)),
            omega_min=float(_get(config, "ep_scan.omega_min", 0.0)),
            omega_max=float(_get(config, "ep_scan.omega_max", 3.0)),
            ep_steps=int(_get(config, "ep_scan.steps", 61)),
            samples=int(_get(config, "validate.samples", 50)),
        )
    except KeyError as e:
        missing_entry_error_message(str(e.args[0]))
        return None
    except (TypeError, ValueError) as e:
        logger.critical(f"The provided config file has an entry of the wrong type: {e}")
        generate_new_config_tip_message()
        return None
    except LindquadError as e:
        logger.critical(f"[{e.code}] {e}")
        generate_new_config_tip_message()
        return None

    violations = job_violations(job)
    if violations:
        for violation in violations:
            logger.critical(f"Invalid config entry: {violation}")

        generate_new_config_tip_message()
        return None

    logger.debug(f"Loaded the '{command}' job from '{config_file}'")

    return job
