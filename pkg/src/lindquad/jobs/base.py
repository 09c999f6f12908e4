# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Holds a generic job for the rest of them to be based of."""

import logging
from pathlib import Path
from typing import ClassVar, Final

from ..config import JobConfig
from ..errors import ConfigError
from ..export import Plot, Table, emit_plot, export_trace
from ..fockspace import FockSpace
from ..matkernel import CMatrix
from ..model import SystemSpec, TwoModeChannel
from ..qubitspeed import initial_qubit

logger = logging.getLogger(__name__)

# Largest Liouville space dimension the jobs diagonalize or exponentiate densely
MAX_ORACLE_DIM: Final[int] = 1296


def state_label(state: tuple[int, ...]) -> str:
    """Render a photon number state like `1 0`."""

    return " ".join(str(n) for n in state)


class Job:
    """Base job for all the other ones, with some utility functions."""

    name: ClassVar[str] = "job"

    def __init__(self, config: JobConfig) -> None:
        """The constructor of the job.

        Args:
            config: The config the job runs with.
        """

        self.config = config

    @property
    def spec(self) -> SystemSpec:
        return self.config.model.spec

    @property
    def channel(self) -> TwoModeChannel:
        """The two-mode channel of the model, which some jobs require."""

        channel = self.config.model.channel
        if channel is None:
            raise ConfigError(f"The '{self.name}' job needs the model in its 'two_mode' form")

        return channel

    def fock_space(self) -> FockSpace:
        return FockSpace(self.spec.n_modes, self.config.cutoff)

    def oracle_allowed(self, fs: FockSpace) -> bool:
        """If the Liouvillian of a Fock space is small enough to be handled densely."""

        if fs.dim**2 > MAX_ORACLE_DIM:
            logger.warning(
                f"Skipping the comparison with the truncated Liouvillian, its dimension {fs.dim**2} is above "
                + f"{MAX_ORACLE_DIM}"
            )
            return False

        return True

    def initial_state(self, fs: FockSpace) -> CMatrix:
        """The polarization qubit of the config for two modes, one photon in the first mode otherwise."""

        if fs.n_modes == 2:
            return initial_qubit(self.config.theta, self.config.phi).density(fs)

        photon = tuple([1] + [0] * (fs.n_modes - 1))
        return fs.basis_operator(photon, photon)

    def write_table(self, file_name: str, table: Table) -> Path:
        path = export_trace(table, self.config.output_directory / file_name)
        logger.info(f"Wrote {len(table.rows)} row(s) to '{path}'")
        return path

    def write_plot(self, file_name: str, plot: Plot, log_scale: bool | None = None) -> Path | None:
        """Draw a plot when plots are enabled.

        Args:
            file_name: The name of the SVG file in the output directory.
            plot: The curves to draw.
            log_scale: The ordinate scale, the one of the config by default.

        Returns:
            The path written, or none if plots are disabled.
        """

        if not self.config.plot:
            return None

        scale = self.config.log_scale if log_scale is None else log_scale
        path = emit_plot(plot, self.config.output_directory / file_name, scale)
        logger.info(f"Plotted '{path}'")
        return path

    def run(self) -> int:
        """Run the job and write its results.

        Returns:
            The exit status of the process.
        """

        raise NotImplementedError
