# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""The steady state of a model."""

import logging

import numpy as np

from ..export import Table
from ..fockspace import build_liouvillian, vec
from ..matkernel import ABS_FLOOR, hs_norm
from ..spectral import steady_state
from .base import Job, state_label

logger = logging.getLogger(__name__)


class SteadyStateJob(Job):
    """Writes the nonzero entries of ρ_ss to `steady_state.csv`."""

    name = "steady-state"

    def run(self) -> int:
        fs = self.fock_space()
        rho = steady_state(self.spec, fs)

        if self.oracle_allowed(fs):
            residual = hs_norm(build_liouvillian(fs, self.spec) @ vec(rho))
            logger.info(f"Steady state residual |L(rho_ss)| = {residual:.3e}")

        kets, bras = np.nonzero(np.abs(rho) > ABS_FLOOR)
        rows = [
            (state_label(fs.state(int(i))), state_label(fs.state(int(j))), float(rho[i, j].real), float(rho[i, j].imag))
            for i, j in zip(kets, bras, strict=True)
        ]
        self.write_table("steady_state.csv", Table(("ket", "bra", "re", "im"), rows))

        return 0
