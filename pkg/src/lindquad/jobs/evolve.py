# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""The evolution of an initial state through the eigenmode expansion."""

import logging
from collections.abc import Callable

import numpy as np

from ..errors import ExceptionalPointError
from ..export import Curve, Plot, Table
from ..fockspace import FockSpace, build_liouvillian, unvec, vec
from ..matkernel import CMatrix, expm, hs_norm
from ..spectral import EigenmodeExpansion, photon_states, propagator_evolution
from .base import Job, state_label

logger = logging.getLogger(__name__)


class EvolveJob(Job):
    """Writes the populations of the evolved state to `evolution.csv`, with the deviation from the oracle."""

    name = "evolve"

    def evolution(self, fs: FockSpace, rho0: CMatrix) -> Callable[[float], CMatrix]:
        """The evolution by eigenmodes, or by the photon propagator at an exceptional point."""

        try:
            expansion = EigenmodeExpansion(self.spec, fs, self.config.max_photons)
        except ExceptionalPointError as e:
            logger.warning(f"{e}, evolving with the photon propagator instead of the eigenmodes")
            return lambda t: propagator_evolution(self.spec, fs, rho0, t)

        return lambda t: expansion.evolve(rho0, t)

    def run(self) -> int:
        fs = self.fock_space()
        rho0 = self.initial_state(fs)
        times = self.config.times

        states = photon_states(fs.n_modes, self.config.max_photons)
        indices = [fs.index(state) for state in states]

        evolve = self.evolution(fs, rho0)

        # Uniform grid, so a single step propagator of the truncated Liouvillian gives the oracle
        step = None
        if self.oracle_allowed(fs):
            step = expm(build_liouvillian(fs, self.spec) * (times[1] - times[0]))

        oracle = vec(rho0)
        rows = []
        populations = np.empty((len(times), len(states)))
        for k, t in enumerate(times):
            rho = evolve(float(t))
            deviation = float("nan")
            if step is not None:
                if k > 0:
                    oracle = step @ oracle

                deviation = hs_norm(rho - unvec(oracle, fs.dim))

            populations[k] = [rho[i, i].real for i in indices]
            rows.append((float(t), *(float(p) for p in populations[k]), float(np.trace(rho).real), deviation))

        logger.info(f"Evolved over {len(times)} time(s) up to t = {times[-1]}")

        columns = ("t", *(f"p({state_label(state)})" for state in states), "trace", "oracle_deviation")
        self.write_table("evolution.csv", Table(columns, rows))

        curves = [Curve(f"p({state_label(state)})", times, populations[:, k]) for k, state in enumerate(states)]
        self.write_plot("evolution.svg", Plot("Populations", "t", "population", curves), log_scale=False)

        return 0
