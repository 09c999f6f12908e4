# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Speed of evolution, fidelity and quantum speed limit time of a polarization qubit."""

import logging
import math

import numpy as np

from ..export import Curve, Plot, Table, columns_table
from ..qubitspeed import SpeedTrace, decay_horizon, initial_qubit, speed_surface, sweep
from .base import Job

logger = logging.getLogger(__name__)


def speed_table(traces: list[SpeedTrace]) -> Table:
    """The columns t, v0 and one v(n_T=x) per trace, all traces sharing their time grid and channel."""

    columns = ["t", "v0"] + [f"v(n_T={trace.n_T:g})" for trace in traces]
    values = [traces[0].times, traces[0].v0] + [trace.v for trace in traces]
    return columns_table(columns, values)


def fidelity_table(traces: list[SpeedTrace]) -> Table:
    columns = ["t"]
    values = [traces[0].times]
    for trace in traces:
        columns += [f"F(n_T={trace.n_T:g})", f"dF/dt(n_T={trace.n_T:g})", f"t_F(n_T={trace.n_T:g})"]
        values += [trace.fidelity, trace.fidelity_rate, trace.t_f]

    return columns_table(columns, values)


class SpeedJob(Job):
    """Writes `speed.csv`, `fidelity.csv`, `speed.svg` and optionally `speed_surface.csv`."""

    name = "speed"

    def run(self) -> int:
        channel = self.channel
        qubit = initial_qubit(self.config.theta, self.config.phi)
        times = self.config.times

        horizon = decay_horizon(channel)
        if times[-1] < horizon:
            logger.warning(f"The time grid ends at {times[-1]:g}, before the speed decays by t = {horizon:.3g}")

        traces = sweep([channel], qubit, self.config.n_T, times)
        for trace in traces:
            logger.info(f"n_T = {trace.n_T:g}: v(0) = {trace.v[0]:.6g}, final t_F = {trace.t_f[-1]:.6g}")

        self.write_table("speed.csv", speed_table(traces))
        self.write_table("fidelity.csv", fidelity_table(traces))

        curves = [Curve(f"n_T = {trace.n_T:g}", times, trace.v) for trace in traces]
        self.write_plot("speed.svg", Plot("Speed of evolution", "t", "v", curves))

        if self.config.theta_steps > 0:
            n_T = max(self.config.n_T)
            thetas = np.linspace(0.0, math.pi, self.config.theta_steps)
            points = speed_surface(channel, n_T, thetas, times, self.config.phi)
            logger.info(f"Speed surface over {len(thetas)} angle(s) at n_T = {n_T:g}")
            self.write_table("speed_surface.csv", Table(("t", "theta", "v"), [tuple(point) for point in points]))

        return 0
