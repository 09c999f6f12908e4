# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Scan of a two-mode channel across its exceptional point."""

import dataclasses
import logging

import numpy as np
import numpy.typing as npt

from ..errors import ConfigError
from ..export import Curve, Plot, Table
from ..model import TwoModeChannel
from ..spectral import ep_classify
from .base import Job

logger = logging.getLogger(__name__)


def scan_direction(channel: TwoModeChannel) -> npt.NDArray[np.float64]:
    """A unit vector orthogonal to γ⃗, along the part of ω⃗ orthogonal to it when there is one.

    Args:
        channel: The channel, with γ⃗ ≠ 0.

    Returns:
        The direction ω⃗ is scanned along, the EP being at |ω⃗| = |γ⃗|.
    """

    gamma_vec = np.array(channel.gamma_vec)
    gamma_norm = float(np.linalg.norm(gamma_vec))
    if gamma_norm == 0:
        raise ConfigError("The exceptional point scan needs a channel with a nonzero gamma vector")

    gamma_unit = gamma_vec / gamma_norm
    omega_vec = np.array(channel.omega_vec)
    orthogonal = omega_vec - (omega_vec @ gamma_unit) * gamma_unit
    if np.linalg.norm(orthogonal) > 1e-12 * max(1.0, float(np.linalg.norm(omega_vec))):
        return np.asarray(orthogonal / np.linalg.norm(orthogonal), dtype=np.float64)

    axis = np.array([0.0, 0.0, 1.0]) if abs(gamma_unit[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    direction = np.cross(gamma_unit, np.cross(axis, gamma_unit))
    return np.asarray(direction / np.linalg.norm(direction), dtype=np.float64)


class EPScanJob(Job):
    """Writes |q|², the defectiveness of H and the regime along ω to `ep_scan.csv`."""

    name = "ep-scan"

    def run(self) -> int:
        channel = self.channel
        direction = scan_direction(channel)
        gamma_norm = float(np.linalg.norm(channel.gamma_vec))

        factors = np.linspace(self.config.omega_min, self.config.omega_max, self.config.ep_steps)
        omegas = factors * gamma_norm

        rows = []
        q_abs2 = np.empty(len(omegas))
        defectiveness = np.empty(len(omegas))
        for k, omega in enumerate(omegas):
            x, y, z = (float(c) for c in omega * direction)
            report = ep_classify(dataclasses.replace(channel, omega_vec=(x, y, z)))
            q_abs2[k], defectiveness[k] = report.q_abs2, report.defectiveness
            rows.append((float(omega), report.q_abs2, report.defectiveness, str(report.regime)))

        logger.info(f"Scanned {len(omegas)} point(s), the exceptional point is at omega = {gamma_norm:g}")

        self.write_table("ep_scan.csv", Table(("omega", "q_abs2", "defectiveness", "regime"), rows))

        curves = [Curve("|q|^2", omegas, q_abs2), Curve("defectiveness", omegas, defectiveness)]
        self.write_plot("ep_scan.svg", Plot("Distance to the exceptional point", "omega", "", curves), log_scale=False)

        return 0
