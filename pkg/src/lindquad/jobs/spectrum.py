# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""The Liouvillian spectrum of a model, compared with the truncated Liouvillian."""

import logging

import numpy as np

from ..export import Table
from ..fockspace import build_liouvillian
from ..matkernel import eig
from ..spectral import liouvillian_spectrum, match_eigenvalues, pairing_tolerance
from .base import Job, state_label

logger = logging.getLogger(__name__)


class SpectrumJob(Job):
    """Writes `spectrum.csv` with the eigenvalues λ_mn and their distance to the oracle eigenvalues."""

    name = "spectrum"

    def run(self) -> int:
        spectrum = liouvillian_spectrum(self.spec, self.config.max_photons)
        logger.info(f"{len(spectrum.entries)} eigenvalue(s) up to {self.config.max_photons} photon(s)")

        distances = np.full(len(spectrum.entries), np.nan)
        fs = self.fock_space()
        if self.oracle_allowed(fs):
            oracle = eig(build_liouvillian(fs, self.spec)).eigenvalues
            distances = match_eigenvalues(spectrum.values, oracle)

            unmatched = sum(d > pairing_tolerance(v) for d, v in zip(distances, spectrum.values, strict=True))
            if unmatched:
                logger.warning(
                    f"{unmatched} eigenvalue(s) have no counterpart in the truncated Liouvillian, expected above "
                    + "zero temperature or for photon numbers near the cutoff"
                )

        rows = [
            (state_label(entry.ket), state_label(entry.bra), entry.value.real, entry.value.imag, float(distance))
            for entry, distance in zip(spectrum.entries, distances, strict=True)
        ]
        self.write_table("spectrum.csv", Table(("m", "n", "re", "im", "oracle_distance"), rows))

        return 0
