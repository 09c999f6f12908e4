# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Deterministic random inputs for the property suites."""

import numpy as np

from .matkernel import CMatrix
from .model import SystemSpec, TwoModeChannel, thermal_spec, unit_vector, validate_spec


def make_rng(seed: int) -> np.random.Generator:
    """A PCG64 generator, identical streams for identical seeds."""

    return np.random.Generator(np.random.PCG64(seed))


def random_matrix(rng: np.random.Generator, n: int, scale: float = 1.0) -> CMatrix:
    """A complex Gaussian matrix."""

    return scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))


def random_hermitian(rng: np.random.Generator, n: int, scale: float = 1.0) -> CMatrix:
    matrix = random_matrix(rng, n, scale)
    return (matrix + matrix.conj().T) / 2


def random_positive(rng: np.random.Generator, n: int, min_eigenvalue: float = 0.2, scale: float = 1.0) -> CMatrix:
    """A Hermitian positive definite matrix with all its eigenvalues above `min_eigenvalue`."""

    matrix = random_matrix(rng, n, scale)
    return matrix @ matrix.conj().T / n + min_eigenvalue * np.eye(n, dtype=np.complex128)


def random_thermal_spec(rng: np.random.Generator, n_modes: int, n_T: float | None = None) -> SystemSpec:
    """A thermal spec with random Ω and Γ, and a random n_T in [0, 1) unless given."""

    temperature = float(rng.uniform(0.0, 1.0)) if n_T is None else n_T
    return thermal_spec(random_hermitian(rng, n_modes), random_positive(rng, n_modes), temperature)


def random_general_spec(rng: np.random.Generator, n_modes: int) -> SystemSpec:
    """A non thermal spec, Γ₊ and Γ = Γ₋ − Γ₊ drawn independently."""

    gamma_plus = random_positive(rng, n_modes, min_eigenvalue=0.1, scale=0.5)
    gamma = random_positive(rng, n_modes)
    return validate_spec(random_hermitian(rng, n_modes), gamma_plus, gamma_plus + gamma)


def random_channel(rng: np.random.Generator, gamma0: float = 1.0) -> TwoModeChannel:
    """A stable two-mode channel with |γ⃗| < 0.95γ₀ and random orientations."""

    omega_vec = float(rng.uniform(0.0, 2.0)) * gamma0 * unit_vector(
        float(np.arccos(rng.uniform(-1.0, 1.0))), float(rng.uniform(0.0, 2 * np.pi))
    )
    gamma_vec = float(rng.uniform(0.0, 0.95)) * gamma0 * unit_vector(
        float(np.arccos(rng.uniform(-1.0, 1.0))), float(rng.uniform(0.0, 2 * np.pi))
    )

    return TwoModeChannel(
        omega0=float(rng.uniform(-1.0, 1.0)),
        omega_vec=(float(omega_vec[0]), float(omega_vec[1]), float(omega_vec[2])),
        gamma0=gamma0,
        gamma_vec=(float(gamma_vec[0]), float(gamma_vec[1]), float(gamma_vec[2])),
    )
