# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""First-order expansion of the superpropagator in the number of thermal photons.

With 𝓛 = 𝓛₀ + n_T·𝓛₁ for a thermal bath, e^{𝓛t} ≈ (𝓘 + n_T·U₁(t))·e^{𝓛₀t} where U₁(t) = Δ𝓛_{Q(t)},
Δ𝓛_A = 𝒦⁺_A − 2𝒦⁰_A + 𝒦⁻_A and Q(t) = I − P(t)·P†(t).
"""

import logging
import math
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, NumericalError, SpecValidationError, TruncationError
from .fockspace import (
    FockSpace,
    SuperOpKind,
    apply_superop,
    build_diagonal_liouvillian,
    oracle_propagate,
    restrict,
    superop_assoc,
)
from .matkernel import CMatrix, expm, hs_norm
from .model import SystemSpec

logger = logging.getLogger(__name__)


class FirstOrderState(NamedTuple):
    """The zero-temperature evolution ρ₀(t) and its first-order correction ρ₁(t) = U₁(t)·ρ₀(t)."""

    rho0_t: CMatrix
    rho1_t: CMatrix


def _check_thermal(spec: SystemSpec) -> float:
    if spec.n_T is None:
        raise SpecValidationError(["The low temperature expansion needs a thermal spec"])

    return spec.n_T


def _check_time(t: float) -> None:
    if t < 0 or math.isnan(t):
        raise NumericalError(f"Only forward evolution is supported, got t = {t}")


def propagator(spec: SystemSpec, t: float) -> CMatrix:
    """P(t) = e^{Lt}."""

    _check_time(t)
    if math.isinf(t):
        return np.zeros((spec.n_modes, spec.n_modes), dtype=np.complex128)

    return expm(spec.l_matrix * t)


def q_matrix(spec: SystemSpec, t: float) -> CMatrix:
    """Q(t) = I − e^{Lt}·e^{L†t}, Hermitian with eigenvalues in [0, 1).

    Args:
        spec: The system.
        t: The time, possibly infinite.

    Returns:
        The matrix Q(t), zero at t = 0 and the identity at t = ∞.
    """

    p = propagator(spec, t)
    q = np.eye(spec.n_modes, dtype=np.complex128) - p @ p.conj().T
    return (q + q.conj().T) / 2


def q_matrix_rate(spec: SystemSpec, t: float) -> CMatrix:
    """dQ/dt = 2·P(t)·Γ·P†(t)."""

    p = propagator(spec, t)
    return 2 * p @ spec.gamma @ p.conj().T


def delta_superop(fs: FockSpace, a: CMatrix) -> CMatrix:
    """Δ𝓛_A = 𝒦⁺_A − 2𝒦⁰_A + 𝒦⁻_A."""

    return (
        superop_assoc(fs, SuperOpKind.K_PLUS, a)
        - 2 * superop_assoc(fs, SuperOpKind.K_ZERO, a)
        + superop_assoc(fs, SuperOpKind.K_MINUS, a)
    )


def apply_delta(fs: FockSpace, a: CMatrix, rho: CMatrix) -> CMatrix:
    """Apply Δ𝓛_A to an operator without building the superoperator."""

    return (
        apply_superop(fs, SuperOpKind.K_PLUS, a, rho)
        - 2 * apply_superop(fs, SuperOpKind.K_ZERO, a, rho)
        + apply_superop(fs, SuperOpKind.K_MINUS, a, rho)
    )


def zero_temperature_liouvillian(fs: FockSpace, spec: SystemSpec) -> CMatrix:
    """𝓛₀ = e^{−𝒦⁻_I}·𝓛_d·e^{𝒦⁻_I}, the Liouvillian of the same channel at n_T = 0.

    The lowering exponentials never leave the truncated box, so the result is the exact zero-temperature
    Liouvillian of the truncated space.
    """

    if fs.n_modes != spec.n_modes:
        raise DimensionError(f"The spec has {spec.n_modes} mode(s) but the Fock space has {fs.n_modes}")

    jump = superop_assoc(fs, SuperOpKind.K_MINUS, np.eye(spec.n_modes, dtype=np.complex128))
    return expm(-jump) @ build_diagonal_liouvillian(fs, spec.l_matrix) @ expm(jump)


def first_order_generator(fs: FockSpace, spec: SystemSpec) -> CMatrix:
    """𝓛₁ = d𝓛/dn_T = Δ𝓛_{2Γ}."""

    return delta_superop(fs, 2 * spec.gamma)


def u1_superop(fs: FockSpace, spec: SystemSpec, t: float) -> CMatrix:
    """The first-order correction U₁(t) = Δ𝓛_{Q(t)} of the superpropagator.

    Args:
        fs: The Fock space.
        spec: A thermal system.
        t: The time.

    Returns:
        The superoperator U₁(t), zero at t = 0.
    """

    _check_thermal(spec)
    if fs.cutoff < 3:
        raise TruncationError(f"The first-order correction needs a cutoff of at least 3, got {fs.cutoff}")

    return delta_superop(fs, q_matrix(spec, t))


def u1_commutator(fs: FockSpace, spec: SystemSpec, t: float) -> CMatrix:
    """U₁(t) = X − e^{𝓛₀t}·X·e^{−𝓛₀t} with X = 𝒦⁺_I − 𝒦⁻_I, which follows from [𝓛₀, X] = −𝓛₁.

    Only meaningful on the truncation-safe subspace, where it agrees with `u1_superop`.
    """

    _check_thermal(spec)
    _check_time(t)

    identity = np.eye(spec.n_modes, dtype=np.complex128)
    x = superop_assoc(fs, SuperOpKind.K_PLUS, identity) - superop_assoc(fs, SuperOpKind.K_MINUS, identity)
    l0 = zero_temperature_liouvillian(fs, spec)

    return x - expm(l0 * t) @ x @ expm(-l0 * t)


class LowTempPropagator:
    """The first-order expansion of the evolution of a thermal system.

    Attributes:
        fs: The Fock space.
        spec: The thermal system.
        n_T: The mean number of thermal photons.
    """

    def __init__(self, fs: FockSpace, spec: SystemSpec) -> None:
        self.n_T = _check_thermal(spec)
        if fs.n_modes != spec.n_modes:
            raise DimensionError(f"The spec has {spec.n_modes} mode(s) but the Fock space has {fs.n_modes}")

        self.fs = fs
        self.spec = spec

    @cached_property
    def l0(self) -> CMatrix:
        return zero_temperature_liouvillian(self.fs, self.spec)

    def q_matrix(self, t: float) -> CMatrix:
        return q_matrix(self.spec, t)

    def u1(self, t: float) -> CMatrix:
        return u1_superop(self.fs, self.spec, t)

    def propagate(self, rho0: CMatrix, t: float) -> FirstOrderState:
        """Evolve a state with finite photon support to first order in n_T.

        Args:
            rho0: The initial state, with kets and bras of at most `fs.cutoff - 3` photons.
            t: The time.

        Returns:
            ρ₀(t) = e^{𝓛₀t}ρ₀ and ρ₁(t) = U₁(t)·ρ₀(t).
        """

        _check_time(t)
        if rho0.shape != (self.fs.dim, self.fs.dim):
            raise DimensionError(f"The state must be {self.fs.dim}x{self.fs.dim}, got shape {rho0.shape}")

        outside = self.fs.total_photons > self.fs.safe_photons
        if np.any(rho0[outside, :]) or np.any(rho0[:, outside]):
            raise TruncationError(
                f"The initial state must stay within {self.fs.safe_photons} photon(s) for a cutoff of {self.fs.cutoff}"
            )

        rho0_t = oracle_propagate(self.fs, self.l0, rho0, t)
        rho1_t = apply_delta(self.fs, self.q_matrix(t), rho0_t)

        logger.debug(f"First-order state at t = {t}, |rho1| = {hs_norm(rho1_t):.3e}")

        return FirstOrderState(rho0_t=rho0_t, rho1_t=rho1_t)

    def approximate(self, rho0: CMatrix, t: float) -> CMatrix:
        """ρ(t) ≈ ρ₀(t) + n_T·ρ₁(t)."""

        state = self.propagate(rho0, t)
        return state.rho0_t + self.n_T * state.rho1_t


def approx_propagate(fs: FockSpace, spec: SystemSpec, rho0: CMatrix, t: float) -> FirstOrderState:
    """The zero-temperature evolution of a state and its first-order thermal correction."""

    return LowTempPropagator(fs, spec).propagate(rho0, t)


def propagated_k_plus(p: CMatrix, a: CMatrix) -> CMatrix:
    """The matrix P·A·P† with e^{𝓛_d t}·𝒦⁺_A·e^{−𝓛_d t} = 𝒦⁺_{P·A·P†}."""

    return p @ a @ p.conj().T


def propagated_k_minus(p: CMatrix, a: CMatrix) -> CMatrix:
    """The matrix P^{−†}·A·P⁻¹ with e^{𝓛_d t}·𝒦⁻_A·e^{−𝓛_d t} = 𝒦⁻_{P^{−†}·A·P⁻¹}."""

    p_inv = np.linalg.inv(p)
    return p_inv.conj().T @ a @ p_inv


def propagation_residuals(fs: FockSpace, spec: SystemSpec, a: CMatrix, t: float) -> dict[str, float]:
    """Residuals of the propagation identities of 𝒦±_A under 𝓛_d on the truncation-safe subspace.

    Args:
        fs: The Fock space.
        spec: The system providing L.
        a: A matrix over the modes.
        t: The time.

    Returns:
        The Frobenius norm of every identity's residual.
    """

    photons = fs.safe_photons
    if photons < 0:
        raise TruncationError(f"A cutoff of {fs.cutoff} leaves no truncation-safe subspace")

    l_matrix = spec.l_matrix
    p = propagator(spec, t)
    diagonal = build_diagonal_liouvillian(fs, l_matrix)
    forward, backward = expm(diagonal * t), expm(-diagonal * t)
    k_plus = superop_assoc(fs, SuperOpKind.K_PLUS, a)
    k_minus = superop_assoc(fs, SuperOpKind.K_MINUS, a)

    relations = {
        "e^Ld K+_A e^-Ld = K+_PAP'": forward @ k_plus @ backward
        - superop_assoc(fs, SuperOpKind.K_PLUS, propagated_k_plus(p, a)),
        "e^Ld K-_A e^-Ld = K-_P'^-1 A P^-1": forward @ k_minus @ backward
        - superop_assoc(fs, SuperOpKind.K_MINUS, propagated_k_minus(p, a)),
        "[Ld, K+_A] = K+_(LA+AL')": diagonal @ k_plus
        - k_plus @ diagonal
        - superop_assoc(fs, SuperOpKind.K_PLUS, l_matrix @ a + a @ l_matrix.conj().T),
    }

    return {name: hs_norm(restrict(fs, residual, photons)) for name, residual in relations.items()}


def vacuum_residuals(fs: FockSpace, spec: SystemSpec, a: CMatrix) -> dict[str, float]:
    """Residuals of the identities satisfied by the quadratic superoperators on the vacuum.

    Args:
        fs: The Fock space, with a cutoff of at least 3.
        spec: The system providing 𝓛_d.
        a: A matrix over the modes.

    Returns:
        The Frobenius norm of every identity's residual.
    """

    if fs.cutoff < 3:
        raise TruncationError(f"The vacuum identities need a cutoff of at least 3, got {fs.cutoff}")

    vacuum = fs.vacuum()
    identity = np.eye(fs.n_modes, dtype=np.complex128)
    trace = complex(np.trace(a))

    def act(kind: SuperOpKind, matrix: CMatrix, rho: CMatrix) -> CMatrix:
        return apply_superop(fs, kind, matrix, rho)

    raised = act(SuperOpKind.K_PLUS, a, vacuum)
    diagonal = build_diagonal_liouvillian(fs, spec.l_matrix)
    jump = superop_assoc(fs, SuperOpKind.K_MINUS, identity)

    relations = {
        "K-_A |0><0| = 0": act(SuperOpKind.K_MINUS, a, vacuum),
        "N-_A |0><0| = 0": act(SuperOpKind.N_MINUS, a, vacuum),
        "Ld |0><0| = 0": (diagonal @ vacuum.ravel()).reshape(fs.dim, fs.dim),
        "2 K0_A |0><0| = Tr A |0><0|": 2 * act(SuperOpKind.K_ZERO, a, vacuum) - trace * vacuum,
        "e^K-_I K+_A |0><0| = (K+_A + Tr A)|0><0|": (
            (expm(jump) @ raised.ravel()).reshape(fs.dim, fs.dim) - raised - trace * vacuum
        ),
        "e^-K-_I K+_A |0><0| = (K+_A - Tr A)|0><0|": (
            (expm(-jump) @ raised.ravel()).reshape(fs.dim, fs.dim) - raised + trace * vacuum
        ),
    }

    return {name: hs_norm(residual) for name, residual in relations.items()}
