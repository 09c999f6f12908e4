# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Truncated multimode Fock representation of the operators and superoperators.

Operators are vectorized by row stacking, so the superoperator ρ ↦ A·ρ·B is the matrix A ⊗ Bᵀ acting on
`ρ.ravel()`. A Fock space with cutoff d keeps the levels 0..d−1 of every mode. The ladder identities only hold
away from the boundary, so the algebraic checks are done on the truncation-safe subspace: the operators |m⟩⟨n|
whose kets and bras have at most d − 3 photons in total.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from functools import cache, cached_property
from typing import Final, NamedTuple

import numpy as np
import numpy.typing as npt
from scipy.sparse.linalg import expm_multiply

from .errors import ConfigError, DimensionError, NumericalError, TruncationError
from .matkernel import CMatrix, anticommutator, commutator, expm, hs_norm, solve_sylvester, tolerance
from .model import SystemSpec, covariances

logger = logging.getLogger(__name__)

ASSOCIATED_FORM_TOL: Final[float] = 1e-12
JUMP_TOL: Final[float] = 1e-8

# Weight allowed on the boundary levels before the oracle warns about truncation
BOUNDARY_WARNING: Final[float] = 1e-6


@dataclass(frozen=True)
class FockSpace:
    """A truncated Fock space of several bosonic modes.

    Basis states are ordered lexicographically with the first mode as the most significant digit, which is the
    ordering of the Kronecker products used to build the ladder operators.

    Attributes:
        n_modes: The number of modes.
        cutoff: The number of levels kept per mode.
    """

    n_modes: int
    cutoff: int

    def __post_init__(self) -> None:
        if self.n_modes < 1:
            raise DimensionError(f"A Fock space needs at least one mode, got {self.n_modes}")

        if self.cutoff < 2:
            raise DimensionError(f"The cutoff must keep at least two levels, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return int(self.cutoff**self.n_modes)

    @property
    def safe_photons(self) -> int:
        """Largest total photon number of the truncation-safe subspace."""

        return self.cutoff - 3

    @cached_property
    def basis(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.product(range(self.cutoff), repeat=self.n_modes))

    @cached_property
    def total_photons(self) -> npt.NDArray[np.int64]:
        """Total photon number of every basis state."""

        return np.array([sum(state) for state in self.basis], dtype=np.int64)

    @cached_property
    def on_boundary(self) -> npt.NDArray[np.bool_]:
        """Basis states with at least one mode in the highest kept level."""

        return np.array([max(state) == self.cutoff - 1 for state in self.basis], dtype=np.bool_)

    def index(self, state: tuple[int, ...]) -> int:
        """Flat index of a multi-index state."""

        if len(state) != self.n_modes or any(not 0 <= level < self.cutoff for level in state):
            raise DimensionError(f"The state {state} does not belong to the space {self}")

        return int(np.ravel_multi_index(state, (self.cutoff,) * self.n_modes))

    def state(self, index: int) -> tuple[int, ...]:
        """Multi-index of a flat index."""

        if not 0 <= index < self.dim:
            raise DimensionError(f"The index {index} is outside of a space of dimension {self.dim}")

        return self.basis[index]

    def safe_indices(self, max_photons: int) -> npt.NDArray[np.int64]:
        """Flat indices of the basis states with at most `max_photons` photons in total."""

        return np.flatnonzero(self.total_photons <= max_photons)

    def safe_superindices(self, max_photons: int) -> npt.NDArray[np.int64]:
        """Indices of the vectorized operators |m⟩⟨n| with kets and bras of at most `max_photons` photons."""

        indices = self.safe_indices(max_photons)
        return (indices[:, None] * self.dim + indices[None, :]).ravel()

    def basis_operator(self, ket: tuple[int, ...], bra: tuple[int, ...]) -> CMatrix:
        """The operator |ket⟩⟨bra|."""

        operator = np.zeros((self.dim, self.dim), dtype=np.complex128)
        operator[self.index(ket), self.index(bra)] = 1
        return operator

    def vacuum(self) -> CMatrix:
        """The vacuum projector |0⟩⟨0|."""

        zero = (0,) * self.n_modes
        return self.basis_operator(zero, zero)


class SuperOpKind(StrEnum):
    """The quadratic superoperators associated with a matrix."""

    K_ZERO = "K0"
    K_PLUS = "K+"
    K_MINUS = "K-"
    N_MINUS = "N-"


class Ladder(NamedTuple):
    a: CMatrix
    a_dagger: CMatrix


class JumpOrdering(StrEnum):
    """Order of the exponentials of a jump-eliminating transformation."""

    PLUS_MINUS = "+-"
    MINUS_PLUS = "-+"


class JumpTransform(NamedTuple):
    """A jump-eliminating transformation as superoperator matrices.

    Attributes:
        forward: The transformation 𝒯.
        inverse: Its inverse 𝒯⁻¹.
        target: The diagonal Liouvillian 𝓛_d the transformation brings 𝓛 to.
        ordering: The order of the exponentials.
        residual: The intertwining residual measured on the truncation-safe subspace.
    """

    forward: CMatrix
    inverse: CMatrix
    target: CMatrix
    ordering: JumpOrdering
    residual: float


class MarginReport(NamedTuple):
    """Conjugation residuals of the jump-eliminating transformations at one cutoff.

    Attributes:
        cutoff: The number of levels per mode.
        max_photons: The photon sector the residuals are measured on.
        naive_residual: ‖P(𝒯𝓛𝒯⁻¹ − 𝓛_d)P‖ with the +− ordering.
        intertwined_residual: ‖P(𝒯𝓛 − 𝓛_d𝒯)P‖ with the +− ordering.
    """

    cutoff: int
    max_photons: int
    naive_residual: float
    intertwined_residual: float


def vec(rho: CMatrix) -> npt.NDArray[np.complex128]:
    """Row stacked vectorization of an operator."""

    return rho.flatten()


def unvec(vector: npt.NDArray[np.complex128], dim: int) -> CMatrix:
    return vector.reshape(dim, dim).copy()


def left(a: CMatrix) -> CMatrix:
    """The superoperator ρ ↦ A·ρ."""

    return np.kron(a, np.eye(a.shape[0], dtype=np.complex128))


def right(b: CMatrix) -> CMatrix:
    """The superoperator ρ ↦ ρ·B."""

    return np.kron(np.eye(b.shape[0], dtype=np.complex128), b.T)


def restrict(fs: FockSpace, superop: CMatrix, max_photons: int) -> CMatrix:
    """Compress a superoperator to the operators with kets and bras of at most `max_photons` photons."""

    indices = fs.safe_superindices(max_photons)
    return superop[np.ix_(indices, indices)]


@cache
def _annihilators(fs: FockSpace) -> tuple[CMatrix, ...]:
    single = np.diag(np.sqrt(np.arange(1, fs.cutoff, dtype=np.float64)), k=1).astype(np.complex128)
    identity = np.eye(fs.cutoff, dtype=np.complex128)

    operators = []
    for mode in range(fs.n_modes):
        factors = [single if k == mode else identity for k in range(fs.n_modes)]
        operator = factors[0]
        for factor in factors[1:]:
            operator = np.kron(operator, factor)

        operator.setflags(write=False)
        operators.append(operator)

    return tuple(operators)


def ladder(fs: FockSpace, mode: int) -> Ladder:
    """The annihilation and creation operators of a mode.

    Args:
        fs: The Fock space.
        mode: The index of the mode.

    Returns:
        The pair (a, a†) as read only matrices.
    """

    if not 0 <= mode < fs.n_modes:
        raise DimensionError(f"The mode {mode} is out of range for {fs.n_modes} mode(s)")

    a = _annihilators(fs)[mode]
    a_dagger = a.conj().T
    a_dagger.setflags(write=False)

    return Ladder(a, a_dagger)


def _check_mode_matrix(fs: FockSpace, a: CMatrix, name: str = "A") -> None:
    if a.shape != (fs.n_modes, fs.n_modes):
        raise DimensionError(f"'{name}' must be {fs.n_modes}x{fs.n_modes}, got shape {a.shape}")


def jordan_operator(fs: FockSpace, a: CMatrix) -> CMatrix:
    """The number preserving operator Ĵ_A = Σ A_nm a_n†·a_m.

    Args:
        fs: The Fock space.
        a: A matrix over the modes.

    Returns:
        The operator on the Fock space.
    """

    _check_mode_matrix(fs, a)
    annihilators = _annihilators(fs)

    result = np.zeros((fs.dim, fs.dim), dtype=np.complex128)
    for n, m in itertools.product(range(fs.n_modes), repeat=2):
        if a[n, m] != 0:
            result += a[n, m] * annihilators[n].conj().T @ annihilators[m]

    return result


def antinormal_operator(fs: FockSpace, a: CMatrix) -> CMatrix:
    """The operator Σ A_nm a_m·a_n†, equal to Ĵ_A + Tr A away from the cutoff."""

    _check_mode_matrix(fs, a)
    annihilators = _annihilators(fs)

    result = np.zeros((fs.dim, fs.dim), dtype=np.complex128)
    for n, m in itertools.product(range(fs.n_modes), repeat=2):
        if a[n, m] != 0:
            result += a[n, m] * annihilators[m] @ annihilators[n].conj().T

    return result


def second_quantize(fs: FockSpace, g: CMatrix) -> CMatrix:
    """The number preserving operator Γ(G) with Γ(G)·a_i†·Γ(G)⁻¹ = Σ_j G_ji a_j†.

    Columns are built as Π_i (Σ_j G_ji a_j†)^{m_i}/√(m_i!)|0⟩, which is exact on every complete photon sector
    (total photons ≤ d − 1). Columns of incomplete sectors are left at zero. Γ(e^X) coincides with e^{Ĵ_X} on
    the complete sectors.

    Args:
        fs: The Fock space.
        g: A matrix over the modes.

    Returns:
        The operator Γ(G).
    """

    _check_mode_matrix(fs, g, "G")
    annihilators = _annihilators(fs)
    creators = [
        sum((g[j, i] * annihilators[j].conj().T for j in range(fs.n_modes)), np.zeros((fs.dim, fs.dim)))
        for i in range(fs.n_modes)
    ]

    vacuum = np.zeros(fs.dim, dtype=np.complex128)
    vacuum[0] = 1

    result = np.zeros((fs.dim, fs.dim), dtype=np.complex128)
    for index in fs.safe_indices(fs.cutoff - 1):
        state = fs.basis[index]
        column = vacuum
        for mode, photons in enumerate(state):
            for _ in range(photons):
                column = creators[mode] @ column

        result[:, index] = column / math.sqrt(math.prod(math.factorial(photons) for photons in state))

    return result


def _parse_kind(kind: SuperOpKind | str) -> SuperOpKind:
    try:
        return SuperOpKind(kind)
    except ValueError as e:
        raise ConfigError(f"Unknown superoperator kind '{kind}'") from e


def superop_assoc(fs: FockSpace, kind: SuperOpKind | str, a: CMatrix) -> CMatrix:
    """Matrix of a quadratic superoperator associated with a matrix.

    The kinds are 𝒩⁻_A: ρ ↦ Ĵ_A·ρ − ρ·Ĵ_A, 𝒦⁰_A: ρ ↦ ½Σ A_nm(a_n†a_m·ρ + ρ·a_m a_n†),
    𝒦⁺_A: ρ ↦ Σ A_nm a_n†·ρ·a_m and 𝒦⁻_A: ρ ↦ Σ A_nm a_m·ρ·a_n†.

    Args:
        fs: The Fock space.
        kind: The kind of superoperator.
        a: The associated matrix over the modes.

    Returns:
        The superoperator acting on row stacked operators.
    """

    kind = _parse_kind(kind)
    _check_mode_matrix(fs, a)

    match kind:
        case SuperOpKind.N_MINUS:
            jordan = jordan_operator(fs, a)
            return left(jordan) - right(jordan)

        case SuperOpKind.K_ZERO:
            return (left(jordan_operator(fs, a)) + right(antinormal_operator(fs, a))) / 2

    annihilators = _annihilators(fs)
    result = np.zeros((fs.dim**2, fs.dim**2), dtype=np.complex128)
    for n, m in itertools.product(range(fs.n_modes), repeat=2):
        if a[n, m] == 0:
            continue

        a_n_dagger = annihilators[n].conj().T
        a_m = annihilators[m]
        if kind == SuperOpKind.K_PLUS:
            result += a[n, m] * np.kron(a_n_dagger, a_m.T)
        else:
            result += a[n, m] * np.kron(a_m, a_n_dagger.T)

    return result


def apply_superop(fs: FockSpace, kind: SuperOpKind | str, a: CMatrix, rho: CMatrix) -> CMatrix:
    """Apply a quadratic superoperator to an operator without building its matrix."""

    kind = _parse_kind(kind)
    _check_mode_matrix(fs, a)

    match kind:
        case SuperOpKind.N_MINUS:
            jordan = jordan_operator(fs, a)
            return jordan @ rho - rho @ jordan

        case SuperOpKind.K_ZERO:
            return (jordan_operator(fs, a) @ rho + rho @ antinormal_operator(fs, a)) / 2

    annihilators = _annihilators(fs)
    result = np.zeros_like(rho, dtype=np.complex128)
    for n, m in itertools.product(range(fs.n_modes), repeat=2):
        if a[n, m] == 0:
            continue

        a_n_dagger = annihilators[n].conj().T
        a_m = annihilators[m]
        if kind == SuperOpKind.K_PLUS:
            result += a[n, m] * a_n_dagger @ rho @ a_m
        else:
            result += a[n, m] * a_m @ rho @ a_n_dagger

    return result


def apply_exp(fs: FockSpace, kind: SuperOpKind | str, a: CMatrix, rho: CMatrix) -> CMatrix:
    """Apply the exponential of a quadratic superoperator to an operator.

    The series of 𝒦± terminates since they shift the photon number of kets and bras together.

    Args:
        fs: The Fock space.
        kind: The kind of superoperator.
        a: The associated matrix over the modes.
        rho: The operator to transform.

    Returns:
        The transformed operator.
    """

    kind = _parse_kind(kind)

    match kind:
        case SuperOpKind.N_MINUS:
            jordan = jordan_operator(fs, a)
            return expm(jordan) @ rho @ expm(-jordan)

        case SuperOpKind.K_ZERO:
            return expm(jordan_operator(fs, a) / 2) @ rho @ expm(antinormal_operator(fs, a) / 2)

    result = rho.astype(np.complex128)
    term = result
    for order in range(1, 2 * fs.n_modes * fs.cutoff + 2):
        term = apply_superop(fs, kind, a, term) / order
        if not np.any(term):
            break

        result = result + term

    return result


def build_liouvillian_assoc(fs: FockSpace, spec: SystemSpec) -> CMatrix:
    """The Liouvillian −i𝒩⁻_Ω + 2(𝒦⁰_{Γ₀} + 𝒦⁺_{Γ₊} + 𝒦⁻_{Γ₋}) + TrΓ·𝓘 from the associated matrices."""

    _check_mode_matrix(fs, spec.omega, "omega")

    return (
        -1j * superop_assoc(fs, SuperOpKind.N_MINUS, spec.omega)
        + 2 * superop_assoc(fs, SuperOpKind.K_ZERO, spec.gamma_zero)
        + 2 * superop_assoc(fs, SuperOpKind.K_PLUS, spec.gamma_plus)
        + 2 * superop_assoc(fs, SuperOpKind.K_MINUS, spec.gamma_minus)
        + np.trace(spec.gamma) * np.eye(fs.dim**2, dtype=np.complex128)
    )


def build_adjoint_assoc(fs: FockSpace, spec: SystemSpec) -> CMatrix:
    """The adjoint Liouvillian i𝒩⁻_Ω + 2(𝒦⁰_{Γ₀} + 𝒦⁺_{Γ₋} + 𝒦⁻_{Γ₊}) + TrΓ·𝓘."""

    _check_mode_matrix(fs, spec.omega, "omega")

    return (
        1j * superop_assoc(fs, SuperOpKind.N_MINUS, spec.omega)
        + 2 * superop_assoc(fs, SuperOpKind.K_ZERO, spec.gamma_zero)
        + 2 * superop_assoc(fs, SuperOpKind.K_PLUS, spec.gamma_minus)
        + 2 * superop_assoc(fs, SuperOpKind.K_MINUS, spec.gamma_plus)
        + np.trace(spec.gamma) * np.eye(fs.dim**2, dtype=np.complex128)
    )


def build_liouvillian_direct(fs: FockSpace, spec: SystemSpec) -> CMatrix:
    """The Liouvillian summed term by term from the GKSL form.

    Every dissipator keeps the form 2·a·ρ·b† − b†a·ρ − ρ·b†a in the truncated space, so the result is exactly
    trace preserving and its steady state is the truncated Gibbs state.
    """

    _check_mode_matrix(fs, spec.omega, "omega")

    hamiltonian = jordan_operator(fs, spec.omega)
    emission = jordan_operator(fs, spec.gamma_minus)
    absorption = antinormal_operator(fs, spec.gamma_plus)

    return (
        -1j * (left(hamiltonian) - right(hamiltonian))
        - (left(emission) + right(emission) - 2 * superop_assoc(fs, SuperOpKind.K_MINUS, spec.gamma_minus))
        - (left(absorption) + right(absorption) - 2 * superop_assoc(fs, SuperOpKind.K_PLUS, spec.gamma_plus))
    )


def build_liouvillian(fs: FockSpace, spec: SystemSpec) -> CMatrix:
    """Build the Liouvillian of a system as a dense superoperator.

    The GKSL form is returned, after checking it against the associated-matrix form on the operators whose kets
    and bras keep a one level margin below the cutoff.

    Args:
        fs: The Fock space, with as many modes as the spec.
        spec: The system.

    Returns:
        The Liouvillian acting on row stacked operators.
    """

    if fs.n_modes != spec.n_modes:
        raise DimensionError(f"The spec has {spec.n_modes} mode(s) but the Fock space has {fs.n_modes}")

    direct = build_liouvillian_direct(fs, spec)
    assoc = build_liouvillian_assoc(fs, spec)

    columns = fs.safe_superindices(fs.cutoff - 2)
    mismatch = hs_norm(direct[:, columns] - assoc[:, columns])
    scale = hs_norm(direct)
    if mismatch > tolerance(scale, ASSOCIATED_FORM_TOL):
        raise NumericalError(f"The two constructions of the Liouvillian differ by {mismatch:.3e}")

    logger.debug(f"Liouvillian of dimension {fs.dim**2} built, construction mismatch {mismatch:.3e}")

    return direct


def build_adjoint(fs: FockSpace, spec: SystemSpec) -> CMatrix:
    """Build the adjoint Liouvillian 𝓛♯ with Tr{A·𝓛(ρ)} = Tr{𝓛♯(A)·ρ}.

    Args:
        fs: The Fock space, with as many modes as the spec.
        spec: The system.

    Returns:
        The adjoint, checked against its associated-matrix form away from the cutoff.
    """

    adjoint = build_liouvillian(fs, spec).conj().T
    assoc = build_adjoint_assoc(fs, spec)

    mismatch = hs_norm(restrict(fs, adjoint - assoc, fs.cutoff - 2))
    if mismatch > tolerance(hs_norm(adjoint), ASSOCIATED_FORM_TOL):
        raise NumericalError(f"The two constructions of the adjoint Liouvillian differ by {mismatch:.3e}")

    return adjoint


def build_diagonal_liouvillian(fs: FockSpace, l_left: CMatrix, k_right: CMatrix | None = None) -> CMatrix:
    """The jump free Liouvillian ρ ↦ Ĵ_L·ρ + ρ·Ĵ_K.

    Args:
        fs: The Fock space.
        l_left: The matrix L acting from the left.
        k_right: The matrix K acting from the right, L† by default.

    Returns:
        The superoperator 𝓛_d.
    """

    k = l_left.conj().T if k_right is None else k_right
    return left(jordan_operator(fs, l_left)) + right(jordan_operator(fs, k))


def boundary_weight(fs: FockSpace, rho: CMatrix) -> float:
    """Population of the basis states with a mode in the highest kept level."""

    return float(np.sum(np.abs(np.diag(rho))[fs.on_boundary]))


def oracle_propagate(fs: FockSpace, lsup: CMatrix, rho0: CMatrix, t: float) -> CMatrix:
    """Brute force evolution ρ(t) = unvec(e^{𝓛t}·vec(ρ₀)).

    Args:
        fs: The Fock space.
        lsup: The Liouvillian superoperator.
        rho0: The initial state.
        t: The time, nonnegative.

    Returns:
        The evolved state. A warning reports the weight reaching the boundary levels.
    """

    if t < 0:
        raise NumericalError(f"Only forward evolution is supported, got t = {t}")

    if rho0.shape != (fs.dim, fs.dim):
        raise DimensionError(f"The state must be {fs.dim}x{fs.dim}, got shape {rho0.shape}")

    if t == 0:
        return rho0.astype(np.complex128)

    rho_t = unvec(np.asarray(expm_multiply(lsup * t, vec(rho0.astype(np.complex128)))), fs.dim)

    leakage = max(boundary_weight(fs, rho0), boundary_weight(fs, rho_t))
    if leakage > BOUNDARY_WARNING:
        logger.warning(f"The state reaches the cutoff with weight {leakage:.3e} at t = {t}, the result is truncated")

    return rho_t


def _check_margin(fs: FockSpace, max_photons: int | None) -> int:
    photons = fs.safe_photons if max_photons is None else max_photons
    if photons < 0 or photons > fs.safe_photons:
        raise TruncationError(
            f"Checking the {photons} photon sector needs a cutoff of at least {photons + 3}, got {fs.cutoff}"
        )

    return photons


def _exp_superop(fs: FockSpace, kind: SuperOpKind, a: CMatrix) -> CMatrix:
    return expm(superop_assoc(fs, kind, a))


class MinusPlusCoefficients(NamedTuple):
    """Matrices of the −+ ordered transformation 𝒯₋₊ = e^{𝒦⁻_{B₋}}·e^{𝒦⁺_{B₊}}.

    Attributes:
        b_minus: B₋, solving K̃·B₋ + B₋·L̃ = −2Γ₋.
        b_plus: B₊ = W₋⁻¹ − I.
        l_tilde: L̃ = W₋⁻¹·L·W₋, acting from the left in the target.
        k_tilde: K̃ = W₋·L†·W₋⁻¹ = L̃†, acting from the right in the target.
    """

    b_minus: CMatrix
    b_plus: CMatrix
    l_tilde: CMatrix
    k_tilde: CMatrix


def minus_plus_coefficients(spec: SystemSpec) -> MinusPlusCoefficients:
    """Solve for the matrices of the −+ ordered transformation, (Z, −e^{−z_T}) times I for a thermal bath."""

    identity = np.eye(spec.n_modes, dtype=np.complex128)
    _, w_minus = covariances(spec)
    w_minus_inv = np.linalg.inv(w_minus)

    l_tilde = w_minus_inv @ spec.l_matrix @ w_minus
    k_tilde = l_tilde.conj().T
    b_minus = solve_sylvester(k_tilde, l_tilde, -2 * spec.gamma_minus)

    return MinusPlusCoefficients(b_minus=b_minus, b_plus=w_minus_inv - identity, l_tilde=l_tilde, k_tilde=k_tilde)


def transform_factors(fs: FockSpace, spec: SystemSpec, ordering: JumpOrdering) -> tuple[CMatrix, CMatrix, CMatrix]:
    """Forward, inverse and target superoperators of a jump-eliminating transformation.

    The +− ordering is 𝒯₊₋ = e^{−𝒦⁺_{W₊}}·e^{𝒦⁻_I} with target left(Ĵ_L) + right(Ĵ_{L†}), which is
    (−n_T, 1) for a thermal bath. The −+ ordering is described by `minus_plus_coefficients`, with target
    left(Ĵ_{L̃}) + right(Ĵ_{K̃}).
    """

    if ordering == JumpOrdering.PLUS_MINUS:
        identity = np.eye(spec.n_modes, dtype=np.complex128)
        w_plus, _ = covariances(spec)

        forward = _exp_superop(fs, SuperOpKind.K_PLUS, -w_plus) @ _exp_superop(fs, SuperOpKind.K_MINUS, identity)
        inverse = _exp_superop(fs, SuperOpKind.K_MINUS, -identity) @ _exp_superop(fs, SuperOpKind.K_PLUS, w_plus)
        return forward, inverse, build_diagonal_liouvillian(fs, spec.l_matrix)

    b_minus, b_plus, l_tilde, k_tilde = minus_plus_coefficients(spec)
    forward = _exp_superop(fs, SuperOpKind.K_MINUS, b_minus) @ _exp_superop(fs, SuperOpKind.K_PLUS, b_plus)
    inverse = _exp_superop(fs, SuperOpKind.K_PLUS, -b_plus) @ _exp_superop(fs, SuperOpKind.K_MINUS, -b_minus)
    return forward, inverse, build_diagonal_liouvillian(fs, l_tilde, k_tilde)


def jump_transform(
    fs: FockSpace,
    spec: SystemSpec,
    ordering: JumpOrdering | str = JumpOrdering.PLUS_MINUS,
    max_photons: int | None = None,
    liouvillian: CMatrix | None = None,
) -> JumpTransform:
    """Build a jump-eliminating transformation and validate it.

    𝒯𝓛𝒯⁻¹ = 𝓛_d is checked in its intertwining form with the raising exponential leftmost, 𝒯𝓛 = 𝓛_d𝒯 for +−
    and 𝓛𝒯⁻¹ = 𝒯⁻¹𝓛_d for −+, which is exact on the truncation-safe subspace.

    Args:
        fs: The Fock space.
        spec: The system.
        ordering: The order of the exponentials.
        max_photons: The photon sector of the check, `fs.cutoff - 3` by default.
        liouvillian: The Liouvillian when already built.

    Returns:
        The transformation with its measured residual.
    """

    order = JumpOrdering(ordering)
    photons = _check_margin(fs, max_photons)
    lsup = build_liouvillian(fs, spec) if liouvillian is None else liouvillian

    forward, inverse, target = transform_factors(fs, spec, order)

    if order == JumpOrdering.PLUS_MINUS:
        difference = forward @ lsup - target @ forward
    else:
        difference = lsup @ inverse - inverse @ target

    residual = hs_norm(restrict(fs, difference, photons))
    limit = tolerance(max(1.0, hs_norm(restrict(fs, target, photons))), JUMP_TOL)
    if residual > limit:
        raise NumericalError(f"The {order} jump-eliminating transformation has residual {residual:.3e} > {limit:.3e}")

    logger.debug(f"Jump-eliminating transformation {order} validated with residual {residual:.3e}")

    return JumpTransform(forward=forward, inverse=inverse, target=target, ordering=order, residual=residual)


def adjoint_transform(fs: FockSpace, spec: SystemSpec, max_photons: int | None = None) -> JumpTransform:
    """The transformation 𝒯♯ = e^{𝒦⁺_I}·e^{−𝒦⁻_{W₊}} bringing 𝓛♯ to left(Ĵ_{L†}) + right(Ĵ_L).

    Args:
        fs: The Fock space.
        spec: The system.
        max_photons: The photon sector of the check, `fs.cutoff - 3` by default.

    Returns:
        The transformation, with 𝓛♯ = 𝒯♯·𝓛♯_d·(𝒯♯)⁻¹ checked as 𝓛♯𝒯♯ = 𝒯♯𝓛♯_d.
    """

    photons = _check_margin(fs, max_photons)
    identity = np.eye(spec.n_modes, dtype=np.complex128)
    w_plus, _ = covariances(spec)

    forward = _exp_superop(fs, SuperOpKind.K_PLUS, identity) @ _exp_superop(fs, SuperOpKind.K_MINUS, -w_plus)
    inverse = _exp_superop(fs, SuperOpKind.K_MINUS, w_plus) @ _exp_superop(fs, SuperOpKind.K_PLUS, -identity)
    target = build_diagonal_liouvillian(fs, spec.l_matrix.conj().T, spec.l_matrix)

    adjoint = build_adjoint(fs, spec)
    residual = hs_norm(restrict(fs, adjoint @ forward - forward @ target, photons))
    limit = tolerance(max(1.0, hs_norm(restrict(fs, target, photons))), JUMP_TOL)
    if residual > limit:
        raise NumericalError(f"The adjoint jump-eliminating transformation has residual {residual:.3e} > {limit:.3e}")

    return JumpTransform(
        forward=forward, inverse=inverse, target=target, ordering=JumpOrdering.MINUS_PLUS, residual=residual
    )


def jump_margin_scan(spec: SystemSpec, cutoffs: list[int], max_photons: int = 2) -> list[MarginReport]:
    """Measure how the naive conjugation 𝒯𝓛𝒯⁻¹ = 𝓛_d degrades with the cutoff.

    Args:
        spec: The system.
        cutoffs: The cutoffs to scan, each one above `max_photons`.
        max_photons: The photon sector the residuals are measured on.

    Returns:
        One report per cutoff, in the given order.
    """

    reports = []
    for cutoff in cutoffs:
        if cutoff <= max_photons:
            raise TruncationError(f"A cutoff of {cutoff} cannot hold the {max_photons} photon sector")

        fs = FockSpace(spec.n_modes, cutoff)
        lsup = build_liouvillian(fs, spec)
        forward, inverse, target = transform_factors(fs, spec, JumpOrdering.PLUS_MINUS)

        naive = hs_norm(restrict(fs, forward @ lsup @ inverse - target, max_photons))
        intertwined = hs_norm(restrict(fs, forward @ lsup - target @ forward, max_photons))

        logger.debug(f"Cutoff {cutoff}: naive residual {naive:.3e}, intertwined residual {intertwined:.3e}")
        reports.append(MarginReport(cutoff, max_photons, naive, intertwined))

    return reports


def commutation_residuals(fs: FockSpace, a: CMatrix, b: CMatrix, max_photons: int | None = None) -> dict[str, float]:
    """Residuals of the commutation relations of the quadratic superoperators.

    Args:
        fs: The Fock space.
        a: The first matrix over the modes.
        b: The second matrix over the modes.
        max_photons: The photon sector of the check, `fs.cutoff - 3` by default.

    Returns:
        The Frobenius norm of each relation's residual on the truncation-safe subspace.
    """

    photons = _check_margin(fs, max_photons)

    def op(kind: SuperOpKind, matrix: CMatrix) -> CMatrix:
        return superop_assoc(fs, kind, matrix)

    def bracket(x: CMatrix, y: CMatrix) -> CMatrix:
        return x @ y - y @ x

    k0_a, n_a = op(SuperOpKind.K_ZERO, a), op(SuperOpKind.N_MINUS, a)
    kp_a, km_a = op(SuperOpKind.K_PLUS, a), op(SuperOpKind.K_MINUS, a)
    k0_b, n_b = op(SuperOpKind.K_ZERO, b), op(SuperOpKind.N_MINUS, b)
    kp_b, km_b = op(SuperOpKind.K_PLUS, b), op(SuperOpKind.K_MINUS, b)

    anti = anticommutator(a, b)
    comm = commutator(a, b)

    relations = {
        "[K0_A, K+_B] = K+_{{A,B}/2}": bracket(k0_a, kp_b) - op(SuperOpKind.K_PLUS, anti / 2),
        "[K0_A, K-_B] = -K-_{{A,B}/2}": bracket(k0_a, km_b) + op(SuperOpKind.K_MINUS, anti / 2),
        "[K-_A, K+_B] = K0_{A,B} - N-_{[A,B]/2}": (
            bracket(km_a, kp_b) - op(SuperOpKind.K_ZERO, anti) + op(SuperOpKind.N_MINUS, comm / 2)
        ),
        "[N-_A, K0_B] = K0_[A,B]": bracket(n_a, k0_b) - op(SuperOpKind.K_ZERO, comm),
        "[N-_A, K+_B] = K+_[A,B]": bracket(n_a, kp_b) - op(SuperOpKind.K_PLUS, comm),
        "[N-_A, K-_B] = K-_[A,B]": bracket(n_a, km_b) - op(SuperOpKind.K_MINUS, comm),
        "[K0_A, K0_B] = N-_{[A,B]/4}": bracket(k0_a, k0_b) - op(SuperOpKind.N_MINUS, comm / 4),
        "[N-_A, N-_B] = N-_[A,B]": bracket(n_a, n_b) - op(SuperOpKind.N_MINUS, comm),
        "[K+_A, K+_B] = 0": bracket(kp_a, kp_b),
        "[K-_A, K-_B] = 0": bracket(km_a, km_b),
    }

    return {name: hs_norm(restrict(fs, residual, photons)) for name, residual in relations.items()}


def conjugation_residuals(fs: FockSpace, a: CMatrix, b: CMatrix, max_photons: int | None = None) -> dict[str, float]:
    """Residuals of the similarity identities for the exponentials e^{𝒦±_B}.

    Args:
        fs: The Fock space.
        a: The matrix of the conjugated superoperator.
        b: The matrix of the exponentiated jump superoperator.
        max_photons: The photon sector of the check, `fs.cutoff - 3` by default.

    Returns:
        The Frobenius norm of each identity's residual on the truncation-safe subspace.
    """

    photons = _check_margin(fs, max_photons)

    def op(kind: SuperOpKind, matrix: CMatrix) -> CMatrix:
        return superop_assoc(fs, kind, matrix)

    anti = anticommutator(a, b)
    comm = commutator(a, b)

    residuals: dict[str, CMatrix] = {}
    pairs = ((1, SuperOpKind.K_PLUS, SuperOpKind.K_MINUS), (-1, SuperOpKind.K_MINUS, SuperOpKind.K_PLUS))
    for sign, jump, opposite in pairs:
        jump_b = op(jump, b)
        forward, backward = expm(jump_b), expm(-jump_b)
        n_a, k0_a, opposite_a = op(SuperOpKind.N_MINUS, a), op(SuperOpKind.K_ZERO, a), op(opposite, a)

        prefix = f"e^{jump}_B"
        residuals[f"{prefix} N-_A"] = forward @ n_a @ backward - (n_a - op(jump, comm))
        residuals[f"{prefix} K0_A"] = forward @ k0_a @ backward - (k0_a - sign * op(jump, anti / 2))
        residuals[f"{prefix} {opposite}_A"] = forward @ opposite_a @ backward - (
            opposite_a
            - sign * op(SuperOpKind.K_ZERO, anti)
            + op(SuperOpKind.N_MINUS, comm / 2)
            + op(jump, b @ a @ b)
        )

    return {name: hs_norm(restrict(fs, residual, photons)) for name, residual in residuals.items()}
