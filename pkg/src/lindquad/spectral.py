# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Analytic spectral engine built on the effective non-Hermitian Hamiltonian H = Ω − iΓ.

Everything that follows from the diagonalization of the mode matrix L = −iH lives here: the closed form two-mode
propagator and its exceptional points, the Liouvillian spectrum and its eigenoperators, steady states and the
Lyapunov/Riccati matrices of the jump-eliminating transformations.
"""

import cmath
import itertools
import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import Final, NamedTuple, Self

import numpy as np
import numpy.typing as npt
import scipy.linalg
from scipy.special import factorial

from .errors import DimensionError, ExceptionalPointError, NumericalError, TruncationError
from .fockspace import (
    BOUNDARY_WARNING,
    FockSpace,
    SuperOpKind,
    apply_exp,
    boundary_weight,
    jordan_operator,
    ladder,
    minus_plus_coefficients,
    second_quantize,
    vec,
)
from .matkernel import (
    ABS_FLOOR,
    CMatrix,
    anticommutator,
    commutator,
    eig,
    expm,
    hs_norm,
    sinhc,
    tolerance,
)
from .model import PAULI, SystemSpec, TwoModeChannel, covariances, thermal_rates, thermal_spec

logger = logging.getLogger(__name__)

# |q²| below this fraction of the channel scale is an exceptional point
EP_RELATIVE: Final[float] = 1e-12

# Reciprocal condition number of the diagonalizer of L below which the eigenmode machinery refuses to run
DIAGONALIZABLE_THRESHOLD: Final[float] = 1e-6

PAIRING_TOL: Final[float] = 1e-8
SUPPORT_TOL: Final[float] = 1e-12

MAX_SINGLE_MODE_CUTOFF: Final[int] = 200

PhotonState = tuple[int, ...]


class EffectiveMatrices(NamedTuple):
    """The effective Hamiltonian of a system and its stable counterpart.

    Attributes:
        h: H = Ω − iΓ.
        l: L = −iH = −iΩ − Γ.
        n_modes: The number of modes.
    """

    h: CMatrix
    l: CMatrix
    n_modes: int

    def hamiltonian_operator(self, fs: FockSpace) -> CMatrix:
        """Ĥ_eff = Ĵ_H."""

        return jordan_operator(fs, self.h)

    def l_operator(self, fs: FockSpace) -> CMatrix:
        """L̂_eff = Ĵ_L."""

        return jordan_operator(fs, self.l)


class SemiclassicalHamiltonian(NamedTuple):
    """The temperature dependent Hamiltonian Ĥ⁽⁰⁾ = Ĵ_{Ω+iΓ₀} − i·TrΓ₊."""

    matrix: CMatrix
    shift: complex

    def operator(self, fs: FockSpace) -> CMatrix:
        return jordan_operator(fs, self.matrix) + self.shift * np.eye(fs.dim, dtype=np.complex128)


def effective(spec: SystemSpec) -> EffectiveMatrices:
    """The matrices H and L of a system, independent of the temperature of the bath."""

    h = spec.omega - 1j * spec.gamma
    return EffectiveMatrices(h=h, l=-1j * h, n_modes=spec.n_modes)


def semiclassical_hamiltonian(spec: SystemSpec) -> SemiclassicalHamiltonian:
    """The semiclassical Hamiltonian, which reduces to Ĵ_H at n_T = 0."""

    return SemiclassicalHamiltonian(
        matrix=spec.omega + 1j * spec.gamma_zero,
        shift=-1j * complex(np.trace(spec.gamma_plus)),
    )


@dataclass(frozen=True)
class TwoModePropagator:
    """Closed form of P(t) = e^{Lt} for a two-mode channel.

    P(t) = e^{−(iω₀+γ₀)t}·[cosh(qt)σ₀ − t·sinhc(qt)·(γ⃗ + iω⃗, σ⃗)] with q² = Σ(γ_k + iω_k)².

    Attributes:
        channel: The channel.
        q: The principal square root of q².
        ep_flag: If the channel sits at an exceptional point, where P(t) is linear in t up to the decay.
    """

    channel: TwoModeChannel
    q: complex
    ep_flag: bool

    @classmethod
    def from_channel(cls, channel: TwoModeChannel) -> Self:
        q2 = _q_squared(channel)
        return cls(channel=channel, q=cmath.sqrt(q2), ep_flag=_at_exceptional_point(channel, q2))

    @property
    def generator(self) -> CMatrix:
        """The traceless part (γ⃗ + iω⃗, σ⃗) of −L."""

        vector = np.array(self.channel.gamma_vec) + 1j * np.array(self.channel.omega_vec)
        return np.einsum("k,kij->ij", vector, np.array(PAULI[1:]))

    def __call__(self, t: float) -> CMatrix:
        if t < 0:
            raise NumericalError(f"The propagator is only defined for t >= 0, got {t}")

        decay = cmath.exp(-(1j * self.channel.omega0 + self.channel.gamma0) * t)
        qt = self.q * t
        return decay * (cmath.cosh(qt) * PAULI[0] - t * sinhc(qt) * self.generator)


def _q_squared(channel: TwoModeChannel) -> complex:
    return complex(sum((g + 1j * w) ** 2 for g, w in zip(channel.gamma_vec, channel.omega_vec, strict=True)))


def _at_exceptional_point(channel: TwoModeChannel, q2: complex) -> bool:
    scale = sum(g * g for g in channel.gamma_vec) + sum(w * w for w in channel.omega_vec)
    return abs(q2) <= EP_RELATIVE * max(1.0, scale)


def two_mode_propagator(channel: TwoModeChannel, t: float) -> CMatrix:
    """Evaluate the closed form two-mode propagator P(t) = e^{Lt}."""

    return TwoModePropagator.from_channel(channel)(t)


class Regime(StrEnum):
    EXPONENTIAL = "exponential"
    EXCEPTIONAL_POINT = "exceptional-point"
    OSCILLATORY = "oscillatory"
    MIXED = "mixed"


class EPReport(NamedTuple):
    """Classification of a two-mode channel relative to its exceptional point.

    Attributes:
        regime: Real q is exponential, imaginary q oscillatory, q = 0 an EP and anything else mixed.
        q: The rate q.
        q_abs2: The distance |q|² to the EP.
        defectiveness: Reciprocal condition number of the eigenvectors of H.
    """

    regime: Regime
    q: complex
    q_abs2: float
    defectiveness: float


def ep_classify(channel: TwoModeChannel) -> EPReport:
    """Classify the dynamical regime of a two-mode channel.

    Args:
        channel: The channel.

    Returns:
        The regime together with |q|² and the defectiveness of H, computed independently.
    """

    q2 = _q_squared(channel)
    scale = max(1.0, sum(g * g for g in channel.gamma_vec) + sum(w * w for w in channel.omega_vec))

    if _at_exceptional_point(channel, q2):
        regime = Regime.EXCEPTIONAL_POINT
    elif abs(q2.imag) <= EP_RELATIVE * scale:
        regime = Regime.EXPONENTIAL if q2.real > 0 else Regime.OSCILLATORY
    else:
        regime = Regime.MIXED

    h = channel.omega_matrix - 1j * channel.gamma_matrix
    defectiveness = eig(h).defectiveness

    logger.debug(f"Channel classified as {regime} with q² = {q2:.6g}, defectiveness {defectiveness:.3e}")

    return EPReport(regime=regime, q=cmath.sqrt(q2), q_abs2=abs(q2), defectiveness=defectiveness)


@dataclass(frozen=True)
class LiouvillianEigenvalue:
    """The eigenvalue λ_mn = Σ_k L_k·m_k + conj(L_k)·n_k of the operator |m⟩⟨n| in the diagonal frame."""

    ket: PhotonState
    bra: PhotonState
    value: complex


@dataclass(frozen=True)
class SpectrumResult:
    """The Liouvillian spectrum up to a number of photons.

    Attributes:
        entries: The eigenvalues, sorted by decreasing real part.
        mode_rates: The eigenvalues L_k of L, one per diagonal mode.
        right_vectors: The eigenvectors of L as unit columns, R = e^{−V}.
        defectiveness: Reciprocal condition number of `right_vectors`.
    """

    entries: tuple[LiouvillianEigenvalue, ...]
    mode_rates: npt.NDArray[np.complex128]
    right_vectors: CMatrix
    defectiveness: float

    @property
    def frequencies(self) -> npt.NDArray[np.float64]:
        """Ω_k = −Im L_k."""

        return np.asarray(-self.mode_rates.imag, dtype=np.float64)

    @property
    def dampings(self) -> npt.NDArray[np.float64]:
        """Γ_k = −Re L_k."""

        return np.asarray(-self.mode_rates.real, dtype=np.float64)

    @property
    def defective(self) -> bool:
        return self.defectiveness < DIAGONALIZABLE_THRESHOLD

    @property
    def exp_v(self) -> CMatrix:
        """The diagonalizer e^V with e^V·L·e^{−V} diagonal."""

        return np.linalg.inv(self.right_vectors)

    @property
    def v(self) -> CMatrix:
        return np.asarray(scipy.linalg.logm(self.exp_v), dtype=np.complex128)

    @property
    def values(self) -> npt.NDArray[np.complex128]:
        return np.array([entry.value for entry in self.entries], dtype=np.complex128)

    def value(self, ket: PhotonState, bra: PhotonState) -> complex:
        for entry in self.entries:
            if entry.ket == ket and entry.bra == bra:
                return entry.value

        raise DimensionError(f"The pair ({ket}, {bra}) is not part of the computed spectrum")


def photon_states(n_modes: int, max_photons: int) -> tuple[PhotonState, ...]:
    """Multi-indices with at most `max_photons` photons in total, by photon number then lexicographically."""

    if max_photons < 0:
        raise DimensionError(f"The number of photons must be nonnegative, got {max_photons}")

    states = (s for s in itertools.product(range(max_photons + 1), repeat=n_modes) if sum(s) <= max_photons)
    return tuple(sorted(states, key=lambda s: (sum(s), s)))


def _normalize_columns(vectors: CMatrix) -> CMatrix:
    """Unit columns whose first nonzero component is real and positive."""

    result = vectors / np.linalg.norm(vectors, axis=0)
    for k in range(result.shape[1]):
        column = result[:, k]
        pivot = column[np.flatnonzero(np.abs(column) > ABS_FLOOR)[0]]
        result[:, k] = column * (abs(pivot) / pivot)

    return result.astype(np.complex128)


def _mode_decomposition(spec: SystemSpec) -> tuple[npt.NDArray[np.complex128], CMatrix, float]:
    decomposition = eig(spec.l_matrix)
    if decomposition.defectiveness < DIAGONALIZABLE_THRESHOLD:
        raise ExceptionalPointError(
            f"L is defective (defectiveness {decomposition.defectiveness:.3e}), "
            "use the propagator based evolution at exceptional points"
        )

    order = sorted(
        range(spec.n_modes),
        key=lambda k: (-decomposition.eigenvalues[k].real, decomposition.eigenvalues[k].imag),
    )
    rates = decomposition.eigenvalues[order]
    vectors = _normalize_columns(decomposition.right_vectors[:, order])

    return rates, vectors, decomposition.defectiveness


def liouvillian_spectrum(spec: SystemSpec, max_photons: int) -> SpectrumResult:
    """Eigenvalues of the Liouvillian for kets and bras of at most `max_photons` photons.

    Args:
        spec: The system, with a diagonalizable L.
        max_photons: The largest total photon number of the kets and bras.

    Returns:
        The spectrum, with λ₀₀ = 0 first.
    """

    rates, vectors, defectiveness = _mode_decomposition(spec)
    states = photon_states(spec.n_modes, max_photons)

    entries = [
        LiouvillianEigenvalue(
            ket=ket,
            bra=bra,
            value=complex(np.dot(rates, ket) + np.dot(rates.conj(), bra)),
        )
        for ket, bra in itertools.product(states, repeat=2)
    ]
    entries.sort(key=lambda e: (-e.value.real, e.value.imag, e.ket, e.bra))

    logger.debug(f"{len(entries)} Liouvillian eigenvalues up to {max_photons} photon(s), mode rates {rates}")

    return SpectrumResult(
        entries=tuple(entries),
        mode_rates=rates,
        right_vectors=vectors,
        defectiveness=defectiveness,
    )


def pairing_tolerance(value: complex) -> float:
    return PAIRING_TOL * max(1.0, abs(value))


def match_eigenvalues(
    analytic: npt.ArrayLike,
    oracle: npt.ArrayLike,
) -> npt.NDArray[np.float64]:
    """Pair every analytic eigenvalue with the nearest oracle eigenvalue not paired yet.

    Args:
        analytic: The eigenvalues to match.
        oracle: The eigenvalues of the truncated Liouvillian, at least as many as `analytic`.

    Returns:
        The pairing distance of every analytic eigenvalue, in input order.
    """

    wanted = np.asarray(analytic, dtype=np.complex128).ravel()
    available = np.asarray(oracle, dtype=np.complex128).ravel()
    if len(available) < len(wanted):
        raise DimensionError(f"Cannot match {len(wanted)} eigenvalue(s) against {len(available)}")

    used = np.zeros(len(available), dtype=np.bool_)
    distances = np.empty(len(wanted), dtype=np.float64)
    for k, value in enumerate(wanted):
        gaps = np.where(used, np.inf, np.abs(available - value))
        best = int(np.argmin(gaps))
        used[best] = True
        distances[k] = gaps[best]

    return distances


class Eigenoperators(NamedTuple):
    """A right eigenoperator of 𝓛 and the matching eigenoperator of 𝓛♯.

    Attributes:
        rho: ρ_mn with 𝓛(ρ_mn) = λ_mn·ρ_mn.
        sigma: σ_nm with 𝓛♯(σ_nm) = λ_mn·σ_nm.
        q: The pairing Tr(σ_nm·ρ_mn).
        value: The eigenvalue λ_mn.
    """

    rho: CMatrix
    sigma: CMatrix
    q: complex
    value: complex


def single_mode_cutoff(n_T: float, max_index: int) -> int:
    """A cutoff where the neglected tail of the single mode eigenoperators is below e^{−60}."""

    if n_T == 0:
        return max_index + 3

    z_t = thermal_rates(n_T).z_T
    wanted = max_index + 8 + math.ceil(60 / z_t)
    if wanted > MAX_SINGLE_MODE_CUTOFF:
        logger.warning(
            f"n_T = {n_T} needs {wanted} levels for an e^-60 tail, capped at {MAX_SINGLE_MODE_CUTOFF}; "
            "the eigenoperators are truncated"
        )
        return MAX_SINGLE_MODE_CUTOFF

    return wanted


def eigenoperators_single_mode(
    omega: float,
    gamma: float,
    n_T: float,
    m: int,
    n: int,
    cutoff: int | None = None,
) -> Eigenoperators:
    """The eigenoperators of a single mode coupled to a thermal bath.

    ρ_mn = e^{p𝒦⁺}e^{−Z𝒦⁻}|m⟩⟨n| with p = e^{−z_T}, and σ_nm is the normal ordered polynomial
    Σ_k (−n_T)^k·√(m!n!)/(k!(m−k)!(n−k)!)·(a†)^{n−k}·a^{m−k}. The pairing is Z^{m+n+1}.

    Args:
        omega: The mode frequency.
        gamma: The relaxation rate.
        n_T: The mean number of thermal photons.
        m: The ket index.
        n: The bra index.
        cutoff: The number of levels kept, chosen from n_T when omitted.

    Returns:
        The truncated eigenoperators.
    """

    spec = thermal_spec([[omega]], [[gamma]], n_T)
    rates = thermal_rates(n_T)

    levels = single_mode_cutoff(n_T, max(m, n)) if cutoff is None else cutoff
    if min(m, n) < 0 or max(m, n) > levels - 2:
        raise TruncationError(f"The indices ({m}, {n}) need a cutoff of at least {max(m, n) + 2}, got {levels}")

    fs = FockSpace(1, levels)
    seed = fs.basis_operator((m,), (n,))
    rho = apply_exp(fs, SuperOpKind.K_MINUS, np.array([[-rates.Z]]), seed)
    rho = apply_exp(fs, SuperOpKind.K_PLUS, np.array([[rates.boltzmann]]), rho)

    a, a_dagger = ladder(fs, 0)
    sigma = np.zeros((fs.dim, fs.dim), dtype=np.complex128)
    for k in range(min(m, n) + 1):
        coefficient = (-n_T) ** k * math.sqrt(math.factorial(m) * math.factorial(n))
        coefficient /= float(factorial(k) * factorial(m - k) * factorial(n - k))
        sigma += coefficient * np.linalg.matrix_power(a_dagger, n - k) @ np.linalg.matrix_power(a, m - k)

    value = complex(spec.l_matrix[0, 0] * m + spec.l_matrix[0, 0].conjugate() * n)
    return Eigenoperators(rho=rho, sigma=sigma, q=complex(np.trace(sigma @ rho)), value=value)


def eigenoperators(spec: SystemSpec, fs: FockSpace, m: PhotonState, n: PhotonState) -> Eigenoperators:
    """Multimode eigenoperators built through the jump-eliminating transformations.

    With R the eigenvectors of L and S = (R⁻¹)†, the diagonal frame operators are X = Γ(W₋⁻¹R)|m⟩⟨n|Γ(W₋⁻¹R)† and
    Y = Γ(S)|n⟩⟨m|Γ(S)†. Then ρ_mn = e^{−𝒦⁺_{B₊}}e^{−𝒦⁻_{B₋}}X and σ_nm = e^{𝒦⁺_I}e^{−𝒦⁻_{W₊}}Y, and the pairing
    q_mn is computed numerically.

    Args:
        spec: The system, with a diagonalizable L.
        fs: The Fock space.
        m: The ket multi-index.
        n: The bra multi-index.

    Returns:
        The eigenoperators, exact on the truncated box for kets and bras within the complete photon sectors.
    """

    if fs.n_modes != spec.n_modes:
        raise DimensionError(f"The spec has {spec.n_modes} mode(s) but the Fock space has {fs.n_modes}")

    if max(sum(m), sum(n)) > fs.cutoff - 2:
        raise TruncationError(f"The pair ({m}, {n}) needs a cutoff of at least {max(sum(m), sum(n)) + 2}")

    rates, vectors, _ = _mode_decomposition(spec)
    return _eigenoperators(spec, fs, rates, vectors, m, n)


def _eigenoperators(
    spec: SystemSpec,
    fs: FockSpace,
    rates: npt.NDArray[np.complex128],
    vectors: CMatrix,
    m: PhotonState,
    n: PhotonState,
) -> Eigenoperators:
    w_plus, w_minus = covariances(spec)
    b_minus, b_plus, _, _ = minus_plus_coefficients(spec)
    identity = np.eye(spec.n_modes, dtype=np.complex128)
    dual = np.linalg.inv(vectors).conj().T

    frame = second_quantize(fs, np.linalg.solve(w_minus, vectors))
    x = frame @ fs.basis_operator(m, n) @ frame.conj().T
    rho = apply_exp(fs, SuperOpKind.K_PLUS, -b_plus, apply_exp(fs, SuperOpKind.K_MINUS, -b_minus, x))

    y = second_quantize(fs, dual) @ fs.basis_operator(n, m) @ second_quantize(fs, dual).conj().T
    sigma = apply_exp(fs, SuperOpKind.K_PLUS, identity, apply_exp(fs, SuperOpKind.K_MINUS, -w_plus, y))

    value = complex(np.dot(rates, m) + np.dot(rates.conj(), n))
    return Eigenoperators(rho=rho, sigma=sigma, q=complex(np.trace(sigma @ rho)), value=value)


def eigen_residual(fs: FockSpace, superop: CMatrix, operator: CMatrix, value: complex, max_photons: int) -> float:
    """‖P(𝓢(X) − λX)‖ on the operators with kets and bras of at most `max_photons` photons."""

    indices = fs.safe_superindices(max_photons)
    difference = superop @ vec(operator) - value * vec(operator)
    return hs_norm(difference[indices].reshape(1, -1))


class EigenmodeExpansion:
    """Evolution ρ(t) = Σ e^{λ_mn t}·ρ_mn·Tr(σ_nm·ρ₀)/q_mn over kets and bras of at most `max_photons` photons.

    The expansion is exact at zero temperature. Above it, σ_nn has a component along the identity so the sum over
    the eigenmodes is infinite, and the neglected terms decay like n_T^{max_photons + 1}.

    Attributes:
        spec: The system, with a diagonalizable L.
        fs: The Fock space.
        max_photons: The photon sector of the expansion.
        modes: The eigenoperators, keyed by their (ket, bra) multi-indices.
    """

    def __init__(self, spec: SystemSpec, fs: FockSpace, max_photons: int | None = None) -> None:
        if fs.n_modes != spec.n_modes:
            raise DimensionError(f"The spec has {spec.n_modes} mode(s) but the Fock space has {fs.n_modes}")

        photons = fs.safe_photons if max_photons is None else max_photons
        if photons < 0 or photons > fs.cutoff - 2:
            raise TruncationError(f"An expansion up to {photons} photon(s) needs a cutoff of at least {photons + 2}")

        self.spec = spec
        self.fs = fs
        self.max_photons = photons

        rates, vectors, _ = _mode_decomposition(spec)
        states = photon_states(spec.n_modes, photons)
        self.modes: dict[tuple[PhotonState, PhotonState], Eigenoperators] = {
            (m, n): _eigenoperators(spec, fs, rates, vectors, m, n) for m, n in itertools.product(states, repeat=2)
        }

        logger.debug(f"Eigenmode expansion with {len(self.modes)} mode(s) up to {photons} photon(s)")

    def _check_support(self, rho0: CMatrix) -> None:
        if rho0.shape != (self.fs.dim, self.fs.dim):
            raise DimensionError(f"The state must be {self.fs.dim}x{self.fs.dim}, got shape {rho0.shape}")

        outside = self.fs.total_photons > self.max_photons
        weight = float(np.max(np.abs(rho0[outside, :]), initial=0.0))
        weight = max(weight, float(np.max(np.abs(rho0[:, outside]), initial=0.0)))
        if weight > SUPPORT_TOL * max(1.0, hs_norm(rho0)):
            raise TruncationError(
                f"The initial state has entries of size {weight:.3e} beyond {self.max_photons} photon(s)",
                leakage=weight,
            )

    def coefficients(self, rho0: CMatrix) -> dict[tuple[PhotonState, PhotonState], complex]:
        """The expansion coefficients Tr(σ_nm·ρ₀)/q_mn."""

        self._check_support(rho0)
        return {key: complex(np.trace(mode.sigma @ rho0)) / mode.q for key, mode in self.modes.items()}

    def evolve(self, rho0: CMatrix, t: float) -> CMatrix:
        if t < 0:
            raise NumericalError(f"Only forward evolution is supported, got t = {t}")

        result = np.zeros((self.fs.dim, self.fs.dim), dtype=np.complex128)
        for key, coefficient in self.coefficients(rho0).items():
            mode = self.modes[key]
            result += cmath.exp(mode.value * t) * coefficient * mode.rho

        return result


def eigenmode_evolution(
    spec: SystemSpec,
    fs: FockSpace,
    rho0: CMatrix,
    t: float,
    max_photons: int | None = None,
) -> CMatrix:
    """Evolve a state through the eigenmode expansion of the Liouvillian.

    Args:
        spec: The system, with a diagonalizable L.
        fs: The Fock space.
        rho0: The initial state, supported on at most `max_photons` photons.
        t: The time.
        max_photons: The photon sector of the expansion, `fs.cutoff - 3` by default.

    Returns:
        The evolved state.
    """

    return EigenmodeExpansion(spec, fs, max_photons).evolve(rho0, t)


def photon_propagator(fs: FockSpace, spec: SystemSpec, t: float) -> CMatrix:
    """The number preserving propagator Γ(e^{Lt}) = e^{Ĵ_L t}, whose elements are U_{m'm}(t)."""

    return second_quantize(fs, expm(spec.l_matrix * t))


def propagator_evolution(spec: SystemSpec, fs: FockSpace, rho0: CMatrix, t: float) -> CMatrix:
    """Evolution ρ(t) = 𝒯₊₋⁻¹[Γ(P)·(𝒯₊₋ρ₀)·Γ(P)†] with P = e^{Lt}, valid at exceptional points.

    Exact at zero temperature. Above it the transformed state has an infinite tail and the result is truncated.

    Args:
        spec: The system.
        fs: The Fock space.
        rho0: The initial state.
        t: The time, nonnegative.

    Returns:
        The evolved state.
    """

    if t < 0:
        raise NumericalError(f"Only forward evolution is supported, got t = {t}")

    if rho0.shape != (fs.dim, fs.dim):
        raise DimensionError(f"The state must be {fs.dim}x{fs.dim}, got shape {rho0.shape}")

    identity = np.eye(spec.n_modes, dtype=np.complex128)
    w_plus, _ = covariances(spec)

    transformed = apply_exp(fs, SuperOpKind.K_PLUS, -w_plus, apply_exp(fs, SuperOpKind.K_MINUS, identity, rho0))
    propagator = photon_propagator(fs, spec, t)
    evolved = propagator @ transformed @ propagator.conj().T
    rho_t = apply_exp(fs, SuperOpKind.K_MINUS, -identity, apply_exp(fs, SuperOpKind.K_PLUS, w_plus, evolved))

    leakage = boundary_weight(fs, transformed)
    if leakage > BOUNDARY_WARNING:
        logger.warning(f"The transformed state reaches the cutoff with weight {leakage:.3e}, the result is truncated")

    return rho_t


def gaussian_partition(w_plus: CMatrix) -> float:
    """The trace of the unnormalized steady state e^{−Ĵ_{V_ss}}, det(I + W₊)."""

    return float(np.real(np.linalg.det(np.eye(w_plus.shape[0]) + w_plus)))


def _hermitian_log(matrix: CMatrix) -> CMatrix:
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    return np.asarray((vectors * np.log(np.maximum(values, ABS_FLOOR))) @ vectors.conj().T, dtype=np.complex128)


def steady_state(spec: SystemSpec, fs: FockSpace, max_leakage: float = 1e-3) -> CMatrix:
    """The steady state ρ_ss = e^{−Ĵ_{V_ss}}/Tr with e^{−V_ss} = W₊·W₋⁻¹.

    The exponential is taken over the whole truncated box, which makes it the exact steady state of the truncated
    Liouvillian for thermal baths.

    Args:
        spec: The system.
        fs: The Fock space.
        max_leakage: The largest fraction of the Gaussian trace allowed beyond the cutoff.

    Returns:
        The normalized steady state, the vacuum when Γ₊ = 0.
    """

    if fs.n_modes != spec.n_modes:
        raise DimensionError(f"The spec has {spec.n_modes} mode(s) but the Fock space has {fs.n_modes}")

    w_plus, w_minus = covariances(spec)
    if hs_norm(w_plus) <= ABS_FLOOR:
        return fs.vacuum()

    ratio = w_plus @ np.linalg.inv(w_minus)
    unnormalized = expm(jordan_operator(fs, _hermitian_log(ratio)))

    trace = float(np.real(np.trace(unnormalized)))
    leakage = 1 - trace / gaussian_partition(w_plus)
    logger.debug(f"Steady state on cutoff {fs.cutoff}, leakage {leakage:.3e}")

    if leakage > max_leakage:
        raise TruncationError(
            f"The steady state leaks {leakage:.3e} of its weight beyond the cutoff {fs.cutoff}", leakage=leakage
        )

    rho = unnormalized / trace
    return np.asarray((rho + rho.conj().T) / 2, dtype=np.complex128)


@dataclass(frozen=True)
class RiccatiSolution:
    """Matrices solving the Lyapunov and Riccati equations of the jump-eliminating transformations.

    Attributes:
        w_plus: W₊, solving L·W₊ + W₊·L† + 2Γ₊ = 0.
        w_minus: W₋ = W₊ + I.
        a_plus: A₊ = W₋⁻¹ − I.
        a_minus: A₋ = W₊⁻¹ + I = −A₊⁻¹, absent when W₊ is singular.
        b_plus: B₊ of the −+ transformation, equal to A₊.
        b_minus: B₋ of the −+ transformation.
        x_plus: X₊ = W₋⁻¹.
        x_minus: X₋ = W₊⁻¹, absent when W₊ is singular.
        v_ss: V_ss = log(W₊⁻¹ + I), absent when W₊ is singular.
        l_tilde: L̃ = W₋⁻¹·L·W₋.
        omega_prime: Ω′ = Ω + i[Γ₋, X₊], Hermitian, with L̃ = −iΩ′ + Γ₀′. It reduces to W₋⁻¹·Ω·W₋ when W₋ commutes
            with L.
        gamma0_prime: Γ₀′ = Γ₀ − {Γ₋, A₊}, Hermitian, reducing to −W₋⁻¹·Γ·W₋ when W₋ commutes with L.
        residuals: The residual of every identity checked while solving.
    """

    w_plus: CMatrix
    w_minus: CMatrix
    a_plus: CMatrix
    a_minus: CMatrix | None
    b_plus: CMatrix
    b_minus: CMatrix
    x_plus: CMatrix
    x_minus: CMatrix | None
    v_ss: CMatrix | None
    l_tilde: CMatrix
    omega_prime: CMatrix
    gamma0_prime: CMatrix
    residuals: dict[str, float]

    @property
    def plus_minus_coefficient(self) -> CMatrix:
        """The coefficient −W₊ of 𝒦⁺ in the +− transformation, −n_T·I for a thermal bath."""

        return -self.w_plus


def riccati_residual(spec: SystemSpec, a: CMatrix, nu: int) -> CMatrix:
    """Γ_ν + i/2·[Ω, A] − ν/2·{Γ₀, A} + A·Γ_{−ν}·A."""

    gamma_nu, gamma_other = (spec.gamma_plus, spec.gamma_minus) if nu > 0 else (spec.gamma_minus, spec.gamma_plus)
    drift = 0.5j * commutator(spec.omega, a) - nu / 2 * anticommutator(spec.gamma_zero, a)
    return gamma_nu + drift + a @ gamma_other @ a


def solve_riccati(spec: SystemSpec) -> RiccatiSolution:
    """Solve the Riccati equations of the jump-eliminating transformations through their Lyapunov form.

    Args:
        spec: The system.

    Returns:
        The solution, with every identity between its matrices verified.
    """

    n = spec.n_modes
    identity = np.eye(n, dtype=np.complex128)
    w_plus, w_minus = covariances(spec)
    b_minus, b_plus, l_tilde, _ = minus_plus_coefficients(spec)

    x_plus = np.linalg.inv(w_minus)
    a_plus = x_plus - identity

    singular = np.min(np.linalg.eigvalsh((w_plus + w_plus.conj().T) / 2)) <= ABS_FLOOR
    x_minus = None if singular else np.linalg.inv(w_plus)
    a_minus = None if x_minus is None else x_minus + identity
    v_ss = None if x_minus is None else _hermitian_log(x_minus + identity)

    omega_prime = spec.omega + 1j * commutator(spec.gamma_minus, x_plus)
    gamma0_prime = spec.gamma_zero - anticommutator(spec.gamma_minus, a_plus)

    l_matrix = spec.l_matrix
    scale = max(1.0, hs_norm(l_matrix), hs_norm(w_minus))
    residuals = {
        "lyapunov W+": hs_norm(l_matrix @ w_plus + w_plus @ l_matrix.conj().T + 2 * spec.gamma_plus),
        "lyapunov W-": hs_norm(l_matrix @ w_minus + w_minus @ l_matrix.conj().T + 2 * spec.gamma_minus),
        "W- - W+ = I": hs_norm(w_minus - w_plus - identity),
        "riccati A+": hs_norm(riccati_residual(spec, a_plus, 1)),
        "L~ = -i omega' + gamma0'": hs_norm(l_tilde - (-1j * omega_prime + gamma0_prime)),
        "hermitian omega'": hs_norm(omega_prime - omega_prime.conj().T),
        "hermitian gamma0'": hs_norm(gamma0_prime - gamma0_prime.conj().T),
        "riccati B-": hs_norm(
            spec.gamma_minus + 0.5j * commutator(omega_prime, b_minus) + 0.5 * anticommutator(gamma0_prime, b_minus)
        ),
        "spectrum L ~ L~": _spectral_distance(l_matrix, l_tilde),
    }
    if hs_norm(commutator(w_minus, l_matrix)) <= tolerance(scale**2):
        residuals["similar gamma0'"] = hs_norm(gamma0_prime + x_plus @ spec.gamma @ w_minus)
        residuals["similar omega'"] = hs_norm(omega_prime - x_plus @ spec.omega @ w_minus)
    if a_minus is not None:
        residuals["riccati A-"] = hs_norm(riccati_residual(spec, a_minus, -1))
        residuals["A- = -A+^-1"] = hs_norm(a_minus + np.linalg.inv(a_plus))

    worst = max(residuals, key=lambda name: residuals[name])
    limit = tolerance(scale**3)
    if residuals[worst] > limit:
        raise NumericalError(f"The Riccati identity '{worst}' has residual {residuals[worst]:.3e} > {limit:.3e}")

    logger.debug(f"Riccati solution verified, worst residual {residuals[worst]:.3e} for '{worst}'")

    return RiccatiSolution(
        w_plus=w_plus,
        w_minus=w_minus,
        a_plus=a_plus,
        a_minus=a_minus,
        b_plus=b_plus,
        b_minus=b_minus,
        x_plus=x_plus,
        x_minus=x_minus,
        v_ss=v_ss,
        l_tilde=l_tilde,
        omega_prime=omega_prime,
        gamma0_prime=gamma0_prime,
        residuals=residuals,
    )


def _spectral_distance(a: CMatrix, b: CMatrix) -> float:
    distances = match_eigenvalues(scipy.linalg.eigvals(a), scipy.linalg.eigvals(b))
    return float(np.max(distances, initial=0.0))
