# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Speed of evolution of a polarization qubit coupled to a two-mode channel.

The qubit is a single photon shared by the horizontal and vertical modes. At zero temperature its state stays in
the vacuum and single photon sectors, and the first-order thermal correction reaches the two photon sector. Every
operator is therefore materialized on the six states with at most two photons, where the formulas are exact.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cache
from typing import Final, NamedTuple

import numpy as np
import numpy.typing as npt
from scipy.integrate import cumulative_trapezoid

from .errors import DimensionError
from .fockspace import FockSpace, SuperOpKind, apply_superop
from .matkernel import ABS_FLOOR, CMatrix, hs_norm, spectral_abscissa
from .model import PAULI, TwoModeChannel, assemble_two_mode, pauli_matrix, unit_vector
from .spectral import TwoModePropagator

logger = logging.getLogger(__name__)

SECTOR_PHOTONS: Final[int] = 2

# Decay below 10⁻⁴ of the slowest mode amplitude
DECAY_DECADES: Final[float] = 4.0


@cache
def two_photon_sector() -> tuple[FockSpace, npt.NDArray[np.int64]]:
    """The two-mode Fock space holding the two photon sector exactly, and the indices of that sector."""

    fs = FockSpace(2, SECTOR_PHOTONS + 1)
    return fs, fs.safe_indices(SECTOR_PHOTONS)


def restrict_to_sector(operator: CMatrix) -> CMatrix:
    """Compress an operator of the sector Fock space to the six states with at most two photons."""

    _, indices = two_photon_sector()
    return operator[np.ix_(indices, indices)]


def embed_sector(operator: CMatrix, fs: FockSpace) -> CMatrix:
    """Place an operator of the two photon sector in a larger two-mode Fock space."""

    sector_fs, indices = two_photon_sector()
    if fs.n_modes != 2 or fs.cutoff < sector_fs.cutoff:
        raise DimensionError(f"The two photon sector does not fit in {fs}")

    targets = np.array([fs.index(sector_fs.basis[k]) for k in indices], dtype=np.int64)
    result = np.zeros((fs.dim, fs.dim), dtype=np.complex128)
    result[np.ix_(targets, targets)] = operator
    return result


def _raise(a: CMatrix, rho: CMatrix) -> CMatrix:
    fs, _ = two_photon_sector()
    return apply_superop(fs, SuperOpKind.K_PLUS, a, rho)


def _vacuum() -> CMatrix:
    fs, _ = two_photon_sector()
    return fs.vacuum()


def _sector_operator(*terms: tuple[CMatrix, ...], scalar: complex = 0.0) -> CMatrix:
    """Σ 𝒦⁺_{A₁}…𝒦⁺_{A_k}|0⟩⟨0| + scalar·|0⟩⟨0| restricted to the sector."""

    vacuum = _vacuum()
    result = scalar * vacuum
    for chain in terms:
        rho = vacuum
        for a in reversed(chain):
            rho = _raise(a, rho)

        result = result + rho

    return restrict_to_sector(result)


@dataclass(frozen=True)
class QubitState:
    """The pure state cos(θ/2)|1_H, 0_V⟩ + e^{iφ}·sin(θ/2)|0_H, 1_V⟩.

    Attributes:
        theta: The polar angle θ of the Bloch vector.
        phi: The azimuth φ.
    """

    theta: float
    phi: float = 0.0

    @property
    def n_vec(self) -> npt.NDArray[np.float64]:
        return unit_vector(self.theta, self.phi)

    @property
    def r0(self) -> CMatrix:
        """R₀ = ½(σ₀ + (n⃗, σ⃗)), the projector on the polarization state."""

        return (PAULI[0] + pauli_matrix(self.n_vec)) / 2

    @property
    def amplitudes(self) -> npt.NDArray[np.complex128]:
        return np.array(
            [math.cos(self.theta / 2), complex(np.exp(1j * self.phi)) * math.sin(self.theta / 2)],
            dtype=np.complex128,
        )

    def density(self, fs: FockSpace) -> CMatrix:
        """ρ(0) = 𝒦⁺_{R₀}|0⟩⟨0| in a two-mode Fock space."""

        if fs.n_modes != 2:
            raise DimensionError(f"A polarization qubit needs two modes, got {fs.n_modes}")

        return apply_superop(fs, SuperOpKind.K_PLUS, self.r0, fs.vacuum())


def initial_qubit(theta: float, phi: float = 0.0) -> QubitState:
    return QubitState(theta=float(theta), phi=float(phi))


class ZeroTempState(NamedTuple):
    """The zero-temperature state ρ₀(t) = (𝒦⁺_R + r)|0⟩⟨0|.

    Attributes:
        r: R = P·R₀·P†.
        r_scalar: r = 1 − Tr R.
        rho: ρ₀(t) on the two photon sector.
    """

    r: CMatrix
    r_scalar: float
    rho: CMatrix


class FirstOrderQubitState(NamedTuple):
    """The first-order correction ρ₁(t) = (𝒦⁺_Q𝒦⁺_R + 𝒦⁺_V + v)|0⟩⟨0| and its time derivative.

    Attributes:
        v_matrix: V = Q − Q·Tr R − R·Tr Q − {R, Q}.
        v_scalar: v = Tr(RQ) + Tr R·Tr Q − Tr Q.
        rho1: ρ₁(t) on the two photon sector.
        v1_operator: v̂₁ = ∂ρ₁/∂t on the two photon sector.
    """

    v_matrix: CMatrix
    v_scalar: float
    rho1: CMatrix
    v1_operator: CMatrix


class _Kinematics(NamedTuple):
    r: CMatrix
    r_dot: CMatrix
    q: CMatrix
    q_dot: CMatrix


def r1_matrix(channel: TwoModeChannel, qubit: QubitState) -> CMatrix:
    """R₁ = L·R₀ + R₀·L† = −[γ₀ + (γ⃗, n⃗)]σ₀ + (ω⃗ × n⃗ − γ⃗ − γ₀n⃗, σ⃗)."""

    n_vec = qubit.n_vec
    gamma_vec = np.array(channel.gamma_vec)
    omega_vec = np.array(channel.omega_vec)

    scalar = -(channel.gamma0 + float(gamma_vec @ n_vec))
    vector = np.cross(omega_vec, n_vec) - gamma_vec - channel.gamma0 * n_vec
    return scalar * PAULI[0] + pauli_matrix(vector)


def _kinematics(channel: TwoModeChannel, qubit: QubitState, t: float) -> _Kinematics:
    p = TwoModePropagator.from_channel(channel)(t)
    p_dagger = p.conj().T

    return _Kinematics(
        r=p @ qubit.r0 @ p_dagger,
        r_dot=p @ r1_matrix(channel, qubit) @ p_dagger,
        q=PAULI[0] - p @ p_dagger,
        q_dot=2 * p @ channel.gamma_matrix @ p_dagger,
    )


def _trace(a: CMatrix) -> complex:
    return complex(np.trace(a))


def zero_temp_state(channel: TwoModeChannel, qubit: QubitState, t: float) -> ZeroTempState:
    """The state of the qubit evolved in a zero-temperature bath.

    Args:
        channel: The channel.
        qubit: The initial state.
        t: The time.

    Returns:
        R, r and ρ₀(t), which stays within one photon.
    """

    r = _kinematics(channel, qubit, t).r
    r_scalar = 1 - _trace(r).real
    return ZeroTempState(r=r, r_scalar=r_scalar, rho=_sector_operator((r,), scalar=r_scalar))


def v0_operator(channel: TwoModeChannel, qubit: QubitState, t: float) -> CMatrix:
    """v̂₀ = ∂ρ₀/∂t = (𝒦⁺_Ṙ + ṙ)|0⟩⟨0| with Ṙ = P·R₁·P† and ṙ = −Tr Ṙ."""

    r_dot = _kinematics(channel, qubit, t).r_dot
    return _sector_operator((r_dot,), scalar=-_trace(r_dot))


def v0_speed(channel: TwoModeChannel, qubit: QubitState, t: float) -> float:
    """The zero-temperature speed v₀ = √(Tr Ṙ² + ṙ²)."""

    r_dot = _kinematics(channel, qubit, t).r_dot
    return math.sqrt(max(0.0, _trace(r_dot @ r_dot).real + _trace(r_dot).real ** 2))


class _FirstOrderMatrices(NamedTuple):
    v_matrix: CMatrix
    v_scalar: complex
    v_matrix_rate: CMatrix
    v_scalar_rate: complex


def _first_order_matrices(kinematics: _Kinematics) -> _FirstOrderMatrices:
    r, r_dot, q, q_dot = kinematics
    tr_r, tr_q = _trace(r), _trace(q)
    tr_r_dot, tr_q_dot = _trace(r_dot), _trace(q_dot)

    v_matrix = q - q * tr_r - r * tr_q - (r @ q + q @ r)
    v_scalar = _trace(r @ q) + tr_r * tr_q - tr_q

    v_matrix_rate = (
        q_dot
        - q_dot * tr_r
        - q * tr_r_dot
        - r_dot * tr_q
        - r * tr_q_dot
        - (r_dot @ q + q @ r_dot)
        - (r @ q_dot + q_dot @ r)
    )
    v_scalar_rate = _trace(r_dot @ q) + _trace(r @ q_dot) + tr_r_dot * tr_q + tr_r * tr_q_dot - tr_q_dot

    return _FirstOrderMatrices(v_matrix, v_scalar, v_matrix_rate, v_scalar_rate)


def first_order_state(channel: TwoModeChannel, qubit: QubitState, t: float) -> FirstOrderQubitState:
    """The first-order thermal correction to the state of the qubit and its time derivative.

    The derivative v̂₁ = (𝒦⁺_Q̇𝒦⁺_R + 𝒦⁺_Q𝒦⁺_Ṙ + 𝒦⁺_V̇ + v̇)|0⟩⟨0| uses Q̇ = 2·P·Γ·P†, with Γ the relaxation
    matrix γ₀σ₀ + (γ⃗, σ⃗) of the channel.

    Args:
        channel: The channel.
        qubit: The initial state.
        t: The time.

    Returns:
        V, v, ρ₁(t) and v̂₁(t), which reach the two photon sector.
    """

    kinematics = _kinematics(channel, qubit, t)
    matrices = _first_order_matrices(kinematics)
    r, r_dot, q, q_dot = kinematics

    rho1 = _sector_operator((q, r), (matrices.v_matrix,), scalar=matrices.v_scalar)
    v1 = _sector_operator((q_dot, r), (q, r_dot), (matrices.v_matrix_rate,), scalar=matrices.v_scalar_rate)

    return FirstOrderQubitState(
        v_matrix=matrices.v_matrix,
        v_scalar=matrices.v_scalar.real,
        rho1=rho1,
        v1_operator=v1,
    )


def total_speed(channel: TwoModeChannel, qubit: QubitState, n_T: float, t: float) -> float:
    """The speed of evolution to first order in n_T, v = ‖v̂₀ + n_T·v̂₁‖."""

    v0 = v0_operator(channel, qubit, t)
    if n_T == 0:
        return hs_norm(v0)

    return hs_norm(v0 + n_T * first_order_state(channel, qubit, t).v1_operator)


@dataclass(frozen=True)
class SpeedTrace:
    """Speed, fidelity and quantum speed limit time of a qubit over a time grid.

    Attributes:
        times: The time grid, starting at 0.
        v0: The zero-temperature speed.
        v: The speed to first order in n_T.
        fidelity: F(t) = ⟨ψ₀|ρ(t)|ψ₀⟩.
        fidelity_rate: dF/dt.
        t_f: The QSL time (1 − F)/⟨v⟩_t.
        channel: The channel.
        qubit: The initial state.
        n_T: The mean number of thermal photons.
    """

    times: npt.NDArray[np.float64]
    v0: npt.NDArray[np.float64]
    v: npt.NDArray[np.float64]
    fidelity: npt.NDArray[np.float64]
    fidelity_rate: npt.NDArray[np.float64]
    t_f: npt.NDArray[np.float64]
    channel: TwoModeChannel
    qubit: QubitState
    n_T: float


def _check_grid(t_grid: Sequence[float] | npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    times = np.asarray(t_grid, dtype=np.float64)
    if times.ndim != 1 or len(times) == 0:
        raise DimensionError("The time grid must be a nonempty sequence")

    if times[0] != 0 or np.any(np.diff(times) <= 0):
        raise DimensionError("The time grid must start at 0 and increase strictly")

    return times


def fidelity_qsl(
    channel: TwoModeChannel,
    qubit: QubitState,
    n_T: float,
    t_grid: Sequence[float] | npt.NDArray[np.float64],
) -> SpeedTrace:
    """Compute the speed, the fidelity and the fidelity based QSL time on a time grid.

    F(t) = Tr(R₀·R) + n_T·Tr(R₀·V), and the average speed ⟨v⟩_t uses the trapezoidal rule.

    Args:
        channel: The channel.
        qubit: The initial state.
        n_T: The mean number of thermal photons.
        t_grid: Increasing times starting at 0.

    Returns:
        The trace, with t_F(0) = 0.
    """

    times = _check_grid(t_grid)
    r0 = qubit.r0

    v0 = np.empty_like(times)
    v = np.empty_like(times)
    fidelity = np.empty_like(times)
    fidelity_rate = np.empty_like(times)

    for k, t in enumerate(times):
        kinematics = _kinematics(channel, qubit, float(t))
        matrices = _first_order_matrices(kinematics)
        v0_op = _sector_operator((kinematics.r_dot,), scalar=-_trace(kinematics.r_dot))
        v1_op = _sector_operator(
            (kinematics.q_dot, kinematics.r),
            (kinematics.q, kinematics.r_dot),
            (matrices.v_matrix_rate,),
            scalar=matrices.v_scalar_rate,
        )

        v0[k] = hs_norm(v0_op)
        v[k] = hs_norm(v0_op + n_T * v1_op)
        fidelity[k] = (_trace(r0 @ kinematics.r) + n_T * _trace(r0 @ matrices.v_matrix)).real
        fidelity_rate[k] = (_trace(r0 @ kinematics.r_dot) + n_T * _trace(r0 @ matrices.v_matrix_rate)).real

    distance = cumulative_trapezoid(v, times, initial=0.0)
    t_f = np.where(distance > ABS_FLOOR, (1 - fidelity) * times / np.maximum(distance, ABS_FLOOR), 0.0)

    logger.debug(f"QSL trace over {len(times)} time(s), n_T = {n_T}, final t_F = {t_f[-1]:.6g}")

    return SpeedTrace(
        times=times,
        v0=v0,
        v=v,
        fidelity=fidelity,
        fidelity_rate=fidelity_rate,
        t_f=t_f,
        channel=channel,
        qubit=qubit,
        n_T=n_T,
    )


def sweep(
    channels: Sequence[TwoModeChannel],
    qubit: QubitState,
    n_T_list: Sequence[float],
    t_grid: Sequence[float] | npt.NDArray[np.float64],
) -> list[SpeedTrace]:
    """Speed traces of a family of channels, one per channel and n_T, channels first.

    Args:
        channels: The channel family.
        qubit: The initial state shared by every trace.
        n_T_list: The temperatures.
        t_grid: The time grid shared by every trace.

    Returns:
        The traces in input order.
    """

    traces = []
    for channel in channels:
        assemble_two_mode(channel)
        for n_T in n_T_list:
            traces.append(fidelity_qsl(channel, qubit, n_T, t_grid))

    logger.debug(f"Sweep of {len(channels)} channel(s) at {len(n_T_list)} temperature(s)")

    return traces


class SurfacePoint(NamedTuple):
    t: float
    theta: float
    v: float


def speed_surface(
    channel: TwoModeChannel,
    n_T: float,
    thetas: Sequence[float],
    t_grid: Sequence[float] | npt.NDArray[np.float64],
    phi: float = 0.0,
) -> list[SurfacePoint]:
    """The speed over the (t, θ) plane in long format, θ major.

    Args:
        channel: The channel.
        n_T: The mean number of thermal photons.
        thetas: The polar angles of the initial qubits.
        t_grid: The time grid.
        phi: The azimuth shared by every qubit.

    Returns:
        One point per angle and time.
    """

    times = _check_grid(t_grid)
    return [
        SurfacePoint(t=float(t), theta=float(theta), v=total_speed(channel, initial_qubit(theta, phi), n_T, float(t)))
        for theta in thetas
        for t in times
    ]


def decay_horizon(channel: TwoModeChannel) -> float:
    """A time after which the speed has decayed by several decades.

    The slowest relaxation rate κ = −max Re eig(L) controls the tail, giving t_h = max(10/γ₀, ln(10⁴)/(2κ)).
    """

    kappa = -spectral_abscissa(assemble_two_mode(channel).l_matrix)
    return max(10 / channel.gamma0, DECAY_DECADES * math.log(10) / (2 * kappa))
