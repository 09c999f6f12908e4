# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Validated construction of the system specifications.

A system is described by the frequency matrix Ω and the two relaxation matrices Γ₊ (absorption) and Γ₋ (emission).
A thermal bath is the special case Γ₊ = n_T·Γ, Γ₋ = (n_T + 1)·Γ, and the two-mode channel is the thermal case
written in the Pauli basis.
"""

import logging
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Final, NamedTuple, Self

import numpy as np
import numpy.typing as npt

from .errors import ConfigError, DimensionError, SpecValidationError
from .matkernel import HERMITIAN_TOL, CMatrix, as_cmatrix, is_hermitian, solve_lyapunov

logger = logging.getLogger(__name__)

PAULI: Final[tuple[CMatrix, CMatrix, CMatrix, CMatrix]] = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)

# Relaxation strength of the reference two-mode channels relative to γ₀
CHANNEL_STRENGTH: Final[float] = 0.9

TILT_ANGLES: Final[tuple[float, float, float]] = (math.pi / 2, math.pi / 4, 0.0)
EP_SCAN_FACTORS: Final[tuple[float, float, float]] = (0.0, 1.0, 3.0)

Vector3 = tuple[float, float, float]


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """A validated quadratic Lindbladian.

    Attributes:
        omega: The Hermitian frequency matrix Ω.
        gamma_plus: The absorption matrix Γ₊.
        gamma_minus: The emission matrix Γ₋.
        n_T: The mean number of thermal photons when the spec comes from a thermal bath.
    """

    omega: CMatrix
    gamma_plus: CMatrix
    gamma_minus: CMatrix
    n_T: float | None = None

    @property
    def n_modes(self) -> int:
        return int(self.omega.shape[0])

    @property
    def gamma(self) -> CMatrix:
        """The relaxation matrix Γ = Γ₋ − Γ₊."""

        return self.gamma_minus - self.gamma_plus

    @property
    def gamma_zero(self) -> CMatrix:
        """The matrix Γ₀ = −(Γ₊ + Γ₋) of the non-jump dissipative part."""

        return -(self.gamma_plus + self.gamma_minus)

    @property
    def l_matrix(self) -> CMatrix:
        """The stable matrix L = −iΩ − Γ."""

        return -1j * self.omega - self.gamma

    @property
    def is_thermal(self) -> bool:
        return self.n_T is not None

    def with_temperature(self, n_T: float) -> "SystemSpec":
        """The same thermal channel coupled to a bath with another temperature."""

        if self.n_T is None:
            raise SpecValidationError(["Only thermal specs can change their temperature"])

        return thermal_spec(self.omega, self.gamma, n_T)


class ThermalRates(NamedTuple):
    """Coefficients derived from the mean number of thermal photons.

    Attributes:
        n_T: The mean number of thermal photons.
        gamma_plus_coef: γ₊ = n_T.
        gamma_minus_coef: γ₋ = n_T + 1.
        gamma_zero_coef: γ₀ = −2n_T − 1.
        z_T: The inverse temperature in units of the mode energy, infinite at n_T = 0.
        boltzmann: The Boltzmann factor e^{−z_T} = n_T/(n_T + 1).
        Z: The single mode partition function 1/(1 − e^{−z_T}) = n_T + 1.
    """

    n_T: float
    gamma_plus_coef: float
    gamma_minus_coef: float
    gamma_zero_coef: float
    z_T: float
    boltzmann: float
    Z: float


class ChannelAngles(NamedTuple):
    """Angular representation of a two-mode channel, ω⃗ = ω·n(θ_Ω, φ_Ω) and γ⃗ = γ·n(θ_Γ, φ_Γ)."""

    omega0: float
    omega: float
    theta_omega: float
    phi_omega: float
    gamma0: float
    gamma: float
    theta_gamma: float
    phi_gamma: float


class PauliComponents(NamedTuple):
    """Components of a 2x2 matrix M = c₀σ₀ + (c⃗, σ⃗)."""

    scalar: complex
    vector: npt.NDArray[np.complex128]


def unit_vector(theta: float, phi: float) -> npt.NDArray[np.float64]:
    """The unit vector (sinθ·cosφ, sinθ·sinφ, cosθ), with exact zeros at the axes."""

    vector = np.array([math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)])
    vector[np.abs(vector) < 1e-15] = 0.0
    return vector


def pauli_matrix(vector: npt.ArrayLike) -> CMatrix:
    """The matrix (v⃗, σ⃗) = v₁σ₁ + v₂σ₂ + v₃σ₃."""

    components = np.asarray(vector, dtype=np.complex128)
    if components.shape != (3,):
        raise DimensionError(f"A Pauli vector needs 3 components, got shape {components.shape}")

    return np.asarray(sum(c * sigma for c, sigma in zip(components, PAULI[1:])), dtype=np.complex128)


def pauli_decompose(matrix: CMatrix) -> PauliComponents:
    """Decompose a 2x2 matrix in the Pauli basis, c_k = Tr(σ_k·M)/2."""

    if matrix.shape != (2, 2):
        raise DimensionError(f"Only 2x2 matrices have a Pauli decomposition, got shape {matrix.shape}")

    coefficients = [complex(np.trace(sigma @ matrix)) / 2 for sigma in PAULI]
    return PauliComponents(coefficients[0], np.array(coefficients[1:], dtype=np.complex128))


def _min_eigenvalue(matrix: CMatrix) -> float:
    return float(np.min(np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)))


def _positivity_floor(matrix: CMatrix) -> float:
    return HERMITIAN_TOL * max(1.0, float(np.linalg.norm(matrix)))


def validate_spec(
    omega: npt.ArrayLike, gamma_plus: npt.ArrayLike, gamma_minus: npt.ArrayLike, *, n_T: float | None = None
) -> SystemSpec:
    """Validate the raw matrices of a system.

    Γ₊ may vanish only on the zero temperature thermal path (`n_T` = 0).

    Args:
        omega: The frequency matrix Ω.
        gamma_plus: The absorption matrix Γ₊.
        gamma_minus: The emission matrix Γ₋.
        n_T: The mean number of thermal photons when the matrices come from a thermal bath.

    Returns:
        The validated spec, with exactly Hermitian matrices.
    """

    matrices = {
        "omega": as_cmatrix(omega, "omega"),
        "gamma_plus": as_cmatrix(gamma_plus, "gamma_plus"),
        "gamma_minus": as_cmatrix(gamma_minus, "gamma_minus"),
    }

    for name, matrix in matrices.items():
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionError(f"'{name}' must be square, got shape {matrix.shape}")

    shapes = {matrix.shape for matrix in matrices.values()}
    if len(shapes) != 1:
        raise DimensionError(f"All the matrices must share their dimension, got shapes {sorted(shapes)}")

    violations: list[str] = []
    for name, matrix in matrices.items():
        if not is_hermitian(matrix):
            violations.append(f"'{name}' is not Hermitian")

    if violations:
        raise SpecValidationError(violations)

    omega_h, gamma_plus_h, gamma_minus_h = ((m + m.conj().T) / 2 for m in matrices.values())

    zero_temperature = n_T == 0
    if zero_temperature:
        if float(np.linalg.norm(gamma_plus_h)) > _positivity_floor(gamma_minus_h):
            violations.append("'gamma_plus' must vanish at zero temperature")
    elif _min_eigenvalue(gamma_plus_h) <= _positivity_floor(gamma_plus_h):
        violations.append("'gamma_plus' is not positive definite")

    if _min_eigenvalue(gamma_minus_h) <= _positivity_floor(gamma_minus_h):
        violations.append("'gamma_minus' is not positive definite")

    gamma = gamma_minus_h - gamma_plus_h
    if _min_eigenvalue(gamma) <= _positivity_floor(gamma_minus_h):
        violations.append("'gamma_minus - gamma_plus' is not positive definite")

    if violations:
        raise SpecValidationError(violations)

    logger.debug(f"Validated a {omega_h.shape[0]} mode spec (n_T: {n_T})")

    return SystemSpec(omega=omega_h, gamma_plus=gamma_plus_h, gamma_minus=gamma_minus_h, n_T=n_T)


def thermal_rates(n_T: float) -> ThermalRates:
    """Derive the thermal coefficients from the mean number of thermal photons.

    Args:
        n_T: The mean number of thermal photons.

    Returns:
        The derived coefficients.
    """

    if not math.isfinite(n_T) or n_T < 0:
        raise SpecValidationError([f"The mean number of thermal photons must be finite and >= 0, got {n_T}"])

    boltzmann = n_T / (n_T + 1)
    return ThermalRates(
        n_T=n_T,
        gamma_plus_coef=n_T,
        gamma_minus_coef=n_T + 1,
        gamma_zero_coef=-2 * n_T - 1,
        z_T=math.inf if n_T == 0 else math.log((n_T + 1) / n_T),
        boltzmann=boltzmann,
        Z=n_T + 1,
    )


def thermal_spec(omega: npt.ArrayLike, gamma: npt.ArrayLike, n_T: float) -> SystemSpec:
    """Build the spec of a system coupled to a thermal bath.

    Args:
        omega: The frequency matrix Ω.
        gamma: The relaxation matrix Γ.
        n_T: The mean number of thermal photons.

    Returns:
        The spec with Γ₊ = n_T·Γ and Γ₋ = (n_T + 1)·Γ.
    """

    rates = thermal_rates(n_T)
    gamma_matrix = as_cmatrix(gamma, "gamma")

    return validate_spec(
        omega,
        rates.gamma_plus_coef * gamma_matrix,
        rates.gamma_minus_coef * gamma_matrix,
        n_T=rates.n_T,
    )


class Covariances(NamedTuple):
    """Solutions W± of L·W± + W±·L† + 2Γ± = 0, related by W₋ = W₊ + I."""

    w_plus: CMatrix
    w_minus: CMatrix


def covariances(spec: SystemSpec) -> Covariances:
    """The stationary normally ordered covariances of a system.

    Args:
        spec: The system.

    Returns:
        W₊ and W₋, exactly n_T·I and (n_T + 1)·I for a thermal bath.
    """

    identity = np.eye(spec.n_modes, dtype=np.complex128)
    if spec.n_T is not None:
        return Covariances(spec.n_T * identity, (spec.n_T + 1) * identity)

    return Covariances(solve_lyapunov(spec.l_matrix, spec.gamma_plus), solve_lyapunov(spec.l_matrix, spec.gamma_minus))


@dataclass(frozen=True)
class TwoModeChannel:
    """Two-mode channel in the Pauli basis, Ω = ω₀σ₀ + (ω⃗, σ⃗) and Γ = γ₀σ₀ + (γ⃗, σ⃗).

    Attributes:
        omega0: The common frequency ω₀.
        omega_vec: The frequency vector ω⃗.
        gamma0: The common relaxation rate γ₀.
        gamma_vec: The relaxation vector γ⃗.
    """

    omega0: float
    omega_vec: Vector3
    gamma0: float
    gamma_vec: Vector3

    @classmethod
    def from_angles(
        cls,
        omega0: float,
        omega: float,
        theta_omega: float,
        phi_omega: float,
        gamma0: float,
        gamma: float,
        theta_gamma: float,
        phi_gamma: float,
    ) -> Self:
        """Build a channel from its angular representation."""

        omega_vec = omega * unit_vector(theta_omega, phi_omega)
        gamma_vec = gamma * unit_vector(theta_gamma, phi_gamma)

        return cls(
            omega0=float(omega0),
            omega_vec=(float(omega_vec[0]), float(omega_vec[1]), float(omega_vec[2])),
            gamma0=float(gamma0),
            gamma_vec=(float(gamma_vec[0]), float(gamma_vec[1]), float(gamma_vec[2])),
        )

    def angles(self) -> ChannelAngles:
        """The angular representation of the channel, with zero angles for vanishing vectors."""

        omega, theta_omega, phi_omega = _spherical(self.omega_vec)
        gamma, theta_gamma, phi_gamma = _spherical(self.gamma_vec)

        return ChannelAngles(
            omega0=self.omega0,
            omega=omega,
            theta_omega=theta_omega,
            phi_omega=phi_omega,
            gamma0=self.gamma0,
            gamma=gamma,
            theta_gamma=theta_gamma,
            phi_gamma=phi_gamma,
        )

    @property
    def omega_matrix(self) -> CMatrix:
        return self.omega0 * PAULI[0] + pauli_matrix(self.omega_vec)

    @property
    def gamma_matrix(self) -> CMatrix:
        return self.gamma0 * PAULI[0] + pauli_matrix(self.gamma_vec)


def _spherical(vector: Vector3) -> tuple[float, float, float]:
    x, y, z = vector
    norm = math.sqrt(x * x + y * y + z * z)
    if norm == 0:
        return 0.0, 0.0, 0.0

    return norm, math.acos(max(-1.0, min(1.0, z / norm))), math.atan2(y, x)


def assemble_two_mode(channel: TwoModeChannel, n_T: float = 0.0) -> SystemSpec:
    """Build the thermal spec of a two-mode channel.

    Args:
        channel: The channel to assemble.
        n_T: The mean number of thermal photons of the bath.

    Returns:
        The spec with Ω and Γ reconstructed from the Pauli components.
    """

    gamma_norm = math.sqrt(sum(g * g for g in channel.gamma_vec))
    if channel.gamma0 <= gamma_norm:
        raise SpecValidationError(
            [f"gamma0 ({channel.gamma0}) must be greater than |gamma_vec| ({gamma_norm}) for a stable channel"]
        )

    return thermal_spec(channel.omega_matrix, channel.gamma_matrix, n_T)


def tilted_channel(theta_gamma: float, gamma0: float = 1.0, omega0: float = 0.0) -> TwoModeChannel:
    """The tilted reference channel with ω⃗ = 0.9γ₀·ẑ and γ⃗ = 0.9γ₀·n(θ_Γ, 0)."""

    return TwoModeChannel.from_angles(
        omega0, CHANNEL_STRENGTH * gamma0, 0.0, 0.0, gamma0, CHANNEL_STRENGTH * gamma0, theta_gamma, 0.0
    )


def orthogonal_channel(omega: float, gamma0: float = 1.0) -> TwoModeChannel:
    """The reference slice with ω⃗ = (0, 0, ω) orthogonal to γ⃗ = (0.9γ₀, 0, 0), at the EP when ω = 0.9γ₀."""

    return TwoModeChannel(
        omega0=0.0,
        omega_vec=(0.0, 0.0, float(omega)),
        gamma0=gamma0,
        gamma_vec=(CHANNEL_STRENGTH * gamma0, 0.0, 0.0),
    )


class ParsedModel(NamedTuple):
    """A model read from its mapping representation.

    Attributes:
        spec: The validated spec.
        channel: The two-mode channel when the model was given in that form.
    """

    spec: SystemSpec
    channel: TwoModeChannel | None


def _parse_complex(value: Any, name: str) -> complex:
    if isinstance(value, bool):
        raise ConfigError(f"'{name}' has a boolean entry")

    if isinstance(value, (int, float)):
        return complex(value)

    if isinstance(value, Sequence) and not isinstance(value, str) and len(value) == 2:
        return complex(_parse_real(value[0], name), _parse_real(value[1], name))

    raise ConfigError(f"'{name}' entries must be numbers or [re, im] pairs, got {value!r}")


def _parse_real(value: Any, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"'{name}' must be a number, got {value!r}")

    return float(value)


def _parse_matrix(value: Any, name: str) -> CMatrix:
    if not isinstance(value, Sequence) or isinstance(value, str) or len(value) == 0:
        raise ConfigError(f"'{name}' must be a non empty list of rows")

    rows = []
    for row in value:
        if not isinstance(row, Sequence) or isinstance(row, str):
            raise ConfigError(f"'{name}' must be a list of rows")

        rows.append([_parse_complex(entry, name) for entry in row])

    if len({len(row) for row in rows}) != 1:
        raise ConfigError(f"'{name}' has rows of different lengths")

    return as_cmatrix(rows, name)


def _parse_vector(value: Any, name: str) -> Vector3:
    if not isinstance(value, Sequence) or isinstance(value, str) or len(value) != 3:
        raise ConfigError(f"'{name}' must be a list of 3 numbers")

    x, y, z = (_parse_real(component, name) for component in value)
    return x, y, z


def _require(section: Mapping[str, Any], entry: str, form: str) -> Any:
    if entry not in section:
        raise ConfigError(f"The '{form}' model is missing the '{entry}' entry")

    return section[entry]


def parse_model(raw: Mapping[str, Any]) -> ParsedModel:
    """Read a model from its mapping representation.

    Exactly one of the `thermal`, `general` and `two_mode` forms must be present, complex entries are written as
    `[re, im]` pairs.

    Args:
        raw: The decoded JSON or TOML object.

    Returns:
        The validated spec, and the channel for the `two_mode` form.
    """

    forms = [form for form in ("thermal", "general", "two_mode") if form in raw]
    if len(forms) != 1:
        raise ConfigError(f"A model needs exactly one of 'thermal', 'general' or 'two_mode', got {forms}")

    form = forms[0]
    section = raw[form]
    if not isinstance(section, Mapping):
        raise ConfigError(f"The '{form}' model must be a table")

    logger.debug(f"Parsing a '{form}' model")

    match form:
        case "thermal":
            spec = thermal_spec(
                _parse_matrix(_require(section, "omega", form), "omega"),
                _parse_matrix(_require(section, "gamma", form), "gamma"),
                _parse_real(_require(section, "n_T", form), "n_T"),
            )
            return ParsedModel(spec, None)

        case "general":
            spec = validate_spec(
                _parse_matrix(_require(section, "omega", form), "omega"),
                _parse_matrix(_require(section, "gamma_plus", form), "gamma_plus"),
                _parse_matrix(_require(section, "gamma_minus", form), "gamma_minus"),
            )
            return ParsedModel(spec, None)

        case _:
            channel = TwoModeChannel(
                omega0=_parse_real(_require(section, "omega0", form), "omega0"),
                omega_vec=_parse_vector(_require(section, "omega", form), "omega"),
                gamma0=_parse_real(_require(section, "gamma0", form), "gamma0"),
                gamma_vec=_parse_vector(_require(section, "gamma", form), "gamma"),
            )
            n_T = _parse_real(section.get("n_T", 0.0), "n_T")
            return ParsedModel(assemble_two_mode(channel, n_T), channel)
