# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Property suites of every numerical module, run by the `validate` command.

Every suite takes a seeded generator and a number of random samples, and returns one `Check` per measured residual.
Suites never raise on a failed property, a numerical error inside a suite is recorded as an infinite residual.
"""

import dataclasses
import logging
import math
from collections.abc import Callable, Iterable
from typing import Final, NamedTuple

import numpy as np

from .errors import ConfigError, LindquadError
from .fockspace import (
    JUMP_TOL,
    FockSpace,
    JumpOrdering,
    adjoint_transform,
    build_adjoint,
    build_liouvillian,
    commutation_residuals,
    conjugation_residuals,
    jump_transform,
    oracle_propagate,
    restrict,
    unvec,
    vec,
)
from .lowtemp import LowTempPropagator, propagation_residuals, u1_commutator, u1_superop, vacuum_residuals
from .matkernel import (
    RESIDUAL_TOL,
    CMatrix,
    eig,
    expm,
    hs_norm,
    lyapunov_quadrature,
    sinhc,
    solve_lyapunov,
    tolerance,
)
from .model import (
    CHANNEL_STRENGTH,
    EP_SCAN_FACTORS,
    TILT_ANGLES,
    TwoModeChannel,
    assemble_two_mode,
    orthogonal_channel,
    thermal_rates,
    tilted_channel,
)
from .qubitspeed import (
    decay_horizon,
    embed_sector,
    fidelity_qsl,
    first_order_state,
    initial_qubit,
    total_speed,
    v0_operator,
    v0_speed,
)
from .sampling import random_channel, random_general_spec, random_hermitian, random_matrix, random_thermal_spec
from .spectral import (
    DIAGONALIZABLE_THRESHOLD,
    EigenmodeExpansion,
    Regime,
    eigen_residual,
    eigenoperators,
    eigenoperators_single_mode,
    ep_classify,
    liouvillian_spectrum,
    match_eigenvalues,
    pairing_tolerance,
    single_mode_cutoff,
    solve_riccati,
    steady_state,
    two_mode_propagator,
)

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES: Final[int] = 50

# Allowed band of the error ratio when n_T is halved, around the ideal 4 of a second order error
SCALING_BAND: Final[tuple[float, float]] = (3.5, 4.5)

FINITE_DIFFERENCE_STEP: Final[float] = 1e-6
SPEED_RELATIVE_TOL: Final[float] = 1e-6

# Largest accepted C in |v - v_oracle| <= C·n_T², in units of γ₀
SPEED_SECOND_ORDER_BOUND: Final[float] = 50.0

# Relative detuning from the exceptional point where the closed form propagator must stay continuous
EP_CONTINUITY_OFFSETS: Final[tuple[float, ...]] = (1e-6, -1e-6)

# Relative detuning from the exceptional point outside of which H must be diagonalizable
EP_EXCLUSION_RADIUS: Final[float] = 1e-3

ORACLE_TOL: Final[float] = 1e-9


class Check(NamedTuple):
    """The outcome of one property check.

    Attributes:
        suite: The suite the check belongs to.
        name: What was checked.
        residual: The measured deviation from the property.
        tolerance: The largest deviation accepted.
        passed: If the residual is within the tolerance.
    """

    suite: str
    name: str
    residual: float
    tolerance: float
    passed: bool


def check(suite: str, name: str, residual: float, limit: float) -> Check:
    residual = float(residual)
    return Check(suite=suite, name=name, residual=residual, tolerance=float(limit), passed=bool(residual <= limit))


def _flag(suite: str, name: str, holds: bool) -> Check:
    return check(suite, name, 0.0 if holds else 1.0, 0.0)


def _failed(suite: str, name: str, error: LindquadError) -> Check:
    logger.warning(f"[{suite}] {name}: {error}")
    return check(suite, name, math.inf, 0.0)


def matkernel_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "matkernel"
    checks = []

    for k in range(min(samples, 10)):
        try:
            spec = random_general_spec(rng, 3)
            l_matrix = spec.l_matrix
            w = solve_lyapunov(l_matrix, spec.gamma_plus)
            residual = hs_norm(l_matrix @ w + w @ l_matrix.conj().T + 2 * spec.gamma_plus)
            checks.append(check(suite, f"lyapunov residual #{k}", residual, tolerance(hs_norm(l_matrix) * hs_norm(w))))

            if k < 2:
                quadrature = lyapunov_quadrature(l_matrix, spec.gamma_plus)
                checks.append(check(suite, f"lyapunov against quadrature #{k}", hs_norm(w - quadrature), 1e-8))
        except LindquadError as e:
            checks.append(_failed(suite, f"lyapunov #{k}", e))

    for x in (0.9e-4, 1.1e-4, 0.5e-4 * (1 + 1j)):
        direct = complex(np.sinh(x) / x)
        checks.append(check(suite, f"sinhc({x})", abs(sinhc(x) - direct), 1e-14))

    return checks


def model_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "model"
    checks = []

    for k in range(min(samples, 30)):
        name = f"solve_lyapunov(L, Gamma) = I #{k}"
        try:
            spec = random_general_spec(rng, 2 + k % 2)
            identity = np.eye(spec.n_modes, dtype=np.complex128)
            w = solve_lyapunov(spec.l_matrix, spec.gamma)
            checks.append(check(suite, name, hs_norm(w - identity), RESIDUAL_TOL))
        except LindquadError as e:
            checks.append(_failed(suite, name, e))

    for n_T in (0.0, 0.1, 0.5, 1.0):
        try:
            spec = random_thermal_spec(rng, 2, n_T)
            identity = np.eye(2, dtype=np.complex128)
            w_plus = solve_lyapunov(spec.l_matrix, spec.gamma_plus)
            w_minus = solve_lyapunov(spec.l_matrix, spec.gamma_minus)
        except LindquadError as e:
            checks.append(_failed(suite, f"thermal covariances at n_T = {n_T}", e))
            continue

        checks.append(check(suite, f"thermal W+ = n_T I at n_T = {n_T}", hs_norm(w_plus - n_T * identity), 1e-10))
        checks.append(
            check(suite, f"thermal W- = (n_T + 1) I at n_T = {n_T}", hs_norm(w_minus - (n_T + 1) * identity), 1e-10)
        )

    return checks


def liouvillian_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "liouvillian"
    checks = []

    fs = FockSpace(2, 4)
    trace_row = vec(np.eye(fs.dim, dtype=np.complex128))
    for k in range(min(samples, 5)):
        try:
            spec = random_general_spec(rng, 2)
            lsup = build_liouvillian(fs, spec)
        except LindquadError as e:
            checks.append(_failed(suite, f"liouvillian #{k}", e))
            continue

        rho = random_hermitian(rng, fs.dim)
        image = unvec(lsup @ vec(rho), fs.dim)
        limit = tolerance(hs_norm(lsup) * max(1.0, hs_norm(rho)))
        checks.append(check(suite, f"trace preserved #{k}", hs_norm((trace_row @ lsup).reshape(1, -1)), limit))
        checks.append(check(suite, f"hermiticity preserved #{k}", hs_norm(image - image.conj().T), limit))

    name = "zero temperature photon sectors"
    try:
        cold = build_liouvillian(fs, random_thermal_spec(rng, 2, 0.0))
    except LindquadError as e:
        return [*checks, _failed(suite, name, e)]

    everything = np.arange(fs.dim**2)
    for photons in range(fs.cutoff - 1):
        inside = fs.safe_superindices(photons)
        outside = np.setdiff1d(everything, inside)
        leak = hs_norm(cold[np.ix_(outside, inside)])
        checks.append(check(suite, f"{name} up to {photons} photon(s) invariant", leak, tolerance(hs_norm(cold))))

    return checks


def algebra_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "algebra"
    checks = []
    fs = FockSpace(2, 5)

    worst_commutation: dict[str, float] = {}
    worst_conjugation: dict[str, float] = {}
    for k in range(samples):
        a, b = random_matrix(rng, 2, 0.5), random_matrix(rng, 2, 0.5)
        scale = max(1.0, hs_norm(a)) * max(1.0, hs_norm(b))

        try:
            commutation = commutation_residuals(fs, a, b)
            conjugation = conjugation_residuals(fs, a, b)
        except LindquadError as e:
            checks.append(_failed(suite, f"superoperator algebra #{k}", e))
            continue

        for name, residual in commutation.items():
            worst_commutation[name] = max(worst_commutation.get(name, 0.0), residual / scale)

        for name, residual in conjugation.items():
            worst_conjugation[name] = max(worst_conjugation.get(name, 0.0), residual / scale)

    limit = tolerance(fs.cutoff)
    checks += [check(suite, name, residual, limit) for name, residual in worst_commutation.items()]
    checks += [check(suite, name, residual, limit) for name, residual in worst_conjugation.items()]
    return checks


def jump_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "jump elimination"
    checks = []

    fs = FockSpace(2, 6)
    for n_T in (0.0, 0.1, 0.5):
        try:
            spec = random_thermal_spec(rng, 2, n_T)
            lsup = build_liouvillian(fs, spec)
        except LindquadError as e:
            checks.append(_failed(suite, f"liouvillian at n_T = {n_T}", e))
            continue

        limit = JUMP_TOL * max(1.0, hs_norm(restrict(fs, lsup, 2)))
        for ordering in JumpOrdering:
            name = f"T({ordering}) L T^-1 = Ld at n_T = {n_T}"
            try:
                transform = jump_transform(fs, spec, ordering, max_photons=2, liouvillian=lsup)
                checks.append(check(suite, name, transform.residual, limit))
            except LindquadError as e:
                checks.append(_failed(suite, name, e))

        name = f"adjoint transform at n_T = {n_T}"
        try:
            checks.append(check(suite, name, adjoint_transform(fs, spec, max_photons=2).residual, limit))
        except LindquadError as e:
            checks.append(_failed(suite, name, e))

    small = FockSpace(2, 5)
    for k in range(min(samples, 3)):
        spec = random_general_spec(rng, 2)
        for ordering in JumpOrdering:
            name = f"T({ordering}) L T^-1 = Ld for a general bath #{k}"
            try:
                transform = jump_transform(small, spec, ordering)
                checks.append(check(suite, name, transform.residual, JUMP_TOL * max(1.0, hs_norm(transform.target))))
            except LindquadError as e:
                checks.append(_failed(suite, name, e))

        name = f"adjoint transform for a general bath #{k}"
        try:
            transform = adjoint_transform(small, spec)
            checks.append(check(suite, name, transform.residual, JUMP_TOL * max(1.0, hs_norm(transform.target))))
        except LindquadError as e:
            checks.append(_failed(suite, name, e))

    return checks


def spectrum_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "spectrum"
    checks = []

    fs = FockSpace(2, 4)
    for k in range(min(samples, 10)):
        spec = random_thermal_spec(rng, 2, 0.0)
        name = f"analytic against oracle spectrum #{k}"
        try:
            spectrum = liouvillian_spectrum(spec, 2)
            oracle = eig(build_liouvillian(fs, spec)).eigenvalues
        except LindquadError as e:
            checks.append(_failed(suite, name, e))
            continue

        distances = match_eigenvalues(spectrum.values, oracle)
        largest = float(np.max(np.abs(spectrum.values)))
        checks.append(check(suite, name, float(np.max(distances)), pairing_tolerance(largest)))

        mirrored = [spectrum.value(entry.bra, entry.ket).conjugate() for entry in spectrum.entries]
        asymmetry = float(np.max(np.abs(spectrum.values - np.array(mirrored))))
        checks.append(check(suite, f"lambda_nm = conj(lambda_mn) #{k}", asymmetry, tolerance(largest)))
        checks.append(check(suite, f"Re lambda <= 0 #{k}", max(0.0, float(np.max(spectrum.values.real))), 0.0))

    return checks


def riccati_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "riccati"
    checks = []

    for k in range(min(samples, 10)):
        spec = random_general_spec(rng, 2)
        try:
            solution = solve_riccati(spec)
        except LindquadError as e:
            checks.append(_failed(suite, f"riccati solution #{k}", e))
            continue

        scale = max(1.0, hs_norm(spec.l_matrix), hs_norm(solution.w_minus))
        for name, residual in solution.residuals.items():
            checks.append(check(suite, f"{name} #{k}", residual, tolerance(scale**3)))

    return checks


def eigenoperator_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "eigenoperators"
    checks = []

    indices = [(m, n) for m in range(4) for n in range(4)]
    for n_T in (0.0, 0.3, 1.0):
        name = f"single mode biorthogonality at n_T = {n_T}"
        try:
            cutoff = single_mode_cutoff(n_T, 3)
            modes = {key: eigenoperators_single_mode(1.0, 0.5, n_T, *key, cutoff=cutoff) for key in indices}
        except LindquadError as e:
            checks.append(_failed(suite, name, e))
            continue

        z = thermal_rates(n_T).Z
        worst = 0.0
        for (m, n), right in modes.items():
            for (m_prime, n_prime), left in modes.items():
                expected = z ** (m + n + 1) if (m, n) == (m_prime, n_prime) else 0.0
                worst = max(worst, abs(complex(np.trace(left.sigma @ right.rho)) - expected) / z ** (m + n + 1))

        checks.append(check(suite, name, worst, 1e-9))

    fs = FockSpace(2, 5)
    photons = fs.cutoff - 2
    for label, spec in (("thermal", random_thermal_spec(rng, 2, 0.05)), ("general", random_general_spec(rng, 2))):
        try:
            lsup, adjoint = build_liouvillian(fs, spec), build_adjoint(fs, spec)
        except LindquadError as e:
            checks.append(_failed(suite, f"{label} liouvillian", e))
            continue

        for m, n in [((0, 0), (0, 0)), ((1, 0), (0, 0)), ((0, 1), (1, 0)), ((1, 1), (0, 1))]:
            try:
                mode = eigenoperators(spec, fs, m, n)
            except LindquadError as e:
                checks.append(_failed(suite, f"{label} eigenoperators {m}{n}", e))
                continue

            scale = max(1.0, abs(mode.value))
            rho_scale, sigma_scale = max(1.0, hs_norm(mode.rho)), max(1.0, hs_norm(mode.sigma))
            rho_residual = eigen_residual(fs, lsup, mode.rho, mode.value, photons) / rho_scale
            sigma_residual = eigen_residual(fs, adjoint, mode.sigma, mode.value, photons) / sigma_scale
            limit = tolerance(scale, JUMP_TOL)
            checks.append(check(suite, f"{label} L(rho_{m}{n}) = lambda rho", rho_residual, limit))
            checks.append(check(suite, f"{label} L#(sigma_{n}{m}) = lambda sigma", sigma_residual, limit))

    small = FockSpace(2, 4)
    rho0 = initial_qubit(math.pi / 3, math.pi / 5).density(small)
    try:
        spec = random_thermal_spec(rng, 2, 0.0)
        expansion = EigenmodeExpansion(spec, small, max_photons=1)
        lsup = build_liouvillian(small, spec)
        for t in (0.7, 3.0):
            deviation = hs_norm(expansion.evolve(rho0, t) - oracle_propagate(small, lsup, rho0, t))
            checks.append(check(suite, f"eigenmode expansion against oracle at t = {t}", deviation, ORACLE_TOL))
    except LindquadError as e:
        checks.append(_failed(suite, "eigenmode expansion against oracle", e))

    return checks


def _near_ep_channel(offset: float) -> TwoModeChannel:
    strength = CHANNEL_STRENGTH
    return TwoModeChannel(
        omega0=0.3, omega_vec=(0.0, 0.0, strength * (1 + offset)), gamma0=1.0, gamma_vec=(strength, 0.0, 0.0)
    )


def propagator_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "propagator"
    checks = []

    channels = [random_channel(rng) for _ in range(min(samples, 20))]
    channels += [_near_ep_channel(offset) for offset in (0.0, 1e-7, -1e-7, 1e-9)]

    times = np.linspace(0.0, 20.0, 100)
    for k, channel in enumerate(channels):
        name = f"closed form against expm #{k}"
        try:
            l_matrix = assemble_two_mode(channel).l_matrix
            worst = max(hs_norm(two_mode_propagator(channel, float(t)) - expm(l_matrix * float(t))) for t in times)
            checks.append(check(suite, name, worst, 1e-10))
        except LindquadError as e:
            checks.append(_failed(suite, name, e))

    return checks


def ep_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "exceptional point"
    checks = []

    gamma = CHANNEL_STRENGTH
    expected = (Regime.EXPONENTIAL, Regime.EXCEPTIONAL_POINT, Regime.OSCILLATORY)
    for factor, regime in zip(EP_SCAN_FACTORS, expected, strict=True):
        name = f"regime at omega = {factor:g} gamma is {regime}"
        try:
            checks.append(_flag(suite, name, ep_classify(orthogonal_channel(factor * gamma)).regime == regime))
        except LindquadError as e:
            checks.append(_failed(suite, name, e))

    try:
        at_ep = ep_classify(orthogonal_channel(gamma)).defectiveness
        checks.append(_flag(suite, "H defective at omega = gamma", at_ep < DIAGONALIZABLE_THRESHOLD))

        for offset in (-EP_EXCLUSION_RADIUS, EP_EXCLUSION_RADIUS, 0.5, 2.0):
            defectiveness = ep_classify(orthogonal_channel(gamma * (1 + offset))).defectiveness
            name = f"H diagonalizable at omega = {1 + offset:g} gamma"
            checks.append(_flag(suite, name, defectiveness >= DIAGONALIZABLE_THRESHOLD))

        times = np.linspace(0.0, 10.0, 101)
        exact = [two_mode_propagator(_near_ep_channel(0.0), float(t)) for t in times]
        for offset in EP_CONTINUITY_OFFSETS:
            near = [two_mode_propagator(_near_ep_channel(offset), float(t)) for t in times]
            jump = max(hs_norm(p - q) for p, q in zip(near, exact, strict=True))
            checks.append(check(suite, f"propagator continuous at offset {offset:g}", jump, 1e2 * abs(offset)))
    except LindquadError as e:
        checks.append(_failed(suite, "exceptional point neighborhood", e))

    return checks


def steady_state_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "steady state"
    checks = []

    fs = FockSpace(2, 5)
    for n_T in (0.0, 0.05, 0.1):
        spec = random_thermal_spec(rng, 2, n_T)
        try:
            rho = steady_state(spec, fs)
            lsup = build_liouvillian(fs, spec)
        except LindquadError as e:
            checks.append(_failed(suite, f"steady state at n_T = {n_T}", e))
            continue

        checks.append(check(suite, f"L(rho_ss) = 0 at n_T = {n_T}", hs_norm(lsup @ vec(rho)), tolerance(hs_norm(lsup))))
        checks.append(check(suite, f"Tr rho_ss = 1 at n_T = {n_T}", abs(np.trace(rho) - 1), RESIDUAL_TOL))
        checks.append(_flag(suite, f"rho_ss >= 0 at n_T = {n_T}", np.min(np.linalg.eigvalsh(rho)) > -RESIDUAL_TOL))

    return checks


def lowtemp_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "low temperature"
    checks = []

    fs = FockSpace(2, 5)
    channel = tilted_channel(TILT_ANGLES[0])
    rho0 = initial_qubit(math.pi / 3, math.pi / 5).density(fs)

    times = (0.5, 1.0, 2.0)
    try:
        errors: dict[float, list[float]] = {}
        for n_T in (0.02, 0.01):
            spec = assemble_two_mode(channel, n_T)
            lsup = build_liouvillian(fs, spec)
            propagator = LowTempPropagator(fs, spec)
            scaled = [t / channel.gamma0 for t in times]
            errors[n_T] = [
                hs_norm(propagator.approximate(rho0, t) - oracle_propagate(fs, lsup, rho0, t)) for t in scaled
            ]

        low, high = SCALING_BAND
        center, width = (low + high) / 2, (high - low) / 2
        for t, coarse, fine in zip(times, errors[0.02], errors[0.01], strict=True):
            checks.append(check(suite, f"error ratio at t = {t}", abs(coarse / fine - center), width))
    except LindquadError as e:
        checks.append(_failed(suite, "second order error scaling", e))

    spec = random_thermal_spec(rng, 2, 0.2)
    photons = fs.safe_photons - 1
    for t in (0.3, 1.0):
        name = f"U1 by conjugation at t = {t}"
        try:
            difference = restrict(fs, u1_commutator(fs, spec, t) - u1_superop(fs, spec, t), photons)
            checks.append(check(suite, name, hs_norm(difference), 1e-9))
        except LindquadError as e:
            checks.append(_failed(suite, name, e))

    for k in range(min(samples, 5)):
        a = random_matrix(rng, 2, 0.5)
        try:
            residuals = propagation_residuals(fs, spec, a, 0.7) | vacuum_residuals(fs, spec, a)
        except LindquadError as e:
            checks.append(_failed(suite, f"propagated jump superoperators #{k}", e))
            continue

        scale = max(1.0, hs_norm(a)) * max(1.0, hs_norm(spec.l_matrix))
        limit = tolerance(scale * fs.cutoff)
        checks += [check(suite, f"{name} #{k}", residual, limit) for name, residual in residuals.items()]

    return checks


def _oracle_speed(fs: FockSpace, lsup: CMatrix, rho0: CMatrix, t: float) -> float:
    """Central difference of the Hilbert-Schmidt distance travelled by the oracle evolution."""

    h = FINITE_DIFFERENCE_STEP
    forward = oracle_propagate(fs, lsup, rho0, t + h)
    backward = oracle_propagate(fs, lsup, rho0, t - h)
    return hs_norm(forward - backward) / (2 * h)


def _qubit_channel_checks(suite: str, channel: TwoModeChannel, label: str) -> list[Check]:
    checks = []

    fs = FockSpace(2, 5)
    qubit = initial_qubit(math.pi / 3, math.pi / 5)
    rho0 = qubit.density(fs)

    lsup = build_liouvillian(fs, assemble_two_mode(channel))
    for t in (0.1, 1.0):
        oracle = _oracle_speed(fs, lsup, rho0, t)
        speed = v0_speed(channel, qubit, t)
        name = f"v0 against oracle at t = {t}, {label}"
        checks.append(check(suite, name, abs(speed - oracle), SPEED_RELATIVE_TOL * oracle))

    n_T = 0.1
    warm = build_liouvillian(fs, assemble_two_mode(channel, n_T))
    for t in (0.5, 1.0):
        fitted = abs(total_speed(channel, qubit, n_T, t) - _oracle_speed(fs, warm, rho0, t)) / n_T**2
        name = f"v against oracle at n_T = {n_T}, t = {t}, {label}"
        checks.append(check(suite, name, fitted, SPEED_SECOND_ORDER_BOUND))

    lowtemp = LowTempPropagator(fs, assemble_two_mode(channel, n_T))
    rho1 = lowtemp.propagate(rho0, 0.8).rho1_t
    first_order = first_order_state(channel, qubit, 0.8)
    closed_form = embed_sector(first_order.rho1, fs)
    checks.append(check(suite, f"rho1 against the generic correction, {label}", hs_norm(closed_form - rho1), 1e-10))
    checks.append(check(suite, f"Tr rho1 = 0, {label}", abs(np.trace(first_order.rho1)), 1e-12))

    for name, operator in (("v0", v0_operator(channel, qubit, 0.8)), ("v1", first_order.v1_operator)):
        limit = tolerance(max(1.0, hs_norm(operator)))
        checks.append(check(suite, f"{name} hermitian, {label}", hs_norm(operator - operator.conj().T), limit))
        checks.append(check(suite, f"{name} traceless, {label}", abs(np.trace(operator)), limit))

    horizon = decay_horizon(channel)
    initial = total_speed(channel, qubit, n_T, 0.0)
    final = total_speed(channel, qubit, n_T, horizon)
    checks.append(check(suite, f"decay by t = {horizon:.3g}, {label}", final, 1e-3 * initial))

    speeds = [total_speed(channel, qubit, temperature, 0.0) for temperature in (0.0, 0.1, 0.3)]
    checks.append(_flag(suite, f"v(0) increasing in n_T, {label}", speeds[0] < speeds[1] < speeds[2]))

    grid = np.linspace(0.0, 10.0, 201)
    trace = fidelity_qsl(channel, qubit, n_T, grid)
    excess = float(np.max(np.abs(trace.fidelity_rate) - trace.v))
    checks.append(check(suite, f"|dF/dt| <= v, {label}", excess, 1e-12))
    checks.append(check(suite, f"t >= t_F, {label}", float(np.max(trace.t_f - trace.times)), 1e-12))

    shifted = dataclasses.replace(channel, omega0=channel.omega0 + 0.7)
    deviation = float(np.max(np.abs(fidelity_qsl(shifted, qubit, n_T, grid).v - trace.v)))
    checks.append(check(suite, f"omega0 invariance, {label}", deviation, 1e-12))

    return checks


def qubit_suite(rng: np.random.Generator, samples: int) -> list[Check]:
    suite = "qubit speed"
    checks = []

    for theta_gamma in TILT_ANGLES:
        label = f"theta_Gamma = {theta_gamma:.4f}"
        try:
            checks += _qubit_channel_checks(suite, tilted_channel(theta_gamma), label)
        except LindquadError as e:
            checks.append(_failed(suite, label, e))

    return checks


Suite = Callable[[np.random.Generator, int], list[Check]]

SUITES: Final[dict[str, Suite]] = {
    "matkernel": matkernel_suite,
    "model": model_suite,
    "liouvillian": liouvillian_suite,
    "algebra": algebra_suite,
    "jump": jump_suite,
    "spectrum": spectrum_suite,
    "riccati": riccati_suite,
    "eigenoperators": eigenoperator_suite,
    "propagator": propagator_suite,
    "ep": ep_suite,
    "steady-state": steady_state_suite,
    "lowtemp": lowtemp_suite,
    "qubit": qubit_suite,
}


def run_suites(
    rng: np.random.Generator,
    samples: int = DEFAULT_SAMPLES,
    names: Iterable[str] | None = None,
) -> list[Check]:
    """Run property suites in registration order.

    A suite aborted by an error is recorded as one failed check, so the other suites still run.

    Args:
        rng: The generator every random input is drawn from.
        samples: The number of random samples of the randomized suites.
        names: The suites to run, all of them by default.

    Returns:
        The checks of every suite.
    """

    selected = list(SUITES) if names is None else list(names)
    for name in selected:
        if name not in SUITES:
            raise ConfigError(f"Unknown validation suite '{name}'")

    checks = []
    for name in selected:
        logger.info(f"Running the {name} suite...")
        try:
            suite_checks = SUITES[name](rng, samples)
        except LindquadError as e:
            suite_checks = [_failed(name, "suite aborted", e)]

        failed = sum(not c.passed for c in suite_checks)
        logger.info(f"{len(suite_checks) - failed}/{len(suite_checks)} check(s) of the {name} suite passed")
        checks += suite_checks

    return checks
