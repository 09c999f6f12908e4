# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import math

import numpy as np
import pytest

from lindquad.errors import DimensionError, ExceptionalPointError, NumericalError, TruncationError
from lindquad.fockspace import FockSpace, build_adjoint, build_liouvillian, oracle_propagate, vec
from lindquad.matkernel import eig, expm, hs_norm
from lindquad.model import (
    CHANNEL_STRENGTH,
    EP_SCAN_FACTORS,
    SystemSpec,
    TwoModeChannel,
    assemble_two_mode,
    orthogonal_channel,
)
from lindquad.sampling import random_channel, random_general_spec, random_thermal_spec
from lindquad.spectral import (
    DIAGONALIZABLE_THRESHOLD,
    EigenmodeExpansion,
    Regime,
    TwoModePropagator,
    effective,
    eigen_residual,
    eigenmode_evolution,
    eigenoperators,
    eigenoperators_single_mode,
    ep_classify,
    gaussian_partition,
    liouvillian_spectrum,
    match_eigenvalues,
    pairing_tolerance,
    photon_states,
    propagator_evolution,
    semiclassical_hamiltonian,
    single_mode_cutoff,
    solve_riccati,
    steady_state,
    two_mode_propagator,
)

TOL = 1e-10
ORACLE_TOL = 1e-9


def test_effective_matrices(two_mode: SystemSpec) -> None:
    matrices = effective(two_mode)

    np.testing.assert_allclose(matrices.h, two_mode.omega - 1j * two_mode.gamma, rtol=0, atol=TOL)
    np.testing.assert_allclose(matrices.l, two_mode.l_matrix, rtol=0, atol=TOL)


def test_semiclassical_hamiltonian_at_zero_temperature(two_mode: SystemSpec) -> None:
    cold = semiclassical_hamiltonian(two_mode.with_temperature(0.0))
    warm = semiclassical_hamiltonian(two_mode)

    np.testing.assert_allclose(cold.matrix, effective(two_mode).h, rtol=0, atol=TOL)
    assert cold.shift == 0
    assert warm.shift == pytest.approx(-1j * 0.1 * np.trace(two_mode.gamma).real)


def test_two_mode_propagator_against_expm(rng: np.random.Generator) -> None:
    times = np.linspace(0.0, 20.0, 41)

    for _ in range(5):
        channel = random_channel(rng)
        l_matrix = assemble_two_mode(channel).l_matrix
        for t in times:
            np.testing.assert_allclose(
                two_mode_propagator(channel, float(t)), expm(l_matrix * float(t)), rtol=0, atol=TOL
            )


@pytest.mark.parametrize("offset", [0.0, 1e-9, -1e-7])
def test_two_mode_propagator_near_the_exceptional_point(offset: float) -> None:
    channel = orthogonal_channel(CHANNEL_STRENGTH * (1 + offset))
    l_matrix = assemble_two_mode(channel).l_matrix

    propagator = TwoModePropagator.from_channel(channel)

    assert propagator.ep_flag == (offset == 0.0)
    for t in (0.0, 0.5, 3.0, 15.0):
        np.testing.assert_allclose(propagator(t), expm(l_matrix * t), rtol=0, atol=TOL)


def test_two_mode_propagator_is_forward_only(channel: TwoModeChannel) -> None:
    with pytest.raises(NumericalError):
        two_mode_propagator(channel, -0.1)


@pytest.mark.parametrize(
    ("factor", "regime"),
    list(zip(EP_SCAN_FACTORS, [Regime.EXPONENTIAL, Regime.EXCEPTIONAL_POINT, Regime.OSCILLATORY])),
)
def test_regimes_across_the_exceptional_point(factor: float, regime: Regime) -> None:
    report = ep_classify(orthogonal_channel(factor * CHANNEL_STRENGTH))

    assert report.regime == regime
    assert (report.defectiveness < DIAGONALIZABLE_THRESHOLD) == (regime == Regime.EXCEPTIONAL_POINT)


def test_mixed_regime() -> None:
    channel = TwoModeChannel(omega0=0.0, omega_vec=(0.5, 0.0, 0.5), gamma0=1.0, gamma_vec=(0.5, 0.0, 0.0))

    report = ep_classify(channel)

    assert report.regime == Regime.MIXED
    assert report.q_abs2 == pytest.approx(abs(0.25 - 0.5 + 0.5j))


def test_photon_states() -> None:
    assert photon_states(2, 2) == ((0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0))
    assert photon_states(3, 0) == ((0, 0, 0),)

    with pytest.raises(DimensionError):
        photon_states(2, -1)


def test_single_mode_spectrum(single_mode: SystemSpec) -> None:
    spectrum = liouvillian_spectrum(single_mode, 2)

    assert len(spectrum.entries) == 9
    assert spectrum.entries[0].value == 0
    assert spectrum.value((1,), (0,)) == pytest.approx(-0.7 - 1.3j)
    assert spectrum.value((2,), (1,)) == pytest.approx(-2.1 - 1.3j)
    np.testing.assert_allclose(spectrum.frequencies, [1.3], rtol=0, atol=TOL)
    np.testing.assert_allclose(spectrum.dampings, [0.7], rtol=0, atol=TOL)

    with pytest.raises(DimensionError):
        spectrum.value((3,), (0,))


def test_spectrum_does_not_depend_on_the_temperature(two_mode: SystemSpec) -> None:
    cold = liouvillian_spectrum(two_mode.with_temperature(0.0), 2).values
    warm = liouvillian_spectrum(two_mode, 2).values

    np.testing.assert_allclose(cold, warm, rtol=0, atol=TOL)


def test_spectrum_against_the_truncated_liouvillian(rng: np.random.Generator) -> None:
    fs = FockSpace(2, 4)

    for _ in range(3):
        spec = random_thermal_spec(rng, 2, 0.0)
        spectrum = liouvillian_spectrum(spec, 2)
        oracle = eig(build_liouvillian(fs, spec)).eigenvalues

        distances = match_eigenvalues(spectrum.values, oracle)

        assert len(spectrum.entries) == 36
        assert float(np.max(distances)) < pairing_tolerance(float(np.max(np.abs(spectrum.values))))


def test_diagonalizer(two_mode: SystemSpec) -> None:
    spectrum = liouvillian_spectrum(two_mode, 1)

    diagonal = spectrum.exp_v @ two_mode.l_matrix @ spectrum.right_vectors

    np.testing.assert_allclose(diagonal, np.diag(spectrum.mode_rates), rtol=0, atol=TOL)
    assert not spectrum.defective


def test_spectrum_at_the_exceptional_point() -> None:
    spec = assemble_two_mode(orthogonal_channel(CHANNEL_STRENGTH))

    with pytest.raises(ExceptionalPointError):
        liouvillian_spectrum(spec, 1)


def test_match_eigenvalues() -> None:
    distances = match_eigenvalues([1.0, 1.0 + 1e-3], [1.0 + 2e-3, 1.0, 5.0])

    np.testing.assert_allclose(distances, [0.0, 1e-3], rtol=0, atol=TOL)

    with pytest.raises(DimensionError):
        match_eigenvalues([1.0, 2.0], [1.0])


@pytest.mark.parametrize("n_T", [0.0, 0.3, 1.0])
def test_single_mode_biorthogonality(n_T: float) -> None:
    indices = [(m, n) for m in range(3) for n in range(3)]
    cutoff = single_mode_cutoff(n_T, 2)
    z = 1 + n_T
    modes = {key: eigenoperators_single_mode(1.0, 0.5, n_T, *key, cutoff=cutoff) for key in indices}

    for (m, n), right in modes.items():
        assert right.q == pytest.approx(z ** (m + n + 1), rel=1e-9)
        for key, left in modes.items():
            if key != (m, n):
                assert abs(np.trace(left.sigma @ right.rho)) < 1e-9 * z ** (m + n + 1)


def test_single_mode_eigenoperators_are_eigenvectors() -> None:
    fs = FockSpace(1, 25)
    spec = random_thermal_spec(np.random.default_rng(7), 1, 0.3)
    omega, gamma = float(spec.omega[0, 0].real), float(spec.gamma[0, 0].real)
    lsup, adjoint = build_liouvillian(fs, spec), build_adjoint(fs, spec)

    mode = eigenoperators_single_mode(omega, gamma, 0.3, 2, 1, cutoff=fs.cutoff)

    assert eigen_residual(fs, lsup, mode.rho, mode.value, 4) < 1e-8 * max(1.0, hs_norm(mode.rho))
    assert eigen_residual(fs, adjoint, mode.sigma, mode.value, 4) < 1e-8 * max(1.0, hs_norm(mode.sigma))


def test_single_mode_eigenoperators_need_room() -> None:
    with pytest.raises(TruncationError):
        eigenoperators_single_mode(1.0, 0.5, 0.0, 4, 0, cutoff=5)


@pytest.mark.parametrize(("m", "n"), [((0, 0), (0, 0)), ((1, 0), (0, 0)), ((0, 1), (1, 0)), ((1, 1), (0, 1))])
def test_multimode_eigenoperators(rng: np.random.Generator, m: tuple[int, ...], n: tuple[int, ...]) -> None:
    fs = FockSpace(2, 5)
    spec = random_thermal_spec(rng, 2, 0.05)
    lsup, adjoint = build_liouvillian(fs, spec), build_adjoint(fs, spec)

    mode = eigenoperators(spec, fs, m, n)

    scale = max(1.0, abs(mode.value))
    assert eigen_residual(fs, lsup, mode.rho, mode.value, 3) < 1e-8 * scale * max(1.0, hs_norm(mode.rho))
    assert eigen_residual(fs, adjoint, mode.sigma, mode.value, 3) < 1e-8 * scale * max(1.0, hs_norm(mode.sigma))


@pytest.mark.parametrize(("m", "n"), [((0, 0), (0, 0)), ((1, 0), (0, 1)), ((1, 1), (0, 1))])
def test_multimode_eigenoperators_of_a_general_bath(
    rng: np.random.Generator, m: tuple[int, ...], n: tuple[int, ...]
) -> None:
    fs = FockSpace(2, 5)
    spec = random_general_spec(rng, 2)
    lsup, adjoint = build_liouvillian(fs, spec), build_adjoint(fs, spec)

    mode = eigenoperators(spec, fs, m, n)

    scale = max(1.0, abs(mode.value))
    assert eigen_residual(fs, lsup, mode.rho, mode.value, 3) < 1e-8 * scale * max(1.0, hs_norm(mode.rho))
    assert eigen_residual(fs, adjoint, mode.sigma, mode.value, 3) < 1e-8 * scale * max(1.0, hs_norm(mode.sigma))


def test_eigenmode_expansion_is_exact_at_zero_temperature(two_mode: SystemSpec) -> None:
    spec = two_mode.with_temperature(0.0)
    fs = FockSpace(2, 4)
    rho0 = fs.basis_operator((1, 0), (1, 0))
    lsup = build_liouvillian(fs, spec)

    expansion = EigenmodeExpansion(spec, fs, max_photons=1)

    for t in (0.0, 0.7, 3.0):
        expected = oracle_propagate(fs, lsup, rho0, t)
        np.testing.assert_allclose(expansion.evolve(rho0, t), expected, rtol=0, atol=ORACLE_TOL)


def test_eigenmode_expansion_converges_with_the_temperature(two_mode: SystemSpec) -> None:
    fs = FockSpace(2, 5)
    rho0 = fs.basis_operator((0, 1), (0, 1))

    errors = []
    for n_T in (0.02, 0.01):
        spec = two_mode.with_temperature(n_T)
        approximation = eigenmode_evolution(spec, fs, rho0, 1.0, max_photons=2)
        errors.append(hs_norm(approximation - oracle_propagate(fs, build_liouvillian(fs, spec), rho0, 1.0)))

    assert errors[1] < errors[0]


def test_eigenmode_expansion_rejects_states_outside_its_sector(two_mode: SystemSpec) -> None:
    fs = FockSpace(2, 4)
    expansion = EigenmodeExpansion(two_mode, fs, max_photons=1)

    with pytest.raises(TruncationError):
        expansion.coefficients(fs.basis_operator((1, 1), (0, 0)))


def test_propagator_evolution_at_the_exceptional_point() -> None:
    spec = assemble_two_mode(orthogonal_channel(CHANNEL_STRENGTH))
    fs = FockSpace(2, 4)
    rho0 = fs.basis_operator((1, 0), (1, 0))
    lsup = build_liouvillian(fs, spec)

    for t in (0.5, 2.0):
        np.testing.assert_allclose(
            propagator_evolution(spec, fs, rho0, t), oracle_propagate(fs, lsup, rho0, t), atol=ORACLE_TOL
        )


@pytest.mark.parametrize("n_T", [0.05, 0.1])
def test_steady_state(rng: np.random.Generator, n_T: float) -> None:
    fs = FockSpace(2, 5)
    spec = random_thermal_spec(rng, 2, n_T)

    rho = steady_state(spec, fs)

    lsup = build_liouvillian(fs, spec)
    assert hs_norm(lsup @ vec(rho)) < TOL * max(1.0, hs_norm(lsup))
    assert np.trace(rho) == pytest.approx(1.0)
    assert np.min(np.linalg.eigvalsh(rho)) > -TOL


def test_single_mode_steady_state_is_thermal(single_mode: SystemSpec) -> None:
    fs = FockSpace(1, 20)

    rho = steady_state(single_mode, fs)

    populations = np.real(np.diag(rho))
    np.testing.assert_allclose(populations[1:6] / populations[:5], 0.2 / 1.2, rtol=1e-9, atol=0)


def test_steady_state_at_zero_temperature(two_mode: SystemSpec) -> None:
    fs = FockSpace(2, 3)

    np.testing.assert_allclose(steady_state(two_mode.with_temperature(0.0), fs), fs.vacuum(), rtol=0, atol=0)


def test_steady_state_leaking_beyond_the_cutoff() -> None:
    spec = random_thermal_spec(np.random.default_rng(3), 1, 5.0)

    with pytest.raises(TruncationError):
        steady_state(spec, FockSpace(1, 3))


def test_gaussian_partition() -> None:
    assert gaussian_partition(0.5 * np.eye(2, dtype=np.complex128)) == pytest.approx(2.25)


def test_riccati_solution_of_a_thermal_bath(two_mode: SystemSpec) -> None:
    solution = solve_riccati(two_mode)

    identity = np.eye(2)
    np.testing.assert_allclose(solution.w_plus, 0.1 * identity, rtol=0, atol=TOL)
    np.testing.assert_allclose(solution.a_plus, -0.1 / 1.1 * identity, rtol=0, atol=TOL)
    np.testing.assert_allclose(solution.plus_minus_coefficient, -0.1 * identity, rtol=0, atol=TOL)
    assert solution.v_ss is not None
    np.testing.assert_allclose(solution.v_ss, math.log(11) * identity, rtol=0, atol=TOL)


def test_riccati_solution_of_a_general_bath(rng: np.random.Generator) -> None:
    spec = random_general_spec(rng, 2)

    solution = solve_riccati(spec)

    assert max(solution.residuals.values()) < 1e-8
    assert solution.a_minus is not None
    np.testing.assert_allclose(solution.w_minus - solution.w_plus, np.eye(2), rtol=0, atol=TOL)
    np.testing.assert_allclose(-1j * solution.omega_prime + solution.gamma0_prime, solution.l_tilde, rtol=0, atol=1e-9)
    np.testing.assert_allclose(solution.omega_prime, solution.omega_prime.conj().T, rtol=0, atol=1e-9)
    np.testing.assert_allclose(solution.gamma0_prime, solution.gamma0_prime.conj().T, rtol=0, atol=1e-9)


def test_riccati_solution_at_zero_temperature(two_mode: SystemSpec) -> None:
    solution = solve_riccati(two_mode.with_temperature(0.0))

    assert solution.a_minus is None
    assert solution.x_minus is None
    assert solution.v_ss is None


def test_single_mode_cutoff_is_capped_with_a_warning(caplog: pytest.LogCaptureFixture) -> None:
    assert single_mode_cutoff(0.3, 2) < 200
    assert "capped" not in caplog.text

    assert single_mode_cutoff(5.0, 2) == 200
    assert "capped at 200" in caplog.text
