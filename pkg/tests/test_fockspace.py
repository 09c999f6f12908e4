# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import numpy as np
import pytest

from lindquad.errors import ConfigError, DimensionError, NumericalError, TruncationError
from lindquad.fockspace import (
    FockSpace,
    JumpOrdering,
    SuperOpKind,
    adjoint_transform,
    apply_exp,
    apply_superop,
    build_adjoint,
    build_liouvillian,
    commutation_residuals,
    conjugation_residuals,
    jordan_operator,
    jump_margin_scan,
    jump_transform,
    ladder,
    left,
    minus_plus_coefficients,
    oracle_propagate,
    right,
    second_quantize,
    superop_assoc,
    unvec,
    vec,
)
from lindquad.matkernel import expm, hs_norm
from lindquad.model import SystemSpec
from lindquad.sampling import random_general_spec, random_hermitian, random_matrix, random_thermal_spec

TOL = 1e-10
ALGEBRA_TOL = 1e-9


def test_fock_space_basis() -> None:
    fs = FockSpace(2, 3)

    assert fs.dim == 9
    assert fs.safe_photons == 0
    assert fs.basis[:4] == ((0, 0), (0, 1), (0, 2), (1, 0))
    assert fs.index((1, 2)) == 5
    assert fs.state(5) == (1, 2)
    assert list(fs.safe_indices(1)) == [0, 1, 3]
    assert int(np.sum(fs.on_boundary)) == 5


@pytest.mark.parametrize(("n_modes", "cutoff"), [(0, 3), (2, 1)])
def test_fock_space_rejects_empty_spaces(n_modes: int, cutoff: int) -> None:
    with pytest.raises(DimensionError):
        FockSpace(n_modes, cutoff)


def test_fock_space_rejects_foreign_states() -> None:
    fs = FockSpace(2, 3)

    with pytest.raises(DimensionError):
        fs.index((3, 0))

    with pytest.raises(DimensionError):
        fs.index((0, 0, 0))


def test_row_stacking(rng: np.random.Generator) -> None:
    a, b, rho = random_matrix(rng, 4), random_matrix(rng, 4), random_matrix(rng, 4)

    np.testing.assert_allclose(left(a) @ vec(rho), vec(a @ rho), rtol=0, atol=TOL)
    np.testing.assert_allclose(right(b) @ vec(rho), vec(rho @ b), rtol=0, atol=TOL)
    np.testing.assert_allclose(unvec(vec(rho), 4), rho, rtol=0, atol=0)


def test_ladder_operators() -> None:
    fs = FockSpace(2, 4)
    a, a_dagger = ladder(fs, 1)

    commutator = a @ a_dagger - a_dagger @ a
    inside = fs.safe_indices(fs.cutoff - 2)
    np.testing.assert_allclose(commutator[np.ix_(inside, inside)], np.eye(len(inside)), rtol=0, atol=TOL)
    np.testing.assert_allclose(np.diag(a_dagger @ a), [state[1] for state in fs.basis], rtol=0, atol=TOL)

    with pytest.raises(DimensionError):
        ladder(fs, 2)


def test_jordan_operator_of_identity_counts_photons() -> None:
    fs = FockSpace(3, 3)

    number = jordan_operator(fs, np.eye(3, dtype=np.complex128))

    np.testing.assert_allclose(np.diag(number), fs.total_photons, rtol=0, atol=TOL)


@pytest.mark.parametrize("kind", list(SuperOpKind))
def test_superop_matrix_matches_its_action(rng: np.random.Generator, kind: SuperOpKind) -> None:
    fs = FockSpace(2, 3)
    a = random_matrix(rng, 2)
    rho = random_matrix(rng, fs.dim)

    expected = apply_superop(fs, kind, a, rho)

    np.testing.assert_allclose(unvec(superop_assoc(fs, kind, a) @ vec(rho), fs.dim), expected, rtol=0, atol=TOL)


def test_unknown_superop_kind() -> None:
    fs = FockSpace(1, 3)

    with pytest.raises(ConfigError):
        superop_assoc(fs, "K1", np.eye(1, dtype=np.complex128))


@pytest.mark.parametrize("kind", [SuperOpKind.K_PLUS, SuperOpKind.K_MINUS])
def test_apply_exp_of_jumps(rng: np.random.Generator, kind: SuperOpKind) -> None:
    fs = FockSpace(2, 3)
    a = random_matrix(rng, 2, 0.5)
    rho = random_matrix(rng, fs.dim)

    exact = unvec(expm(superop_assoc(fs, kind, a)) @ vec(rho), fs.dim)

    np.testing.assert_allclose(apply_exp(fs, kind, a, rho), exact, rtol=0, atol=TOL)


def test_second_quantization_of_an_exponential(rng: np.random.Generator) -> None:
    fs = FockSpace(2, 4)
    x = random_matrix(rng, 2, 0.3)

    complete = fs.safe_indices(fs.cutoff - 1)
    gamma = second_quantize(fs, expm(x))[np.ix_(complete, complete)]
    exact = expm(jordan_operator(fs, x))[np.ix_(complete, complete)]

    np.testing.assert_allclose(gamma, exact, rtol=0, atol=TOL)


def test_liouvillian_preserves_the_trace(rng: np.random.Generator, two_mode: SystemSpec) -> None:
    fs = FockSpace(2, 4)
    lsup = build_liouvillian(fs, two_mode)
    rho = random_matrix(rng, fs.dim)

    assert abs(np.trace(unvec(lsup @ vec(rho), fs.dim))) < TOL


def test_liouvillian_preserves_hermiticity(rng: np.random.Generator, two_mode: SystemSpec) -> None:
    fs = FockSpace(2, 4)
    lsup = build_liouvillian(fs, two_mode)
    rho = random_hermitian(rng, fs.dim)

    image = unvec(lsup @ vec(rho), fs.dim)

    np.testing.assert_allclose(image, image.conj().T, rtol=0, atol=TOL)


def test_adjoint_duality(rng: np.random.Generator) -> None:
    fs = FockSpace(2, 4)
    spec = random_general_spec(rng, 2)
    lsup, adjoint = build_liouvillian(fs, spec), build_adjoint(fs, spec)
    observable, rho = random_hermitian(rng, fs.dim), random_matrix(rng, fs.dim)

    lhs = np.trace(observable @ unvec(lsup @ vec(rho), fs.dim))
    rhs = np.trace(unvec(adjoint @ vec(observable), fs.dim) @ rho)

    assert abs(lhs - rhs) < TOL


def test_liouvillian_rejects_other_mode_counts(single_mode: SystemSpec) -> None:
    with pytest.raises(DimensionError):
        build_liouvillian(FockSpace(2, 3), single_mode)


def test_commutation_relations(rng: np.random.Generator) -> None:
    fs = FockSpace(2, 5)

    for _ in range(3):
        residuals = commutation_residuals(fs, random_matrix(rng, 2, 0.5), random_matrix(rng, 2, 0.5))
        assert len(residuals) == 10
        assert max(residuals.values()) < ALGEBRA_TOL


def test_conjugation_identities(rng: np.random.Generator) -> None:
    fs = FockSpace(2, 5)

    residuals = conjugation_residuals(fs, random_matrix(rng, 2, 0.5), random_matrix(rng, 2, 0.5))

    assert len(residuals) == 6
    assert max(residuals.values()) < ALGEBRA_TOL


def test_residuals_need_a_margin(rng: np.random.Generator) -> None:
    with pytest.raises(TruncationError):
        commutation_residuals(FockSpace(2, 4), random_matrix(rng, 2), random_matrix(rng, 2), max_photons=2)


@pytest.mark.parametrize("n_T", [0.0, 0.1, 0.5])
@pytest.mark.parametrize("ordering", list(JumpOrdering))
def test_jump_elimination(rng: np.random.Generator, n_T: float, ordering: JumpOrdering) -> None:
    fs = FockSpace(2, 5)
    spec = random_thermal_spec(rng, 2, n_T)

    transform = jump_transform(fs, spec, ordering, max_photons=2)

    assert transform.ordering == ordering
    assert transform.residual < 1e-8 * max(1.0, hs_norm(transform.target))


def test_jump_elimination_of_a_general_bath(rng: np.random.Generator) -> None:
    fs = FockSpace(2, 5)
    spec = random_general_spec(rng, 2)

    for ordering in JumpOrdering:
        transform = jump_transform(fs, spec, ordering)
        assert transform.residual < 1e-8 * max(1.0, hs_norm(transform.target))

    adjoint_transform(fs, spec)


def test_minus_plus_target_of_a_general_bath(rng: np.random.Generator) -> None:
    spec = random_general_spec(rng, 3)

    coefficients = minus_plus_coefficients(spec)

    np.testing.assert_allclose(coefficients.k_tilde, coefficients.l_tilde.conj().T, rtol=0, atol=TOL)
    residual = coefficients.k_tilde @ coefficients.b_minus + coefficients.b_minus @ coefficients.l_tilde
    np.testing.assert_allclose(residual, -2 * spec.gamma_minus, rtol=0, atol=1e-9)


def test_forward_and_inverse_transforms(two_mode: SystemSpec) -> None:
    fs = FockSpace(2, 4)

    transform = jump_transform(fs, two_mode, JumpOrdering.MINUS_PLUS, max_photons=1)

    np.testing.assert_allclose(transform.forward @ transform.inverse, np.eye(fs.dim**2), rtol=0, atol=TOL)


def test_naive_conjugation_is_exact_at_zero_temperature(rng: np.random.Generator) -> None:
    spec = random_thermal_spec(rng, 2, 0.0)

    reports = jump_margin_scan(spec, [4, 5], max_photons=1)

    assert [report.cutoff for report in reports] == [4, 5]
    for report in reports:
        assert report.naive_residual < ALGEBRA_TOL
        assert report.intertwined_residual < ALGEBRA_TOL


def test_oracle_propagation(single_mode: SystemSpec) -> None:
    fs = FockSpace(1, 12)
    lsup = build_liouvillian(fs, single_mode)
    rho0 = fs.basis_operator((1,), (1,))

    np.testing.assert_allclose(oracle_propagate(fs, lsup, rho0, 0.0), rho0, rtol=0, atol=0)

    rho_t = oracle_propagate(fs, lsup, rho0, 1.5)
    number = np.real(np.trace(jordan_operator(fs, np.eye(1, dtype=np.complex128)) @ rho_t))
    decay = np.exp(-2 * 0.7 * 1.5)

    # ⟨n⟩(t) = ⟨n⟩(0)·e^{−2γt} + n_T·(1 − e^{−2γt})
    assert number == pytest.approx(decay + 0.2 * (1 - decay), abs=1e-6)

    with pytest.raises(NumericalError):
        oracle_propagate(fs, lsup, rho0, -1.0)
