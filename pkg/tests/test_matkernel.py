# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import cmath

import numpy as np
import pytest

from lindquad.errors import DimensionError, NumericalError, StabilityError
from lindquad.matkernel import (
    SINHC_SERIES_RADIUS,
    as_cmatrix,
    eig,
    expm,
    hs_inner,
    hs_norm,
    is_hermitian,
    is_positive_definite,
    lyapunov_quadrature,
    sinhc,
    solve_lyapunov,
    solve_sylvester,
    spectral_abscissa,
)
from lindquad.sampling import random_hermitian, random_matrix, random_positive

TOL = 1e-10
QUADRATURE_TOL = 1e-8


def _stable(rng: np.random.Generator, n: int) -> np.ndarray:
    return -1j * random_hermitian(rng, n) - random_positive(rng, n)


def test_as_cmatrix_rejects_bad_input() -> None:
    with pytest.raises(DimensionError):
        as_cmatrix([1.0, 2.0])

    with pytest.raises(NumericalError):
        as_cmatrix([[1.0, np.nan], [0.0, 1.0]])

    assert as_cmatrix([[1, 2], [3, 4]]).dtype == np.complex128


@pytest.mark.parametrize("n", [1, 2, 4])
def test_lyapunov_solution_is_hermitian_and_solves(rng: np.random.Generator, n: int) -> None:
    l = _stable(rng, n)
    c = random_positive(rng, n)

    w = solve_lyapunov(l, c)

    np.testing.assert_allclose(l @ w + w @ l.conj().T + 2 * c, 0, rtol=0, atol=TOL)
    assert is_hermitian(w)
    assert is_positive_definite(w)


def test_lyapunov_matches_its_integral_form(rng: np.random.Generator) -> None:
    l = _stable(rng, 3)
    c = random_positive(rng, 3)

    np.testing.assert_allclose(solve_lyapunov(l, c), lyapunov_quadrature(l, c), rtol=0, atol=QUADRATURE_TOL)


def test_lyapunov_rejects_unstable_matrices() -> None:
    l = np.array([[0.1, 0.0], [0.0, -1.0]], dtype=np.complex128)

    with pytest.raises(StabilityError):
        solve_lyapunov(l, np.eye(2, dtype=np.complex128))

    with pytest.raises(StabilityError):
        lyapunov_quadrature(l, np.eye(2, dtype=np.complex128))


def test_lyapunov_rejects_mismatched_shapes(rng: np.random.Generator) -> None:
    with pytest.raises(DimensionError):
        solve_lyapunov(_stable(rng, 2), np.eye(3, dtype=np.complex128))


def test_sylvester(rng: np.random.Generator) -> None:
    a, b = _stable(rng, 3), _stable(rng, 3)
    c = random_matrix(rng, 3)

    x = solve_sylvester(a, b, c)

    np.testing.assert_allclose(a @ x + x @ b, c, rtol=0, atol=TOL)


def test_expm_of_a_diagonal_matrix() -> None:
    a = np.diag([1.0 + 2.0j, -0.5]).astype(np.complex128)

    np.testing.assert_allclose(np.diag(expm(a)), [cmath.exp(1.0 + 2.0j), cmath.exp(-0.5)], rtol=0, atol=TOL)


def test_eig_detects_a_jordan_block() -> None:
    jordan = np.array([[-1.0, 1.0], [0.0, -1.0]], dtype=np.complex128)
    diagonal = np.diag([-1.0, -2.0]).astype(np.complex128)

    assert eig(jordan).defectiveness < 1e-6
    assert eig(diagonal).defectiveness == pytest.approx(1.0)


def test_eig_vectors(rng: np.random.Generator) -> None:
    a = random_matrix(rng, 4)

    result = eig(a)

    np.testing.assert_allclose(a @ result.right_vectors, result.right_vectors * result.eigenvalues, rtol=0, atol=TOL)
    np.testing.assert_allclose(np.linalg.norm(result.right_vectors, axis=0), 1, rtol=0, atol=TOL)


def test_spectral_abscissa() -> None:
    assert spectral_abscissa(np.diag([-1.0 + 3.0j, -0.25]).astype(np.complex128)) == pytest.approx(-0.25)


def test_hilbert_schmidt(rng: np.random.Generator) -> None:
    a = random_matrix(rng, 3)

    assert hs_inner(a, a).real == pytest.approx(hs_norm(a) ** 2)
    assert hs_inner(a, a).imag == pytest.approx(0.0, abs=TOL)


@pytest.mark.parametrize("x", [0.0, 1e-8, 0.5j * SINHC_SERIES_RADIUS, 0.99 * SINHC_SERIES_RADIUS])
def test_sinhc_series_branch(x: complex) -> None:
    expected = 1.0 if x == 0 else cmath.sinh(x) / x

    assert abs(sinhc(x) - expected) < 1e-15


@pytest.mark.parametrize("x", [1.0, 2.5j, 1.0 + 1.0j])
def test_sinhc_closed_form(x: complex) -> None:
    assert abs(sinhc(x) - cmath.sinh(x) / x) < 1e-14
