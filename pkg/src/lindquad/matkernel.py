# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Dense complex matrix primitives shared by the rest of the library.

Every function is pure: inputs are never mutated and the results are fresh arrays.
"""

import logging
from typing import Final, NamedTuple, TypeAlias

import numpy as np
import numpy.typing as npt
import scipy.linalg
from scipy.integrate import quad_vec

from .errors import DimensionError, NumericalError, StabilityError

logger = logging.getLogger(__name__)

CMatrix: TypeAlias = npt.NDArray[np.complex128]

# Reciprocal condition number of the eigenvector matrix below which a matrix is considered defective
EP_THRESHOLD: Final[float] = 1e-8

RESIDUAL_TOL: Final[float] = 1e-10
ABS_FLOOR: Final[float] = 1e-14
HERMITIAN_TOL: Final[float] = 1e-12

SINHC_SERIES_RADIUS: Final[float] = 1e-4


class EigResult(NamedTuple):
    """Full eigendecomposition of a square matrix.

    Attributes:
        eigenvalues: The eigenvalues, in the order returned by LAPACK.
        right_vectors: Unit norm right eigenvectors stored as columns.
        defectiveness: Reciprocal condition number of `right_vectors`, in [0, 1].
    """

    eigenvalues: npt.NDArray[np.complex128]
    right_vectors: CMatrix
    defectiveness: float

    @property
    def defective(self) -> bool:
        """If the matrix should be treated as nondiagonalizable."""

        return self.defectiveness < EP_THRESHOLD


def as_cmatrix(a: npt.ArrayLike, name: str = "matrix") -> CMatrix:
    """Coerce an array like object into a finite complex matrix.

    Args:
        a: The object to convert.
        name: The name used in error messages.

    Returns:
        A new complex 2-D array.
    """

    matrix = np.array(a, dtype=np.complex128)
    if matrix.ndim != 2:
        raise DimensionError(f"'{name}' must be a 2-D matrix, got {matrix.ndim} dimension(s)")

    if not np.all(np.isfinite(matrix)):
        raise NumericalError(f"'{name}' has non finite entries")

    return matrix


def check_square(a: CMatrix, name: str = "matrix") -> int:
    """Check that a matrix is square.

    Args:
        a: The matrix to check.
        name: The name used in error messages.

    Returns:
        The dimension of the matrix.
    """

    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"'{name}' must be square, got shape {a.shape}")

    return int(a.shape[0])


def check_same_shape(a: CMatrix, b: CMatrix, names: tuple[str, str] = ("A", "B")) -> None:
    """Check that two matrices have the same shape."""

    if a.shape != b.shape:
        raise DimensionError(f"'{names[0]}' has shape {a.shape} but '{names[1]}' has shape {b.shape}")


def tolerance(scale: float, rel: float = RESIDUAL_TOL) -> float:
    """Absolute tolerance relative to a norm scale, never below the absolute floor."""

    return max(rel * scale, ABS_FLOOR)


def commutator(a: CMatrix, b: CMatrix) -> CMatrix:
    return a @ b - b @ a


def anticommutator(a: CMatrix, b: CMatrix) -> CMatrix:
    return a @ b + b @ a


def is_hermitian(a: CMatrix, tol: float = HERMITIAN_TOL) -> bool:
    """Check Hermiticity relative to the Frobenius norm of the matrix."""

    return float(np.linalg.norm(a - a.conj().T)) <= tol * max(1.0, float(np.linalg.norm(a)))


def is_positive_definite(a: CMatrix, tol: float = 0.0) -> bool:
    """Check if the Hermitian part of a matrix has all its eigenvalues above `tol`."""

    hermitian_part = (a + a.conj().T) / 2
    return bool(np.min(np.linalg.eigvalsh(hermitian_part)) > tol)


def spectral_abscissa(a: CMatrix) -> float:
    """The largest real part among the eigenvalues of a matrix."""

    check_square(a)
    return float(np.max(scipy.linalg.eigvals(a).real))


def expm(a: CMatrix) -> CMatrix:
    """Matrix exponential by scaling and squaring with a degree 13 Padé approximant.

    Args:
        a: A square matrix.

    Returns:
        The matrix e^A.
    """

    check_square(a)
    result: CMatrix = scipy.linalg.expm(a.astype(np.complex128))
    if not np.all(np.isfinite(result)):
        raise NumericalError("The matrix exponential overflowed")

    return result


def eig(a: CMatrix) -> EigResult:
    """Full eigendecomposition with a defectiveness metric.

    The matrix is shifted by its mean eigenvalue before calling LAPACK so that exactly nilpotent
    blocks stay exactly nilpotent.

    Args:
        a: A square matrix.

    Returns:
        The eigenvalues, unit norm eigenvectors and the reciprocal condition number of the eigenvector matrix.
    """

    n = check_square(a)
    shift = complex(np.trace(a)) / n

    try:
        values, vectors = scipy.linalg.eig(a - shift * np.eye(n))
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"The eigendecomposition did not converge: {e}") from e

    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise NumericalError("The eigendecomposition returned non finite values")

    vectors = vectors / np.linalg.norm(vectors, axis=0)
    condition = float(np.linalg.cond(vectors))
    defectiveness = 0.0 if not np.isfinite(condition) else min(1.0, 1.0 / condition)

    logger.debug(f"Eigendecomposition of a {n}x{n} matrix, defectiveness {defectiveness:.3e}")

    return EigResult(
        eigenvalues=(values + shift).astype(np.complex128),
        right_vectors=vectors.astype(np.complex128),
        defectiveness=defectiveness,
    )


def solve_lyapunov(l: CMatrix, c: CMatrix) -> CMatrix:
    """Solve L·W + W·L† + 2C = 0 for a stable L.

    The equation is vectorized with row stacking, vec(L·W) = (L ⊗ I)·vec(W) and
    vec(W·L†) = (I ⊗ conj(L))·vec(W), and solved as a dense linear system.

    Args:
        l: The stable matrix L.
        c: The inhomogeneity C.

    Returns:
        The solution W, Hermitian whenever C is.
    """

    n = check_square(l, "L")
    check_square(c, "C")
    check_same_shape(l, c, ("L", "C"))

    abscissa = spectral_abscissa(l)
    if abscissa >= 0:
        raise StabilityError(f"L has an eigenvalue with real part {abscissa:.3e} >= 0, the Lyapunov integral diverges")

    identity = np.eye(n, dtype=np.complex128)
    system = np.kron(l, identity) + np.kron(identity, l.conj())

    try:
        w = scipy.linalg.solve(system, -2.0 * c.ravel()).reshape(n, n)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"The Lyapunov system could not be solved: {e}") from e

    residual = float(np.linalg.norm(l @ w + w @ l.conj().T + 2.0 * c))
    scale = float(np.linalg.norm(l) * np.linalg.norm(w) + np.linalg.norm(c))
    if residual > tolerance(scale):
        raise NumericalError(f"Lyapunov residual {residual:.3e} above tolerance {tolerance(scale):.3e}")

    if is_hermitian(c):
        w = (w + w.conj().T) / 2

    logger.debug(f"Lyapunov equation of dimension {n} solved with residual {residual:.3e}")

    return w.astype(np.complex128)


def solve_sylvester(a: CMatrix, b: CMatrix, c: CMatrix) -> CMatrix:
    """Solve A·X + X·B = C with the Bartels-Stewart algorithm.

    Args:
        a: The left coefficient.
        b: The right coefficient.
        c: The right hand side.

    Returns:
        The solution X.
    """

    check_square(a, "A")
    check_square(b, "B")

    try:
        x = scipy.linalg.solve_sylvester(a, b, c)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"The Sylvester equation could not be solved: {e}") from e

    residual = float(np.linalg.norm(a @ x + x @ b - c))
    scale = float((np.linalg.norm(a) + np.linalg.norm(b)) * np.linalg.norm(x) + np.linalg.norm(c))
    if residual > tolerance(scale):
        raise NumericalError(f"Sylvester residual {residual:.3e} above tolerance {tolerance(scale):.3e}")

    return np.asarray(x, dtype=np.complex128)


def lyapunov_quadrature(l: CMatrix, c: CMatrix, horizon: float | None = None) -> CMatrix:
    """Integral form 2∫₀^T e^{Lτ}·C·e^{L†τ}dτ of the Lyapunov solution, by adaptive quadrature.

    Args:
        l: The stable matrix L.
        c: The inhomogeneity C.
        horizon: The upper limit T, by default long enough for e^{2·abscissa·T} to underflow.

    Returns:
        The integral.
    """

    abscissa = spectral_abscissa(l)
    if abscissa >= 0:
        raise StabilityError(f"L has an eigenvalue with real part {abscissa:.3e} >= 0, the integral diverges")

    if horizon is None:
        horizon = 40.0 / -abscissa

    def integrand(tau: float) -> CMatrix:
        propagator = expm(l * tau)
        return 2.0 * propagator @ c @ propagator.conj().T

    result, _ = quad_vec(integrand, 0.0, horizon, epsabs=1e-13, epsrel=1e-12)
    return np.asarray(result, dtype=np.complex128)


def hs_inner(a: CMatrix, b: CMatrix) -> complex:
    """Hilbert-Schmidt inner product Tr(A†B)."""

    check_same_shape(a, b)
    return complex(np.vdot(a, b))


def hs_norm(a: CMatrix) -> float:
    """Hilbert-Schmidt (Frobenius) norm √Tr(A†A)."""

    return float(np.linalg.norm(a))


def sinhc(x: complex) -> complex:
    """sinh(x)/x, continued smoothly through x = 0.

    Args:
        x: The argument.

    Returns:
        The value of sinh(x)/x, from a 6 term Taylor series when |x| is small.
    """

    if abs(x) < SINHC_SERIES_RADIUS:
        x2 = x * x
        return complex(1 + x2 / 6 * (1 + x2 / 20 * (1 + x2 / 42 * (1 + x2 / 72 * (1 + x2 / 110)))))

    return complex(np.sinh(x) / x)
