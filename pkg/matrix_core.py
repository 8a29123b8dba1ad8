import cmath
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

MAX_DIMENSION = 16
DEFAULT_NORMAL_TOL = 1e-10
HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 30


class FieldOfValuesError(Exception):
    """Base class for every error raised by the field-of-values toolkit"""


class DimensionError(FieldOfValuesError):
    pass


class MatrixFormatError(FieldOfValuesError, ValueError):
    pass


class PreconditionError(FieldOfValuesError):
    pass


class DomainError(FieldOfValuesError):
    pass


class ConvergenceError(FieldOfValuesError):
    pass


class NumericalInconsistencyError(FieldOfValuesError):
    pass


class DegreeError(FieldOfValuesError):
    pass


class DegenerateCurveError(FieldOfValuesError):
    pass


@dataclass(frozen=True, eq=False)
class SquareComplexMatrix:
    """
    An n-by-n complex matrix, 1 <= n <= 16, with finite entries.
    The entries array is copied on construction and made read-only.
    """
    entries: np.ndarray

    def __post_init__(self):
        data = np.array(self.entries, dtype=np.complex128)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise DimensionError(f"Matrix must be square, got shape {data.shape}")
        n = data.shape[0]
        if n < 1 or n > MAX_DIMENSION:
            raise DimensionError(f"Matrix dimension must be between 1 and {MAX_DIMENSION}, got {n}")
        if not np.all(np.isfinite(data)):
            raise DomainError("Matrix entries must be finite")
        data.setflags(write=False)
        object.__setattr__(self, 'entries', data)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[complex]]) -> 'SquareComplexMatrix':
        return cls(np.array(rows, dtype=np.complex128))

    @classmethod
    def identity(cls, n: int) -> 'SquareComplexMatrix':
        return cls(np.eye(n, dtype=np.complex128))

    @classmethod
    def diagonal(cls, values: Sequence[complex]) -> 'SquareComplexMatrix':
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    @classmethod
    def from_json(cls, document: Dict[str, Any]) -> 'SquareComplexMatrix':
        """
        Build a matrix from the matrix JSON format

        Args:
            document: {"n": 2, "entries": [[[re, im], ...], ...]}, row-major

        Returns:
            The parsed matrix
        """
        if not isinstance(document, dict) or 'entries' not in document:
            raise MatrixFormatError("Matrix document must be an object with an 'entries' field")
        rows = document['entries']
        if not isinstance(rows, list) or not rows:
            raise MatrixFormatError("'entries' must be a non-empty list of rows")
        parsed = []
        for row in rows:
            if not isinstance(row, list):
                raise MatrixFormatError("Each row of 'entries' must be a list")
            parsed_row = []
            for entry in row:
                if (not isinstance(entry, list) or len(entry) != 2
                        or not all(isinstance(part, (int, float)) and not isinstance(part, bool) for part in entry)):
                    raise MatrixFormatError(f"Entry {entry!r} is not a [re, im] pair of numbers")
                parsed_row.append(complex(entry[0], entry[1]))
            parsed.append(parsed_row)
        widths = {len(row) for row in parsed}
        if len(widths) != 1:
            raise MatrixFormatError("All rows of 'entries' must have the same length")
        declared = document.get('n')
        if declared is not None and (not isinstance(declared, int) or declared != len(parsed)):
            raise MatrixFormatError(f"Declared n={declared!r} does not match {len(parsed)} rows")
        return cls(np.array(parsed, dtype=np.complex128))

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.entries],
        }

    def conj_transpose(self) -> 'SquareComplexMatrix':
        return SquareComplexMatrix(self.entries.conj().T)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.entries))

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def affine(self, alpha: complex, beta: complex) -> 'SquareComplexMatrix':
        """Return alpha*A + beta*I"""
        return SquareComplexMatrix(alpha * self.entries + beta * np.eye(self.n))

    def unitary_similarity(self, unitary: 'SquareComplexMatrix') -> 'SquareComplexMatrix':
        """Return U* A U"""
        u = unitary.entries
        return SquareComplexMatrix(u.conj().T @ self.entries @ u)


@dataclass(frozen=True, eq=False)
class HermitianPair:
    """The Hermitian parts (H1, H2) with A = H1 + i*H2"""
    h1: SquareComplexMatrix
    h2: SquareComplexMatrix

    @property
    def n(self) -> int:
        return self.h1.n

    def rotated(self, theta: float) -> np.ndarray:
        """cos(theta)*H1 + sin(theta)*H2, the Hermitian part of exp(-i*theta)*A"""
        return np.cos(theta) * self.h1.entries + np.sin(theta) * self.h2.entries

    def pencil(self, u: float, v: float, w: float) -> np.ndarray:
        return u * self.h1.entries + v * self.h2.entries + w * np.eye(self.n)


@dataclass(frozen=True, eq=False)
class EigenPair:
    value: Union[float, complex]
    vector: np.ndarray


MatrixLike = Union[SquareComplexMatrix, np.ndarray]


def as_array(matrix: MatrixLike) -> np.ndarray:
    if isinstance(matrix, SquareComplexMatrix):
        return matrix.entries
    data = np.asarray(matrix, dtype=np.complex128)
    if data.ndim != 2 or data.shape[0] != data.shape[1]:
        raise DimensionError(f"Matrix must be square, got shape {data.shape}")
    return data


def require_two_by_two(matrix: MatrixLike) -> np.ndarray:
    data = as_array(matrix)
    if data.shape != (2, 2):
        raise DimensionError(f"Operation requires a 2x2 matrix, got {data.shape[0]}x{data.shape[1]}")
    return data


def hermitian_parts(matrix: MatrixLike) -> HermitianPair:
    """
    Split A into its Hermitian parts

    Args:
        matrix: The square matrix A

    Returns:
        HermitianPair with h1 = (A + A*)/2 and h2 = (A - A*)/(2i)
    """
    a = as_array(matrix)
    adjoint = a.conj().T
    h1 = (a + adjoint) / 2
    h2 = (a - adjoint) / 2j
    # Exact symmetrization; the formulas are Hermitian only up to rounding
    h1 = (h1 + h1.conj().T) / 2
    h2 = (h2 + h2.conj().T) / 2
    return HermitianPair(SquareComplexMatrix(h1), SquareComplexMatrix(h2))


def gram_trace(matrix: MatrixLike) -> float:
    """trace(A*A), the sum of squared entry moduli"""
    a = as_array(matrix)
    return float(np.sum(a.real ** 2 + a.imag ** 2))


def eigenvalues_2x2(matrix: MatrixLike) -> Tuple[complex, complex]:
    """
    Both roots of z^2 - tr(A) z + det(A)

    The root of larger magnitude comes from the quadratic formula, with the sign
    of the square root chosen to avoid cancellation; the companion is det/lambda1.

    Args:
        matrix: A 2x2 matrix

    Returns:
        (lambda1, lambda2) with |lambda1| >= |lambda2|
    """
    a = require_two_by_two(matrix)
    tr = complex(a[0, 0] + a[1, 1])
    det = complex(a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
    disc = cmath.sqrt(tr * tr - 4 * det)
    if (tr.conjugate() * disc).real >= 0:
        lambda1 = (tr + disc) / 2
    else:
        lambda1 = (tr - disc) / 2
    if lambda1 == 0:
        return 0j, 0j
    return lambda1, det / lambda1


def schur_2x2(matrix: MatrixLike) -> Tuple[SquareComplexMatrix, SquareComplexMatrix]:
    """
    Unitary triangularization A = U T U* of a 2x2 matrix

    Args:
        matrix: A 2x2 matrix

    Returns:
        (U, T) with T upper triangular and diag(T) = eigenvalues_2x2(A)
    """
    a = require_two_by_two(matrix)
    lambda1, _ = eigenvalues_2x2(a)
    shifted = a - lambda1 * np.eye(2)
    # Null vector of A - lambda1*I from whichever row is better scaled
    candidates = [
        np.array([-shifted[0, 1], shifted[0, 0]]),
        np.array([-shifted[1, 1], shifted[1, 0]]),
    ]
    x = max(candidates, key=lambda c: np.linalg.norm(c))
    if np.linalg.norm(x) <= 1e-300:
        x = np.array([1.0, 0.0], dtype=np.complex128)
    x = x / np.linalg.norm(x)
    y = np.array([-np.conj(x[1]), np.conj(x[0])])
    u = np.column_stack([x, y])
    t = u.conj().T @ a @ u
    t[1, 0] = 0
    return SquareComplexMatrix(u), SquareComplexMatrix(t)


def _jacobi_block(app: float, aqq: float, apq: complex) -> np.ndarray:
    """2x2 unitary that annihilates the (p, q) entry of a Hermitian block"""
    magnitude = abs(apq)
    phase = apq / magnitude
    phi = 0.5 * np.arctan2(2 * magnitude, aqq - app)
    c, s = np.cos(phi), np.sin(phi)
    # Phase step makes the off-diagonal real, then a real plane rotation
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)


def hermitian_eigen(matrix: MatrixLike) -> List[EigenPair]:
    """
    Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations

    Args:
        matrix: Hermitian matrix H (within 1e-12 * ||H||_F)

    Returns:
        EigenPairs sorted by descending eigenvalue, ties kept in index order
    """
    h = np.array(as_array(matrix), dtype=np.complex128)
    n = h.shape[0]
    scale = float(np.linalg.norm(h))
    if np.linalg.norm(h - h.conj().T) > HERMITIAN_TOL * scale:
        raise PreconditionError("hermitian_eigen requires a Hermitian matrix")
    h = (h + h.conj().T) / 2
    vectors = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_TOL * scale

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = np.abs(h - np.diag(np.diag(h)))
        if off.max(initial=0.0) <= threshold:
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise ConvergenceError(f"Jacobi sweep did not converge in {JACOBI_MAX_SWEEPS} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(h[p, q]) <= threshold:
                    continue
                g = _jacobi_block(h[p, p].real, h[q, q].real, h[p, q])
                idx = [p, q]
                h[:, idx] = h[:, idx] @ g
                h[idx, :] = g.conj().T @ h[idx, :]
                h[p, q] = h[q, p] = 0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                vectors[:, idx] = vectors[:, idx] @ g

    values = np.diag(h).real
    order = np.argsort(-values, kind='stable')
    return [EigenPair(float(values[k]), vectors[:, k].copy()) for k in order]


def rayleigh(matrix: MatrixLike, x: Sequence[complex]) -> complex:
    """x*Ax / x*x; x need not be normalized"""
    a = as_array(matrix)
    vec = np.asarray(x, dtype=np.complex128)
    norm_sq = np.vdot(vec, vec).real
    if norm_sq == 0:
        raise DomainError("Rayleigh quotient of the zero vector is undefined")
    return complex(np.vdot(vec, a @ vec) / norm_sq)


def rayleigh_batch(matrix: MatrixLike, vectors: np.ndarray) -> np.ndarray:
    """Rayleigh quotient of every row of a count-by-n array"""
    a = as_array(matrix)
    x = np.asarray(vectors, dtype=np.complex128)
    norms = np.einsum('ki,ki->k', x.conj(), x).real
    if np.any(norms == 0):
        raise DomainError("Rayleigh quotient of the zero vector is undefined")
    return np.einsum('ki,ij,kj->k', x.conj(), a, x) / norms


def is_normal(matrix: MatrixLike, tol: float = DEFAULT_NORMAL_TOL) -> bool:
    """True iff ||A*A - AA*||_F <= tol * ||A||_F^2"""
    if tol <= 0:
        raise PreconditionError(f"Normality tolerance must be positive, got {tol}")
    a = as_array(matrix)
    adjoint = a.conj().T
    commutator = adjoint @ a - a @ adjoint
    return bool(np.linalg.norm(commutator) <= tol * np.linalg.norm(a) ** 2)


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unit_vector(n: int, seed: int) -> np.ndarray:
    """Seeded unit vector from the complex standard normal distribution"""
    if n < 1:
        raise DimensionError(f"Vector dimension must be positive, got {n}")
    z = _complex_normal(np.random.default_rng(seed), n)
    return z / np.linalg.norm(z)


def random_unit_vectors(n: int, count: int, seed: int) -> np.ndarray:
    """count-by-n array of seeded unit rows"""
    if n < 1:
        raise DimensionError(f"Vector dimension must be positive, got {n}")
    z = _complex_normal(np.random.default_rng(seed), (count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_unitary(n: int, seed: int) -> SquareComplexMatrix:
    """Seeded Haar-distributed unitary from the QR factorization of a Ginibre matrix"""
    if n < 1:
        raise DimensionError(f"Unitary dimension must be positive, got {n}")
    z = _complex_normal(np.random.default_rng(seed), (n, n)) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    # Fix the column phases so the distribution is Haar, not QR-biased
    d = np.diag(r)
    return SquareComplexMatrix(q * (d / np.abs(d)))


def random_matrix(n: int, seed: int) -> SquareComplexMatrix:
    """Seeded matrix with real and imaginary parts uniform on [-1, 1]"""
    rng = np.random.default_rng(seed)
    return SquareComplexMatrix(rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n)))


def random_normal_matrix(n: int, seed: int) -> SquareComplexMatrix:
    """Seeded normal matrix U diag(lambda) U* with eigenvalues in [-1, 1]^2"""
    rng = np.random.default_rng(seed)
    spectrum = rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)
    u = random_unitary(n, seed + 1).entries
    return SquareComplexMatrix(u @ np.diag(spectrum) @ u.conj().T)
