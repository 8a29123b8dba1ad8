import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from matrix_core import (
    MAX_DIMENSION,
    DegenerateCurveError,
    DegreeError,
    DimensionError,
    DomainError,
    HermitianPair,
    NumericalInconsistencyError,
)

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

Exponent = Tuple[int, int, int]

IMAGINARY_RESIDUE_TOL = 1e-10
SINGULAR_CONIC_TOL = 1e-12
VARIABLES = ('u', 'v', 'w')


@dataclass(frozen=True, eq=False)
class HomogeneousTrivariatePoly:
    """
    Real homogeneous polynomial in three variables.

    Coefficients map exponent triples (i, j, k), i + j + k = degree, to the
    coefficient of u^i v^j w^k. Zero coefficients are not stored, so an empty
    map is the zero polynomial.
    """
    degree: int
    coefficients: Dict[Exponent, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 0:
            raise DegreeError(f"Degree must be nonnegative, got {self.degree}")
        cleaned = {}
        for exponent, coef in self.coefficients.items():
            exponent = tuple(int(e) for e in exponent)
            if len(exponent) != 3 or min(exponent) < 0 or sum(exponent) != self.degree:
                raise DegreeError(f"Exponent {exponent} does not belong to a degree-{self.degree} form")
            if coef != 0:
                cleaned[exponent] = float(coef)
        object.__setattr__(self, 'coefficients', cleaned)

    @classmethod
    def zero(cls, degree: int) -> 'HomogeneousTrivariatePoly':
        return cls(degree, {})

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, exponent: Exponent) -> float:
        return self.coefficients.get(tuple(exponent), 0.0)

    def coefficient_scale(self) -> float:
        return max((abs(c) for c in self.coefficients.values()), default=0.0)

    def to_json(self) -> List[Dict[str, Any]]:
        return [{"exp": list(exp), "coef": coef} for exp, coef in sorted(self.coefficients.items())]

    @classmethod
    def from_json(cls, terms: List[Dict[str, Any]]) -> 'HomogeneousTrivariatePoly':
        if not terms:
            raise DomainError("Cannot infer the degree of an empty term list")
        coefficients = {tuple(term["exp"]): float(term["coef"]) for term in terms}
        degree = sum(next(iter(coefficients)))
        return cls(degree, coefficients)


@dataclass(frozen=True, eq=False)
class ConicMatrix:
    """3x3 real symmetric matrix M of the conic (u, v, w) M (u, v, w)^T = 0"""
    m: np.ndarray

    def __post_init__(self):
        data = np.array(self.m, dtype=float)
        if data.shape != (3, 3):
            raise DimensionError(f"Conic matrix must be 3x3, got {data.shape}")
        if not np.array_equal(data, data.T):
            raise DomainError("Conic matrix must be exactly symmetric")
        if not np.any(data):
            raise DomainError("Conic matrix must not be zero")
        data.setflags(write=False)
        object.__setattr__(self, 'm', data)

    def to_json(self) -> List[List[float]]:
        return [[float(x) for x in row] for row in self.m]


# Sparse complex polynomials used while expanding the pencil determinant
_Poly = Dict[Exponent, complex]


def _poly_mul(a: _Poly, b: _Poly) -> _Poly:
    product: _Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            product[key] = product.get(key, 0) + ca * cb
    return product


def _poly_add(target: _Poly, term: _Poly, sign: int) -> None:
    for exp, coef in term.items():
        target[exp] = target.get(exp, 0) + sign * coef


def _pencil_entries(pair: HermitianPair) -> List[List[_Poly]]:
    h1, h2 = pair.h1.entries, pair.h2.entries
    n = pair.n
    entries = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = {(1, 0, 0): complex(h1[i, j]), (0, 1, 0): complex(h2[i, j]), (0, 0, 1): complex(i == j)}
            row.append({exp: coef for exp, coef in entry.items() if coef != 0})
        entries.append(row)
    return entries


def _laplace_determinant(entries: List[List[_Poly]]) -> _Poly:
    """Cofactor expansion along rows, with minors cached by their column set"""
    n = len(entries)
    cache: Dict[int, _Poly] = {}

    def minor(row: int, columns: int) -> _Poly:
        if row == n:
            return {(0, 0, 0): 1 + 0j}
        if columns in cache:
            return cache[columns]
        total: _Poly = {}
        sign = 1
        for col in range(n):
            if not columns & (1 << col):
                continue
            if entries[row][col]:
                _poly_add(total, _poly_mul(entries[row][col], minor(row + 1, columns & ~(1 << col))), sign)
            sign = -sign
        cache[columns] = total
        return total

    return minor(0, (1 << n) - 1)


def pencil_determinant(pair: HermitianPair) -> HomogeneousTrivariatePoly:
    """
    Expand det(H1 u + H2 v + I w) as a real homogeneous polynomial

    Args:
        pair: Hermitian parts of the matrix, n <= 16

    Returns:
        The boundary generating polynomial P^delta of degree n
    """
    n = pair.n
    if n > MAX_DIMENSION:
        raise DimensionError(f"Pencil determinant supports n <= {MAX_DIMENSION}, got {n}")
    expanded = _laplace_determinant(_pencil_entries(pair))
    logger.debug(f"Expanded {n}x{n} pencil determinant into {len(expanded)} monomials")
    scale = max((abs(c) for c in expanded.values()), default=0.0)
    residue = max((abs(c.imag) for c in expanded.values()), default=0.0)
    if residue > IMAGINARY_RESIDUE_TOL * scale:
        raise NumericalInconsistencyError(
            f"Pencil determinant has imaginary residue {residue:.3e}; the pair is not Hermitian")
    return HomogeneousTrivariatePoly(n, {exp: c.real for exp, c in expanded.items()})


def evaluate(poly: HomogeneousTrivariatePoly, u: float, v: float, w: float) -> float:
    """Sum the monomials of P at (u, v, w)"""
    return float(sum(c * u ** i * v ** j * w ** k for (i, j, k), c in poly.coefficients.items()))


def evaluate_abs(poly: HomogeneousTrivariatePoly, u: float, v: float, w: float) -> float:
    """Sum of |monomial| at (u, v, w), the rounding scale of evaluate"""
    return float(sum(abs(c * u ** i * v ** j * w ** k) for (i, j, k), c in poly.coefficients.items()))


def partial(poly: HomogeneousTrivariatePoly, variable: str) -> HomogeneousTrivariatePoly:
    """Partial derivative with respect to 'u', 'v' or 'w'"""
    if variable not in VARIABLES:
        raise DomainError(f"Unknown variable {variable!r}, expected one of {VARIABLES}")
    if poly.degree == 0:
        return HomogeneousTrivariatePoly.zero(0)
    axis = VARIABLES.index(variable)
    derived = {}
    for exp, coef in poly.coefficients.items():
        if exp[axis] == 0:
            continue
        lowered = list(exp)
        lowered[axis] -= 1
        derived[tuple(lowered)] = coef * exp[axis]
    return HomogeneousTrivariatePoly(poly.degree - 1, derived)


def gradient(poly: HomogeneousTrivariatePoly, u: float, v: float, w: float) -> Tuple[float, float, float]:
    return tuple(evaluate(partial(poly, var), u, v, w) for var in VARIABLES)


def tangency_point(poly: HomogeneousTrivariatePoly, u: float, v: float, w: float) -> complex:
    """
    Point where the line ux + vy + wz = 0 touches the curve dual to P

    The multiplier equations dP/du + lambda x = 0 (and likewise for v, w) make
    (x : y : z) proportional to the gradient of P at (u, v, w).

    Args:
        poly: Tangential equation P^delta
        u, v, w: A root of P^delta

    Returns:
        x/z + i*y/z
    """
    gx, gy, gz = gradient(poly, u, v, w)
    norm = float(np.sqrt(gx * gx + gy * gy + gz * gz))
    if norm == 0 or abs(gz) <= SINGULAR_CONIC_TOL * norm:
        raise DegenerateCurveError(f"No affine tangency point at ({u}, {v}, {w})")
    return complex(gx / gz, gy / gz)


def dehomogenize(poly: HomogeneousTrivariatePoly) -> Dict[Tuple[int, int], float]:
    """B[P](x, y) = P(x, y, 1) as a map (i, j) -> coefficient of x^i y^j"""
    return {(i, j): c for (i, j, _), c in poly.coefficients.items()}


def homogenize(coefficients: Dict[Tuple[int, int], float]) -> HomogeneousTrivariatePoly:
    """H[p](x, y, z) = z^deg(p) p(x/z, y/z)"""
    nonzero = {exp: c for exp, c in coefficients.items() if c != 0}
    degree = max((i + j for i, j in nonzero), default=0)
    return HomogeneousTrivariatePoly(degree, {(i, j, degree - i - j): c for (i, j), c in nonzero.items()})


def conic_of(poly: HomogeneousTrivariatePoly) -> ConicMatrix:
    """Symmetric matrix of a quadratic form; off-diagonals carry half the mixed coefficient"""
    if poly.degree != 2:
        raise DegreeError(f"conic_of requires degree 2, got {poly.degree}")
    m = np.zeros((3, 3))
    for exp, coef in poly.coefficients.items():
        axes = [axis for axis, e in enumerate(exp) for _ in range(e)]
        p, q = axes
        if p == q:
            m[p, p] = coef
        else:
            m[p, q] = m[q, p] = coef / 2
    return ConicMatrix(m)


def poly_of_conic(conic: ConicMatrix) -> HomogeneousTrivariatePoly:
    m = conic.m
    coefficients = {}
    for p in range(3):
        for q in range(p, 3):
            exp = [0, 0, 0]
            exp[p] += 1
            exp[q] += 1
            coefficients[tuple(exp)] = m[p, q] if p == q else 2 * m[p, q]
    return HomogeneousTrivariatePoly(2, coefficients)


def conic_determinant(conic: ConicMatrix) -> float:
    m = conic.m
    return float(m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
                 - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
                 + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def adjugate(m: np.ndarray) -> np.ndarray:
    """Transpose of the cofactor matrix of a 3x3 array"""
    cof = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [c for c in range(3) if c != j]
            minor = m[rows[0], cols[0]] * m[rows[1], cols[1]] - m[rows[0], cols[1]] * m[rows[1], cols[0]]
            cof[i, j] = (-1) ** (i + j) * minor
    return cof.T


def adjugate_dual(conic: ConicMatrix) -> ConicMatrix:
    """
    Dual of a nonsingular conic

    Args:
        conic: Tangential equation of a degree-2 curve

    Returns:
        adj(C), the point equation of the same curve
    """
    scale = float(np.abs(conic.m).max())
    det = conic_determinant(conic)
    if abs(det) <= SINGULAR_CONIC_TOL * scale ** 3:
        raise DegenerateCurveError(f"Conic is singular (det={det:.3e}); its dual is not a conic")
    adj = adjugate(conic.m)
    # Cofactors of a symmetric matrix are symmetric up to operand order only
    return ConicMatrix((adj + adj.T) / 2)


def normalize_conic(conic: ConicMatrix) -> ConicMatrix:
    """Scale so the largest-magnitude entry is 1 in magnitude and the first nonzero entry is positive"""
    m = conic.m
    scale = float(np.abs(m).max())
    if scale == 0:
        raise DomainError("Cannot normalize the zero conic")
    # Rounding residue below 1e-12 of the scale does not count as a nonzero entry
    first = m.flat[np.flatnonzero(np.abs(m) > SINGULAR_CONIC_TOL * scale)[0]]
    sign = 1.0 if first > 0 else -1.0
    return ConicMatrix(m * (sign / scale))
