import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from elliptical_range import (
    EllipseDisk,
    affine_image,
    ellipse_conic,
    ellipse_deviation,
    ellipse_support,
    elliptical_range,
)
from kippenhahn import convex_hull, fov_boundary, support_excess_batch
from matrix_core import (
    DEFAULT_NORMAL_TOL,
    DegenerateCurveError,
    DimensionError,
    MatrixLike,
    PreconditionError,
    SquareComplexMatrix,
    hermitian_eigen,
    hermitian_parts,
    is_normal,
    random_matrix,
    random_normal_matrix,
    random_unit_vectors,
    random_unitary,
    rayleigh,
    rayleigh_batch,
    require_two_by_two,
    schur_2x2,
)
from poly_core import (
    ConicMatrix,
    HomogeneousTrivariatePoly,
    adjugate,
    adjugate_dual,
    conic_determinant,
    conic_of,
    evaluate,
    evaluate_abs,
    normalize_conic,
    pencil_determinant,
    tangency_point,
)

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

MAX_TANGENTIAL_DIMENSION = 8
SIMPLE_EIGENVALUE_GAP = 1e-4


@dataclass(frozen=True)
class CheckReport:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    samples: int
    details: str = ""

    @classmethod
    def build(cls, name: str, max_deviation: float, tolerance: float, samples: int,
              details: str = "") -> 'CheckReport':
        """Create a report whose pass flag is max_deviation <= tolerance (NaN fails)"""
        deviation = float(max_deviation)
        passed = bool(deviation <= tolerance)
        report = cls(name, passed, deviation, float(tolerance), int(samples), details)
        if passed:
            logger.debug(f"Check {name} passed: deviation {deviation:.3e} <= {tolerance:.3e}")
        else:
            logger.warning(f"Check {name} FAILED: deviation {deviation:.3e} > {tolerance:.3e} ({details})")
        return report

    def to_json(self) -> Dict[str, Any]:
        return asdict(self)


def _matrix(matrix: MatrixLike) -> SquareComplexMatrix:
    return matrix if isinstance(matrix, SquareComplexMatrix) else SquareComplexMatrix(matrix)


def _grid(m: int) -> np.ndarray:
    if m < 3:
        raise PreconditionError(f"Grid size must be at least 3, got {m}")
    return 2 * np.pi * np.arange(m) / m


def _pair_distance(first: Sequence[complex], second: Sequence[complex]) -> float:
    """Distance between two unordered pairs of points"""
    straight = max(abs(first[0] - second[0]), abs(first[1] - second[1]))
    crossed = max(abs(first[0] - second[1]), abs(first[1] - second[0]))
    return min(straight, crossed)


def check_containment(matrix: MatrixLike, num_samples: int, seed: int, tol: float) -> CheckReport:
    """
    Sample Rayleigh quotients and test them against the closed-form disk

    Args:
        matrix: A 2x2 matrix
        num_samples: Number of random unit vectors
        seed: Seed of the vector generator
        tol: Allowed focal-sum excess

    Returns:
        CheckReport with the worst focal-sum excess over 2*semi_major (0 if all inside)
    """
    a = require_two_by_two(matrix)
    disk = elliptical_range(a)
    quotients = rayleigh_batch(a, random_unit_vectors(2, num_samples, seed))
    excess = np.abs(quotients - disk.focus1) + np.abs(quotients - disk.focus2) - 2 * disk.semi_major
    worst = max(0.0, float(excess.max()))
    return CheckReport.build("containment", worst, tol, num_samples,
                             f"{num_samples} Rayleigh quotients against a {disk.kind} (seed {seed})")


def check_support_match(matrix: MatrixLike, m: int, tol: float) -> CheckReport:
    """Largest gap between the ellipse support function and the Hermitian-pencil support function"""
    a = require_two_by_two(matrix)
    disk = elliptical_range(a)
    pair = hermitian_parts(a)
    thetas = _grid(m)
    # One batched eigvalsh call over the m rotated Hermitian parts
    stack = np.cos(thetas)[:, None, None] * pair.h1.entries + np.sin(thetas)[:, None, None] * pair.h2.entries
    pencil = np.linalg.eigvalsh(stack)[:, -1]
    ellipse = np.array([ellipse_support(disk, theta) for theta in thetas])
    worst = float(np.abs(ellipse - pencil).max())
    return CheckReport.build("support_match", worst, tol, m, f"{m} angles, {disk.kind}")


def check_tangential_roots(matrix: MatrixLike, m: int, tol: float) -> CheckReport:
    """
    Every eigenvalue h of cos(t) H1 + sin(t) H2 is a root of P^delta(cos t, sin t, -h)

    The deviation is |P^delta| relative to the summed monomial magnitudes at
    the same point, the scale rounding works on. The ratio to the
    coefficient scale alone is reported in the details.
    """
    a = _matrix(matrix)
    if a.n > MAX_TANGENTIAL_DIMENSION:
        raise DimensionError(f"Tangential-root check supports n <= {MAX_TANGENTIAL_DIMENSION}, got {a.n}")
    pair = hermitian_parts(a)
    poly = pencil_determinant(pair)
    floor = poly.coefficient_scale()
    worst = 0.0
    largest = 0.0
    count = 0
    for theta in _grid(m):
        c, s = math.cos(theta), math.sin(theta)
        for eig in hermitian_eigen(pair.rotated(theta)):
            value = abs(evaluate(poly, c, s, -eig.value))
            worst = max(worst, value / max(evaluate_abs(poly, c, s, -eig.value), floor))
            largest = max(largest, value)
            count += 1
    details = f"{m} angles x {a.n} branches, |P| at most {largest / floor:.3e} of the coefficient scale"
    return CheckReport.build("tangential_roots", worst, tol, count, details)


def check_tangency_points(matrix: MatrixLike, m: int, tol: float) -> CheckReport:
    """
    The gradient of P^delta at each simple root is the Rayleigh point of that branch

    Angles where the branch eigenvalue is within 1e-4 * (1 + ||A||_F) of a
    neighbour are skipped. Deviations are relative to 1 + ||A||_F.
    """
    a = _matrix(matrix)
    size = 1.0 + a.frobenius_norm()
    pair = hermitian_parts(a)
    poly = pencil_determinant(pair)
    worst = 0.0
    count = 0
    skipped = 0
    for theta in _grid(m):
        c, s = math.cos(theta), math.sin(theta)
        eigs = hermitian_eigen(pair.rotated(theta))
        values = [e.value for e in eigs]
        for k, eig in enumerate(eigs):
            gaps = [abs(eig.value - other) for j, other in enumerate(values) if j != k]
            if gaps and min(gaps) <= SIMPLE_EIGENVALUE_GAP * size:
                skipped += 1
                continue
            try:
                touch = tangency_point(poly, c, s, -eig.value)
            except DegenerateCurveError:
                skipped += 1
                continue
            worst = max(worst, abs(touch - rayleigh(a, eig.vector)) / size)
            count += 1
    return CheckReport.build("tangency_points", worst, tol, count,
                             f"{count} simple roots compared, {skipped} multiple roots skipped")


def check_affine_covariance(matrix: MatrixLike, alpha: complex, beta: complex, tol: float) -> CheckReport:
    """elliptical_range(alpha*A + beta*I) against affine_image(elliptical_range(A), alpha, beta)"""
    a = _matrix(matrix)
    require_two_by_two(a)
    direct = elliptical_range(a.affine(alpha, beta))
    mapped = affine_image(elliptical_range(a), alpha, beta)
    return CheckReport.build("affine_covariance", ellipse_deviation(direct, mapped), tol, 1,
                             f"alpha={complex(alpha):.6g}, beta={complex(beta):.6g}, kind {direct.kind}")


def check_unitary_invariance(matrix: MatrixLike, seed: int, tol: float) -> CheckReport:
    """elliptical_range(U*AU) against elliptical_range(A) for a seeded random unitary U"""
    a = _matrix(matrix)
    require_two_by_two(a)
    unitary = random_unitary(2, seed)
    rotated = elliptical_range(a.unitary_similarity(unitary))
    original = elliptical_range(a)
    details = f"seed {seed}, kinds {original.kind}/{rotated.kind}"
    return CheckReport.build("unitary_invariance", ellipse_deviation(rotated, original), tol, 1, details)


def check_biduality(conic: ConicMatrix, tol: float) -> CheckReport:
    """Entrywise relative deviation of adj(adj(C)) from det(C) * C"""
    det = conic_determinant(conic)
    twice = adjugate(adjugate_dual(conic).m)
    target = det * conic.m
    deviation = float(np.abs(twice - target).max() / np.abs(target).max())
    return CheckReport.build("biduality", deviation, tol, 9, f"det(C)={det:.6g}")


def check_dual_conic(matrix: MatrixLike, tol: float) -> CheckReport:
    """
    The adjugate dual of the Kippenhahn conic is the boundary of the closed-form disk

    Args:
        matrix: A non-normal 2x2 matrix
        tol: Allowed entrywise deviation between the normalized conics

    Returns:
        CheckReport comparing normalize(adj(conic_of(P^delta))) with normalize(ellipse_conic(E))
    """
    a = require_two_by_two(matrix)
    disk = elliptical_range(a)
    if disk.semi_minor == 0:
        raise DegenerateCurveError(f"The field of values is a {disk.kind}; its tangential conic is singular")
    dual = normalize_conic(adjugate_dual(conic_of(pencil_determinant(hermitian_parts(a)))))
    target = normalize_conic(ellipse_conic(disk))
    return CheckReport.build("dual_conic", float(np.abs(dual.m - target.m).max()), tol, 9, f"kind {disk.kind}")


def check_schur_reduction(matrix: MatrixLike, tol: float) -> CheckReport:
    """
    Replay the reduction to the canonical upper-triangular cases

    A - (trace/2) I is triangularized to [[l, b], [0, -l]]. With l = 0 the
    matrix is rescaled by 1/b and must give the circle of radius 1/2; otherwise
    it is rescaled by 1/l and must give foci +-1, semi-minor |b/l|/2 and
    semi-major sqrt(1 + |b/l|^2/4). Mapping the canonical disk back must
    reproduce elliptical_range(A). Deviations are relative.
    """
    a = _matrix(matrix)
    require_two_by_two(a)
    size = 1.0 + a.frobenius_norm()
    disk = elliptical_range(a)
    shift = a.trace() / 2
    _, triangular = schur_2x2(a.affine(1, -shift))
    lam, b = complex(triangular.entries[0, 0]), complex(triangular.entries[0, 1])

    if disk.semi_minor == 0:
        diagonal = elliptical_range(triangular.affine(1, shift))
        deviation = ellipse_deviation(diagonal, disk) / size
        return CheckReport.build("schur_reduction", deviation, tol, 1, f"normal case, kind {disk.kind}")

    if disk.kind == "circle":
        factor = b
        expected = EllipseDisk(0j, 0j, 0j, 0.5, 0.5, 0.0, "circle")
        case = "nilpotent case, rescaled by b"
    else:
        factor = lam
        ratio = abs(b / lam)
        expected = EllipseDisk(0j, 1 + 0j, -1 + 0j, math.sqrt(1 + ratio * ratio / 4), ratio / 2, 0.0, "ellipse")
        case = "distinct eigenvalues, rescaled by lambda"
    canonical = elliptical_range(triangular.affine(1 / factor, 0))
    canonical_dev = ellipse_deviation(canonical, expected) / (1.0 + expected.semi_major)
    recomposed_dev = ellipse_deviation(affine_image(canonical, factor, shift), disk) / size
    return CheckReport.build("schur_reduction", max(canonical_dev, recomposed_dev), tol, 1, case)


def check_hull_containment(matrix: MatrixLike, grid: int, num_samples: int, seed: int, tol: float,
                           workers: int = 1) -> CheckReport:
    """
    Rayleigh quotients and eigenvalues lie behind every supporting line of the sampled boundary

    Rayleigh quotients are measured against the polygon cut out by the
    supporting lines of the fov_boundary samples, which contains F(A).
    Eigenvalues must also lie in the inscribed hull of the sample points.

    Args:
        matrix: Any square matrix
        grid: Number of boundary angles
        num_samples: Number of random Rayleigh quotients
        seed: Seed of the vector generator
        tol: Allowed outward excess

    Returns:
        CheckReport with the worst support excess or eigenvalue gap (0 if everything is inside)
    """
    a = _matrix(matrix)
    boundary = fov_boundary(a, grid, workers)
    quotients = rayleigh_batch(a, random_unit_vectors(a.n, num_samples, seed))
    spectrum = np.linalg.eigvals(a.entries)
    excess = support_excess_batch(boundary, np.concatenate([quotients, spectrum]))
    worst = max(0.0, float(excess.max()))
    hull = convex_hull(s.point for s in boundary)
    spectrum_gap = max(hull.outside_distance(complex(z)) for z in spectrum)
    details = (f"{num_samples} Rayleigh quotients and {a.n} eigenvalues; hull has {len(hull.vertices)} vertices, "
               f"eigenvalues at most {spectrum_gap:.3e} outside the inscribed hull")
    return CheckReport.build("hull_containment", max(worst, spectrum_gap), tol, num_samples + a.n, details)


def check_normal_case(matrix: MatrixLike, tol: float, normal_tol: float = DEFAULT_NORMAL_TOL) -> CheckReport:
    """A normal 2x2 matrix has a point or segment range with foci at its eigenvalues"""
    a = require_two_by_two(matrix)
    if not is_normal(a, normal_tol):
        raise PreconditionError("check_normal_case requires a normal matrix")
    disk = elliptical_range(a)
    spectrum = np.linalg.eigvals(a)
    deviation = max(_pair_distance((disk.focus1, disk.focus2), spectrum), disk.semi_minor)
    return CheckReport.build("normal_case", deviation, tol, 1, f"kind {disk.kind}")


class VerificationSuite:
    """
    Runs the verification checks and collects their reports.
    Scaled tolerances are multiplied by 1 + ||A||_F of the matrix under test.
    """
    COVARIANCE_TOL = 1e-10
    UNITARY_TOL = 1e-9
    TANGENTIAL_TOL = 1e-8
    TANGENCY_TOL = 1e-8
    HULL_TOL = 1e-8
    BIDUALITY_TOL = 1e-11
    DUAL_TOL = 1e-9
    SCHUR_TOL = 1e-9
    NORMAL_TOL = 1e-10

    def __init__(self, grid: int = 720, seed: int = 0, tol: float = 1e-9, samples: int = 10000,
                 workers: int = 1, normal_tol: float = DEFAULT_NORMAL_TOL):
        """
        Args:
            grid: Number of angles for support and boundary sweeps
            seed: Base seed for sampled vectors, unitaries and random matrices
            tol: Relative tolerance of the containment and support-match oracles
            samples: Rayleigh quotients drawn per containment check
            workers: Threads used by boundary sweeps
            normal_tol: Commutator tolerance deciding which matrices get the normal-case check
        """
        self.grid = grid
        self.seed = seed
        self.tol = tol
        self.samples = samples
        self.workers = workers
        self.normal_tol = normal_tol
        self.reports: List[CheckReport] = []

    def _record(self, reports: List[CheckReport], label: str) -> List[CheckReport]:
        labelled = [CheckReport(f"{label}:{r.name}", r.passed, r.max_deviation, r.tolerance, r.samples, r.details)
                    for r in reports]
        self.reports.extend(labelled)
        return labelled

    def _two_by_two_reports(self, a: SquareComplexMatrix) -> List[CheckReport]:
        size = 1.0 + a.frobenius_norm()
        rng = np.random.default_rng(self.seed)
        alpha = complex(*rng.uniform(-2, 2, 2))
        beta = complex(*rng.uniform(-2, 2, 2))
        reports = [
            check_containment(a, self.samples, self.seed, self.tol * size),
            check_support_match(a, self.grid, self.tol * size),
            check_tangential_roots(a, self.grid, self.TANGENTIAL_TOL),
            check_tangency_points(a, self.grid, self.TANGENCY_TOL),
            check_affine_covariance(a, 1, -a.trace() / 2, self.COVARIANCE_TOL * size),
            check_affine_covariance(a, alpha, beta,
                                    self.COVARIANCE_TOL * (1 + abs(alpha) * (size - 1) + abs(beta))),
            check_unitary_invariance(a, self.seed, self.UNITARY_TOL * size),
            check_schur_reduction(a, self.SCHUR_TOL),
        ]
        if elliptical_range(a).semi_minor > 0:
            reports.append(check_dual_conic(a, self.DUAL_TOL))
            reports.append(check_biduality(conic_of(pencil_determinant(hermitian_parts(a))), self.BIDUALITY_TOL))
        if is_normal(a, self.normal_tol):
            reports.append(check_normal_case(a, self.NORMAL_TOL * size, self.normal_tol))
        return reports

    def run_matrix(self, matrix: MatrixLike, label: str = "input") -> List[CheckReport]:
        """
        Run every check that applies to the matrix

        Args:
            matrix: The matrix under test
            label: Prefix for the report names

        Returns:
            The reports of this run
        """
        a = _matrix(matrix)
        size = 1.0 + a.frobenius_norm()
        if a.n == 2:
            reports = self._two_by_two_reports(a)
        else:
            reports = [check_tangency_points(a, self.grid, self.TANGENCY_TOL)]
            if a.n <= MAX_TANGENTIAL_DIMENSION:
                reports.insert(0, check_tangential_roots(a, self.grid, self.TANGENTIAL_TOL))
        reports.append(check_hull_containment(a, self.grid, self.samples, self.seed,
                                              self.HULL_TOL * size, self.workers))
        logger.info(f"Ran {len(reports)} checks on {label} ({a.n}x{a.n})")
        return self._record(reports, label)

    def run_golden(self) -> List[CheckReport]:
        """The worked nilpotent and triangular cases, their reductions and their conics"""
        reports = [
            _golden_report("nilpotent", SquareComplexMatrix.from_rows([[0, 1], [0, 0]]),
                           EllipseDisk(0j, 0j, 0j, 0.5, 0.5, 0.0, "circle"),
                           {(2, 0, 0): -0.25, (0, 2, 0): -0.25, (0, 0, 2): 1.0}),
        ]
        for b in (0.5, 1.0, 2.0, 5.0):
            quarter = b * b / 4
            reports.append(_golden_report(
                f"triangular_b={b:g}", SquareComplexMatrix.from_rows([[1, b], [0, -1]]),
                EllipseDisk(0j, 1 + 0j, -1 + 0j, math.sqrt(1 + quarter), b / 2, 0.0, "ellipse"),
                {(2, 0, 0): -(1 + quarter), (0, 2, 0): -quarter, (0, 0, 2): 1.0}))
        reports.extend([
            check_affine_covariance(SquareComplexMatrix.from_rows([[0, 3], [0, 0]]), 1 / 3, 0, 1e-10),
            check_affine_covariance(SquareComplexMatrix.from_rows([[2, 1], [0, -2]]), 1 / 2, 0, 1e-10),
            check_biduality(ConicMatrix(np.diag([-0.25, -0.25, 1.0])), self.BIDUALITY_TOL),
            check_biduality(ConicMatrix(np.diag([-2.0, -1.0, 1.0])), self.BIDUALITY_TOL),
        ])
        return self._record(reports, "golden")

    def run_random(self, count: int, seed: Optional[int] = None) -> List[CheckReport]:
        """
        Seeded random 2x2 suite, one aggregated report per check

        Each aggregated deviation is the worst deviation divided by the
        matrix's scale 1 + ||A||_F, so it passes exactly when every
        individual scaled check passes.

        Args:
            count: Number of random matrices (entries uniform on [-1, 1]^2)
            seed: Base seed, defaults to the suite seed

        Returns:
            The aggregated reports
        """
        base = self.seed if seed is None else seed
        # Per-matrix reports stay silent; only the aggregates are logged
        level = logger.level
        logger.setLevel(logging.ERROR)
        try:
            worst = self._random_trials(base, count)
        finally:
            logger.setLevel(level)
        reports = [
            CheckReport.build(name, dev, tol, samples, f"{count} seeded random 2x2 matrices, worst seed {worst_seed}")
            for name, (dev, tol, samples, worst_seed) in worst.items()
        ]
        logger.info(f"Ran the random suite over {count} matrices from seed {base}")
        return self._record(reports, "random")

    def _random_trials(self, base: int, count: int) -> Dict[str, List[Any]]:
        worst: Dict[str, List[Any]] = {}
        for index in range(count):
            a = random_matrix(2, base + index)
            size = 1.0 + a.frobenius_norm()
            rng = np.random.default_rng(base + index)
            alpha = complex(*rng.uniform(-2, 2, 2))
            beta = complex(*rng.uniform(-2, 2, 2))
            reach = 1 + abs(alpha) * (size - 1) + abs(beta)
            trial = [
                (check_containment(a, self.samples, base + index, self.tol * size), size),
                (check_support_match(a, self.grid, self.tol * size), size),
                (check_affine_covariance(a, alpha, beta, self.COVARIANCE_TOL * reach), reach),
                (check_unitary_invariance(a, base + index, self.UNITARY_TOL * size), size),
                (check_schur_reduction(a, self.SCHUR_TOL), 1.0),
            ]
            if elliptical_range(a).semi_minor > 0:
                trial.append((check_dual_conic(a, self.DUAL_TOL), 1.0))
            normal = random_normal_matrix(2, base + index)
            trial.append((check_normal_case(normal, self.NORMAL_TOL * (1 + normal.frobenius_norm())),
                          1 + normal.frobenius_norm()))
            for report, scale in trial:
                relative = report.max_deviation / scale
                entry = worst.setdefault(report.name, [0.0, report.tolerance / scale, 0, base + index])
                entry[2] += report.samples
                if relative >= entry[0]:
                    entry[0], entry[1], entry[3] = relative, report.tolerance / scale, base + index
        return worst

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def summary_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.to_json() for r in self.reports],
                            columns=["name", "passed", "max_deviation", "tolerance", "samples", "details"])


def _golden_report(name: str, matrix: SquareComplexMatrix, disk: EllipseDisk,
                   coefficients: Dict[tuple, float]) -> CheckReport:
    expected = HomogeneousTrivariatePoly(matrix.n, coefficients)
    poly = pencil_determinant(hermitian_parts(matrix))
    exponents = set(expected.coefficients) | set(poly.coefficients)
    poly_dev = max(abs(poly.coefficient(e) - expected.coefficient(e)) for e in exponents)
    disk_dev = ellipse_deviation(elliptical_range(matrix), disk)
    return CheckReport.build(name, max(poly_dev, disk_dev), 1e-12, 1,
                             f"pencil coefficients off by {poly_dev:.3e}, ellipse off by {disk_dev:.3e}")
