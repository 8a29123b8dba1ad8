import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
import pandas as pd

from matrix_core import (
    DomainError,
    HermitianPair,
    MatrixLike,
    PreconditionError,
    as_array,
    hermitian_eigen,
    hermitian_parts,
    rayleigh,
)

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

BOUNDARY_COLUMNS = ["theta", "branch", "re", "im", "support"]
COLLINEAR_TOL = 1e-12


@dataclass(frozen=True)
class BoundarySample:
    """One point of the boundary generating curve at angle theta"""
    theta: float
    branch: int
    point: complex
    support: float


@dataclass(frozen=True)
class ConvexPolygon:
    """
    Counterclockwise hull vertices. One vertex (a point) and two vertices
    (a segment) are legal degenerate hulls.
    """
    vertices: Tuple[complex, ...]

    @property
    def degenerate(self) -> bool:
        return len(self.vertices) < 3

    def outside_distance(self, z: complex) -> float:
        """
        Outward distance of z from the polygon

        Args:
            z: Query point

        Returns:
            0 for points inside, otherwise the largest edge distance outward
            (the Euclidean distance for point and segment hulls)
        """
        verts = self.vertices
        if len(verts) == 1:
            return abs(z - verts[0])
        if len(verts) == 2:
            a, b = verts
            direction = b - a
            t = ((z - a) * direction.conjugate()).real / abs(direction) ** 2
            return abs(z - (a + min(1.0, max(0.0, t)) * direction))
        worst = 0.0
        for a, b in zip(verts, verts[1:] + verts[:1]):
            edge = b - a
            # Right of a counterclockwise edge is outside
            outward = -(edge.conjugate() * (z - a)).imag / abs(edge)
            worst = max(worst, outward)
        return worst

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return self.outside_distance(z) <= tol


def _grid(m: int) -> np.ndarray:
    if m < 3:
        raise PreconditionError(f"Sample count must be at least 3, got {m}")
    return 2 * np.pi * np.arange(m) / m


def support_function(matrix: MatrixLike, theta: float) -> float:
    """
    Largest eigenvalue of cos(theta) H1 + sin(theta) H2

    Args:
        matrix: The square matrix A
        theta: Direction in radians

    Returns:
        max over F(A) of Re(exp(-i theta) z)
    """
    return hermitian_eigen(hermitian_parts(matrix).rotated(theta))[0].value


def _samples_at(a: np.ndarray, pair: HermitianPair, theta: float) -> List[BoundarySample]:
    return [
        BoundarySample(float(theta), branch, rayleigh(a, eig.vector), eig.value)
        for branch, eig in enumerate(hermitian_eigen(pair.rotated(theta)))
    ]


def kippenhahn_points(matrix: MatrixLike, m: int, workers: int = 1) -> List[BoundarySample]:
    """
    Sample every branch of the boundary generating curve on a uniform grid

    Args:
        matrix: The square matrix A
        m: Number of grid angles 2*pi*j/m, at least 3
        workers: Threads sharing the sweep; ordering is (theta index, branch)

    Returns:
        n*m BoundarySamples
    """
    a = as_array(matrix)
    pair = hermitian_parts(a)
    thetas = _grid(m)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_angle = list(pool.map(lambda t: _samples_at(a, pair, t), thetas))
    else:
        per_angle = [_samples_at(a, pair, t) for t in thetas]
    samples = [sample for group in per_angle for sample in group]
    logger.info(f"Swept {m} angles for a {a.shape[0]}x{a.shape[0]} matrix: {len(samples)} curve samples")
    return samples


def fov_boundary(matrix: MatrixLike, m: int, workers: int = 1) -> List[BoundarySample]:
    """Outer boundary of F(A): the branch-0 samples, counterclockwise"""
    return [s for s in kippenhahn_points(matrix, m, workers) if s.branch == 0]


def numerical_radius(matrix: MatrixLike, m: int) -> float:
    """max |z| over F(A), resolved on an m-angle grid"""
    pair = hermitian_parts(matrix)
    return max(hermitian_eigen(pair.rotated(t))[0].value for t in _grid(m))


def support_excess(samples: Sequence[BoundarySample], z: complex) -> float:
    """max over samples of Re(exp(-i theta) z) - support; <= 0 inside the supporting lines"""
    return float(support_excess_batch(samples, np.array([z]))[0])


def support_excess_batch(samples: Sequence[BoundarySample], points: np.ndarray, chunk: int = 1024) -> np.ndarray:
    """support_excess for every point, evaluated in chunks of rows"""
    if not samples:
        raise DomainError("support_excess needs at least one sample")
    thetas = np.array([s.theta for s in samples])
    supports = np.array([s.support for s in samples])
    cos, sin = np.cos(thetas), np.sin(thetas)
    z = np.asarray(points, dtype=np.complex128)
    excess = np.empty(z.shape[0])
    for start in range(0, z.shape[0], chunk):
        block = z[start:start + chunk]
        projections = np.outer(block.real, cos) + np.outer(block.imag, sin)
        excess[start:start + chunk] = (projections - supports).max(axis=1)
    return excess


def _cross(o: Tuple[float, float], a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[complex]) -> ConvexPolygon:
    """
    Monotone-chain hull of planar points

    Args:
        points: Complex numbers, at least one

    Returns:
        ConvexPolygon with collinear boundary points removed
    """
    coords = sorted({(float(z.real), float(z.imag)) for z in points})
    if not coords:
        raise DomainError("Convex hull of an empty point set")
    if len(coords) == 1:
        return ConvexPolygon((complex(*coords[0]),))

    xs = [c[0] for c in coords]
    ys = [c[1] for c in coords]
    extent = max(max(xs) - min(xs), max(ys) - min(ys))
    tol = COLLINEAR_TOL * extent * extent

    def chain(ordered):
        hull = []
        for p in ordered:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= tol:
                hull.pop()
            hull.append(p)
        return hull

    lower = chain(coords)
    upper = chain(reversed(coords))
    vertices = lower[:-1] + upper[:-1]
    if len(vertices) < 2:
        vertices = [coords[0], coords[-1]]
    return ConvexPolygon(tuple(complex(x, y) for x, y in vertices))


def boundary_frame(samples: Sequence[BoundarySample]) -> pd.DataFrame:
    return pd.DataFrame(
        [(s.theta, s.branch, s.point.real, s.point.imag, s.support) for s in samples],
        columns=BOUNDARY_COLUMNS,
    )


def boundary_csv(samples: Sequence[BoundarySample]) -> str:
    """
    Render samples in the boundary CSV format

    Angles carry 12 significant digits; coordinates and supports carry 17 so
    that parsing the CSV reproduces the points bit for bit.
    """
    frame = boundary_frame(samples)
    frame["theta"] = frame["theta"].map(lambda t: f"{t:.12g}")
    for column in ("re", "im", "support"):
        frame[column] = frame[column].map(lambda x: f"{x:.17g}")
    return frame.to_csv(index=False, lineterminator="\n")


def read_boundary_csv(source) -> List[BoundarySample]:
    """Parse a boundary CSV from a path or file-like object"""
    frame = pd.read_csv(source, float_precision="round_trip")
    missing = [c for c in BOUNDARY_COLUMNS if c not in frame.columns]
    if missing:
        raise DomainError(f"Boundary CSV is missing columns: {', '.join(missing)}")
    return [
        BoundarySample(float(row.theta), int(row.branch), complex(row.re, row.im), float(row.support))
        for row in frame.itertuples(index=False)
    ]
