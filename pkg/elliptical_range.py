import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List

import numpy as np

from matrix_core import (
    DegenerateCurveError,
    MatrixLike,
    NumericalInconsistencyError,
    eigenvalues_2x2,
    gram_trace,
    require_two_by_two,
)
from poly_core import ConicMatrix

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

KIND_TOL = 1e-12
RADICAND_CLAMP_TOL = 1e-10
KINDS = ("point", "segment", "circle", "ellipse")


def _mod_pi(angle: float) -> float:
    reduced = angle % math.pi
    return 0.0 if reduced >= math.pi else reduced


@dataclass(frozen=True)
class EllipseDisk:
    """
    The field of values of a 2x2 matrix: an elliptical disk with foci at the
    eigenvalues. Rotation is the major-axis direction in [0, pi), 0 for
    circles and points.
    """
    center: complex
    focus1: complex
    focus2: complex
    semi_major: float
    semi_minor: float
    rotation: float
    kind: str

    def sorted_foci(self):
        return tuple(sorted((self.focus1, self.focus2), key=lambda z: (z.real, z.imag)))

    def to_json(self) -> Dict[str, Any]:
        return {
            "center": [self.center.real, self.center.imag],
            "foci": [[f.real, f.imag] for f in (self.focus1, self.focus2)],
            "semi_major": self.semi_major,
            "semi_minor": self.semi_minor,
            "rotation": self.rotation,
            "kind": self.kind,
        }


def elliptical_range(matrix: MatrixLike) -> EllipseDisk:
    """
    Closed-form field of values of a 2x2 matrix

    Center trace/2, foci at the eigenvalues, minor axis
    sqrt(trace(A*A) - |l1|^2 - |l2|^2).

    Args:
        matrix: A 2x2 matrix

    Returns:
        EllipseDisk classified as point, segment, circle or ellipse
    """
    a = require_two_by_two(matrix)
    scale = 1.0 + float(np.linalg.norm(a))

    lambda1, lambda2 = eigenvalues_2x2(a)
    center = complex(a[0, 0] + a[1, 1]) / 2
    gram = gram_trace(a)
    radicand = gram - abs(lambda1) ** 2 - abs(lambda2) ** 2
    if radicand < -RADICAND_CLAMP_TOL * gram:
        raise NumericalInconsistencyError(
            f"Minor-axis radicand {radicand:.3e} is negative beyond rounding (trace(A*A)={gram:.3e})")
    # The radicand cancels terms of size trace(A*A), so rounding is relative to it
    if radicand <= KIND_TOL * gram:
        radicand = 0.0
    semi_minor = math.sqrt(radicand) / 2
    half_focal = (lambda1 - lambda2) / 2
    if abs(half_focal) <= KIND_TOL * scale:
        lambda1 = lambda2 = center
        half_focal = 0j
    focal = abs(half_focal)
    semi_major = math.sqrt(semi_minor * semi_minor + focal * focal)

    if semi_major == 0:
        kind = "point"
    elif semi_minor == 0:
        kind = "segment"
    elif focal == 0:
        kind = "circle"
    else:
        kind = "ellipse"
    rotation = _mod_pi(cmath.phase(half_focal)) if focal > 0 else 0.0

    disk = EllipseDisk(center, complex(lambda1), complex(lambda2), semi_major, semi_minor, rotation, kind)
    logger.debug(f"Elliptical range: kind={kind}, semi_major={semi_major:.6g}, semi_minor={semi_minor:.6g}")
    return disk


def contains(disk: EllipseDisk, z: complex, tol: float) -> bool:
    """Focal-sum membership test |z - f1| + |z - f2| <= 2a + tol"""
    return focal_excess(disk, z) <= tol


def focal_excess(disk: EllipseDisk, z: complex) -> float:
    return abs(z - disk.focus1) + abs(z - disk.focus2) - 2 * disk.semi_major


def ellipse_support(disk: EllipseDisk, theta: float) -> float:
    """
    Support function of the elliptical disk

    Args:
        disk: The ellipse
        theta: Direction in radians

    Returns:
        max over the disk of Re(exp(-i theta) z)
    """
    offset = (disk.center * cmath.exp(-1j * theta)).real
    phi = theta - disk.rotation
    return offset + math.sqrt((disk.semi_major * math.cos(phi)) ** 2 + (disk.semi_minor * math.sin(phi)) ** 2)


def affine_image(disk: EllipseDisk, alpha: complex, beta: complex) -> EllipseDisk:
    """Image of the disk under z -> alpha*z + beta"""
    alpha, beta = complex(alpha), complex(beta)
    if alpha == 0:
        return EllipseDisk(beta, beta, beta, 0.0, 0.0, 0.0, "point")
    rotation = 0.0 if disk.kind in ("point", "circle") else _mod_pi(disk.rotation + cmath.phase(alpha))
    return EllipseDisk(
        alpha * disk.center + beta,
        alpha * disk.focus1 + beta,
        alpha * disk.focus2 + beta,
        abs(alpha) * disk.semi_major,
        abs(alpha) * disk.semi_minor,
        rotation,
        disk.kind,
    )


def ellipse_conic(disk: EllipseDisk) -> ConicMatrix:
    """
    Point conic of the ellipse boundary, (x, y, 1) M (x, y, 1)^T = 0

    Args:
        disk: A circle or proper ellipse

    Returns:
        ConicMatrix of the boundary curve
    """
    if disk.semi_minor == 0:
        raise DegenerateCurveError(f"A {disk.kind} has no point conic")
    c, s = math.cos(disk.rotation), math.sin(disk.rotation)
    rot = np.array([[c, -s], [s, c]])
    quad = rot @ np.diag([disk.semi_major ** -2, disk.semi_minor ** -2]) @ rot.T
    center = np.array([disk.center.real, disk.center.imag])
    m = np.empty((3, 3))
    m[:2, :2] = quad
    m[:2, 2] = m[2, :2] = -quad @ center
    m[2, 2] = center @ quad @ center - 1
    return ConicMatrix((m + m.T) / 2)


def ellipse_boundary(disk: EllipseDisk, m: int) -> List[complex]:
    turn = cmath.exp(1j * disk.rotation)
    return [
        disk.center + turn * complex(disk.semi_major * math.cos(t), disk.semi_minor * math.sin(t))
        for t in 2 * np.pi * np.arange(m) / m
    ]


def ellipse_deviation(first: EllipseDisk, second: EllipseDisk) -> float:
    """
    Largest field-by-field difference between two disks

    Foci are an unordered pair and enter through their symmetric functions:
    the center and ((f1 - f2)/2)^2, which stay well conditioned when the foci
    nearly coincide. Rotation is weighted by the eccentric part a - b.
    """
    size = max(1.0, first.semi_major, second.semi_major)
    q1 = ((first.focus1 - first.focus2) / 2) ** 2
    q2 = ((second.focus1 - second.focus2) / 2) ** 2
    turn = abs(first.rotation - second.rotation) % math.pi
    turn = min(turn, math.pi - turn)
    weight = min(first.semi_major - first.semi_minor, second.semi_major - second.semi_minor)
    return max(
        abs(first.center - second.center),
        abs(first.semi_major - second.semi_major),
        abs(first.semi_minor - second.semi_minor),
        abs(q1 - q2) / size,
        turn * weight,
    )
