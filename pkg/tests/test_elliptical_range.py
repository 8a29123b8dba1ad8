"""Tests for elliptical_range: the closed-form disk of a 2x2 matrix and its transformations."""
import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import complex_numbers, integers

import elliptical_range as er
from elliptical_range import (
    EllipseDisk,
    affine_image,
    contains,
    ellipse_boundary,
    ellipse_conic,
    ellipse_deviation,
    ellipse_support,
    elliptical_range,
    focal_excess,
)
from kippenhahn import support_function
from matrix_core import (
    DegenerateCurveError,
    DimensionError,
    NumericalInconsistencyError,
    SquareComplexMatrix,
    random_matrix,
    random_normal_matrix,
    random_unit_vectors,
    rayleigh_batch,
)

moderate = complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
scales = complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False, allow_infinity=False)


class TestEllipticalRange:
    def test_nilpotent_is_circle(self, nilpotent):
        disk = elliptical_range(nilpotent)
        assert disk.kind == "circle"
        assert disk.center == 0
        assert disk.focus1 == disk.focus2 == 0
        assert disk.semi_major == disk.semi_minor == 0.5
        assert disk.rotation == 0

    def test_triangular(self, triangular_b2):
        disk = elliptical_range(triangular_b2)
        assert disk.kind == "ellipse"
        assert disk.sorted_foci() == (-1, 1)
        assert disk.semi_minor == 1
        assert abs(disk.semi_major - math.sqrt(2)) <= 1e-15
        assert disk.rotation == 0

    def test_segment(self, segment):
        disk = elliptical_range(segment)
        assert disk.kind == "segment"
        assert disk.center == 0.5
        assert disk.sorted_foci() == (0, 1)
        assert disk.semi_major == 0.5
        assert disk.semi_minor == 0

    def test_point(self):
        disk = elliptical_range(SquareComplexMatrix.identity(2).affine(3, 1j))
        assert disk.kind == "point"
        assert disk.semi_major == disk.semi_minor == 0
        assert abs(disk.center - (3 + 1j)) <= 1e-15

    def test_rotated_major_axis(self):
        disk = elliptical_range(SquareComplexMatrix.from_rows([[1j, 2], [0, -1j]]))
        assert abs(disk.rotation - math.pi / 2) <= 1e-15
        assert 0 <= disk.rotation < math.pi

    @pytest.mark.parametrize("seed", range(8))
    def test_normal_matrix_has_no_interior(self, seed):
        a = random_normal_matrix(2, seed)
        disk = elliptical_range(a)
        assert disk.kind in ("point", "segment")
        spectrum = np.linalg.eigvals(a.entries)
        for focus in (disk.focus1, disk.focus2):
            assert min(abs(focus - z) for z in spectrum) <= 1e-12

    def test_tiny_nilpotent_is_circle(self):
        disk = elliptical_range(SquareComplexMatrix.from_rows([[0, 1e-7], [0, 0]]))
        assert disk.kind == "circle"
        assert abs(disk.semi_minor - 5e-8) <= 1e-21
        assert disk.semi_major == disk.semi_minor

    def test_tiny_segment(self):
        disk = elliptical_range(SquareComplexMatrix.diagonal([0, 1e-6]))
        assert disk.kind == "segment"
        assert disk.semi_minor == 0
        assert abs(disk.semi_major - 5e-7) <= 1e-21
        np.testing.assert_allclose(sorted(abs(f) for f in (disk.focus1, disk.focus2)), [0, 1e-6], atol=1e-21)

    @pytest.mark.parametrize("factor", [1e-9, 1e-6, 1e-3, 1e3])
    def test_kind_survives_rescaling(self, nilpotent, triangular_b2, segment, factor):
        assert elliptical_range(nilpotent.affine(factor, 0)).kind == "circle"
        assert elliptical_range(triangular_b2.affine(factor, 0)).kind == "ellipse"
        assert elliptical_range(segment.affine(factor, 0)).kind == "segment"

    def test_rejects_other_sizes(self, random_3x3):
        with pytest.raises(DimensionError):
            elliptical_range(random_3x3)

    def test_json_fields(self, triangular_b2):
        document = elliptical_range(triangular_b2).to_json()
        assert set(document) == {"center", "foci", "semi_major", "semi_minor", "rotation", "kind"}
        assert document["center"] == [0.0, 0.0]
        assert sorted(document["foci"]) == [[-1.0, 0.0], [1.0, 0.0]]

    def test_small_negative_radicand_is_clamped(self, monkeypatch):
        monkeypatch.setattr(er, "eigenvalues_2x2", lambda a: (1 + 1e-13 + 0j, 1 + 0j))
        disk = elliptical_range(SquareComplexMatrix.identity(2))
        assert disk.semi_minor == 0
        assert disk.kind == "point"

    def test_large_negative_radicand_raises(self, monkeypatch):
        monkeypatch.setattr(er, "eigenvalues_2x2", lambda a: (2 + 0j, 2 + 0j))
        with pytest.raises(NumericalInconsistencyError):
            elliptical_range(SquareComplexMatrix.identity(2))


class TestContains:
    def test_circle_edge(self, nilpotent):
        disk = elliptical_range(nilpotent)
        assert contains(disk, 0.5, 1e-12)
        assert not contains(disk, 0.51, 1e-6)
        assert abs(focal_excess(disk, 0.51) - 0.02) <= 1e-15

    def test_triangular(self, triangular_b2):
        disk = elliptical_range(triangular_b2)
        assert contains(disk, 0.5, 1e-12)
        assert contains(disk, 1j, 1e-12)
        assert not contains(disk, 1.1j, 1e-6)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_rayleigh_quotients(self, seed):
        a = random_matrix(2, seed)
        disk = elliptical_range(a)
        quotients = rayleigh_batch(a, random_unit_vectors(2, 3000, seed))
        tol = 1e-12 * (1 + a.frobenius_norm())
        assert all(contains(disk, complex(z), tol) for z in quotients)


class TestEllipseSupport:
    def test_triangular(self, triangular_b2):
        disk = elliptical_range(triangular_b2)
        assert abs(ellipse_support(disk, 0) - math.sqrt(2)) <= 1e-15
        assert abs(ellipse_support(disk, math.pi / 2) - 1) <= 1e-15

    def test_circle_is_constant(self, nilpotent):
        disk = elliptical_range(nilpotent)
        for theta in np.linspace(0, 2 * np.pi, 9):
            assert abs(ellipse_support(disk, theta) - 0.5) <= 1e-15

    @pytest.mark.parametrize("seed", [4, 5, 6])
    def test_matches_pencil_support(self, seed):
        a = random_matrix(2, seed)
        disk = elliptical_range(a)
        for theta in np.linspace(0, 2 * np.pi, 40, endpoint=False):
            assert abs(ellipse_support(disk, theta) - support_function(a, theta)) <= 1e-12 * (1 + a.frobenius_norm())

    def test_width(self, triangular_b2):
        disk = elliptical_range(triangular_b2)
        for theta in np.linspace(0, np.pi, 7):
            width = ellipse_support(disk, theta) + ellipse_support(disk, theta + math.pi)
            expected = 2 * math.sqrt(2 * math.cos(theta) ** 2 + math.sin(theta) ** 2)
            assert abs(width - expected) <= 1e-14


class TestAffineImage:
    def test_scaling(self, triangular_b2):
        image = affine_image(elliptical_range(triangular_b2), 2, 0)
        assert image.sorted_foci() == (-2, 2)
        assert abs(image.semi_major - 2 * math.sqrt(2)) <= 1e-15
        assert image.semi_minor == 2

    def test_zero_alpha_collapses(self, triangular_b2):
        image = affine_image(elliptical_range(triangular_b2), 0, 5)
        assert image.kind == "point"
        assert image.center == image.focus1 == image.focus2 == 5
        assert image.semi_major == 0

    def test_rotation_of_segment(self, segment):
        image = affine_image(elliptical_range(segment), 1j, 0)
        assert image.kind == "segment"
        assert image.center == 0.5j
        assert abs(image.rotation - math.pi / 2) <= 1e-15

    def test_circle_keeps_zero_rotation(self, nilpotent):
        assert affine_image(elliptical_range(nilpotent), cmath.exp(0.3j), 1).rotation == 0

    @settings(deadline=None, max_examples=40)
    @given(integers(min_value=0, max_value=200), scales, moderate)
    def test_matches_transformed_matrix(self, seed, alpha, beta):
        a = random_matrix(2, seed)
        direct = elliptical_range(a.affine(alpha, beta))
        mapped = affine_image(elliptical_range(a), alpha, beta)
        reach = 1 + abs(alpha) * a.frobenius_norm() + abs(beta)
        assert ellipse_deviation(direct, mapped) <= 1e-10 * reach


class TestEllipseConic:
    def test_triangular(self, triangular_b2):
        conic = ellipse_conic(elliptical_range(triangular_b2))
        np.testing.assert_allclose(conic.m, np.diag([0.5, 1.0, -1.0]), atol=1e-15)

    @pytest.mark.parametrize("seed", [7, 8])
    def test_boundary_points_are_roots(self, seed):
        disk = elliptical_range(random_matrix(2, seed))
        conic = ellipse_conic(disk)
        for z in ellipse_boundary(disk, 24):
            p = np.array([z.real, z.imag, 1.0])
            assert abs(p @ conic.m @ p) <= 1e-10 * np.abs(conic.m).max() * (p @ p)

    def test_segment_has_no_conic(self, segment):
        with pytest.raises(DegenerateCurveError):
            ellipse_conic(elliptical_range(segment))


class TestEllipseBoundary:
    def test_points_on_ellipse(self, triangular_b2):
        disk = elliptical_range(triangular_b2)
        points = ellipse_boundary(disk, 16)
        assert len(points) == 16
        for z in points:
            assert abs(focal_excess(disk, z)) <= 1e-14


class TestEllipseDeviation:
    def test_identical(self, triangular_b2):
        disk = elliptical_range(triangular_b2)
        assert ellipse_deviation(disk, disk) == 0

    def test_focus_order_is_ignored(self, triangular_b2):
        disk = elliptical_range(triangular_b2)
        swapped = EllipseDisk(disk.center, disk.focus2, disk.focus1, disk.semi_major, disk.semi_minor,
                              disk.rotation, disk.kind)
        assert ellipse_deviation(disk, swapped) == 0

    def test_center_shift(self, nilpotent):
        disk = elliptical_range(nilpotent)
        assert abs(ellipse_deviation(disk, affine_image(disk, 1, 0.1)) - 0.1) <= 1e-15

    def test_rotation_wraps_at_pi(self):
        first = EllipseDisk(0j, 1 + 0j, -1 + 0j, 2.0, 1.0, 0.0, "ellipse")
        second = EllipseDisk(0j, 1 + 0j, -1 + 0j, 2.0, 1.0, math.pi - 1e-14, "ellipse")
        assert ellipse_deviation(first, second) <= 1e-13
