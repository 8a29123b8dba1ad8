"""Tests for verify: the individual checks and the verification suite."""
import logging
import math

import numpy as np
import pytest

import verify
from kippenhahn import ConvexPolygon
from matrix_core import (
    DegenerateCurveError,
    DimensionError,
    PreconditionError,
    SquareComplexMatrix,
    hermitian_parts,
    random_matrix,
    random_normal_matrix,
)
from poly_core import ConicMatrix, conic_of, pencil_determinant
from verify import (
    CheckReport,
    VerificationSuite,
    check_affine_covariance,
    check_biduality,
    check_containment,
    check_dual_conic,
    check_hull_containment,
    check_normal_case,
    check_schur_reduction,
    check_support_match,
    check_tangency_points,
    check_tangential_roots,
    check_unitary_invariance,
)


class TestCheckReport:
    def test_pass_and_fail(self):
        assert CheckReport.build("x", 1e-12, 1e-9, 3).passed
        assert not CheckReport.build("x", 1e-6, 1e-9, 3).passed

    def test_nan_fails(self):
        report = CheckReport.build("x", float("nan"), 1e-9, 1)
        assert not report.passed

    def test_json(self):
        document = CheckReport.build("support_match", 0.0, 1e-9, 720, "note").to_json()
        assert document == {"name": "support_match", "passed": True, "max_deviation": 0.0,
                            "tolerance": 1e-9, "samples": 720, "details": "note"}

    def test_pass_logs_debug_and_failure_warns(self, caplog):
        caplog.set_level(logging.DEBUG, logger="verify")
        CheckReport.build("quiet", 0.0, 1e-9, 1)
        CheckReport.build("loud", 1.0, 1e-9, 1)
        levels = {r.getMessage().split()[1]: r.levelno for r in caplog.records if r.name == "verify"}
        assert levels == {"quiet": logging.DEBUG, "loud": logging.WARNING}


class TestTwoByTwoChecks:
    @pytest.mark.parametrize("fixture", ["nilpotent", "triangular_b2", "segment"])
    def test_containment(self, request, fixture):
        a = request.getfixturevalue(fixture)
        report = check_containment(a, 2000, 0, 1e-12)
        assert report.passed
        assert report.samples == 2000

    def test_support_match(self, triangular_b2):
        report = check_support_match(triangular_b2, 72, 1e-12)
        assert report.passed
        assert report.samples == 72

    @pytest.mark.parametrize("seed", [40, 41, 42])
    def test_support_match_random(self, seed):
        a = random_matrix(2, seed)
        assert check_support_match(a, 360, 1e-12 * (1 + a.frobenius_norm())).passed

    @pytest.mark.parametrize("rows", [[[0, 1e-7], [0, 0]], [[0, 0], [0, 1e-6]], [[1e-6, 2e-6], [0, -1e-6]]])
    def test_tiny_ranges(self, rows):
        a = SquareComplexMatrix.from_rows(rows)
        assert check_containment(a, 2000, 3, 1e-12).passed
        assert check_support_match(a, 90, 1e-12).passed
        assert check_schur_reduction(a, 1e-9).passed

    def test_support_mismatch_is_reported(self, triangular_b2, monkeypatch):
        monkeypatch.setattr(verify, "ellipse_support", lambda disk, theta: 0.1 + math.sqrt(2))
        report = check_support_match(triangular_b2, 8, 1e-9)
        assert not report.passed
        assert report.max_deviation >= 0.1

    @pytest.mark.parametrize("alpha, beta", [(2 + 1j, -1), (1 / 3, 0), (-0.5j, 3 + 2j)])
    def test_affine_covariance(self, triangular_b2, alpha, beta):
        assert check_affine_covariance(triangular_b2, alpha, beta, 1e-11).passed

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_unitary_invariance(self, seed):
        a = random_matrix(2, 30 + seed)
        assert check_unitary_invariance(a, seed, 1e-9 * (1 + a.frobenius_norm())).passed

    def test_dual_conic(self, triangular_b2):
        report = check_dual_conic(triangular_b2, 1e-12)
        assert report.passed

    def test_dual_conic_needs_interior(self, segment):
        with pytest.raises(DegenerateCurveError):
            check_dual_conic(segment, 1e-9)

    @pytest.mark.parametrize("fixture", ["nilpotent", "triangular_b2", "segment"])
    def test_schur_reduction_canonical(self, request, fixture):
        assert check_schur_reduction(request.getfixturevalue(fixture), 1e-12).passed

    @pytest.mark.parametrize("seed", range(5))
    def test_schur_reduction_random(self, seed):
        assert check_schur_reduction(random_matrix(2, 60 + seed), 1e-9).passed

    def test_normal_case(self):
        assert check_normal_case(SquareComplexMatrix.diagonal([1, 2j]), 1e-12).passed
        a = random_normal_matrix(2, 9)
        assert check_normal_case(a, 1e-10 * (1 + a.frobenius_norm())).passed

    def test_normal_case_tiny_segment(self):
        a = SquareComplexMatrix.diagonal([0, 1e-6])
        report = check_normal_case(a, 1e-10 * (1 + a.frobenius_norm()))
        assert report.passed
        assert report.details == "kind segment"

    @pytest.mark.parametrize("alpha", [1000, 1e-3, 250j])
    def test_affine_covariance_tiny_circle(self, alpha):
        a = SquareComplexMatrix.from_rows([[0, 2e-6], [0, 0]])
        assert check_affine_covariance(a, alpha, 0, 1e-10).passed

    def test_normal_case_rejects_non_normal(self, nilpotent):
        with pytest.raises(PreconditionError):
            check_normal_case(nilpotent, 1e-10)


class TestPolynomialChecks:
    def test_tangential_roots(self, random_3x3):
        report = check_tangential_roots(random_3x3, 36, 1e-8)
        assert report.passed
        assert report.samples == 36 * 3
        assert "of the coefficient scale" in report.details

    def test_tangential_roots_dimension_limit(self):
        with pytest.raises(DimensionError):
            check_tangential_roots(random_matrix(9, 0), 8, 1e-8)

    @pytest.mark.parametrize("fixture", ["nilpotent", "triangular_b2", "random_3x3"])
    def test_tangency_points(self, request, fixture):
        assert check_tangency_points(request.getfixturevalue(fixture), 48, 1e-8).passed

    def test_tangency_points_skip_multiple_roots(self):
        report = check_tangency_points(SquareComplexMatrix.identity(3), 12, 1e-8)
        assert report.passed
        assert report.samples == 0

    @pytest.mark.parametrize("conic", [np.diag([-0.25, -0.25, 1.0]), np.diag([-2.0, -1.0, 1.0])])
    def test_biduality(self, conic):
        assert check_biduality(ConicMatrix(conic), 1e-11).passed

    def test_biduality_of_random_conic(self):
        conic = conic_of(pencil_determinant(hermitian_parts(random_matrix(2, 12))))
        assert check_biduality(conic, 1e-11).passed


class TestHullContainment:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_random(self, n):
        a = random_matrix(n, 70 + n)
        report = check_hull_containment(a, 180, 500, 1, 1e-8 * (1 + a.frobenius_norm()))
        assert report.passed
        assert report.samples == 500 + n
        assert "hull has" in report.details

    def test_eigenvalue_outside_hull_fails(self, triangular_b2, monkeypatch):
        monkeypatch.setattr(verify, "convex_hull", lambda points: ConvexPolygon((0j,)))
        report = check_hull_containment(triangular_b2, 90, 200, 1, 1e-8)
        assert not report.passed
        assert abs(report.max_deviation - 1) <= 1e-12

    def test_normal_spectrum_inside_hull(self):
        a = random_normal_matrix(4, 5)
        report = check_hull_containment(a, 360, 500, 2, 1e-8 * (1 + a.frobenius_norm()))
        assert report.passed

    def test_threads(self, random_3x3):
        serial = check_hull_containment(random_3x3, 90, 200, 2, 1e-8)
        threaded = check_hull_containment(random_3x3, 90, 200, 2, 1e-8, workers=3)
        assert serial == threaded


@pytest.fixture
def suite():
    return VerificationSuite(grid=90, samples=500)


class TestVerificationSuite:
    def test_golden(self, suite):
        reports = suite.run_golden()
        assert len(reports) == 9
        assert all(r.name.startswith("golden:") for r in reports)
        assert "golden:triangular_b=5" in [r.name for r in reports]
        assert suite.all_passed

    def test_run_matrix_ellipse(self, suite, triangular_b2):
        names = [r.name for r in suite.run_matrix(triangular_b2)]
        assert "input:dual_conic" in names
        assert "input:biduality" in names
        assert "input:normal_case" not in names
        assert names[-1] == "input:hull_containment"
        assert suite.all_passed

    def test_run_matrix_segment(self, suite, segment):
        names = [r.name for r in suite.run_matrix(segment, label="segment")]
        assert "segment:normal_case" in names
        assert "segment:dual_conic" not in names
        assert suite.all_passed

    def test_run_matrix_circle(self, suite, nilpotent):
        suite.run_matrix(nilpotent)
        assert suite.all_passed

    def test_run_matrix_larger(self, suite, random_3x3):
        names = [r.name for r in suite.run_matrix(random_3x3)]
        assert names == ["input:tangential_roots", "input:tangency_points", "input:hull_containment"]
        assert suite.all_passed

    def test_run_random(self, suite):
        reports = suite.run_random(3)
        assert {r.name for r in reports} == {
            "random:containment", "random:support_match", "random:affine_covariance",
            "random:unitary_invariance", "random:dual_conic", "random:schur_reduction", "random:normal_case",
        }
        assert all("worst seed" in r.details for r in reports)
        assert suite.all_passed

    def test_run_random_skips_dual_conic_without_interior(self, suite, monkeypatch):
        monkeypatch.setattr(verify, "random_matrix", lambda n, seed: SquareComplexMatrix.diagonal([seed, 2j]))
        names = {r.name for r in suite.run_random(2)}
        assert "random:dual_conic" not in names
        assert "random:containment" in names
        assert suite.all_passed

    def test_run_random_logs_aggregates_only(self, suite, caplog):
        caplog.set_level(logging.DEBUG, logger="verify")
        suite.run_random(3)
        checks = [r for r in caplog.records if r.name == "verify" and r.getMessage().startswith("Check ")]
        assert len(checks) == 7
        assert logging.getLogger("verify").level == logging.DEBUG

    def test_run_matrix_tiny_segment(self, suite):
        suite.run_matrix(SquareComplexMatrix.diagonal([0, 1e-6]), label="tiny")
        assert suite.all_passed

    def test_reports_accumulate(self, suite, nilpotent):
        suite.run_golden()
        suite.run_matrix(nilpotent)
        frame = suite.summary_frame()
        assert list(frame.columns) == ["name", "passed", "max_deviation", "tolerance", "samples", "details"]
        assert len(frame) == len(suite.reports)
        assert frame["passed"].all()

    def test_empty_suite(self):
        empty = VerificationSuite()
        assert empty.all_passed
        assert empty.summary_frame().empty
