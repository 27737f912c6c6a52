"""Tests for the verification suites."""

import pytest

from calogero_sphere.errors import InvalidParameterError
from calogero_sphere.verification import (
    DEFAULT_TOLERANCES,
    VerificationReport,
    run_suite,
    verify_roots,
)

pytestmark = pytest.mark.integration


class TestRootsSuite:
    """Test the deterministic roots suite."""

    @pytest.mark.parametrize("n", [2, 3, 4, 8])
    def test_passes(self, n):
        """Test the root geometry holds for several N."""
        report = verify_roots(n)

        assert report.passed
        assert report.details["roots"] == n * (n - 1) // 2
        assert max(report.residuals.values()) < 1e-12

    def test_cuboctahedron_counts(self):
        """Test the N=4 report carries the cuboctahedron structure."""
        report = verify_roots(4)

        assert report.details["cuboctahedron"] == {
            "vertices": 12,
            "edges": 24,
            "triangles": 8,
            "squares": 6,
        }
        assert "square_normals" in report.residuals

    def test_report_serializes(self):
        """Test as_dict yields plain JSON-ready data."""
        data = verify_roots(3).as_dict()

        assert data["suite"] == "roots"
        assert data["passed"] is True


class TestRandomizedSuites:
    """Test the seeded suites through run_suite."""

    def test_identities_n3(self):
        """Test the N=3 identities and the Higgs split pass."""
        report = run_suite("identities_n3", samples=50, seed=1)

        assert report.passed, report.residuals
        assert "higgs_split" in report.residuals

    def test_angular_n4_matches_one_combination(self):
        """Test exactly the rederived a-frame form with the standard kinetic term matches."""
        report = run_suite("angular_n4", samples=50, seed=2)

        assert report.passed, report.residuals
        assert report.details["z4_matches"] == [
            {"form": "rederived", "kinetic_coefficient_mode": "standard_half"}
        ]
        assert report.details["z4_matched_mode"] == "standard_half"
        assert report.details["s23_as_printed_matches"] is False

    def test_brackets(self):
        """Test the bracket algebra and chart canonicity pass."""
        report = run_suite("brackets", samples=20, seed=3)

        assert report.passed, report.residuals
        assert report.details["convention"] == "momentum_first"
        assert report.residuals["r1_analytic"] < 1e-7
        assert "canonical_a_frame" in report.residuals

    def test_ksq(self):
        """Test the algebraic relation and the solve_I round trip pass."""
        report = run_suite("ksq", samples=200, seed=4)

        assert report.passed, report.residuals
        assert report.residuals["worked_point"] < 1e-12

    def test_impossible_tolerance_fails(self):
        """Test a tolerance below rounding marks the suite failed."""
        report = run_suite("brackets", samples=5, seed=5, tol=1e-30)

        assert not report.passed
        assert report.details["failed"]

    def test_reproducible(self):
        """Test the same seed gives the same residuals."""
        first = run_suite("ksq", samples=20, seed=6)
        second = run_suite("ksq", samples=20, seed=6)

        assert first.residuals == second.residuals


class TestRunSuiteValidation:
    """Test run_suite argument checks."""

    @pytest.mark.parametrize("suite", ["identities_n3", "angular_n4", "brackets", "ksq"])
    def test_seed_required(self, suite):
        """Test randomized suites refuse to run without a seed."""
        with pytest.raises(InvalidParameterError, match="seed"):
            run_suite(suite, samples=5)

    def test_unknown_suite(self):
        """Test an unknown suite name raises."""
        with pytest.raises(InvalidParameterError):
            run_suite("everything", seed=1)

    @pytest.mark.parametrize("kwargs", [{"tol": 0.0}, {"samples": 0}])
    def test_bad_numbers(self, kwargs):
        """Test non-positive tolerance or sample count raises."""
        with pytest.raises(InvalidParameterError):
            run_suite("ksq", seed=1, **kwargs)

    def test_roots_needs_no_seed(self):
        """Test the deterministic suite runs without a seed and uses its default tolerance."""
        report = run_suite("roots", n=5)

        assert isinstance(report, VerificationReport)
        assert report.tol == DEFAULT_TOLERANCES["roots"]
