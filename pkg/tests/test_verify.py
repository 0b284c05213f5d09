import random
from fractions import Fraction

import pytest

from qharness.cli import verify
from qharness.cli.verify import SUITES, favard_points, run_verify, strict_point
from qharness.recurrences.params import below_lower_branch
from qharness.recurrences.system_solver import reconstruct_six_sequences


class TestSuites:
    @pytest.mark.parametrize("suite", SUITES)
    def test_suite_passes(self, suite):
        """Test each suite passes on a few seeded points."""
        summary = run_verify(suite, seed=1, N=10, points=3)
        assert summary.ok
        result = summary.suites[0]
        assert result.suite == suite and result.checked > 0 and result.failed == 0
        assert result.first_counterexample is None

    def test_all(self):
        """Test the combined run reports every suite in a fixed order."""
        summary = run_verify("all", seed=0, N=8, points=2)
        assert [r.suite for r in summary.suites] == list(SUITES)
        assert summary.ok

    def test_deterministic(self):
        """Test the same seed gives the same summary."""
        first = run_verify("appendix", seed=42, N=8, points=4)
        assert run_verify("appendix", seed=42, N=8, points=4) == first

    def test_corrupted_bundle_reported(self, monkeypatch):
        """Test a broken beta_2 fails the residual suite and names the equation."""

        def corrupted(p, N):
            bundle = reconstruct_six_sequences(p, N)
            bundle.beta[2] = bundle.beta[2] + 1
            return bundle

        monkeypatch.setattr(verify, "reconstruct_six_sequences", corrupted)
        summary = run_verify("residuals", seed=5, N=6, points=3)
        result = summary.suites[0]
        assert not summary.ok and result.failed >= 1
        counterexample = result.first_counterexample
        assert counterexample["equation"] in (1, 3, 5)
        assert counterexample["n"] <= 2


class TestPoints:
    def test_strict_point(self):
        """Test generated points sit strictly below the lower branch."""
        rng = random.Random(7)
        for _ in range(20):
            p = strict_point(rng)
            assert below_lower_branch(p.q, p.sigma_tau)
            assert p.sigma.denominator in (1, 2, 4, 8)

    def test_favard_points_include_failures(self):
        """Test the Favard suite always carries a negative-chi and an oscillatory point."""
        points = favard_points(random.Random(0), 2)
        assert len(points) == 5
        assert points[0].eta == -2 and points[1].q == Fraction(9, 10)
