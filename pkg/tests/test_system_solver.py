from fractions import Fraction

import numpy as np
import pytest

from qharness.recurrences.exceptions import ParameterRangeError, RegimeError, SingularMatrixError
from qharness.recurrences.lambda_engine import limit_ratio_D
from qharness.recurrences.params import QHParams
from qharness.recurrences.qnum import q_int
from qharness.recurrences.system_solver import (
    chi_denominators,
    chi_limit,
    dn_matrix_sequence,
    equation_residuals,
    firsttwo_residual,
    gamma_delta_closed_sum,
    gamma_delta_sequence,
    kappa_sequence,
    lambda_values,
    quadratic_form_value,
    reconstruct_six_sequences,
    require_admissible,
    residuals_system,
    solve_2x2,
    solve_table,
    step_matrices,
)


class TestSolveTable:
    def test_q_wiener(self, q_wiener):
        """Test chi_n = [n]_q and vanishing drift sequences for the q-Wiener point."""
        table = solve_table(q_wiener, 8)
        assert table.chi[:3] == [1, Fraction(3, 2), Fraction(7, 4)]
        assert table.chi == [q_int(n, q_wiener.q) for n in range(1, 9)]
        assert all(g == 0 for g in table.gamma) and all(d == 0 for d in table.delta)

    def test_poisson(self, poisson):
        """Test lambda_n = n, delta_n = n, chi_n = n for the Poisson point."""
        table = solve_table(poisson, 10)
        assert table.lam == list(range(11))
        assert table.delta == list(range(11))
        assert table.gamma == [0] * 11
        assert table.chi == list(range(1, 11))

    def test_horizons(self, q_wiener):
        """Test N = 0 gives an empty chi list and N < 0 is rejected."""
        table = solve_table(q_wiener, 0)
        assert table.lam == [0] and table.chi == []
        with pytest.raises(ParameterRangeError):
            solve_table(q_wiener, -1)
        with pytest.raises(IndexError):
            table.chi_at(1)

    def test_q_minus_sigma_tau_chi(self):
        """Test chi_2 = 4/3 and chi_n = 16/9 for sigma = tau = 1/2, q = -1/4."""
        p = QHParams(sigma="1/2", tau="1/2", q="-1/4")
        table = solve_table(p, 6)
        assert table.chi == [1, Fraction(4, 3)] + [Fraction(16, 9)] * 4
        assert chi_limit(p) == Fraction(16, 9)

    def test_closed_sum_matches_stepwise(self, admissible_points):
        """Test the explicit product sum reproduces the stepwise vector solve."""
        for p in admissible_points[:4]:
            assert gamma_delta_closed_sum(p, 10) == gamma_delta_sequence(p, 10)


class TestResiduals:
    def test_master_residual_exact(self, admissible_sample):
        """Test all five equations hold exactly for reconstructed sequences on 100 points."""
        for p in admissible_sample(100):
            bundle = reconstruct_six_sequences(p, 32)
            assert residuals_system(bundle, p, 32) == 0
            assert firsttwo_residual(bundle, p, lambda_values(p, 32)) == 0

    def test_master_residual_float(self, admissible_points):
        """Test float mode keeps residuals at rounding level."""
        for p in admissible_points[:4]:
            pf = p.replace(mode="float")
            bundle = reconstruct_six_sequences(pf, 32)
            assert residuals_system(bundle, pf, 32) < 1e-8

    def test_residual_ranges(self, q_wiener):
        """Test the number of residual records per equation."""
        N = 6
        records = list(equation_residuals(reconstruct_six_sequences(q_wiener, N), q_wiener, N))
        counts = {eq: sum(1 for r in records if r.equation == eq) for eq in range(1, 6)}
        assert counts == {1: N, 2: N - 1, 3: N, 4: N, 5: N - 1}

    def test_perturbed_bundle_fails(self):
        """Test that corrupting beta_2 is detected."""
        p = QHParams(sigma="1/2", tau="1/3", theta="1/4", eta="-1/2", q=0)
        bundle = reconstruct_six_sequences(p, 8)
        bundle.beta[2] = Fraction(2)
        assert residuals_system(bundle, p, 8) != 0
        first = next(r for r in equation_residuals(bundle, p, 8) if r.value != 0)
        assert first.n <= 2

    def test_dn_matrices(self, admissible_points):
        """Test (gamma_n, delta_n) = D_n mu and the form value through D_n."""
        for p in admissible_points[:4]:
            dn = dn_matrix_sequence(p, 8)
            assert dn.residual == 0
            assert all(x == 0 for x in dn.matrices[0].flatten())
            pairs = gamma_delta_sequence(p, 8)
            for d_n, (g, d) in zip(dn.matrices, pairs):
                v = d_n @ np.array(p.mu, dtype=object)
                assert (v[0], v[1]) == (g, d)


class TestLimits:
    @pytest.mark.parametrize("st", [0, 1 / 8, 1 / 4 - 1 / 64])
    def test_kappa_and_chi_limits(self, st):
        """Test kappa_n -> D and chi_n -> chi_limit for theta = eta = 0 in float mode."""
        root = st**0.5
        for q in (-0.9, -0.5, 0.0, 0.5 * (1 - 2 * root)):
            p = QHParams(sigma=st, tau=1, q=q, mode="float") if st else QHParams(q=q, mode="float")
            N = 420
            lam = lambda_values(p, N)
            kappas = kappa_sequence(p, lam, N)
            D = limit_ratio_D(p.mobius)
            assert all(abs(k - D) <= 1e-8 for k in kappas[399:])
            table = solve_table(p, N)
            limit = chi_limit(p)
            assert all(abs(c - limit) <= 1e-6 for c in table.chi[399:])

    def test_chi_limit_without_sigma_tau(self):
        """Test chi_limit = 1/(1 - q) exactly when sigma tau = 0."""
        assert chi_limit(QHParams(q="1/3")) == Fraction(3, 2)
        assert chi_limit(QHParams(sigma=1, q="-1/2")) == Fraction(2, 3)

    def test_chi_limit_regime(self):
        """Test chi_limit refuses drift and the boundary."""
        with pytest.raises(RegimeError):
            chi_limit(QHParams(theta=1, q="1/2"))
        with pytest.raises(RegimeError):
            chi_limit(QHParams(sigma="1/2", tau="1/2", q=0))


class TestSolve2x2:
    def test_exact_and_float(self):
        """Test both arithmetic paths agree on a regular system."""
        a = np.array([[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]], dtype=object)
        x = solve_2x2(a, np.array([Fraction(3), Fraction(5)], dtype=object))
        assert list(x) == [Fraction(4, 5), Fraction(7, 5)]
        xf = solve_2x2(a.astype(float), np.array([3.0, 5.0]))
        assert xf == pytest.approx([0.8, 1.4])

    def test_singular(self):
        """Test a singular step matrix raises SingularMatrixError."""
        a = np.array([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], dtype=object)
        with pytest.raises(SingularMatrixError):
            solve_2x2(a, np.array([Fraction(1), Fraction(1)], dtype=object))
        with pytest.raises(SingularMatrixError):
            solve_2x2(a.astype(float), np.array([1.0, 1.0]))


class TestStepMatrices:
    def test_no_interaction(self):
        """Test sigma = tau = 0 with lambda_n = [n]_q gives A = I, B = q I, C = [[0, 1], [1, 0]]."""
        q = Fraction(1, 3)
        p = QHParams(q=q)
        for n in range(6):
            m = step_matrices(q_int(n, q), p)
            assert m.A.tolist() == [[1, 0], [0, 1]]
            assert m.B.tolist() == [[q, 0], [0, q]]
            assert m.C.tolist() == [[0, 1], [1, 0]]

    def test_sigma_zero_at_lambda_one(self):
        """Test A = [[1, 0], [-tau, 1]] for sigma = 0 and lambda_n = 1."""
        m = step_matrices(Fraction(1), QHParams(tau="1/2"))
        assert m.A.tolist() == [[1, 0], [Fraction(-1, 2), 1]]
        assert m.C.tolist() == [[0, 1], [1, Fraction(1, 2)]]

    def test_b_vanishes_when_q_is_minus_sigma_tau(self):
        """Test B_n = 0 for q = -sigma tau at lambda_n = 1."""
        m = step_matrices(Fraction(1), QHParams(sigma="1/2", tau="1/2", q="-1/4"))
        assert m.B.tolist() == [[0, 0], [0, 0]]
        assert m.A.tolist() == [[Fraction(3, 4), Fraction(-3, 8)], [Fraction(-3, 8), Fraction(3, 4)]]


class TestQuadraticForm:
    def test_without_drift(self):
        """Test the form is 1 at the origin when theta = eta = 0."""
        assert quadratic_form_value(QHParams(sigma="1/3", tau="1/5", q="-1/2"), Fraction(0), Fraction(0)) == 1

    def test_no_interaction_driver(self):
        """Test g = [n]_q eta, d = [n]_q theta gives 1 + theta eta [n]_q (1 + q^n)."""
        q = Fraction(1, 3)
        p = QHParams(theta="1/2", eta=-3, q=q)
        for n in range(11):
            qn = q_int(n, q)
            value = quadratic_form_value(p, qn * p.eta, qn * p.theta)
            assert value == 1 + p.theta * p.eta * qn * (1 + q**n)

    def test_q_sigma_zero_driver(self):
        """Test g = eta, d = theta + 2 eta tau gives 1 + theta eta + tau eta^2 when q = sigma = 0."""
        p = QHParams(tau="1/2", theta=1, eta=2)
        value = quadratic_form_value(p, p.eta, p.theta + 2 * p.eta * p.tau)
        assert value == 1 + p.theta * p.eta + p.tau * p.eta**2 == 5

    def test_dn_without_interaction(self):
        """Test D_n = [n]_q [[0, 1], [1, 0]] when sigma = tau = 0."""
        q = Fraction(1, 3)
        dn = dn_matrix_sequence(QHParams(theta="1/2", eta=-3, q=q), 6)
        for n, d_n in enumerate(dn.matrices):
            assert d_n.tolist() == [[0, q_int(n, q)], [q_int(n, q), 0]]


class TestKappaAndChiSigns:
    def test_first_kappa_can_be_negative(self):
        """Test kappa_1 = q / (1 - sigma tau (2 lambda_1 + q lambda_1^2)) is negative for -sigma tau < q < 0."""
        p = QHParams(sigma="1/2", tau="1/2", q="-1/8")
        kappas = kappa_sequence(p, lambda_values(p, 8), 8)
        assert kappas[0] == Fraction(-4, 17)
        assert all(k >= 0 for k in kappas[1:])

    def test_signs_on_sample(self, admissible_sample):
        """Test positive denominators, the kappa sign rule for n >= 2 and chi >= 0 without drift."""
        N = 32
        points = [p.replace(theta=0, eta=0) for p in admissible_sample(300, seed=5)]
        nonnegative = 0
        for p in points:
            lam = lambda_values(p, N)
            assert all(d > 0 for d in chi_denominators(p, lam))
            kappas = kappa_sequence(p, lam, N)
            if p.q + p.sigma_tau >= 0:
                nonnegative += 1
                assert all(k >= 0 for k in kappas[1:])
                assert all(c >= 0 for c in solve_table(p, N).chi)
            else:
                assert all(k < 0 for k in kappas)
        assert nonnegative >= 50


class TestAdmissibility:
    def test_boundary_accepted(self):
        """Test the boundary q = 1 - 2 sqrt(sigma tau) is admissible."""
        require_admissible(QHParams(sigma="1/2", tau="1/2", q=0))

    def test_oscillatory_rejected(self, oscillatory):
        """Test the six sequences and D_n are refused above the lower branch."""
        with pytest.raises(RegimeError):
            require_admissible(oscillatory)
        with pytest.raises(RegimeError):
            reconstruct_six_sequences(oscillatory, 8)
        with pytest.raises(RegimeError):
            dn_matrix_sequence(oscillatory, 8)
