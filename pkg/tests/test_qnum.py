import math
from fractions import Fraction

import pytest

from qharness.recurrences.exceptions import NumericError, ParameterRangeError, ParseError
from qharness.recurrences.qnum import (
    Mode,
    exact_sqrt,
    format_scalar,
    mode_of,
    parse_scalar,
    q_binomial,
    q_factorial,
    q_int,
    sqrt_scalar,
)


class TestQInt:
    def test_small_values(self):
        """Test [n]_q against its defining sums."""
        q = Fraction(1, 2)
        assert q_int(0, q) == 0
        assert q_int(1, q) == 1
        assert q_int(3, q) == Fraction(7, 4)
        assert q_int(5, Fraction(1)) == 5

    def test_q_minus_one_alternates(self):
        """Test [n]_{-1} alternates between 1 and 0."""
        assert [q_int(n, Fraction(-1)) for n in range(1, 7)] == [1, 0, 1, 0, 1, 0]

    def test_recursion_identity(self):
        """Test [n+1]_q = 1 + q [n]_q."""
        for q in (Fraction(-1, 3), Fraction(0), Fraction(2, 5), Fraction(1)):
            for n in range(12):
                assert q_int(n + 1, q) == 1 + q * q_int(n, q)

    def test_geometric_closed_form(self):
        """Test [n]_q = (1 - q^n) / (1 - q) for q != 1."""
        q = Fraction(3, 7)
        for n in range(10):
            assert q_int(n, q) == (1 - q**n) / (1 - q)

    def test_negative_n(self):
        """Test that a negative index is rejected."""
        with pytest.raises(ParameterRangeError):
            q_int(-1, Fraction(1, 2))


class TestQFactorialAndBinomial:
    def test_factorial_at_q_one(self):
        """Test [n]_1! = n!."""
        assert [q_factorial(n, Fraction(1)) for n in range(6)] == [math.factorial(n) for n in range(6)]

    def test_binomial_at_q_one(self):
        """Test the q-binomial reduces to the ordinary binomial at q = 1."""
        for n in range(8):
            for k in range(n + 1):
                assert q_binomial(n, k, Fraction(1)) == math.comb(n, k)

    def test_binomial_symmetry_and_factorial_ratio(self):
        """Test symmetry in k and agreement with the factorial ratio."""
        q = Fraction(2, 3)
        for n in range(7):
            for k in range(n + 1):
                value = q_binomial(n, k, q)
                assert value == q_binomial(n, n - k, q)
                assert value == q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))

    def test_binomial_outside_range(self):
        """Test the q-binomial vanishes unless 0 <= k <= n."""
        assert q_binomial(3, 4, Fraction(1, 2)) == 0
        assert q_binomial(3, -1, Fraction(1, 2)) == 0

    def test_binomial_at_q_minus_one(self):
        """Test the q-Pascal construction stays finite at q = -1."""
        assert q_binomial(4, 2, Fraction(-1)) == 2
        assert q_binomial(3, 1, Fraction(-1)) == 1


class TestExactFloatAgreement:
    @pytest.mark.parametrize("q", [Fraction(1, 3), Fraction(-2, 5), Fraction(7, 8)])
    def test_q_int_and_factorial(self, q):
        """Test float evaluation tracks the exact value to 1e-12 relative for n <= 64."""
        for n in range(65):
            for f in (q_int, q_factorial):
                exact = float(f(n, q))
                assert abs(f(n, float(q)) - exact) <= 1e-12 * max(1.0, abs(exact))

    @pytest.mark.parametrize("q", [Fraction(1, 3), Fraction(-2, 5), Fraction(7, 8)])
    def test_q_binomial(self, q):
        """Test the float q-binomial tracks the exact one up to n = 64."""
        for n in (8, 33, 64):
            for k in range(0, n + 1, max(1, n // 8)):
                exact = float(q_binomial(n, k, q))
                assert abs(q_binomial(n, k, float(q)) - exact) <= 1e-12 * max(1.0, abs(exact))


class TestScalars:
    def test_parse_rationals_and_decimals(self):
        """Test literals parse exactly in exact mode."""
        assert parse_scalar("1/3") == Fraction(1, 3)
        assert parse_scalar("0.9") == Fraction(9, 10)
        assert parse_scalar(" -2 ") == Fraction(-2)
        assert parse_scalar("1/4", Mode.FLOAT) == 0.25

    def test_parse_rejects_garbage(self):
        """Test malformed literals raise ParseError."""
        for text in ("abc", "1/0", "", "1//2"):
            with pytest.raises(ParseError):
                parse_scalar(text)

    def test_format_is_lossless(self):
        """Test rationals serialize as p/q strings and parse back to the same value."""
        value = Fraction(-22, 7)
        assert format_scalar(value) == "-22/7"
        assert parse_scalar(format_scalar(value)) == value
        assert format_scalar(0.5) == 0.5
        assert format_scalar(None) is None

    def test_non_finite_float(self):
        """Test that NaN is surfaced as NumericError."""
        with pytest.raises(NumericError):
            format_scalar(float("nan"))

    def test_square_roots(self):
        """Test exact square roots where they exist and float fallback otherwise."""
        assert exact_sqrt(Fraction(9, 16)) == Fraction(3, 4)
        assert exact_sqrt(Fraction(2)) is None
        assert sqrt_scalar(Fraction(1, 4)) == Fraction(1, 2)
        assert sqrt_scalar(Fraction(2)) == pytest.approx(math.sqrt(2))
        with pytest.raises(ParameterRangeError):
            sqrt_scalar(Fraction(-1))

    def test_mode_of(self):
        """Test a single float switches the mode."""
        assert mode_of(Fraction(1), Fraction(2)) is Mode.EXACT
        assert mode_of(Fraction(1), 2.0) is Mode.FLOAT
