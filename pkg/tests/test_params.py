from fractions import Fraction

import pytest

from qharness.recurrences.exceptions import ParameterRangeError, ParseError
from qharness.recurrences.params import (
    MobiusParams,
    QHParams,
    below_lower_branch,
    on_lower_branch,
    within_upper_branch,
)
from qharness.recurrences.qnum import Mode


class TestQHParams:
    def test_coercion_from_strings(self):
        """Test that literals are parsed into exact rationals."""
        p = QHParams(sigma="1/4", tau="0.5", q="-1/2")
        assert p.sigma == Fraction(1, 4)
        assert p.tau == Fraction(1, 2)
        assert p.q == Fraction(-1, 2)
        assert p.sigma_tau == Fraction(1, 8)
        assert p.mode is Mode.EXACT

    def test_float_mode(self):
        """Test float mode stores floats."""
        p = QHParams(sigma="1/4", q="1/2", mode="float")
        assert p.mode is Mode.FLOAT
        assert isinstance(p.sigma, float) and p.sigma == 0.25

    def test_negative_sigma_or_tau(self):
        """Test that negative sigma or tau is rejected."""
        with pytest.raises(ParameterRangeError):
            QHParams(sigma=-1)
        with pytest.raises(ParameterRangeError):
            QHParams(tau="-1/8")

    def test_q_bounds(self):
        """Test the q range [-1, 1 + 2 sqrt(sigma tau)]."""
        with pytest.raises(ParameterRangeError):
            QHParams(q=2)
        with pytest.raises(ParameterRangeError):
            QHParams(q="-3/2")
        # 1 + 2 sqrt(1/4) = 2 is the largest admissible q for sigma tau = 1/4
        assert QHParams(sigma="1/2", tau="1/2", q=2).q == 2
        with pytest.raises(ParameterRangeError):
            QHParams(sigma="1/2", tau="1/2", q="201/100")

    def test_parse_error_propagates(self):
        """Test malformed literals raise ParseError."""
        with pytest.raises(ParseError):
            QHParams(q="half")

    def test_replace_and_to_dict(self):
        """Test replace keeps other fields and to_dict serializes losslessly."""
        p = QHParams(sigma="1/3", theta=2)
        r = p.replace(q=Fraction(1, 2))
        assert r.sigma == Fraction(1, 3) and r.q == Fraction(1, 2) and r.theta == 2
        assert r.to_dict() == {"sigma": "1/3", "tau": "0", "theta": "2", "eta": "0", "q": "1/2"}
        assert p.mu == (2, 0)

    def test_frozen(self):
        """Test parameters are immutable."""
        p = QHParams()
        with pytest.raises(Exception):
            p.q = Fraction(1)


class TestBranches:
    def test_branch_predicates(self):
        """Test the exact comparisons against q = 1 +/- 2 sqrt(z)."""
        z = Fraction(1, 4)
        assert below_lower_branch(Fraction(-1, 4), z)
        assert not below_lower_branch(Fraction(0), z)
        assert on_lower_branch(Fraction(0), z)
        assert not on_lower_branch(Fraction(2), z)
        assert within_upper_branch(Fraction(2), z)
        assert not within_upper_branch(Fraction(21, 10), z)

    def test_mobius_params(self):
        """Test MobiusParams rejects a negative z."""
        assert MobiusParams(q=Fraction(1, 2), z=Fraction(0)).mode is Mode.EXACT
        with pytest.raises(ParameterRangeError):
            MobiusParams(q=Fraction(0), z=Fraction(-1))
