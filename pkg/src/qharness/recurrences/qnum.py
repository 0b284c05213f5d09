"""q-deformed integers and the two scalar arithmetic modes.

Every numeric value in qharness is either a ``fractions.Fraction`` (exact
mode) or a ``float`` (float mode). Python's numeric tower does the rest:
Fraction op Fraction stays exact, anything touching a float becomes float.
"""
import math
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .exceptions import NumericError, ParameterRangeError, ParseError

Scalar = Union[Fraction, float]


class Mode(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


def parse_scalar(text: Union[str, int, float, Fraction], mode: Mode = Mode.EXACT) -> Scalar:
    """Parse a literal such as ``"1/3"``, ``"0.9"`` or ``"-2"`` into a Scalar.

    Decimals are read exactly, so ``"0.9"`` becomes ``Fraction(9, 10)`` in
    exact mode.
    """
    if isinstance(text, bool):
        raise ParseError(f"Not a number: {text!r}")
    if isinstance(text, float) and mode is Mode.EXACT:
        if not math.isfinite(text):
            raise ParseError(f"Not a finite number: {text!r}")
        value = Fraction(text).limit_denominator(10**12)
    else:
        try:
            value = Fraction(text.strip() if isinstance(text, str) else text)
        except (ValueError, ZeroDivisionError, TypeError) as e:
            raise ParseError(f"Invalid scalar literal {text!r}: {e}") from e
    return to_mode(value, mode)


def to_mode(value: Union[int, Fraction, float], mode: Mode) -> Scalar:
    """Coerce a number into the representation used by ``mode``."""
    if mode is Mode.FLOAT:
        return ensure_finite(float(value))
    if isinstance(value, float):
        return Fraction(ensure_finite(value))
    return Fraction(value)


def mode_of(*values) -> Mode:
    """Float if any of the values is a float, exact otherwise."""
    return Mode.FLOAT if any(isinstance(v, float) for v in values) else Mode.EXACT


def format_scalar(value: Optional[Scalar]) -> Union[str, float, None]:
    """Serialize a Scalar losslessly: rationals as ``"p/q"`` strings, floats as numbers."""
    if value is None:
        return None
    if isinstance(value, float):
        return ensure_finite(value)
    return str(Fraction(value))


def ensure_finite(value: Scalar) -> Scalar:
    """Raise NumericError if a float value is NaN or infinite."""
    if isinstance(value, float) and not math.isfinite(value):
        raise NumericError(f"Non-finite value encountered: {value}")
    return value


def exact_sqrt(value: Fraction) -> Optional[Fraction]:
    """Rational square root of ``value`` if one exists, else None."""
    value = Fraction(value)
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt_scalar(value: Scalar) -> Scalar:
    """Square root, exact when the argument is a rational square."""
    if value < 0:
        raise ParameterRangeError(f"Square root of negative value {value}")
    if not isinstance(value, float):
        root = exact_sqrt(value)
        if root is not None:
            return root
    return math.sqrt(value)


def sign(value: Scalar) -> int:
    return (value > 0) - (value < 0)


def q_int(n: int, q: Scalar) -> Scalar:
    """[n]_q = 1 + q + ... + q^(n-1), with [0]_q = 0."""
    if n < 0:
        raise ParameterRangeError(f"q_int requires n >= 0, got {n}")
    total = q * 0
    power = q * 0 + 1
    for _ in range(n):
        total += power
        power *= q
    return total


def q_factorial(n: int, q: Scalar) -> Scalar:
    """[n]_q! = [1]_q [2]_q ... [n]_q, with [0]_q! = 1."""
    if n < 0:
        raise ParameterRangeError(f"q_factorial requires n >= 0, got {n}")
    result = q * 0 + 1
    for j in range(1, n + 1):
        result *= q_int(j, q)
    return result


def q_binomial(n: int, k: int, q: Scalar) -> Scalar:
    """Gaussian binomial coefficient; 0 unless n >= k >= 0.

    Built row by row from the q-Pascal rule
    [n, k] = [n-1, k-1] + q^k [n-1, k], which needs no division and so stays
    valid where some [j]_q vanish (q = -1).
    """
    zero = q * 0
    if not 0 <= k <= n:
        return zero
    row = [zero + 1]
    for m in range(1, n + 1):
        new_row = [zero + 1]
        power = q
        for j in range(1, m):
            new_row.append(row[j - 1] + power * row[j])
            power *= q
        new_row.append(zero + 1)
        row = new_row
    return row[k]
