"""The lambda sequence and the Mobius map driving it.

lambda_0 = 0 and lambda_{n+1} = f(lambda_n) with f(x) = (1 + q x) / (1 - z x).
Regime boundaries sit at q = 1 +/- 2 sqrt(z); every comparison against them
is made on (1 - q)^2 - 4 z and the sign of 1 - q, so rational inputs classify
exactly.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from .exceptions import ParameterRangeError, PoleError, RegimeError
from .params import MobiusParams, below_lower_branch, on_lower_branch, within_upper_branch
from .qnum import Scalar, ensure_finite, sqrt_scalar

logger = logging.getLogger("qharness")


class RegimeTag(str, Enum):
    STRICT_ADMISSIBLE = "StrictAdmissible"
    BOUNDARY = "Boundary"
    OSCILLATORY = "Oscillatory"
    OUT_OF_RANGE = "OutOfRange"


@dataclass
class LambdaSeq:
    values: List[Scalar]
    params: MobiusParams
    truncated_at: Optional[int] = None

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, n):
        return self.values[n]

    @property
    def horizon(self) -> int:
        return len(self.values) - 1


def lambda_step(x: Scalar, p: MobiusParams) -> Scalar:
    """One application of f(x|q,z) = (1 + q x) / (1 - z x)."""
    denominator = 1 - p.z * x
    if denominator == 0:
        raise PoleError(f"Mobius pole at x={x} for q={p.q}, z={p.z}")
    return ensure_finite((1 + p.q * x) / denominator)


def lambda_sequence(p: MobiusParams, N: int) -> LambdaSeq:
    """lambda_0..lambda_N; stops early and records the index if a pole is hit."""
    if N < 0:
        raise ParameterRangeError(f"Horizon must be non-negative, got {N}")
    values = [p.q * 0]
    for n in range(N):
        try:
            values.append(lambda_step(values[-1], p))
        except PoleError:
            logger.warning(f"Lambda iteration hit the Mobius pole at n={n} (q={p.q}, z={p.z})")
            return LambdaSeq(values=values, params=p, truncated_at=n)
    return LambdaSeq(values=values, params=p)


def regime_classify(p: MobiusParams) -> RegimeTag:
    """Regime of the lambda iteration; q = -1 is out of range since f is then an involution."""
    if p.q <= -1 or not within_upper_branch(p.q, p.z):
        return RegimeTag.OUT_OF_RANGE
    if below_lower_branch(p.q, p.z):
        return RegimeTag.STRICT_ADMISSIBLE
    if on_lower_branch(p.q, p.z):
        return RegimeTag.BOUNDARY
    return RegimeTag.OSCILLATORY


def _discriminant_root(p: MobiusParams) -> Scalar:
    return sqrt_scalar((1 - p.q) ** 2 - 4 * p.z)


def fixed_point(p: MobiusParams) -> Optional[Scalar]:
    """y(q,z) = 2 / (1 - q + sqrt((1-q)^2 - 4z)), or None when it does not exist.

    y is a root of z y^2 - (1 - q) y + 1 = 0, the quadratic obtained from
    y (1 - z y) = 1 + q y.
    """
    if (1 - p.q) ** 2 - 4 * p.z < 0:
        return None
    denominator = 1 - p.q + _discriminant_root(p)
    if denominator == 0:
        return None
    return 2 / denominator


def fixed_point_residual(p: MobiusParams, y: Scalar) -> Scalar:
    return p.z * y * y - (1 - p.q) * y + 1


def contraction_constant(p: MobiusParams) -> Scalar:
    """Lipschitz-type constant of f around its fixed point in the strict regime.

    For q + z > 0 this is (q + z) / (1 - sqrt(z))^2 and bounds the whole
    orbit. For q + z < 0 the returned |q| max(|1+q|/2, (1-q)/2) is a coarse
    estimate; it can sit below the true local rate, see
    ``asymptotic_rate``.
    """
    if p.q <= -1 or not below_lower_branch(p.q, p.z):
        raise RegimeError(f"contraction_constant requires -1 < q < 1 - 2*sqrt(z), got q={p.q}, z={p.z}")
    total = p.q + p.z
    if total > 0:
        return total / (1 - sqrt_scalar(p.z)) ** 2
    if total == 0:
        return total
    return abs(p.q) * max(abs(1 + p.q) / 2, (1 - p.q) / 2)


def asymptotic_rate(p: MobiusParams) -> Scalar:
    """|f'(y)| = |q + z| / (1 - z y)^2 at the fixed point y."""
    y = fixed_point(p)
    if y is None:
        raise RegimeError(f"No fixed point for q={p.q}, z={p.z}")
    return abs(p.q + p.z) / (1 - p.z * y) ** 2


def limit_ratio_D(p: MobiusParams) -> Scalar:
    """D(q,z) = 4 (q + z) / (1 + q + sqrt((1-q)^2 - 4z))^2, the limit of kappa_n."""
    if p.q <= -1 or not (below_lower_branch(p.q, p.z) or on_lower_branch(p.q, p.z)):
        raise RegimeError(f"limit_ratio_D requires -1 < q <= 1 - 2*sqrt(z), got q={p.q}, z={p.z}")
    denominator = (1 + p.q + _discriminant_root(p)) ** 2
    if denominator == 0:
        raise PoleError(f"limit_ratio_D undefined at q={p.q}, z={p.z}")
    return 4 * (p.q + p.z) / denominator


def sign_changes(seq: LambdaSeq) -> int:
    return sum(1 for a, b in zip(seq.values, seq.values[1:]) if a * b < 0)


def lambda_range_ok(seq: LambdaSeq) -> bool:
    """Every lambda_n is non-negative and sqrt(z) lambda_n < 1 (checked as z lambda_n^2 < 1)."""
    z = seq.params.z
    return all(lam >= 0 and z * lam * lam < 1 for lam in seq.values)


def recursion_residual(seq: LambdaSeq) -> Scalar:
    """max |lambda_{n+1} (1 - z lambda_n) - (1 + q lambda_n)| over the sequence."""
    p = seq.params
    residuals = [
        abs(nxt * (1 - p.z * cur) - (1 + p.q * cur))
        for cur, nxt in zip(seq.values, seq.values[1:])
    ]
    return max(residuals, default=p.q * 0)
