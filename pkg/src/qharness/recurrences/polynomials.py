"""Rescaled martingale polynomials M_n, their Jacobi coefficients and positivity checks.

With y = x / sqrt(t) the polynomials satisfy

    y M_n = M_{n+1} + b_n(t) M_n + c_hat_n(t) M_{n-1},
    b_n(t)     = gamma_n sqrt(t) + delta_n / sqrt(t),
    c_hat_n(t) = chi_n (1 + sigma l_{n-1} t)(1 + tau l_{n-1} / t),

with M_{-1} = 0 and M_0 = 1. Polynomials are coefficient lists in ascending
powers of y.
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .exceptions import ParameterRangeError, PoleError
from .params import QHParams
from .qnum import Mode, Scalar, ensure_finite, mode_of, sign, sqrt_scalar, to_mode
from .system_solver import CoefficientTable, SequenceBundle, solve_table

logger = logging.getLogger("qharness")

Polynomial = List[Scalar]
PolySeq = List[Polynomial]

# relative band the running max of |b_n|, |c_hat_n| must stay within over the last quarter
BOUNDEDNESS_BAND = 1e-6


@dataclass
class JacobiData:
    t: Scalar
    root: Scalar
    b: List[Scalar]
    c_hat: List[Scalar]

    @property
    def N(self) -> int:
        return len(self.b) - 1


class FavardReason(NamedTuple):
    n: int
    chi_sign: int
    sigma_lambda_sign: int
    tau_lambda_sign: int


@dataclass
class FavardReport:
    ok: bool
    first_failure: Optional[int] = None
    reasons: List[FavardReason] = field(default_factory=list)


@dataclass
class BoundednessReport:
    bounded: bool
    sup_b: float
    sup_c_hat: float
    note: Optional[str] = None

    def __bool__(self) -> bool:
        return self.bounded


def _check_time(t: Scalar) -> None:
    if t <= 0:
        raise ParameterRangeError(f"Time must be positive, got t={t}")


def jacobi_data(p: QHParams, table: CoefficientTable, t: Scalar) -> JacobiData:
    """b_n(t) for n = 0..N and c_hat_n(t) for n = 1..N (c_hat[0] multiplies M_{-1} = 0)."""
    _check_time(t)
    t = to_mode(t, p.mode) if not isinstance(t, float) else t
    root = sqrt_scalar(t)
    if isinstance(root, float) and p.mode is Mode.EXACT:
        logger.warning(f"sqrt(t) is irrational for t={t}; b_n(t) is evaluated in float mode")

    b = [ensure_finite(g * root + d / root) for g, d in zip(table.gamma, table.delta)]
    c_hat = [p.q * 0]
    for n in range(1, table.N + 1):
        lam = table.lam[n - 1]
        c_hat.append(table.chi_at(n) * (1 + p.sigma * lam * t) * (1 + p.tau * lam / t))
    return JacobiData(t=t, root=root, b=b, c_hat=c_hat)


def _shift(poly: Polynomial) -> Polynomial:
    return [poly[0] * 0] + list(poly)


def _combine(left: Polynomial, right: Polynomial, scale: Scalar) -> Polynomial:
    """left - scale * right, padding the shorter list with zeros."""
    size = max(len(left), len(right))
    zero = left[0] * 0
    left = list(left) + [zero] * (size - len(left))
    right = list(right) + [zero] * (size - len(right))
    return [a - scale * b for a, b in zip(left, right)]


def m_polynomials(jd: JacobiData) -> PolySeq:
    """M_0..M_N from M_{n+1} = (y - b_n) M_n - c_hat_n M_{n-1}."""
    one = jd.b[0] * 0 + 1
    polys: PolySeq = [[one]]
    previous: Polynomial = [one * 0]
    for n in range(jd.N):
        current = polys[-1]
        nxt = _combine(_shift(current), current, jd.b[n])
        nxt = _combine(nxt, previous, jd.c_hat[n])
        previous = current
        polys.append(nxt)
    return polys


def rescaled_polynomials(bundle: SequenceBundle, t: Scalar, N: Optional[int] = None) -> PolySeq:
    """M_0..M_N rebuilt from p_n(x;t) of the original recurrence and rescaled.

    x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n-1} with a_n(t) = alpha_n t + beta_n,
    b_n(t) = gamma_n t + delta_n, c_n(t) = epsilon_n t + phi_n; then
    M_n(y) = (a_0 ... a_{n-1}) t^{-n/2} p_n(y sqrt(t)).
    """
    _check_time(t)
    N = bundle.N if N is None else N
    root = sqrt_scalar(t)
    one = bundle.beta[0] * 0 + 1
    ps: PolySeq = [[one]]
    previous: Polynomial = [one * 0]
    for n in range(N):
        a_n = bundle.alpha[n] * t + bundle.beta[n]
        if a_n == 0:
            raise PoleError(f"a_{n}(t) vanishes at t={t}")
        b_n = bundle.gamma[n] * t + bundle.delta[n]
        c_n = bundle.epsilon[n] * t + bundle.phi[n] if n > 0 else 0
        current = ps[-1]
        nxt = _combine(_combine(_shift(current), current, b_n), previous, c_n)
        previous = current
        ps.append([c / a_n for c in nxt])

    result: PolySeq = []
    leading = one
    for n, poly in enumerate(ps):
        result.append([leading * c * root ** (k - n) for k, c in enumerate(poly)])
        if n < N:
            leading *= bundle.alpha[n] * t + bundle.beta[n]
    return result


def favard_check(p: QHParams, table: CoefficientTable) -> FavardReport:
    """Positivity of c_hat_n(t) for every t > 0, decided from signs alone.

    The factor (1 + sigma l t)(1 + tau l / t) is positive for all t > 0 exactly
    when sigma l >= 0 and tau l >= 0, so the condition is
    chi_n > 0, sigma l_{n-1} >= 0, tau l_{n-1} >= 0 for 1 <= n <= N.
    """
    reasons = []
    first_failure = None
    for n in range(1, table.N + 1):
        lam = table.lam[n - 1]
        reason = FavardReason(n, sign(table.chi_at(n)), sign(p.sigma * lam), sign(p.tau * lam))
        reasons.append(reason)
        passed = reason.chi_sign > 0 and reason.sigma_lambda_sign >= 0 and reason.tau_lambda_sign >= 0
        if not passed and first_failure is None:
            first_failure = n
    return FavardReport(ok=first_failure is None, first_failure=first_failure, reasons=reasons)


def log_spaced_times(count: int = 41, low: int = -10, high: int = 10) -> List[float]:
    """``count`` log-spaced times from 2**low to 2**high."""
    return [float(t) for t in np.logspace(low, high, num=count, base=2.0)]


def favard_grid_check(p: QHParams, table: CoefficientTable, ts: Optional[Sequence[Scalar]] = None) -> FavardReport:
    """Sampling comparator for favard_check: c_hat_n(t) > 0 at every sampled t."""
    ts = log_spaced_times() if ts is None else ts
    for n in range(1, table.N + 1):
        lam = table.lam[n - 1]
        chi = table.chi_at(n)
        for t in ts:
            if not chi * (1 + p.sigma * lam * t) * (1 + p.tau * lam / t) > 0:
                return FavardReport(ok=False, first_failure=n)
    return FavardReport(ok=True)


def jacobi_matrix(jd: JacobiData, size: int) -> np.ndarray:
    """Truncated tridiagonal operator: J[m, m-1] = 1, J[m, m] = b_m, J[m, m+1] = c_hat_{m+1}."""
    values = list(jd.b[:size]) + list(jd.c_hat[: size + 1])
    dtype = float if mode_of(*values) is Mode.FLOAT else object
    zero = jd.b[0] * 0
    J = np.full((size, size), zero, dtype=dtype)
    for m in range(size):
        J[m, m] = jd.b[m]
        if m > 0:
            J[m, m - 1] = zero + 1
        if m + 1 < size:
            J[m, m + 1] = jd.c_hat[m + 1]
    return J


def moments(jd: JacobiData, k: int) -> Scalar:
    """k-th moment of the measure orthogonalizing M_n: (J^k)[0, 0] on a (k+1)x(k+1) truncation."""
    if k < 0 or k > jd.N:
        raise ParameterRangeError(f"Moment order must be within 0..{jd.N}, got {k}")
    power = np.linalg.matrix_power(jacobi_matrix(jd, k + 1), k)
    value = power[0, 0]
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    return value


def process_moment(jd: JacobiData, k: int) -> Scalar:
    """E X_t^k = t^(k/2) m_k."""
    return jd.root**k * moments(jd, k)


def _fraction_det(matrix: List[List[Fraction]]) -> Fraction:
    rows = [list(row) for row in matrix]
    size = len(rows)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] / rows[col][col]
            if factor:
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return det


def hankel_determinants(moment_values: Sequence[Scalar], order: int) -> List[Scalar]:
    """det [m_{i+j}]_{i,j=0..k} for k = 0..order; needs moments m_0..m_{2 order}."""
    if len(moment_values) < 2 * order + 1:
        raise ParameterRangeError(f"Need {2 * order + 1} moments for Hankel order {order}")
    exact = mode_of(*moment_values) is Mode.EXACT
    dets = []
    for k in range(order + 1):
        r = np.arange(k + 1)
        indices = r[None, :] + r[:, None]
        if exact:
            hankel = [[Fraction(moment_values[i]) for i in row] for row in indices.tolist()]
            dets.append(_fraction_det(hankel))
        else:
            hankel = np.asarray(moment_values, dtype=float)[indices]
            dets.append(float(np.linalg.det(hankel)))
    return dets


def _close(a: Scalar, b: Scalar) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)
    return a == b


def symmetry_check(p: QHParams, N: int) -> Optional[bool]:
    """t -> 1/t invariance for sigma = tau, theta = eta; None when the hypothesis fails."""
    if p.sigma != p.tau or p.theta != p.eta:
        return None
    table = solve_table(p, N)
    if not all(_close(g, d) for g, d in zip(table.gamma, table.delta)):
        return False
    t = to_mode(4, p.mode)
    forward, backward = jacobi_data(p, table, t), jacobi_data(p, table, 1 / t)
    return all(_close(a, b) for a, b in zip(forward.b, backward.b)) and all(
        _close(a, b) for a, b in zip(forward.c_hat, backward.c_hat)
    )


def _stabilized(values: List[float]) -> bool:
    if not values:
        return True
    cut = max(1, (3 * len(values)) // 4)
    early, final = max(values[:cut]), max(values)
    return final - early <= BOUNDEDNESS_BAND * final


def boundedness_check(table: CoefficientTable, t: Scalar) -> BoundednessReport:
    """Numerical proxy: the running max of |b_n(t)| and |c_hat_n(t)| has settled by the last quarter."""
    p = table.params
    jd = jacobi_data(p, table, t)
    b_abs = [abs(float(x)) for x in jd.b]
    c_abs = [abs(float(x)) for x in jd.c_hat[1:]]
    sup_b, sup_c = max(b_abs, default=0.0), max(c_abs, default=0.0)
    if p.q == 1 and (p.sigma > 0 or p.tau > 0):
        return BoundednessReport(
            bounded=False, sup_b=sup_b, sup_c_hat=sup_c,
            note="q = 1 with sigma > 0 or tau > 0: moment determinacy unknown",
        )
    bounded = _stabilized(b_abs) and _stabilized(c_abs)
    return BoundednessReport(bounded=bounded, sup_b=sup_b, sup_c_hat=sup_c)
