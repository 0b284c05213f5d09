"""Conditional second-moment quadratic form of a quadratic harness.

For s < t < u,

    E(X_t^2 | X_s = x, X_u = y) = A x^2 + B x y + C y^2 + D x + E y + F,

with coefficients rational in (s, t, u) and the five parameters. The same
coefficients tie the recurrence sequences together through the p_{n+2}
coefficient identity, which ``identity_residual`` evaluates.
"""
from dataclasses import dataclass
from typing import Tuple

from .exceptions import ParameterRangeError, PoleError
from .params import QHParams
from .qnum import Scalar
from .system_solver import SequenceBundle


@dataclass(frozen=True)
class QFormCoeffs:
    A: Scalar
    B: Scalar
    C: Scalar
    D: Scalar
    E: Scalar
    F: Scalar
    at: Tuple[Scalar, Scalar, Scalar]

    def as_tuple(self) -> Tuple[Scalar, ...]:
        return (self.A, self.B, self.C, self.D, self.E, self.F)


def q_form_coeffs(s: Scalar, t: Scalar, u: Scalar, p: QHParams) -> QFormCoeffs:
    if u == s:
        raise ParameterRangeError(f"Degenerate interval: u = s = {s}")
    if not 0 <= s <= t <= u:
        raise ParameterRangeError(f"Times must satisfy 0 <= s <= t <= u, got s={s}, t={t}, u={u}")
    sigma, tau, theta, eta, q = p.sigma, p.tau, p.theta, p.eta, p.q

    K = u * (1 + sigma * s) + tau - q * s
    if K == 0:
        raise PoleError(f"u(1 + sigma s) + tau - q s vanishes at s={s}, u={u}")
    den = (u - s) * K
    left, right = u - t, t - s

    return QFormCoeffs(
        A=left * (u * (1 + sigma * t) + tau - q * t) / den,
        B=left * right * (1 + q) / den,
        C=right * (t * (1 + sigma * s) + tau - q * s) / den,
        D=left * right * (u * eta - theta) / den,
        E=left * right * (theta - s * eta) / den,
        F=left * right / K,
        at=(s, t, u),
    )


def q_form_value(coeffs: QFormCoeffs, x: Scalar, y: Scalar) -> Scalar:
    c = coeffs
    return c.A * x * x + c.B * x * y + c.C * y * y + c.D * x + c.E * y + c.F


def coefficient_functions(bundle: SequenceBundle, n: int, t: Scalar) -> Tuple[Scalar, Scalar, Scalar]:
    """(a_n(t), b_n(t), c_n(t)); c_0 is reported as 0."""
    a = bundle.alpha[n] * t + bundle.beta[n]
    b = bundle.gamma[n] * t + bundle.delta[n]
    c = bundle.epsilon[n] * t + bundle.phi[n] if n > 0 else a * 0
    return a, b, c


def affinity_residual(bundle: SequenceBundle, n: int, s: Scalar, t: Scalar, u: Scalar) -> Scalar:
    """|a_n(t) - ((u-t) a_n(s) + (t-s) a_n(u)) / (u-s)|."""
    if u == s:
        raise ParameterRangeError(f"Degenerate interval: u = s = {s}")
    a_s, a_t, a_u = (coefficient_functions(bundle, n, x)[0] for x in (s, t, u))
    return abs(a_t - ((u - t) * a_s + (t - s) * a_u) / (u - s))


def identity_residual(p: QHParams, bundle: SequenceBundle, n: int, s: Scalar, t: Scalar, u: Scalar) -> Scalar:
    """Residual of the p_{n+2} coefficient identity

        a_n(t) a_{n+1}(t) = A a_n(s) a_{n+1}(s) + B a_n(u) a_{n+1}(s) + C a_n(u) a_{n+1}(u)

    with a_n(x) = alpha_n x + beta_n. Only this identity is checked here; the
    remaining coefficient identities are the equations behind
    ``system_solver.residuals_system``.
    """
    if not 0 <= s < t < u:
        raise ParameterRangeError(f"Times must satisfy 0 <= s < t < u, got s={s}, t={t}, u={u}")
    if n + 1 > bundle.N:
        raise ParameterRangeError(f"Bundle of horizon {bundle.N} does not reach n+1={n + 1}")
    coeffs = q_form_coeffs(s, t, u, p)

    def a(k, x):
        return bundle.alpha[k] * x + bundle.beta[k]

    return (
        a(n, t) * a(n + 1, t)
        - coeffs.A * a(n, s) * a(n + 1, s)
        - coeffs.B * a(n, u) * a(n + 1, s)
        - coeffs.C * a(n, u) * a(n + 1, u)
    )
