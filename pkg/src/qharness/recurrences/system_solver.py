"""Solver for the five-recurrence coefficient system.

Under the normalization beta_n = 1 the system reduces to
  * the lambda recursion (``lambda_engine``),
  * the vector recursion A_n v_{n+1} = B_n v_n + C_n mu for v_n = (gamma_n, delta_n),
  * the first-order chi recursion
      (1 - st (2 l_n + q l_n^2)) chi_{n+1} = (q + st - st (1 - l_{n-1})^2) chi_n + Q(gamma_n, delta_n)
    with chi_1 = 1,
and the six original sequences are rebuilt from lambda, gamma, delta, chi.
"""
import logging
from dataclasses import dataclass
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .exceptions import ParameterRangeError, PoleError, RegimeError, SingularMatrixError
from .lambda_engine import fixed_point, lambda_sequence, limit_ratio_D
from .params import QHParams, below_lower_branch, on_lower_branch
from .qnum import Mode, Scalar, ensure_finite

logger = logging.getLogger("qharness")


@dataclass(frozen=True)
class StepMatrices:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray


@dataclass
class CoefficientTable:
    """Aligned lambda_0..lambda_N, gamma_0..gamma_N, delta_0..delta_N and chi_1..chi_N.

    ``chi[k]`` holds chi_{k+1}; use ``chi_at(n)`` for 1-based access.
    """
    N: int
    lam: List[Scalar]
    gamma: List[Scalar]
    delta: List[Scalar]
    chi: List[Scalar]
    params: QHParams

    def chi_at(self, n: int) -> Scalar:
        if not 1 <= n <= self.N:
            raise IndexError(f"chi_{n} is outside 1..{self.N}")
        return self.chi[n - 1]


@dataclass
class SequenceBundle:
    """alpha, beta, gamma, delta on 0..N and epsilon, phi on 1..N (index 0 is None)."""
    alpha: List[Scalar]
    beta: List[Scalar]
    gamma: List[Scalar]
    delta: List[Scalar]
    epsilon: List[Optional[Scalar]]
    phi: List[Optional[Scalar]]

    @property
    def N(self) -> int:
        return len(self.alpha) - 1


@dataclass
class DnSequence:
    matrices: List[np.ndarray]
    form_values: List[Scalar]
    residual: Scalar


class ResidualRecord(NamedTuple):
    equation: int
    n: int
    value: Scalar


def _dtype(p: QHParams):
    return object if p.mode is Mode.EXACT else float


def _unbox(value) -> Scalar:
    if isinstance(value, np.floating):
        value = float(value)
    return ensure_finite(value)


def _identity(p: QHParams) -> np.ndarray:
    one, zero = p.q * 0 + 1, p.q * 0
    return np.array([[one, zero], [zero, one]], dtype=_dtype(p))


def solve_2x2(a: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a x = rhs for a 2x2 matrix ``a``; ``rhs`` may be a vector or a 2x2 matrix.

    Object arrays (exact mode) use cross-multiplication over the determinant;
    float arrays go through LAPACK's partially pivoted LU.
    """
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if det == 0:
        raise SingularMatrixError(f"Singular step matrix {a.tolist()}")
    if a.dtype == object:
        adjugate = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=object)
        return (adjugate @ rhs) / det
    try:
        return np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"Singular step matrix {a.tolist()}") from e


def step_matrices(lam_n: Scalar, p: QHParams) -> StepMatrices:
    """A_n, B_n, C_n evaluated at lambda_n."""
    st = p.sigma_tau
    diagonal_a = 1 - st * lam_n
    diagonal_b = p.q + st * lam_n
    grow = 1 + p.q * lam_n
    shrink = 1 - lam_n
    dtype = _dtype(p)
    A = np.array([[diagonal_a, -p.sigma * grow], [-p.tau * grow, diagonal_a]], dtype=dtype)
    B = np.array([[diagonal_b, p.sigma * shrink], [p.tau * shrink, diagonal_b]], dtype=dtype)
    C = np.array([[p.sigma * lam_n, lam_n * 0 + 1], [lam_n * 0 + 1, p.tau * lam_n]], dtype=dtype)
    return StepMatrices(A=A, B=B, C=C)


def lambda_values(p: QHParams, N: int) -> List[Scalar]:
    """lambda_0..lambda_N, raising PoleError if the iteration cannot reach N."""
    seq = lambda_sequence(p.mobius, N)
    if seq.truncated_at is not None:
        raise PoleError(f"Lambda iteration hit the Mobius pole at n={seq.truncated_at}")
    return seq.values


def gamma_delta_sequence(
    p: QHParams, N: int, lam: Optional[Sequence[Scalar]] = None
) -> List[Tuple[Scalar, Scalar]]:
    """(gamma_n, delta_n) for n = 0..N from A_n v_{n+1} = B_n v_n + C_n mu."""
    if lam is None:
        lam = lambda_values(p, N)
    dtype = _dtype(p)
    mu = np.array(p.mu, dtype=dtype)
    v = np.array([p.q * 0, p.q * 0], dtype=dtype)
    result = [(_unbox(v[0]), _unbox(v[1]))]
    for n in range(N):
        m = step_matrices(lam[n], p)
        v = solve_2x2(m.A, m.B @ v + m.C @ mu)
        result.append((_unbox(v[0]), _unbox(v[1])))
    return result


def gamma_delta_closed_sum(
    p: QHParams, N: int, lam: Optional[Sequence[Scalar]] = None
) -> List[Tuple[Scalar, Scalar]]:
    """The same vectors from the explicit sum v_n = sum_k (Xi_{n-1} ... Xi_{k+1}) A_k^{-1} C_k mu."""
    if lam is None:
        lam = lambda_values(p, N)
    dtype = _dtype(p)
    mu = np.array(p.mu, dtype=dtype)
    xi, w = [], []
    for k in range(N):
        m = step_matrices(lam[k], p)
        xi.append(solve_2x2(m.A, m.B))
        w.append(solve_2x2(m.A, m.C @ mu))

    zero = p.q * 0
    result = [(zero, zero)]
    for n in range(1, N + 1):
        total = np.array([zero, zero], dtype=dtype)
        product = _identity(p)
        for k in range(n - 1, -1, -1):
            total = total + product @ w[k]
            if k > 0:
                product = product @ xi[k]
        result.append((_unbox(total[0]), _unbox(total[1])))
    return result


def quadratic_form_value(p: QHParams, g: Scalar, d: Scalar) -> Scalar:
    """1 + theta g + tau g^2 + eta d + sigma d^2 - (1 - q) g d."""
    return 1 + p.theta * g + p.tau * g * g + p.eta * d + p.sigma * d * d - (1 - p.q) * g * d


def chi_denominators(p: QHParams, lam: Sequence[Scalar]) -> List[Scalar]:
    st = p.sigma_tau
    return [1 - st * (2 * x + p.q * x * x) for x in lam]


def kappa_sequence(p: QHParams, lam: Sequence[Scalar], N: int) -> List[Scalar]:
    """kappa_1..kappa_{N-1}, stored from index 0."""
    st = p.sigma_tau
    denominators = chi_denominators(p, lam)
    kappas = []
    for n in range(1, N):
        if denominators[n] == 0:
            raise PoleError(f"chi recursion denominator vanishes at n={n}")
        kappas.append((p.q + st - st * (1 - lam[n - 1]) ** 2) / denominators[n])
    return kappas


def chi_sequence(
    p: QHParams,
    lam: Sequence[Scalar],
    gamma: Sequence[Scalar],
    delta: Sequence[Scalar],
    N: int,
) -> List[Scalar]:
    """chi_1..chi_N; chi_1 = 1."""
    st = p.sigma_tau
    denominators = chi_denominators(p, lam[:N])
    chi = [p.q * 0 + 1]
    for n in range(1, N):
        if denominators[n] == 0:
            raise PoleError(f"chi recursion denominator vanishes at n={n}")
        numerator = (p.q + st - st * (1 - lam[n - 1]) ** 2) * chi[-1] + quadratic_form_value(
            p, gamma[n], delta[n]
        )
        chi.append(ensure_finite(numerator / denominators[n]))
    return chi


def solve_table(p: QHParams, N: int) -> CoefficientTable:
    """Run the full pipeline up to horizon N."""
    if N < 0:
        raise ParameterRangeError(f"Horizon must be non-negative, got {N}")
    lam = lambda_values(p, N)
    pairs = gamma_delta_sequence(p, N, lam)
    gamma = [g for g, _ in pairs]
    delta = [d for _, d in pairs]
    chi = chi_sequence(p, lam, gamma, delta, N) if N >= 1 else []
    logger.debug(f"Solved coefficient table for {p.to_dict()} up to N={N}")
    return CoefficientTable(N=N, lam=list(lam), gamma=gamma, delta=delta, chi=chi, params=p)


def chi_limit(p: QHParams) -> Scalar:
    """lim chi_n for theta = eta = 0 in the strict regime.

    Solves xi = D xi + c with c = 1 / (1 - st (2 y + q y^2)) at the fixed point
    y; the closed form is (1 - q + r) / (2 r^2) with r^2 = (1 - q)^2 - 4 st.
    """
    if p.theta != 0 or p.eta != 0:
        raise RegimeError("chi_limit requires theta = eta = 0")
    if not (p.q > -1 and below_lower_branch(p.q, p.sigma_tau)):
        raise RegimeError(f"chi_limit requires -1 < q < 1 - 2*sqrt(sigma*tau), got q={p.q}")
    y = fixed_point(p.mobius)
    st = p.sigma_tau
    c = 1 / (1 - st * (2 * y + p.q * y * y))
    return c / (1 - limit_ratio_D(p.mobius))


def require_admissible(p: QHParams) -> None:
    """Raise RegimeError unless q <= 1 - 2 sqrt(sigma tau)."""
    if not (below_lower_branch(p.q, p.sigma_tau) or on_lower_branch(p.q, p.sigma_tau)):
        raise RegimeError(
            f"q={p.q} lies above 1 - 2*sqrt(sigma*tau) for sigma*tau={p.sigma_tau}; "
            "the coefficient system is only solved in the admissible regime"
        )


def reconstruct_six_sequences(p: QHParams, N: int) -> SequenceBundle:
    """All six sequences under beta_n = 1."""
    require_admissible(p)
    table = solve_table(p, N)
    one = p.q * 0 + 1
    epsilon: List[Optional[Scalar]] = [None] + list(table.chi)
    phi: List[Optional[Scalar]] = [None] + [
        p.tau * table.lam[n - 1] * table.chi_at(n) for n in range(1, N + 1)
    ]
    return SequenceBundle(
        alpha=[p.sigma * x for x in table.lam],
        beta=[one] * (N + 1),
        gamma=list(table.gamma),
        delta=list(table.delta),
        epsilon=epsilon,
        phi=phi,
    )


def equation_residuals(bundle: SequenceBundle, p: QHParams, N: int) -> Iterator[ResidualRecord]:
    """Left minus right of each equation of the system, over every index where it is defined."""
    a, b, g, d, e, f = bundle.alpha, bundle.beta, bundle.gamma, bundle.delta, bundle.epsilon, bundle.phi
    sigma, tau, theta, eta, q = p.sigma, p.tau, p.theta, p.eta, p.q

    for n in range(0, N):
        yield ResidualRecord(
            1, n, tau * a[n] * a[n + 1] + q * a[n] * b[n + 1] + sigma * b[n] * b[n + 1] - a[n + 1] * b[n]
        )
    for n in range(2, N + 1):
        yield ResidualRecord(
            2, n, tau * e[n - 1] * e[n] + q * e[n] * f[n - 1] + sigma * f[n] * f[n - 1] - e[n - 1] * f[n]
        )
    for n in range(0, N):
        lhs = (
            theta * a[n] + eta * b[n]
            + tau * a[n] * (g[n] + g[n + 1])
            + sigma * b[n] * (d[n] + d[n + 1])
            + q * (a[n] * d[n + 1] + b[n] * g[n])
        )
        yield ResidualRecord(3, n, lhs - (b[n] * g[n + 1] + a[n] * d[n]))
    for n in range(1, N + 1):
        lhs = (
            theta * e[n] + eta * f[n]
            + tau * e[n] * (g[n] + g[n - 1])
            + sigma * f[n] * (d[n - 1] + d[n])
            + q * (f[n] * g[n] + d[n - 1] * e[n])
        )
        yield ResidualRecord(4, n, lhs - (e[n] * d[n] + f[n] * g[n - 1]))
    for n in range(1, N):
        lhs = (
            1 + theta * g[n] + eta * d[n] + tau * g[n] ** 2 + sigma * d[n] ** 2
            + tau * (a[n - 1] * e[n] + a[n] * e[n + 1])
            + sigma * (f[n] * b[n - 1] + b[n] * f[n + 1])
            + q * (g[n] * d[n] + b[n - 1] * e[n] + a[n] * f[n + 1])
        )
        yield ResidualRecord(5, n, lhs - (g[n] * d[n] + b[n] * e[n + 1] + f[n] * a[n - 1]))


def residuals_system(bundle: SequenceBundle, p: QHParams, N: int) -> Scalar:
    """Maximum absolute residual over all five equations; exactly 0 for a solved bundle in exact mode."""
    if len(bundle.alpha) < N + 1:
        raise ValueError(f"Bundle holds {len(bundle.alpha)} entries, need {N + 1}")
    return max((abs(r.value) for r in equation_residuals(bundle, p, N)), default=p.q * 0)


def firsttwo_residual(bundle: SequenceBundle, p: QHParams, lam: Sequence[Scalar]) -> Scalar:
    """max of |alpha_n - sigma l_n beta_n| and |phi_n - tau l_{n-1} epsilon_n|."""
    values = [abs(bundle.alpha[n] - p.sigma * lam[n] * bundle.beta[n]) for n in range(len(bundle.alpha))]
    values += [
        abs(bundle.phi[n] - p.tau * lam[n - 1] * bundle.epsilon[n]) for n in range(1, len(bundle.phi))
    ]
    return max(values, default=p.q * 0)


def dn_matrix_sequence(p: QHParams, N: int) -> DnSequence:
    """D_0..D_N with (gamma_n, delta_n) = D_n (theta, eta), and the chi driver written through D_n.

    D_0 = 0 and D_{n+1} = Xi_n D_n + A_n^{-1} C_n. The form value
    1 + mu^T ((D + D^T)/2 + D^T Delta D) mu equals quadratic_form_value at
    (gamma_n, delta_n); ``residual`` is the largest deviation between the two.
    """
    require_admissible(p)
    lam = lambda_values(p, N)
    dtype = _dtype(p)
    zero = p.q * 0
    half = (1 - p.q) / 2
    delta_matrix = np.array([[p.tau, -half], [-half, p.sigma]], dtype=dtype)
    mu = np.array(p.mu, dtype=dtype)

    d_matrix = np.array([[zero, zero], [zero, zero]], dtype=dtype)
    matrices = [d_matrix]
    for n in range(N):
        m = step_matrices(lam[n], p)
        d_matrix = solve_2x2(m.A, m.B) @ d_matrix + solve_2x2(m.A, m.C)
        matrices.append(d_matrix)

    pairs = gamma_delta_sequence(p, N, lam)
    form_values, deviations = [], []
    for d_n, (g, d) in zip(matrices, pairs):
        inner = (d_n + d_n.T) / 2 + d_n.T @ delta_matrix @ d_n
        value = _unbox(1 + mu @ inner @ mu)
        form_values.append(value)
        deviations.append(abs(value - quadratic_form_value(p, g, d)))
    return DnSequence(matrices=matrices, form_values=form_values, residual=max(deviations))
