"""Closed-form coefficient tables for the solvable special cases.

Detection precedence, first match wins:

    SigmaTauZero, TauThetaZero, SigmaEtaZero, TauEtaZero, SigmaThetaZero,
    QSigmaZero, QTauZero, QEqualsMinusSigmaTau, BoundaryQ

Every formula here is checked against the recursion in ``system_solver``,
which stays the reference.
"""
import logging
from enum import Enum
from typing import Callable, Dict, List

from .exceptions import CaseHypothesisError, PoleError
from .params import QHParams, on_lower_branch
from .qnum import Scalar, q_int
from .system_solver import CoefficientTable, solve_table

logger = logging.getLogger("qharness")


class SpecialCase(str, Enum):
    TAU_THETA_ZERO = "TauThetaZero"
    SIGMA_ETA_ZERO = "SigmaEtaZero"
    TAU_ETA_ZERO = "TauEtaZero"
    SIGMA_THETA_ZERO = "SigmaThetaZero"
    SIGMA_TAU_ZERO = "SigmaTauZero"
    Q_SIGMA_ZERO = "QSigmaZero"
    Q_TAU_ZERO = "QTauZero"
    Q_EQUALS_MINUS_SIGMA_TAU = "QEqualsMinusSigmaTau"
    BOUNDARY_Q = "BoundaryQ"
    NONE = "None"


def _boundary_hypothesis(p: QHParams) -> bool:
    return p.theta == 0 and p.eta == 0 and on_lower_branch(p.q, p.sigma_tau) and p.q > -1


HYPOTHESES: Dict[SpecialCase, Callable[[QHParams], bool]] = {
    SpecialCase.SIGMA_TAU_ZERO: lambda p: p.sigma == 0 and p.tau == 0,
    SpecialCase.TAU_THETA_ZERO: lambda p: p.tau == 0 and p.theta == 0,
    SpecialCase.SIGMA_ETA_ZERO: lambda p: p.sigma == 0 and p.eta == 0,
    SpecialCase.TAU_ETA_ZERO: lambda p: p.tau == 0 and p.eta == 0,
    SpecialCase.SIGMA_THETA_ZERO: lambda p: p.sigma == 0 and p.theta == 0,
    SpecialCase.Q_SIGMA_ZERO: lambda p: p.q == 0 and p.sigma == 0,
    SpecialCase.Q_TAU_ZERO: lambda p: p.q == 0 and p.tau == 0,
    SpecialCase.Q_EQUALS_MINUS_SIGMA_TAU: lambda p: p.q == -p.sigma_tau and p.sigma_tau != 1,
    SpecialCase.BOUNDARY_Q: _boundary_hypothesis,
}


def detect_case(p: QHParams) -> SpecialCase:
    for case, hypothesis in HYPOTHESES.items():
        if hypothesis(p):
            return case
    return SpecialCase.NONE


def matching_cases(p: QHParams) -> List[SpecialCase]:
    """Every case whose hypothesis holds, in precedence order."""
    return [case for case, hypothesis in HYPOTHESES.items() if hypothesis(p)]


def _qn(n: int, q: Scalar) -> Scalar:
    # [n-1]_q with the convention [-1]_q = 0 where it only ever multiplies [0]_q
    return q_int(n, q) if n >= 0 else q * 0


def _lambda_q_int(p: QHParams, N: int) -> List[Scalar]:
    return [q_int(n, p.q) for n in range(N + 1)]


def _lambda_unit(p: QHParams, N: int) -> List[Scalar]:
    zero = p.q * 0
    return [zero] + [zero + 1] * N


def _table_tau_theta_zero(p: QHParams, N: int):
    lam = _lambda_q_int(p, N)
    gamma = [x * p.eta for x in lam]
    delta = [p.q * 0 for _ in lam]
    chi = lam[1:]
    return lam, gamma, delta, chi


def _table_sigma_eta_zero(p: QHParams, N: int):
    lam = _lambda_q_int(p, N)
    gamma = [p.q * 0 for _ in lam]
    delta = [x * p.theta for x in lam]
    chi = lam[1:]
    return lam, gamma, delta, chi


def _table_tau_eta_zero(p: QHParams, N: int):
    q = p.q
    lam = _lambda_q_int(p, N)
    gamma = [lam[n] * (lam[n] + _qn(n - 1, q)) * p.theta * p.sigma for n in range(N + 1)]
    delta = [x * p.theta for x in lam]
    chi = [lam[n] + _qn(n - 1, q) ** 2 * lam[n] * p.theta**2 * p.sigma for n in range(1, N + 1)]
    return lam, gamma, delta, chi


def _table_sigma_theta_zero(p: QHParams, N: int):
    q = p.q
    lam = _lambda_q_int(p, N)
    gamma = [x * p.eta for x in lam]
    delta = [lam[n] * (_qn(n - 1, q) + lam[n]) * p.eta * p.tau for n in range(N + 1)]
    chi = [lam[n] + _qn(n - 1, q) ** 2 * lam[n] * p.eta**2 * p.tau for n in range(1, N + 1)]
    return lam, gamma, delta, chi


def _table_sigma_tau_zero(p: QHParams, N: int):
    # chi_n = [n] + theta eta [n] [n-1]; the [n-1][n-2] variant does not solve the recursion
    q = p.q
    lam = _lambda_q_int(p, N)
    gamma = [x * p.eta for x in lam]
    delta = [x * p.theta for x in lam]
    chi = [lam[n] + p.theta * p.eta * lam[n] * _qn(n - 1, q) for n in range(1, N + 1)]
    return lam, gamma, delta, chi


def _unit_lambda_table(p: QHParams, N: int, first: tuple, steady: tuple, chi_tail: Scalar, chi_2=None):
    zero = p.q * 0
    lam = _lambda_unit(p, N)
    pairs = [(zero, zero)] + [first] + [steady] * max(N - 1, 0)
    pairs = pairs[: N + 1]
    chi = [zero + 1]
    for n in range(2, N + 1):
        chi.append(chi_2 if n == 2 and chi_2 is not None else chi_tail)
    return lam, [g for g, _ in pairs], [d for _, d in pairs], chi[:N]


def _table_q_sigma_zero(p: QHParams, N: int):
    theta, eta, tau = p.theta, p.eta, p.tau
    return _unit_lambda_table(
        p, N,
        first=(eta, theta + tau * eta),
        steady=(eta, theta + 2 * eta * tau),
        chi_tail=1 + eta * theta + eta**2 * tau,
    )


def _table_q_tau_zero(p: QHParams, N: int):
    theta, eta, sigma = p.theta, p.eta, p.sigma
    return _unit_lambda_table(
        p, N,
        first=(eta + sigma * theta, theta),
        steady=(eta + 2 * sigma * theta, theta),
        chi_tail=1 + eta * theta + theta**2 * sigma,
    )


def _table_q_minus_sigma_tau(p: QHParams, N: int):
    # chi_1 = 1 and chi_2 differs from the steady value: kappa_1 = q / (1 - st)^2 is not zero
    theta, eta, sigma, tau = p.theta, p.eta, p.sigma, p.tau
    d = 1 - p.sigma_tau
    drift = (eta + theta * sigma) * (theta + eta * tau)
    return _unit_lambda_table(
        p, N,
        first=((eta + sigma * theta) / d, (theta + tau * eta) / d),
        steady=(
            (eta + 2 * theta * sigma + eta * p.sigma_tau) / d**2,
            (theta + 2 * eta * tau + theta * p.sigma_tau) / d**2,
        ),
        chi_tail=1 / d**2 + drift / d**4,
        chi_2=1 / d + drift / d**3,
    )


def boundary_root(p: QHParams) -> Scalar:
    """sqrt(sigma tau) on the boundary, read off as (1 - q) / 2 so it stays rational."""
    return (1 - p.q) / 2


def boundary_chi(n: int, s: Scalar) -> Scalar:
    """Closed form of chi_n on q = 1 - 2s, theta = eta = 0; chi_1 = 1."""
    if n == 1:
        return s * 0 + 1
    numerator = n * (1 + (n - 2) * s) ** 2 * (1 + (n - 3) * s)
    denominator = (1 - s) ** 2 * (1 + 2 * (n - 1) * s) * (1 + 2 * (n - 2) * s)
    return numerator / denominator


def boundary_chi_step(n: int, chi_n: Scalar, s: Scalar) -> Scalar:
    """chi_{n+1} from chi_n through the first-order boundary recursion."""
    ratio = (1 + 2 * (n - 2) * s) * (1 + (n - 1) * s) ** 2 / ((1 + 2 * n * s) * (1 + (n - 2) * s) ** 2)
    driver = (1 + (n - 1) * s) ** 2 / ((1 - s) ** 2 * (1 + 2 * n * s))
    return ratio * chi_n + driver


def _table_boundary(p: QHParams, N: int):
    s = boundary_root(p)
    if s == 1:
        raise PoleError("Boundary closed form is singular at sigma*tau = 1")
    zero = p.q * 0
    lam = [n / (1 + (n - 1) * s) for n in range(N + 1)]
    lam[0] = zero
    gamma = [zero] * (N + 1)
    delta = [zero] * (N + 1)
    chi = [boundary_chi(n, s) for n in range(1, N + 1)]
    return lam, gamma, delta, chi


_BUILDERS = {
    SpecialCase.TAU_THETA_ZERO: _table_tau_theta_zero,
    SpecialCase.SIGMA_ETA_ZERO: _table_sigma_eta_zero,
    SpecialCase.TAU_ETA_ZERO: _table_tau_eta_zero,
    SpecialCase.SIGMA_THETA_ZERO: _table_sigma_theta_zero,
    SpecialCase.SIGMA_TAU_ZERO: _table_sigma_tau_zero,
    SpecialCase.Q_SIGMA_ZERO: _table_q_sigma_zero,
    SpecialCase.Q_TAU_ZERO: _table_q_tau_zero,
    SpecialCase.Q_EQUALS_MINUS_SIGMA_TAU: _table_q_minus_sigma_tau,
    SpecialCase.BOUNDARY_Q: _table_boundary,
}


def closed_table(case: SpecialCase, p: QHParams, N: int) -> CoefficientTable:
    """Fill a CoefficientTable from the closed formulas of ``case``."""
    if case is SpecialCase.NONE or case not in _BUILDERS:
        raise CaseHypothesisError("No closed form exists for the generic case")
    if not HYPOTHESES[case](p):
        raise CaseHypothesisError(f"Parameters {p.to_dict()} do not satisfy the {case.value} hypothesis")
    lam, gamma, delta, chi = _BUILDERS[case](p, N)
    return CoefficientTable(N=N, lam=lam, gamma=gamma, delta=delta, chi=chi, params=p)


def verify_against_recursion(case: SpecialCase, p: QHParams, N: int) -> Scalar:
    """Largest absolute difference between the closed table and the recursion."""
    closed = closed_table(case, p, N)
    solved = solve_table(p, N)
    deviations = [
        abs(a - b)
        for lhs, rhs in (
            (closed.lam, solved.lam),
            (closed.gamma, solved.gamma),
            (closed.delta, solved.delta),
            (closed.chi, solved.chi),
        )
        for a, b in zip(lhs, rhs, strict=True)
    ]
    deviation = max(deviations, default=p.q * 0)
    if deviation:
        logger.debug(f"{case.value} closed form deviates by {deviation} for {p.to_dict()}")
    return deviation
