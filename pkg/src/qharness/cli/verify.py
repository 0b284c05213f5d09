"""Seeded verification suites.

Each suite draws rational parameter points from ``random.Random(seed)`` and
checks one family of identities in exact arithmetic. Failures are counted and
the first counterexample is kept; nothing here raises on a failed check.
"""
import random
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from ..recurrences.closed_forms import HYPOTHESES, SpecialCase, verify_against_recursion
from ..recurrences.exceptions import QHarnessError
from ..recurrences.harness_form import affinity_residual, identity_residual, q_form_coeffs
from ..recurrences.params import QHParams, below_lower_branch
from ..recurrences.polynomials import favard_check, favard_grid_check, symmetry_check
from ..recurrences.qnum import Scalar, format_scalar
from ..recurrences.schemas import SuiteResult, VerifySummary
from ..recurrences.system_solver import (
    equation_residuals,
    firsttwo_residual,
    reconstruct_six_sequences,
    solve_table,
)
from .utils import logger

SUITES = ("closed-forms", "residuals", "favard", "symmetry", "appendix")
DENOMINATOR = 8


class Tally:
    def __init__(self, suite: str):
        self.suite = suite
        self.checked = 0
        self.failed = 0
        self.max_residual: Optional[Scalar] = None
        self.first_counterexample: Optional[Dict[str, Any]] = None

    def record(self, ok: bool, detail: Dict[str, Any], residual: Optional[Scalar] = None) -> None:
        self.checked += 1
        if residual is not None:
            self.max_residual = residual if self.max_residual is None else max(self.max_residual, residual)
        if not ok:
            self.failed += 1
            if self.first_counterexample is None:
                self.first_counterexample = detail
                logger.warning(f"{self.suite}: first counterexample {detail}")

    def result(self) -> SuiteResult:
        return SuiteResult(
            suite=self.suite,
            checked=self.checked,
            failed=self.failed,
            max_residual=format_scalar(self.max_residual),
            first_counterexample=self.first_counterexample,
        )


def rational(rng: random.Random, low: int, high: int, denominator: int = DENOMINATOR) -> Fraction:
    return Fraction(rng.randint(low * denominator, high * denominator), denominator)


def strict_point(rng: random.Random, drift: bool = True) -> QHParams:
    """Admissible point with q < 1 - 2 sqrt(sigma tau); theta, eta in [-2, 2] when ``drift``."""
    while True:
        sigma, tau = rational(rng, 0, 1), rational(rng, 0, 1)
        q = rational(rng, -1, 1)
        if below_lower_branch(q, sigma * tau):
            break
    theta = rational(rng, -2, 2) if drift else Fraction(0)
    eta = rational(rng, -2, 2) if drift else Fraction(0)
    return QHParams(sigma=sigma, tau=tau, theta=theta, eta=eta, q=q)


def case_point(rng: random.Random, case: SpecialCase) -> QHParams:
    """Random point satisfying the hypothesis of ``case``."""
    if case is SpecialCase.BOUNDARY_Q:
        root = Fraction(1, rng.choice((2, 3, 4)))
        sigma = rational(rng, 0, 2) or Fraction(1, 2)
        return QHParams(sigma=sigma, tau=root * root / sigma, q=1 - 2 * root)
    if case is SpecialCase.Q_EQUALS_MINUS_SIGMA_TAU:
        while True:
            sigma, tau = rational(rng, 0, 1), rational(rng, 0, 1)
            if sigma * tau != 1:
                break
        return QHParams(
            sigma=sigma, tau=tau, theta=rational(rng, -2, 2), eta=rational(rng, -2, 2), q=-sigma * tau
        )
    zeroed = {
        SpecialCase.SIGMA_TAU_ZERO: ("sigma", "tau"),
        SpecialCase.TAU_THETA_ZERO: ("tau", "theta"),
        SpecialCase.SIGMA_ETA_ZERO: ("sigma", "eta"),
        SpecialCase.TAU_ETA_ZERO: ("tau", "eta"),
        SpecialCase.SIGMA_THETA_ZERO: ("sigma", "theta"),
        SpecialCase.Q_SIGMA_ZERO: ("q", "sigma"),
        SpecialCase.Q_TAU_ZERO: ("q", "tau"),
    }[case]
    values = {
        "sigma": rational(rng, 0, 1),
        "tau": rational(rng, 0, 1),
        "theta": rational(rng, -2, 2),
        "eta": rational(rng, -2, 2),
        "q": rational(rng, -1, 1),
    }
    for name in zeroed:
        values[name] = Fraction(0)
    # sigma tau = 0 in every remaining case, so the whole q range is admissible
    return QHParams(**values)


def _guard(tally: Tally, detail: Dict[str, Any], check: Callable[[], None]) -> None:
    try:
        check()
    except QHarnessError as e:
        tally.record(False, {**detail, "error": f"{type(e).__name__}: {e}"})


def closed_forms_suite(rng: random.Random, N: int, points: int) -> SuiteResult:
    tally = Tally("closed-forms")
    for case in HYPOTHESES:
        for _ in range(points):
            p = case_point(rng, case)
            detail = {"case": case.value, "params": p.to_dict()}

            def check(case=case, p=p, detail=detail):
                deviation = verify_against_recursion(case, p, N)
                tally.record(deviation == 0, {**detail, "deviation": format_scalar(deviation)}, deviation)

            _guard(tally, detail, check)
    return tally.result()


def residuals_suite(rng: random.Random, N: int, points: int) -> SuiteResult:
    tally = Tally("residuals")
    for _ in range(points):
        p = strict_point(rng)
        detail = {"params": p.to_dict()}

        def check(p=p, detail=detail):
            bundle = reconstruct_six_sequences(p, N)
            failing = next((r for r in equation_residuals(bundle, p, N) if r.value != 0), None)
            worst = max((abs(r.value) for r in equation_residuals(bundle, p, N)), default=Fraction(0))
            worst = max(worst, firsttwo_residual(bundle, p, solve_table(p, N).lam))
            if failing is not None:
                detail = {**detail, "equation": failing.equation, "n": failing.n, "residual": format_scalar(failing.value)}
            tally.record(worst == 0, detail, worst)

        _guard(tally, detail, check)
    return tally.result()


def favard_points(rng: random.Random, points: int) -> List[QHParams]:
    fixed = [
        QHParams(theta=1, eta=-2, q=1),
        QHParams(sigma=Fraction(1, 5), tau=Fraction(1, 5), q=Fraction(9, 10)),
        QHParams(),
    ]
    return fixed + [strict_point(rng) for _ in range(points)]


def favard_suite(rng: random.Random, N: int, points: int) -> SuiteResult:
    tally = Tally("favard")
    for p in favard_points(rng, points):
        detail = {"params": p.to_dict()}

        def check(p=p, detail=detail):
            table = solve_table(p, N)
            analytic, sampled = favard_check(p, table), favard_grid_check(p, table)
            tally.record(
                analytic.ok == sampled.ok,
                {**detail, "analytic": analytic.ok, "sampled": sampled.ok, "first_failure": analytic.first_failure},
            )

        _guard(tally, detail, check)
    return tally.result()


def symmetry_suite(rng: random.Random, N: int, points: int) -> SuiteResult:
    tally = Tally("symmetry")
    for _ in range(points):
        while True:
            sigma, q = rational(rng, 0, 1), rational(rng, -1, 1)
            if below_lower_branch(q, sigma * sigma):
                break
        drift = rational(rng, -2, 2)
        p = QHParams(sigma=sigma, tau=sigma, theta=drift, eta=drift, q=q)
        detail = {"params": p.to_dict()}
        _guard(tally, detail, lambda p=p, detail=detail: tally.record(symmetry_check(p, N) is True, detail))
    return tally.result()


def appendix_suite(rng: random.Random, N: int, points: int) -> SuiteResult:
    tally = Tally("appendix")
    for _ in range(points):
        p = strict_point(rng)
        s = rational(rng, 0, 2)
        t = s + rational(rng, 1, 2)
        u = t + rational(rng, 1, 2)
        n = rng.randint(0, max(0, min(16, N - 1)))
        detail = {"params": p.to_dict(), "n": n, "s": format_scalar(s), "t": format_scalar(t), "u": format_scalar(u)}

        def check(p=p, s=s, t=t, u=u, n=n, detail=detail):
            at_left = q_form_coeffs(s, s, u, p).as_tuple()
            at_right = q_form_coeffs(s, u, u, p).as_tuple()
            endpoints_ok = at_left == (1, 0, 0, 0, 0, 0) and at_right == (0, 0, 1, 0, 0, 0)
            bundle = reconstruct_six_sequences(p, n + 1)
            residual = max(abs(identity_residual(p, bundle, n, s, t, u)), affinity_residual(bundle, n, s, t, u))
            tally.record(endpoints_ok and residual == 0, detail, residual)

        _guard(tally, detail, check)
    return tally.result()


SUITE_RUNNERS = {
    "closed-forms": closed_forms_suite,
    "residuals": residuals_suite,
    "favard": favard_suite,
    "symmetry": symmetry_suite,
    "appendix": appendix_suite,
}


def run_verify(suite: str, seed: int, N: int, points: int) -> VerifySummary:
    """Run one suite, or every suite for ``all``; each suite gets its own seeded generator."""
    names = SUITES if suite == "all" else (suite,)
    results = []
    for name in names:
        logger.info(f"Running {name} suite (seed={seed}, N={N}, points={points})")
        results.append(SUITE_RUNNERS[name](random.Random(f"{seed}:{name}"), N, points))
    return VerifySummary(seed=seed, N=N, ok=all(r.ok for r in results), suites=results)
