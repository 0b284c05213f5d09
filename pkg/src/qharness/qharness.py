import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from .recurrences.closed_forms import SpecialCase, detect_case
from .recurrences.exceptions import ParameterRangeError, PoleError
from .recurrences.lambda_engine import (
    LambdaSeq,
    RegimeTag,
    asymptotic_rate,
    contraction_constant,
    fixed_point,
    lambda_sequence,
    limit_ratio_D,
    regime_classify,
    sign_changes,
)
from .recurrences.params import QHParams
from .recurrences.polynomials import JacobiData, boundedness_check, favard_check, jacobi_data
from .recurrences.qnum import Scalar, format_scalar, to_mode
from .recurrences.schemas import JacobiSchema, ReportSchema, SolveOutput
from .recurrences.system_solver import CoefficientTable, SequenceBundle, chi_limit, reconstruct_six_sequences, solve_table

logger = logging.getLogger("qharness")


class KnownProcess(str, Enum):
    Q_WIENER = "QWiener"
    POISSON = "Poisson"
    GENERALIZED_CHEBYSHEV = "GeneralizedChebyshevSupported"


def known_process(p: QHParams) -> Optional[KnownProcess]:
    """Named process whose coefficients the parameters reproduce, if any."""
    if p.sigma == 0 and p.tau == 0 and p.theta == 0 and p.eta == 0:
        return KnownProcess.Q_WIENER
    if p.sigma == 0 and p.tau == 0 and p.eta == 0 and p.q == 1 and p.theta == 1:
        return KnownProcess.POISSON
    if p.q == 0 and p.sigma == 0 and 1 + p.eta * p.theta + p.eta**2 * p.tau > 0:
        return KnownProcess.GENERALIZED_CHEBYSHEV
    if p.q == 0 and p.tau == 0 and 1 + p.eta * p.theta + p.theta**2 * p.sigma > 0:
        return KnownProcess.GENERALIZED_CHEBYSHEV
    if p.q == -p.sigma_tau and p.sigma_tau != 1:
        d = 1 - p.sigma_tau
        if (p.eta + p.theta * p.sigma) * (p.theta + p.eta * p.tau) / d**2 > -1:
            return KnownProcess.GENERALIZED_CHEBYSHEV
    return None


@dataclass
class ClassificationReport:
    params: QHParams
    regime: RegimeTag
    special_case: SpecialCase
    favard_ok: bool
    bounded: bool
    determinacy: str = "unknown"
    fixed_point: Optional[Scalar] = None
    chi_limit: Optional[Scalar] = None
    contraction_constant: Optional[Scalar] = None
    limit_ratio: Optional[Scalar] = None
    sign_changes: int = 0
    known_process: Optional[KnownProcess] = None
    notes: List[str] = field(default_factory=list)

    def to_schema(self) -> ReportSchema:
        return ReportSchema(
            params=self.params.to_dict(),
            regime=self.regime.value,
            special_case=self.special_case.value,
            favard_ok=self.favard_ok,
            bounded=self.bounded,
            determinacy=self.determinacy,
            fixed_point=format_scalar(self.fixed_point),
            chi_limit=format_scalar(self.chi_limit),
            contraction_constant=format_scalar(self.contraction_constant),
            limit_ratio=format_scalar(self.limit_ratio),
            sign_changes=self.sign_changes,
            known_process=self.known_process.value if self.known_process else None,
            notes=list(self.notes),
        )


@dataclass
class QHarness:
    """One parameter point with its coefficient table built on first use."""
    params: QHParams
    N: int = 64
    _table: Optional[CoefficientTable] = field(init=False, default=None, repr=False)
    _bundle: Optional[SequenceBundle] = field(init=False, default=None, repr=False)

    def __post_init__(self):
        if self.N < 0:
            raise ParameterRangeError(f"Horizon must be non-negative, got {self.N}")

    @property
    def table(self) -> CoefficientTable:
        if self._table is None:
            self._table = solve_table(self.params, self.N)
        return self._table

    @property
    def bundle(self) -> SequenceBundle:
        if self._bundle is None:
            self._bundle = reconstruct_six_sequences(self.params, self.N)
        return self._bundle

    def lambdas(self) -> LambdaSeq:
        return lambda_sequence(self.params.mobius, self.N)

    def jacobi(self, t: Scalar = 1) -> JacobiData:
        return jacobi_data(self.params, self.table, t)

    def classify(self) -> ClassificationReport:
        p = self.params
        mobius = p.mobius
        regime = regime_classify(mobius)
        report = ClassificationReport(
            params=p,
            regime=regime,
            special_case=detect_case(p),
            favard_ok=False,
            bounded=False,
            fixed_point=fixed_point(mobius),
            sign_changes=sign_changes(self.lambdas()),
            known_process=known_process(p),
        )

        if regime is RegimeTag.STRICT_ADMISSIBLE:
            report.contraction_constant = contraction_constant(mobius)
            if p.q + p.sigma_tau < 0:
                rate = asymptotic_rate(mobius)
                if rate > report.contraction_constant:
                    report.notes.append(
                        f"contraction constant {format_scalar(report.contraction_constant)} is below "
                        f"the local rate |f'(y)| = {format_scalar(rate)} at the fixed point"
                    )
            if p.theta == 0 and p.eta == 0:
                report.chi_limit = chi_limit(p)
        if regime in (RegimeTag.STRICT_ADMISSIBLE, RegimeTag.BOUNDARY):
            try:
                report.limit_ratio = limit_ratio_D(mobius)
            except PoleError as e:
                logger.debug(f"No limit ratio: {e}")

        if report.special_case is SpecialCase.Q_EQUALS_MINUS_SIGMA_TAU:
            report.notes.append("q = -sigma tau: chi_2 differs from the steady value chi_n, n >= 3")
        if p.theta == 0 and p.eta == 0 and regime is not RegimeTag.OSCILLATORY:
            if p.q + p.sigma_tau < 0:
                report.notes.append("q + sigma tau < 0: positivity of chi_n is checked numerically only")
            else:
                report.notes.append("theta = eta = 0: the orthogonality measure is symmetric")

        try:
            table = self.table
        except PoleError as e:
            logger.warning(f"Coefficient table unavailable for {p.to_dict()}: {e}")
            report.notes.append(f"coefficient table truncated: {e}")
            return report

        favard = favard_check(p, table)
        report.favard_ok = favard.ok
        if not favard.ok:
            report.notes.append(f"Favard positivity fails at n={favard.first_failure}")
        boundedness = boundedness_check(table, to_mode(1, p.mode))
        report.bounded = boundedness.bounded
        report.determinacy = "determinate" if boundedness.bounded else "unknown"
        if boundedness.note:
            report.notes.append(boundedness.note)
        return report

    def solve_output(self, t: Optional[Scalar] = None, include_report: bool = False) -> SolveOutput:
        table = self.table
        jacobi = None
        if t is not None:
            jd = self.jacobi(t)
            jacobi = JacobiSchema(
                t=format_scalar(jd.t),
                b=[format_scalar(x) for x in jd.b],
                c_hat=[format_scalar(x) for x in jd.c_hat[1:]],
            )
        return SolveOutput(
            params=self.params.to_dict(),
            mode=self.params.mode.value,
            N=self.N,
            t=jacobi.t if jacobi else None,
            lambda_=[format_scalar(x) for x in table.lam],
            gamma=[format_scalar(x) for x in table.gamma],
            delta=[format_scalar(x) for x in table.delta],
            chi=[format_scalar(x) for x in table.chi],
            jacobi=jacobi,
            report=self.classify().to_schema() if include_report else None,
        )
