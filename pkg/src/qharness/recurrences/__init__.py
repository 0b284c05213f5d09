from .closed_forms import SpecialCase, closed_table, detect_case, verify_against_recursion
from .exceptions import (
    CaseHypothesisError,
    NumericError,
    ParameterRangeError,
    ParseError,
    PoleError,
    QHarnessError,
    RegimeError,
    SingularMatrixError,
)
from .harness_form import QFormCoeffs, identity_residual, q_form_coeffs
from .lambda_engine import LambdaSeq, RegimeTag, fixed_point, lambda_sequence, regime_classify
from .params import MobiusParams, QHParams
from .polynomials import JacobiData, favard_check, jacobi_data, m_polynomials, moments
from .qnum import Mode, Scalar, format_scalar, parse_scalar
from .system_solver import (
    CoefficientTable,
    SequenceBundle,
    reconstruct_six_sequences,
    require_admissible,
    residuals_system,
    solve_table,
)

__all__ = [
    "CaseHypothesisError",
    "CoefficientTable",
    "JacobiData",
    "LambdaSeq",
    "Mode",
    "MobiusParams",
    "NumericError",
    "ParameterRangeError",
    "ParseError",
    "PoleError",
    "QFormCoeffs",
    "QHParams",
    "QHarnessError",
    "RegimeError",
    "RegimeTag",
    "Scalar",
    "SequenceBundle",
    "SingularMatrixError",
    "SpecialCase",
    "closed_table",
    "detect_case",
    "favard_check",
    "fixed_point",
    "format_scalar",
    "identity_residual",
    "jacobi_data",
    "lambda_sequence",
    "m_polynomials",
    "moments",
    "parse_scalar",
    "q_form_coeffs",
    "reconstruct_six_sequences",
    "require_admissible",
    "regime_classify",
    "residuals_system",
    "solve_table",
    "verify_against_recursion",
]
