class QHarnessError(Exception):
    """Base class for all qharness errors."""
    exit_code = 1


class ParseError(QHarnessError):
    """Raised when a scalar literal, grid spec or config file cannot be parsed."""
    exit_code = 2


class ParameterRangeError(QHarnessError):
    """Raised when a parameter lies outside its admissible range."""
    exit_code = 3


class RegimeError(QHarnessError):
    """Raised when an operation is called outside the regime it is defined on."""
    exit_code = 4


class CaseHypothesisError(RegimeError):
    """Raised when a closed form is requested for parameters violating its hypothesis."""
    pass


class PoleError(QHarnessError):
    """Raised when a denominator vanishes."""
    exit_code = 5


class SingularMatrixError(PoleError):
    """Raised when a step matrix A_n is singular."""
    pass


class NumericError(PoleError):
    """Raised when float arithmetic produces NaN or infinity."""
    pass
