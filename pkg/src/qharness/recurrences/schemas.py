from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

# rationals travel as "p/q" strings, floats as JSON numbers
SerializedScalar = Union[str, float, None]
ParamLiteral = Optional[Union[str, int, float]]


class CliConfigSchema(BaseModel):
    """Pydantic model for the flat ``.qharness.json`` configuration file."""
    model_config = ConfigDict(extra="forbid")

    sigma: ParamLiteral = Field(None, description="sigma >= 0")
    tau: ParamLiteral = Field(None, description="tau >= 0")
    theta: ParamLiteral = Field(None, description="drift parameter theta")
    eta: ParamLiteral = Field(None, description="drift parameter eta")
    q: ParamLiteral = Field(None, description="q in [-1, 1 + 2 sqrt(sigma tau)]")
    n: Optional[int] = Field(None, ge=0, description="Horizon N")
    t: ParamLiteral = Field(None, description="Time t > 0 for the Jacobi data")
    mode: Optional[Literal["exact", "float"]] = Field(None, description="Arithmetic mode")
    format: Optional[Literal["json", "csv"]] = Field(None, description="Output format")
    seed: Optional[int] = Field(None, description="Seed for the verification suites")
    suite: Optional[Literal["closed-forms", "residuals", "favard", "symmetry", "appendix", "all"]] = Field(
        None, description="Verification suite"
    )
    points: Optional[int] = Field(None, ge=1, description="Random points per verification suite")
    workers: Optional[int] = Field(None, ge=0, description="Worker processes for sweeps; 0 means one per physical core")


class ErrorRecord(BaseModel):
    type: str
    message: str
    exit_code: int


class JacobiSchema(BaseModel):
    t: SerializedScalar
    b: List[SerializedScalar]
    c_hat: List[SerializedScalar]


class ReportSchema(BaseModel):
    params: Dict[str, SerializedScalar]
    regime: str
    special_case: str
    favard_ok: bool
    bounded: bool
    determinacy: str
    fixed_point: SerializedScalar = None
    chi_limit: SerializedScalar = None
    contraction_constant: SerializedScalar = None
    limit_ratio: SerializedScalar = None
    sign_changes: int = 0
    known_process: Optional[str] = None
    notes: List[str] = Field(default_factory=list)


class SolveOutput(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    params: Dict[str, SerializedScalar]
    mode: str
    N: int
    t: SerializedScalar = None
    lambda_: List[SerializedScalar] = Field(alias="lambda")
    gamma: List[SerializedScalar]
    delta: List[SerializedScalar]
    chi: List[SerializedScalar]
    jacobi: Optional[JacobiSchema] = None
    report: Optional[ReportSchema] = None


class SweepRow(BaseModel):
    index: int
    params: Dict[str, Any]
    report: Optional[ReportSchema] = None
    error: Optional[ErrorRecord] = None


class SuiteResult(BaseModel):
    suite: str
    checked: int
    failed: int
    max_residual: SerializedScalar = None
    first_counterexample: Optional[Dict[str, Any]] = None

    @property
    def ok(self) -> bool:
        return self.failed == 0


class VerifySummary(BaseModel):
    seed: int
    N: int
    ok: bool
    suites: List[SuiteResult]
