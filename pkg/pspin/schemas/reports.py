from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class RsEval(BaseModel):
    """Replica-symmetric criterion functions evaluated at one overlap q."""

    model_config = ConfigDict(frozen=True)

    q: float = Field(ge=0.0, le=1.0)
    C: float
    D: float
    C1: float
    C2: float
    T: Optional[float] = None  # undefined at q = 0
    dC_du: float


class DCheck(BaseModel):
    """Condition (1a): D(q1_0) > D(q2_0) > 0 > D(q1_1) > D(q2_1)."""

    model_config = ConfigDict(frozen=True)

    passed: bool
    values: tuple[float, float, float, float]


class GapCheck(BaseModel):
    """Condition (1b): C1(q1_1) - C2(q2_0) < 0."""

    model_config = ConfigDict(frozen=True)

    passed: bool
    value: float


class PeakCheck(BaseModel):
    """Condition (2): C(q2) > 0 at beta_high."""

    model_config = ConfigDict(frozen=True)

    passed: bool
    value: float


class CriterionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: int
    beta_low: float
    beta_high: float
    probes: tuple[float, float, float, float]
    q2: float
    cond_1a: DCheck
    cond_1b: GapCheck
    cond_2: PeakCheck
    verdict: bool

    @model_validator(mode="after")
    def _verdict_matches(self) -> "CriterionReport":
        expected = self.cond_1a.passed and self.cond_1b.passed and self.cond_2.passed
        if self.verdict != expected:
            raise ValueError("verdict must be the conjunction of the three conditions")
        return self


class BoundarySolution(BaseModel):
    """Solution (beta1, q1) of C_beta(q) = D_beta(q) = 0."""

    model_config = ConfigDict(frozen=True)

    p: int
    beta1: float
    q1: float = Field(gt=0.0, lt=1.0)
    residual_C: float
    residual_D: float
    bracket_width: float


class OneRsbSolution(BaseModel):
    """Solution (m, q) of C1(m, q) = D1(m, q) = 0 at fixed (p, beta)."""

    model_config = ConfigDict(frozen=True)

    p: int
    beta: float
    m: float = Field(gt=0.0, le=1.0)
    q: float = Field(gt=0.0, lt=1.0)
    residual_C: float
    residual_D: float
    iterations: int
    max_violation: Optional[float] = None
    zero_at_origin: Optional[bool] = None
    zero_at_q: Optional[bool] = None


class G1Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    grid_points: int
    min_value: float
    positive_on_grid: bool
    local_max_interval: tuple[float, float]
    local_max_found: bool
    local_min_interval: tuple[float, float]
    local_min_found: bool
    lower_bound: float
    lower_bound_positive: bool

    @property
    def passed(self) -> bool:
        return (
            self.positive_on_grid
            and self.local_max_found
            and self.local_min_found
            and self.lower_bound_positive
        )


class LemmaCheck(BaseModel):
    """One line of the lemma verification report."""

    model_config = ConfigDict(frozen=True)

    name: str
    passed: bool
    detail: str


class LemmaReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    checks: list[LemmaCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]
