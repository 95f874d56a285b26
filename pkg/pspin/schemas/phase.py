import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, model_validator


class Phase(Enum):
    RS = "RS"
    ONE_RSB = "OneRSB"
    UNKNOWN = "Unknown"


class PhasePoint(BaseModel):
    """One row of a phase-diagram sweep."""

    model_config = ConfigDict(frozen=True)

    p: int
    beta: float
    phase: Phase
    m: Optional[float] = None
    q: Optional[float] = None
    max_f_violation: float
    parisi_value: float

    @model_validator(mode="after")
    def _check_phase_fields(self) -> "PhasePoint":
        if self.phase == Phase.RS and (self.m is not None or self.q is not None):
            raise ValueError("an RS point carries no (m, q)")
        if self.phase == Phase.ONE_RSB:
            if self.m is None or self.q is None:
                raise ValueError("a OneRSB point needs both m and q")
            if not (0.0 < self.m < 1.0 and 0.0 < self.q < 1.0):
                raise ValueError("a OneRSB point needs m and q in (0, 1)")
        annealed = math.log(2.0) + 0.5 * self.beta**2
        if self.parisi_value > annealed + 1e-9:
            raise ValueError("the Parisi value cannot exceed the annealed value")
        return self
