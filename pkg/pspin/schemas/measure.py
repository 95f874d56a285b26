from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DiscreteMeasure(BaseModel):
    """
    Probability measure on [0, 1) with finitely many atoms.

    Atoms are (location, mass) pairs with strictly increasing locations and
    positive masses summing to one.
    """

    model_config = ConfigDict(frozen=True)

    atoms: Tuple[Tuple[float, float], ...] = Field(min_length=1)

    @field_validator("atoms")
    @classmethod
    def _check_atoms(cls, atoms):
        locations = [q for q, _ in atoms]
        masses = [w for _, w in atoms]
        if any(not 0.0 <= q < 1.0 for q in locations):
            raise ValueError("atom locations must lie in [0, 1)")
        if any(b <= a for a, b in zip(locations, locations[1:])):
            raise ValueError("atom locations must be strictly increasing")
        if any(not 0.0 < w <= 1.0 for w in masses):
            raise ValueError("atom masses must lie in (0, 1]")
        if abs(sum(masses) - 1.0) > 1e-12:
            raise ValueError(f"atom masses must sum to one, got {sum(masses)}")
        return tuple((float(q), float(w)) for q, w in atoms)

    @classmethod
    def dirac(cls, q: float = 0.0) -> "DiscreteMeasure":
        return cls(atoms=((q, 1.0),))

    @classmethod
    def two_atom(cls, m: float, q: float) -> "DiscreteMeasure":
        """m * delta_0 + (1 - m) * delta_q; m = 1 collapses to delta_0."""
        if m >= 1.0:
            return cls.dirac(0.0)
        return cls(atoms=((0.0, m), (q, 1.0 - m)))

    @property
    def k(self) -> int:
        return len(self.atoms)

    @property
    def locations(self) -> list[float]:
        return [q for q, _ in self.atoms]

    @property
    def cumulative_masses(self) -> list[float]:
        """mu([0, q_j]) for each atom location q_j; the last entry is forced to 1."""
        totals = list(np.cumsum([w for _, w in self.atoms]))
        totals[-1] = 1.0
        return [float(c) for c in totals]

    def alpha(self, s: float) -> float:
        """Distribution function mu([0, s])."""
        value = 0.0
        for q, c in zip(self.locations, self.cumulative_masses):
            if s >= q:
                value = c
        return value

    def triplet(self) -> tuple[int, list[float], list[float]]:
        """
        The (k, m, q) sequences of the step-function representation:
        m_0 = 0 <= m_1 < ... <= m_{k+1} = 1 and q_0 = 0 <= q_1 < ... <= q_{k+2} = 1,
        with mu([0, q_p]) = m_p.
        """
        locations = self.locations
        cumulative = self.cumulative_masses
        k = len(locations) - 1
        m_seq = [0.0] + cumulative
        q_seq = [0.0] + locations + [1.0]
        return k, m_seq, q_seq


class CriterionCurve(BaseModel):
    model_config = ConfigDict(frozen=True)

    grid: list[float]
    f_values: list[float]
    support: list[float]
    support_values: list[float]
    max_violation: float
    zeros_at_support: list[bool]
    tolerance: float

    @model_validator(mode="after")
    def _check_consistency(self) -> "CriterionCurve":
        if len(self.grid) != len(self.f_values):
            raise ValueError("grid and f_values must have the same length")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("criterion grid must be strictly increasing")
        if self.grid[0] != 0.0 or self.grid[-1] != 1.0:
            raise ValueError("criterion grid must cover both endpoints of [0, 1]")
        if self.max_violation != max(self.f_values):
            raise ValueError("max_violation must equal the maximum of f_values")
        return self

    @property
    def is_nonpositive(self) -> bool:
        return self.max_violation <= self.tolerance

    @property
    def vanishes_on_support(self) -> bool:
        return all(self.zeros_at_support)

    @property
    def certifies(self) -> bool:
        """f <= 0 on [0, 1] and f = 0 on the support, up to tolerance."""
        return self.is_nonpositive and self.vanishes_on_support
