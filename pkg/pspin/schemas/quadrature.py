import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class QuadratureRule(BaseModel):
    """
    Nodes and weights for expectations over g ~ N(0, 1).

    Weights are normalized to sum to one (probabilists' convention), so
    E[f(g)] is approximated by sum(weights * f(nodes)).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @field_validator("nodes", "weights", mode="before")
    @classmethod
    def _as_readonly_array(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float)
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def _check_invariants(self) -> "QuadratureRule":
        if self.nodes.shape != (self.order,) or self.weights.shape != (self.order,):
            raise ValueError("nodes and weights must both have length equal to order")
        # far-tail weights underflow to 0.0 for large orders
        if np.any(self.weights < 0.0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("quadrature weights must be finite and non-negative")
        if abs(float(np.sum(self.weights)) - 1.0) > 1e-12:
            raise ValueError("quadrature weights must sum to one")
        return self

    @property
    def log_weights(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.weights)
