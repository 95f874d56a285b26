"""
Validation helpers for numeric inputs.
"""
import math
from typing import Optional, Sequence

from pspin.errors import DomainError, OrderingError


def validate_unit_interval(
    value: float, field_name: str = "Value", closed_right: bool = True
) -> float:
    """
    Validate that a value lies in [0, 1] (or [0, 1) when closed_right is False).

    Raises:
        DomainError: If value is outside the interval or not finite
    """
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{field_name} must be finite, got {value}")
    if value < 0.0 or value > 1.0 or (not closed_right and value == 1.0):
        bracket = "]" if closed_right else ")"
        raise DomainError(f"{field_name} must lie in [0, 1{bracket}, got {value}")
    return value


def validate_positive(value: float, field_name: str = "Value") -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{field_name} must be a positive real, got {value}")
    return value


def validate_positive_integer(
    value: int, min_value: int = 1, max_value: Optional[int] = None, field_name: str = "Value"
) -> int:
    """
    Validate that a value is an integer within [min_value, max_value].

    Raises:
        DomainError: If value is invalid
    """
    if isinstance(value, bool) or not isinstance(value, int):
        raise DomainError(f"{field_name} must be an integer")
    if value < min_value:
        raise DomainError(f"{field_name} must be at least {min_value}")
    if max_value is not None and value > max_value:
        raise DomainError(f"{field_name} cannot exceed {max_value}")
    return value


def validate_mass(m: float, field_name: str = "m") -> float:
    """Validate a Parisi multiplier m in (0, 1]."""
    m = float(m)
    if not math.isfinite(m) or m <= 0.0 or m > 1.0:
        raise DomainError(f"{field_name} must lie in (0, 1], got {m}")
    return m


def validate_strictly_increasing(values: Sequence[float], field_name: str = "Values") -> list[float]:
    values = [float(v) for v in values]
    for left, right in zip(values, values[1:]):
        if not left < right:
            raise OrderingError(f"{field_name} must be strictly increasing, got {values}")
    return values
