"""
The mixture xi(x) = beta^2 x^p of the pure p-spin model and the quantities
derived from it: xi', xi'', xi''', theta(q) = q xi'(q) - xi(q) and the Gaussian
scales Y = sqrt(xi'(u)), Y_{a-b} = sqrt(xi'(a) - xi'(b)).

Every function accepts a float or a numpy array and returns the same kind.
"""
from typing import Union

import numpy as np

from pspin.errors import DomainError
from pspin.schemas.model import ModelSpec

FloatOrArray = Union[float, np.ndarray]

# degree above which powers near 1 go through log1p
LOG_POWER_MIN_DEGREE = 15


def _unwrap(value: np.ndarray, like) -> FloatOrArray:
    if np.ndim(like) == 0:
        return float(value)
    return value


def _checked(x, upper: float = 1.0, name: str = "x") -> np.ndarray:
    array = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(array)):
        raise DomainError(f"{name} must be finite")
    if np.any(array < 0.0) or np.any(array > upper):
        bound = "1" if upper == 1.0 else "+inf"
        raise DomainError(f"{name} must lie in [0, {bound}], got {x}")
    return array


def power(x: np.ndarray, k: int, p: int) -> np.ndarray:
    """x**k for x >= 0; log-space near x = 1 for high-degree models."""
    if k == 0:
        return np.ones_like(x)
    if p < LOG_POWER_MIN_DEGREE:
        return x**k
    result = x**k
    near_one = x > 0.5
    if np.any(near_one):
        result = np.where(near_one, np.exp(k * np.log1p(np.where(near_one, x, 1.0) - 1.0)), result)
    return result


def xi(model: ModelSpec, x: FloatOrArray) -> FloatOrArray:
    """beta^2 x^p on [0, 1]."""
    array = _checked(x)
    return _unwrap(model.beta**2 * power(array, model.p, model.p), x)


def xi_prime(model: ModelSpec, x: FloatOrArray) -> FloatOrArray:
    array = _checked(x, upper=np.inf)
    return _unwrap(model.beta**2 * model.p * power(array, model.p - 1, model.p), x)


def xi_pp(model: ModelSpec, x: FloatOrArray) -> FloatOrArray:
    array = _checked(x, upper=np.inf)
    p = model.p
    return _unwrap(model.beta**2 * p * (p - 1) * power(array, p - 2, p), x)


def xi_ppp(model: ModelSpec, x: FloatOrArray) -> FloatOrArray:
    """Third derivative; identically zero for the SK model."""
    array = _checked(x, upper=np.inf)
    p = model.p
    if p == 2:
        return _unwrap(np.zeros_like(array), x)
    return _unwrap(model.beta**2 * p * (p - 1) * (p - 2) * power(array, p - 3, p), x)


def theta(model: ModelSpec, q: FloatOrArray) -> FloatOrArray:
    """
    theta(q) = q xi'(q) - xi(q) = beta^2 (p - 1) q^p.

    theta'(s) = s xi''(s), so the integral of s xi''(s) over [a, b] is
    theta(b) - theta(a).
    """
    array = _checked(q, name="q")
    return _unwrap(model.beta**2 * (model.p - 1) * power(array, model.p, model.p), q)


def y_of(model: ModelSpec, u: FloatOrArray) -> FloatOrArray:
    """Y_u = sqrt(xi'(u))."""
    return _unwrap(np.sqrt(np.asarray(xi_prime(model, u))), u)


def y_diff(model: ModelSpec, a: FloatOrArray, b: FloatOrArray) -> FloatOrArray:
    """
    Y_{a-b} = sqrt(xi'(a) - xi'(b)) for a > b >= 0.

    Raises:
        DomainError: if a <= b anywhere
    """
    a_arr = np.asarray(a, dtype=float)
    b_arr = np.asarray(b, dtype=float)
    if np.any(a_arr <= b_arr):
        raise DomainError(f"y_diff needs a > b, got a={a}, b={b}")
    gap = np.asarray(xi_prime(model, a_arr)) - np.asarray(xi_prime(model, b_arr))
    return _unwrap(np.sqrt(np.maximum(gap, 0.0)), np.broadcast_arrays(a_arr, b_arr)[0])
