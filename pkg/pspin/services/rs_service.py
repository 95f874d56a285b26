"""
Replica-symmetric criterion functions of the pure p-spin model.

With Y = sqrt(xi'(q)) and g ~ N(0, 1):

    C(q)  = E[cosh(Yg) log cosh(Yg)] / E[cosh(Yg)] - xi'(q)/2 - theta(q)/2
    D(q)  = E[tanh^2(Yg) cosh(Yg)] / E[cosh(Yg)] - q
    T(u)  = u E[cosh(Yg)] / E[tanh^2(Yg) cosh(Yg)] - 1

C and D are related by dC/dq = (xi''(q)/2) D(q), and T has the opposite
sign of D. All ratios go through the tilt-cancelled quadrature entry point.
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy.special import erf

from pspin.errors import DomainError
from pspin.schemas.model import ModelSpec
from pspin.schemas.quadrature import QuadratureRule
from pspin.schemas.reports import RsEval
from pspin.services import model_service as ms
from pspin.services.quadrature_service import (logcosh, log_expect_cosh_pow,
                                               resolve_rule, sech2,
                                               tilted_mean)

logger = logging.getLogger(__name__)

T_MIN_U = 1e-8
# above this scale tanh^2 averages are formed as 1 - E[sech^2]
LARGE_SCALE = 1.0


def _tanh2(x: np.ndarray) -> np.ndarray:
    return np.tanh(x) ** 2


def _sech4(x: np.ndarray) -> np.ndarray:
    return sech2(x) ** 2


def _logcosh2(x: np.ndarray) -> np.ndarray:
    return logcosh(x) ** 2


def _unwrap(value, like):
    if np.ndim(like) == 0:
        return float(value)
    return np.asarray(value, dtype=float)


def _overlap_gap(rule: QuadratureRule, Y, q) -> np.ndarray:
    """
    E[tanh^2 cosh] / E[cosh] - q, the tanh^2 average taken as 1 - E_tilt[sech^2]
    for large Y so that q near 1 does not cancel.
    """
    Y_arr, q_arr = np.broadcast_arrays(np.asarray(Y, dtype=float), np.asarray(q, dtype=float))
    small = Y_arr <= LARGE_SCALE
    gap = np.empty(Y_arr.shape)
    gap[small] = np.asarray(tilted_mean(rule, Y_arr[small], _tanh2)) - q_arr[small]
    gap[~small] = (1.0 - q_arr[~small]) - np.asarray(tilted_mean(rule, Y_arr[~small], sech2))
    return gap


def _gamma(rule: QuadratureRule, Y) -> np.ndarray:
    """E[tanh^2(Yg) cosh(Yg)] / E[cosh(Yg)]."""
    return _overlap_gap(rule, Y, 0.0)


def C1(model: ModelSpec, q, rule: Optional[QuadratureRule] = None):
    """E[cosh(Yg) log cosh(Yg)] / E[cosh(Yg)] at Y = sqrt(xi'(q))."""
    rule = resolve_rule(rule)
    q_arr = np.asarray(q, dtype=float)
    Y = np.asarray(ms.y_of(model, q_arr))
    return _unwrap(tilted_mean(rule, Y, logcosh), q)


def C2(model: ModelSpec, q):
    """xi'(q)/2 + theta(q)/2."""
    q_arr = np.asarray(q, dtype=float)
    value = 0.5 * np.asarray(ms.xi_prime(model, q_arr)) + 0.5 * np.asarray(ms.theta(model, q_arr))
    return _unwrap(value, q)


def C(model: ModelSpec, q, rule: Optional[QuadratureRule] = None):
    """C_beta(q); exactly zero at q = 0."""
    q_arr = np.asarray(q, dtype=float)
    ms.xi(model, q_arr)  # domain check on [0, 1]
    value = np.asarray(C1(model, q_arr, rule)) - np.asarray(C2(model, q_arr))
    value = np.where(q_arr == 0.0, 0.0, value)
    return _unwrap(value, q)


def D(model: ModelSpec, q, rule: Optional[QuadratureRule] = None):
    """D_beta(q); equals -q exactly when beta = 0."""
    q_arr = np.asarray(q, dtype=float)
    ms.xi(model, q_arr)
    if model.beta == 0.0:
        return _unwrap(-q_arr, q)
    rule = resolve_rule(rule)
    Y = np.asarray(ms.y_of(model, q_arr))
    return _unwrap(_overlap_gap(rule, Y, q_arr), q)


def dC_du(model: ModelSpec, q, rule: Optional[QuadratureRule] = None):
    """(xi''(q)/2) D(q), the derivative of C obtained by Gaussian integration by parts."""
    q_arr = np.asarray(q, dtype=float)
    value = 0.5 * np.asarray(ms.xi_pp(model, q_arr)) * np.asarray(D(model, q_arr, rule))
    return _unwrap(value, q)


def dC1_dq(model: ModelSpec, q, rule: Optional[QuadratureRule] = None):
    """(xi''(q)/2) (E[sinh^2(Yg) / cosh(Yg)] / E[cosh(Yg)] + 1), positive for q, beta > 0."""
    rule = resolve_rule(rule)
    q_arr = np.asarray(q, dtype=float)
    Y = np.asarray(ms.y_of(model, q_arr))
    value = 0.5 * np.asarray(ms.xi_pp(model, q_arr)) * (_gamma(rule, Y) + 1.0)
    return _unwrap(value, q)


def dC_dbeta(model: ModelSpec, q, rule: Optional[QuadratureRule] = None):
    """
    Partial derivative of C_beta(q) in beta at fixed q:
    (xi'(q) Gamma(q) - theta(q)) / beta, which is xi(q) / beta wherever D(q) = 0.
    """
    if model.beta <= 0.0:
        raise DomainError("dC_dbeta needs beta > 0")
    rule = resolve_rule(rule)
    q_arr = np.asarray(q, dtype=float)
    Y = np.asarray(ms.y_of(model, q_arr))
    gamma = _gamma(rule, Y)
    value = (Y**2 * gamma - np.asarray(ms.theta(model, q_arr))) / model.beta
    return _unwrap(value, q)


def _check_t_domain(model: ModelSpec, u) -> np.ndarray:
    if model.beta <= 0.0:
        raise DomainError("T is only defined for beta > 0")
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= T_MIN_U):
        raise DomainError(
            f"T(u) diverges as u -> 0+; refusing u <= {T_MIN_U:g}, got {u}"
        )
    return u_arr


def T(model: ModelSpec, u, rule: Optional[QuadratureRule] = None):
    """u E[cosh(Yg)] / E[tanh^2(Yg) cosh(Yg)] - 1 for u > 1e-8."""
    u_arr = _check_t_domain(model, u)
    rule = resolve_rule(rule)
    Y = np.asarray(ms.y_of(model, u_arr))
    return _unwrap(u_arr / _gamma(rule, Y) - 1.0, u)


def T_prime(model: ModelSpec, u, rule: Optional[QuadratureRule] = None):
    """
    dT/du = a_1/(a_1 - a_{-1}) - (p - 1) Y^2 a_1 a_{-3} / (a_1 - a_{-1})^2,
    with a_k = E[cosh^k(Yg)]; a_1 - a_{-1} and a_{-3} enter only through
    their ratios to a_1.
    """
    u_arr = _check_t_domain(model, u)
    rule = resolve_rule(rule)
    Y = np.asarray(ms.y_of(model, u_arr))
    gamma = _gamma(rule, Y)
    ratio_minus3 = np.asarray(tilted_mean(rule, Y, _sech4))
    value = 1.0 / gamma - (model.p - 1) * Y**2 * ratio_minus3 / gamma**2
    return _unwrap(value, u)


def _a_k(rule: QuadratureRule, Y, k: int):
    return np.exp(np.asarray(log_expect_cosh_pow(rule, Y, float(k))))


def a_k(rule: QuadratureRule, Y, k: int):
    """
    a_k = E[cosh^k(Yg)] for k in {-5, ..., 1}.

    Raises:
        DomainError: for k outside {-5, ..., 1}
    """
    if not -5 <= k <= 1:
        raise DomainError(f"a_k is only provided for k in -5..1, got {k}")
    return _unwrap(_a_k(rule, Y, k), Y)


def da_k_dY(rule: QuadratureRule, Y, k: int):
    """d a_k / dY = k^2 Y a_k - k (k - 1) Y a_{k-2}."""
    if not -5 <= k <= 1:
        raise DomainError(f"a_k is only provided for k in -5..1, got {k}")
    Y_arr = np.asarray(Y, dtype=float)
    value = k**2 * Y_arr * _a_k(rule, Y_arr, k) - k * (k - 1) * Y_arr * _a_k(rule, Y_arr, k - 2)
    return _unwrap(value, Y)


def G1_quotient(t):
    """3t / (1 + 2(1 - t^2) + 3 / (1 + 2 / sqrt(1 - t^2))), the rational part of G1."""
    t_arr = np.asarray(t, dtype=float)
    one_minus = 1.0 - t_arr**2
    denominator = 1.0 + 2.0 * one_minus + 3.0 / (1.0 + 2.0 / np.sqrt(one_minus))
    return _unwrap(3.0 * t_arr / denominator, t)


def G1(t):
    """
    arctanh t - 3t / (1 + 2(1 - t^2) + 3 / (1 + 2 / sqrt(1 - t^2))) on [0, 1).

    Raises:
        DomainError: if t >= 1 or t < 0
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0) or np.any(t_arr >= 1.0):
        raise DomainError(f"G1 is defined on [0, 1), got {t}")
    return _unwrap(np.arctanh(t_arr) - np.asarray(G1_quotient(t_arr)), t)


def G2(x, rule: Optional[QuadratureRule] = None):
    """
    x - 2 L1 + L2 - L1^2, with Lk = E[cosh(sqrt(x) g) (log cosh(sqrt(x) g))^k] / E[cosh(sqrt(x) g)].

    Equals the m-derivative of C1(m, q) at m = 1 when x = xi'(q).
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0):
        raise DomainError(f"G2 is defined for x >= 0, got {x}")
    rule = resolve_rule(rule)
    Y = np.sqrt(x_arr)
    first = np.asarray(tilted_mean(rule, Y, logcosh))
    second = np.asarray(tilted_mean(rule, Y, _logcosh2))
    value = x_arr - 2.0 * first + second - first**2
    value = np.where(x_arr == 0.0, 0.0, value)
    return _unwrap(value, x)


def c_bounds(model: ModelSpec, u) -> tuple[float, float]:
    """
    Closed-form bounds on C_beta(u) from |x| - log 2 <= log cosh x <= |x|:

        sqrt(2/pi) Y e^{-Y^2/2} + Y^2 erf(Y/sqrt 2) - Y^2/2 - theta(u)/2

    is the upper bound; the lower bound is the same minus log 2.
    """
    u = float(u)
    if u < 0.0:
        raise DomainError(f"c_bounds needs u >= 0, got {u}")
    Y = float(ms.y_of(model, u))
    theta_u = model.beta**2 * (model.p - 1) * u**model.p
    upper = (
        math.sqrt(2.0 / math.pi) * Y * math.exp(-0.5 * Y**2)
        + Y**2 * float(erf(Y / math.sqrt(2.0)))
        - 0.5 * Y**2
        - 0.5 * theta_u
    )
    return upper - math.log(2.0), upper


def rs_eval(model: ModelSpec, q: float, rule: Optional[QuadratureRule] = None) -> RsEval:
    rule = resolve_rule(rule)
    q = float(q)
    c1 = float(C1(model, q, rule)) if q > 0.0 else 0.0
    c2 = float(C2(model, q))
    d = float(D(model, q, rule))
    t_value = float(T(model, q, rule)) if q > T_MIN_U and model.beta > 0.0 else None
    return RsEval(
        q=q,
        C=c1 - c2 if q > 0.0 else 0.0,
        D=d,
        C1=c1,
        C2=c2,
        T=t_value,
        dC_du=0.5 * float(ms.xi_pp(model, q)) * d,
    )
