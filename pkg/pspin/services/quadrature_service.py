"""
Gaussian expectations over a standard Gaussian g.

Every formula of the criterion functions consumes ratios of cosh-weighted or
cosh^m-weighted expectations. The cosh weight is removed exactly with the
tilt

    E[cosh(s + Y g) h(s + Y g)] = e^{Y^2/2} ( e^{s} E[h(s + Y^2 + Y g)]
                                            + e^{-s} E[h(s - Y^2 + Y g)] ) / 2,

so ratios never form e^{Y^2/2}. cosh^m weights (m < 1) are handled in
log-space with logsumexp over the nodes.

The integrands vary on a scale of 1/Y in g. Up to Y = 2 the Gauss-Hermite
rule resolves them; larger scales switch to a composite Gauss-Legendre rule
with panels of width 1/Y.

Integrands are numpy-vectorized callables. Scales Y and shifts s may be
arrays; results broadcast over their shape.
"""
import logging
import math
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import expit, logsumexp

from pspin.config import get_settings
from pspin.errors import DomainError, QuadratureError
from pspin.schemas.quadrature import QuadratureRule
from pspin.validation import validate_positive_integer

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]

MIN_ORDER = 4
MAX_ORDER = 2048
LOG_2 = math.log(2.0)
# exp() overflows past this
MAX_LOG = 709.0

RESOLVED_SCALE = 2.0
SCALE_STEP = 0.25
PANEL_POINTS = 8
TRUNCATION = 9.0
MAX_BLOCK = 2**21


@lru_cache(maxsize=16)
def gauss_hermite(n: int) -> QuadratureRule:
    """
    n-point Gauss-Hermite rule for N(0, 1) by the Golub-Welsch method.

    The Jacobi matrix of the probabilists' Hermite polynomials has a zero
    diagonal and off-diagonal sqrt(1), ..., sqrt(n - 1); its eigenvalues are
    the nodes and the squared first eigenvector components are the weights.
    """
    validate_positive_integer(n, min_value=MIN_ORDER, max_value=MAX_ORDER, field_name="Quadrature order")
    off_diagonal = np.sqrt(np.arange(1, n, dtype=float))
    nodes, vectors = eigh_tridiagonal(np.zeros(n), off_diagonal)
    weights = vectors[0, :] ** 2
    weights = weights / np.sum(weights)
    # exact symmetry about zero
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    weights = weights / np.sum(weights)
    logger.debug(f"Built Gauss-Hermite rule of order {n}")
    return QuadratureRule(nodes=nodes, weights=weights, order=n)


def logcosh(x: np.ndarray) -> np.ndarray:
    """log cosh x without overflow: |x| + log1p(e^{-2|x|}) - log 2."""
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - LOG_2


def sech2(x: np.ndarray) -> np.ndarray:
    """1 - tanh^2 x, computed without cancellation."""
    ax = np.abs(x)
    e = np.exp(-2.0 * ax)
    return 4.0 * e / (1.0 + e) ** 2


def _evaluate(h: Integrand, points: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    values = np.asarray(h(points), dtype=float)
    if values.shape != points.shape:
        values = np.broadcast_to(values, points.shape)
    if not np.all(np.isfinite(values)):
        index = np.unravel_index(np.argmax(~np.isfinite(values)), values.shape)
        node = rule.nodes[index[-1]]
        raise QuadratureError(
            f"Integrand is not finite at node g={node:.17g} (argument {points[index]:.17g})"
        )
    return values


def expect(rule: QuadratureRule, f: Integrand) -> float:
    """E[f(g)] as sum_i w_i f(x_i)."""
    values = _evaluate(f, np.asarray(rule.nodes), rule)
    return float(np.dot(rule.weights, values))


@lru_cache(maxsize=64)
def composite_normal(bucket: int) -> QuadratureRule:
    """
    Composite Gauss-Legendre rule for N(0, 1) that resolves integrands with
    features of width 1/Y in g, for every Y <= bucket * SCALE_STEP.

    Panels of width 1/Y carry PANEL_POINTS Legendre nodes each and cover
    |g| <= TRUNCATION + Y, which also holds the bulk of a cosh^m(Y g)
    reweighting for m <= 1.
    """
    validate_positive_integer(bucket, field_name="Scale bucket")
    scale = bucket * SCALE_STEP
    half_width = TRUNCATION + scale
    panels = math.ceil(2.0 * half_width * scale)
    x, w = np.polynomial.legendre.leggauss(PANEL_POINTS)
    edges = np.linspace(-half_width, half_width, panels + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (centers[:, None] + half[:, None] * x).ravel()
    weights = (half[:, None] * w).ravel() * np.exp(-0.5 * nodes**2)
    weights = weights / np.sum(weights)
    logger.debug(f"Built composite normal rule for Y <= {scale:g} with {nodes.size} nodes")
    return QuadratureRule(nodes=nodes, weights=weights, order=nodes.size)


def rule_for_scale(rule: QuadratureRule, Y: float) -> QuadratureRule:
    """rule itself up to Y = RESOLVED_SCALE; beyond it a composite rule fine enough for Y."""
    if Y <= RESOLVED_SCALE:
        return rule
    return composite_normal(math.ceil(Y / SCALE_STEP))


def _broadcast_inputs(Y, shift, m=1.0) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    Y_arr = np.asarray(Y, dtype=float)
    if np.any(Y_arr < 0.0) or not np.all(np.isfinite(Y_arr)):
        raise DomainError(f"Gaussian scale Y must be finite and non-negative, got {Y}")
    return np.broadcast_arrays(Y_arr, np.asarray(shift, dtype=float), np.asarray(m, dtype=float))


def _shape_result(result: np.ndarray, *inputs):
    if all(np.ndim(value) == 0 for value in inputs):
        return float(result)
    return result


def _by_scale(rule: QuadratureRule, Y, shift, m, kernel) -> np.ndarray:
    """
    Apply kernel(rule, Y, s, m) to blocks of rows that share a rule.

    Rows with Y <= RESOLVED_SCALE use the given rule, the others the
    composite rule of their scale bucket, so each element's value depends
    only on its own (Y, s, m). Blocks hold at most MAX_BLOCK integrand
    evaluations.
    """
    Y_arr, s_arr, m_arr = _broadcast_inputs(Y, shift, m)
    flat_Y, flat_s, flat_m = Y_arr.ravel(), s_arr.ravel(), m_arr.ravel()
    buckets = np.where(flat_Y > RESOLVED_SCALE, np.ceil(flat_Y / SCALE_STEP), 0).astype(int)
    out = np.empty(flat_Y.size)
    for bucket in np.unique(buckets):
        local = rule if bucket == 0 else composite_normal(int(bucket))
        rows = np.flatnonzero(buckets == bucket)
        step = max(1, MAX_BLOCK // local.order)
        for start in range(0, rows.size, step):
            block = rows[start:start + step]
            out[block] = kernel(local, flat_Y[block, None], flat_s[block, None], flat_m[block, None])
    return out.reshape(Y_arr.shape)


def tilted_mean(rule: QuadratureRule, Y, h: Integrand, shift=0.0):
    """
    Ratio E[cosh(s + Y g) h(s + Y g)] / E[cosh(s + Y g)].

    This is the tilt-cancelled entry point: the common factor e^{Y^2/2}
    cosh(s) is removed before anything is exponentiated.
    """

    def kernel(local: QuadratureRule, Y_col, s_col, _) -> np.ndarray:
        g = np.asarray(local.nodes)
        plus = _evaluate(h, s_col + Y_col**2 + Y_col * g, local) @ local.weights
        minus = _evaluate(h, s_col - Y_col**2 + Y_col * g, local) @ local.weights
        s = s_col[:, 0]
        return expit(2.0 * s) * plus + expit(-2.0 * s) * minus

    return _shape_result(_by_scale(rule, Y, shift, 1.0, kernel), Y, shift)


def cosh_ratio(
    rule: QuadratureRule, Y, h_num: Integrand, h_den: Optional[Integrand] = None, shift=0.0
):
    """E[cosh(.) h_num(.)] / E[cosh(.) h_den(.)] with the tilt factors cancelled."""
    numerator = np.asarray(tilted_mean(rule, Y, h_num, shift))
    if h_den is None:
        return _shape_result(numerator, Y, shift)
    denominator = np.asarray(tilted_mean(rule, Y, h_den, shift))
    return _shape_result(numerator / denominator, Y, shift)


def expect_cosh_weighted(rule: QuadratureRule, Y: float, h: Integrand) -> float:
    """
    E[cosh(Y g) h(Y g)] = e^{Y^2/2} (E[h(Y g + Y^2)] + E[h(Y g - Y^2)]) / 2.

    Raises:
        QuadratureError: if the uncancelled result leaves the float range
    """
    mean = float(tilted_mean(rule, Y, h))
    if mean == 0.0:
        return 0.0
    log_value = 0.5 * float(Y) ** 2 + math.log(abs(mean))
    if log_value > MAX_LOG:
        raise QuadratureError(
            f"E[cosh(Yg) h(Yg)] overflows for Y={Y}; use cosh_ratio for ratios"
        )
    return math.copysign(math.exp(log_value), mean)


def _log_cosh_pow_terms(rule: QuadratureRule, Y_col, s_col, m_col) -> tuple[np.ndarray, np.ndarray]:
    points = s_col + Y_col * np.asarray(rule.nodes)
    return points, rule.log_weights + m_col * logcosh(points)


def log_expect_cosh_pow(rule: QuadratureRule, Y, m, shift=0.0):
    """log E[cosh^m(s + Y g)], by logsumexp over the nodes."""

    def kernel(local: QuadratureRule, Y_col, s_col, m_col) -> np.ndarray:
        _, log_terms = _log_cosh_pow_terms(local, Y_col, s_col, m_col)
        return logsumexp(log_terms, axis=-1)

    return _shape_result(_by_scale(rule, Y, shift, m, kernel), Y, shift, m)


def cosh_pow_ratio(rule: QuadratureRule, Y, m, h: Integrand, shift=0.0):
    """E[cosh^m(.) h(.)] / E[cosh^m(.)] evaluated as a softmax-weighted mean."""

    def kernel(local: QuadratureRule, Y_col, s_col, m_col) -> np.ndarray:
        points, log_terms = _log_cosh_pow_terms(local, Y_col, s_col, m_col)
        log_norm = logsumexp(log_terms, axis=-1, keepdims=True)
        probabilities = np.exp(log_terms - log_norm)
        values = _evaluate(h, points, local)
        return np.sum(probabilities * values, axis=-1)

    return _shape_result(_by_scale(rule, Y, shift, m, kernel), Y, shift, m)


def expect_cosh_pow(rule: QuadratureRule, Y: float, m: float, h: Integrand) -> float:
    """
    E[cosh^m(Y g) h(Y g)] with cosh^m = exp(m (|Yg| + log((1 + e^{-2|Yg|}) / 2))).

    Raises:
        DomainError: if m is outside (0, 1]
        QuadratureError: if the result leaves the float range
    """
    if not 0.0 < m <= 1.0:
        raise DomainError(f"m must lie in (0, 1], got {m}")
    log_norm = float(log_expect_cosh_pow(rule, Y, m))
    mean = float(cosh_pow_ratio(rule, Y, m, h))
    if mean == 0.0:
        return 0.0
    log_value = log_norm + math.log(abs(mean))
    if log_value > MAX_LOG:
        raise QuadratureError(f"E[cosh^m(Yg) h(Yg)] overflows for Y={Y}, m={m}")
    return math.copysign(math.exp(log_value), mean)


def expect2d(rule: QuadratureRule, F: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
    """Tensor-product rule sum_ij w_i w_j F(x_i, x_j) for independent g1, g2."""
    g1, g2 = np.meshgrid(rule.nodes, rule.nodes, indexing="ij")
    values = np.asarray(F(g1, g2), dtype=float)
    if values.shape != g1.shape:
        values = np.broadcast_to(values, g1.shape)
    if not np.all(np.isfinite(values)):
        i, j = np.unravel_index(np.argmax(~np.isfinite(values)), values.shape)
        raise QuadratureError(
            f"Integrand is not finite at node pair (g1={rule.nodes[i]:.17g}, g2={rule.nodes[j]:.17g})"
        )
    return float(rule.weights @ values @ rule.weights)


def resolve_rule(rule: Optional[QuadratureRule] = None) -> QuadratureRule:
    """The given rule, or the default-order rule from the settings."""
    if rule is not None:
        return rule
    return gauss_hermite(get_settings().quad_order)
