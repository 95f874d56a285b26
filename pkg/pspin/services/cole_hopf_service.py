"""
Parisi functional and criterion functions for measures with finitely many atoms.

For a step-function distribution alpha with atoms a_1 < ... < a_k and
cumulative masses c_1 < ... < c_k = 1, the Parisi PDE is solved level by
level by the Cole-Hopf substitution:

    Phi(x, a_k) = log cosh x + (xi'(1) - xi'(a_k)) / 2
    Phi(x, a_j) = (1/c_j) log E exp(c_j Phi(x + g sqrt(xi'(a_{j+1}) - xi'(a_j)), a_{j+1}))
    Phi(x, 0)   = E Phi(x + g sqrt(xi'(a_1)), a_1)          (only when a_1 > 0)

Each level is a logsumexp over the quadrature nodes, so k atoms cost n^k
integrand evaluations.

The criterion functions Gamma and f are implemented for delta_0 (where f is
C) and for two-atom measures m delta_0 + (1 - m) delta_q. They satisfy
df/du = (xi''(u)/2) (Gamma(u) - u) and are normalised so that f(q) = 0.
"""
import logging
import math
from typing import Optional

import numpy as np
from scipy.special import logsumexp

from pspin.config import get_settings
from pspin.errors import CapacityError, DomainError
from pspin.schemas.measure import CriterionCurve, DiscreteMeasure
from pspin.schemas.model import ModelSpec
from pspin.schemas.quadrature import QuadratureRule
from pspin.services import model_service as ms
from pspin.services import rs_service
from pspin.services.quadrature_service import (LOG_2, cosh_pow_ratio, logcosh,
                                               log_expect_cosh_pow, resolve_rule,
                                               rule_for_scale, sech2, tilted_mean)
from pspin.validation import validate_mass, validate_unit_interval

logger = logging.getLogger(__name__)

MAX_PHI_ATOMS = 3
MAX_CRITERION_ATOMS = 2


def _phi_levels(measure: DiscreteMeasure, model: ModelSpec):
    """(location, cumulative mass, Gaussian scale to the next level) for each atom."""
    locations = measure.locations
    cumulative = measure.cumulative_masses
    next_locations = locations[1:] + [1.0]
    levels = []
    for a, c, b in zip(locations, cumulative, next_locations):
        gap = float(ms.xi_prime(model, b)) - float(ms.xi_prime(model, a))
        levels.append((a, c, math.sqrt(max(gap, 0.0))))
    return levels


def _phi(x: np.ndarray, depth: int, levels, rule: QuadratureRule) -> np.ndarray:
    _, c, scale = levels[depth]
    if depth == len(levels) - 1:
        return logcosh(x) + 0.5 * scale**2
    points = x[..., None] + scale * np.asarray(rule.nodes)
    inner = _phi(points, depth + 1, levels, rule)
    return logsumexp(c * inner + rule.log_weights, axis=-1) / c


def phi_at_origin(
    measure: DiscreteMeasure, model: ModelSpec, rule: Optional[QuadratureRule] = None
) -> float:
    """
    Phi_mu(0, 0) by the Cole-Hopf recursion.

    Raises:
        CapacityError: for more than three atoms
    """
    if measure.k > MAX_PHI_ATOMS:
        raise CapacityError(
            f"Phi is evaluated for at most {MAX_PHI_ATOMS} atoms, got {measure.k}"
        )
    rule = resolve_rule(rule)
    levels = _phi_levels(measure, model)
    first = measure.locations[0]
    if first == 0.0:
        return float(_phi(np.zeros(()), 0, levels, rule))
    scale = float(ms.y_of(model, first))
    values = _phi(scale * np.asarray(rule.nodes), 0, levels, rule)
    return float(np.dot(rule.weights, values))


def parisi_correction(measure: DiscreteMeasure, model: ModelSpec) -> float:
    """(1/2) int_0^1 alpha(s) s xi''(s) ds, exact for step functions via theta' = s xi''."""
    locations = measure.locations + [1.0]
    total = 0.0
    for a, b, c in zip(locations, locations[1:], measure.cumulative_masses):
        total += c * (float(ms.theta(model, b)) - float(ms.theta(model, a)))
    return 0.5 * total


def parisi_functional(
    measure: DiscreteMeasure, model: ModelSpec, rule: Optional[QuadratureRule] = None
) -> float:
    """P(mu) = log 2 + Phi_mu(0, 0) - (1/2) int_0^1 alpha(s) s xi''(s) ds."""
    return LOG_2 + phi_at_origin(measure, model, rule) - parisi_correction(measure, model)


def parisi_1rsb_closed_form(
    model: ModelSpec, m: float, q: float, rule: Optional[QuadratureRule] = None
) -> float:
    """
    P(m delta_0 + (1 - m) delta_q) written out:

        log 2 + (1/m) log E cosh^m(Y_q g) + (xi'(1) - xi'(q))/2 - (m theta(q) + theta(1) - theta(q))/2
    """
    m = validate_mass(m)
    q = validate_unit_interval(q, "q", closed_right=False)
    rule = resolve_rule(rule)
    Y = float(ms.y_of(model, q))
    theta_q = float(ms.theta(model, q))
    theta_1 = float(ms.theta(model, 1.0))
    return (
        LOG_2
        + float(log_expect_cosh_pow(rule, Y, m)) / m
        + 0.5 * (float(ms.xi_prime(model, 1.0)) - float(ms.xi_prime(model, q)))
        - 0.5 * (m * theta_q + theta_1 - theta_q)
    )


def f_rs(model: ModelSpec, u, rule: Optional[QuadratureRule] = None):
    """Criterion function of delta_0, which is C_beta itself."""
    return rs_service.C(model, u, rule)


def _check_two_atom(m: float, q: float, u: float) -> tuple[float, float, float]:
    m = validate_mass(m)
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    u = validate_unit_interval(u, "u")
    return m, q, u


def _inner_level(model: ModelSpec, m: float, q: float, u: float, rule: QuadratureRule):
    """
    For u <= q and x = Y_u g1: log Z(x) = log E2[cosh^m(x + Y_{q-u} g2)], the
    E2-mean r(x) of tanh under the cosh^m weight, and the outer log-weights.
    """
    Y_u = float(ms.y_of(model, u))
    gap = float(ms.xi_prime(model, q)) - float(ms.xi_prime(model, u))
    Y_gap = math.sqrt(max(gap, 0.0))
    outer_rule = rule_for_scale(rule, Y_u)
    x = Y_u * np.asarray(outer_rule.nodes)
    log_z = np.asarray(log_expect_cosh_pow(rule, Y_gap, m, shift=x))
    r = np.asarray(cosh_pow_ratio(rule, Y_gap, m, np.tanh, shift=x))
    log_outer = outer_rule.log_weights + log_z
    outer = np.exp(log_outer - logsumexp(log_outer))
    return log_z, r, outer


def _outer_level(model: ModelSpec, m: float, q: float, u: float, rule: QuadratureRule):
    """For u >= q: x = Y_q g1, Y_{u-q} and the cosh^m(x) softmax weights."""
    Y_q = float(ms.y_of(model, q))
    gap = float(ms.xi_prime(model, u)) - float(ms.xi_prime(model, q))
    Y_gap = math.sqrt(max(gap, 0.0))
    outer_rule = rule_for_scale(rule, Y_q)
    x = Y_q * np.asarray(outer_rule.nodes)
    log_outer = outer_rule.log_weights + m * logcosh(x)
    outer = np.exp(log_outer - logsumexp(log_outer))
    return x, Y_gap, outer


def gamma_1rsb(
    model: ModelSpec, m: float, q: float, u: float, rule: Optional[QuadratureRule] = None
) -> float:
    """
    Gamma_mu(u) for mu = m delta_0 + (1 - m) delta_q.

    On [0, q] (the left branch, also used at u = q):
        E1[ Z(x) r(x)^2 ] / E1[ Z(x) ],  x = Y_u g1,
    with Z(x) = E2[cosh^m(x + Y_{q-u} g2)] and r = E2[cosh^m tanh] / Z.
    On (q, 1]:
        E1[ cosh^m(x) R(x) ] / E1[ cosh^m(x) ],  x = Y_q g1,
    with R(x) = E2[cosh(x + Y_{u-q} g2) tanh^2(.)] / E2[cosh(.)].
    """
    m, q, u = _check_two_atom(m, q, u)
    rule = resolve_rule(rule)
    if u <= q:
        _, r, outer = _inner_level(model, m, q, u, rule)
        return float(np.dot(outer, r**2))
    x, Y_gap, outer = _outer_level(model, m, q, u, rule)
    inner = 1.0 - np.asarray(tilted_mean(rule, Y_gap, sech2, shift=x))
    return float(np.dot(outer, inner))


def _weighted_logcosh(model: ModelSpec, m: float, q: float, rule: QuadratureRule) -> float:
    """E[cosh^m(Y_q g) log cosh(Y_q g)] / E[cosh^m(Y_q g)]."""
    Y_q = float(ms.y_of(model, q))
    return float(cosh_pow_ratio(rule, Y_q, m, logcosh))


def f_1rsb(
    model: ModelSpec, m: float, q: float, u: float, rule: Optional[QuadratureRule] = None
) -> float:
    """
    f_mu(u) for mu = m delta_0 + (1 - m) delta_q, with f(q) = 0 and f(0) = -C1(m, q).

    For m = 1 this is C_beta(u) - C_beta(q).
    """
    m, q, u = _check_two_atom(m, q, u)
    rule = resolve_rule(rule)
    anchor = _weighted_logcosh(model, m, q, rule)
    theta_q = float(ms.theta(model, q))
    theta_u = float(ms.theta(model, u))
    if u <= q:
        log_z, _, outer = _inner_level(model, m, q, u, rule)
        return -anchor / m + 0.5 * (theta_q - theta_u) + float(np.dot(outer, log_z)) / m**2
    x, Y_gap, outer = _outer_level(model, m, q, u, rule)
    inner = np.asarray(tilted_mean(rule, Y_gap, logcosh, shift=x))
    xi_gap = float(ms.xi_prime(model, u)) - float(ms.xi_prime(model, q))
    return -anchor - 0.5 * (theta_u - theta_q) - 0.5 * xi_gap + float(np.dot(outer, inner))


def _curve_grid(measure: DiscreteMeasure, grid_size: int) -> np.ndarray:
    grid = np.linspace(0.0, 1.0, grid_size)
    return np.unique(np.concatenate([grid, np.asarray(measure.locations)]))


def criterion_curve(
    measure: DiscreteMeasure,
    model: ModelSpec,
    grid_size: Optional[int] = None,
    tolerance: Optional[float] = None,
    rule: Optional[QuadratureRule] = None,
) -> CriterionCurve:
    """
    f_mu on a uniform grid plus the atom locations.

    Implemented for delta_0 and for m delta_0 + (1 - m) delta_q.

    Raises:
        CapacityError: for three or more atoms
        DomainError: for one- or two-atom measures of another shape
    """
    if measure.k > MAX_CRITERION_ATOMS:
        raise CapacityError(
            f"criterion functions are implemented for at most {MAX_CRITERION_ATOMS} atoms"
        )
    if measure.locations[0] != 0.0:
        raise DomainError("criterion functions need an atom at the origin")
    settings = get_settings()
    grid_size = grid_size or settings.grid_size
    tolerance = settings.f_tolerance if tolerance is None else tolerance
    rule = resolve_rule(rule)
    grid = _curve_grid(measure, grid_size)

    if measure.k == 1:
        values = np.asarray(f_rs(model, grid, rule))
    else:
        (_, m), (q, _) = measure.atoms
        values = np.array([f_1rsb(model, m, q, float(u), rule) for u in grid])

    support_values = [float(values[np.searchsorted(grid, a)]) for a in measure.locations]
    f_values = [float(v) for v in values]
    curve = CriterionCurve(
        grid=[float(u) for u in grid],
        f_values=f_values,
        support=measure.locations,
        support_values=support_values,
        max_violation=max(f_values),
        zeros_at_support=[abs(v) <= tolerance for v in support_values],
        tolerance=tolerance,
    )
    logger.debug(
        f"criterion curve for {measure.atoms} at p={model.p}, beta={model.beta}: "
        f"max f = {curve.max_violation:.3e}"
    )
    return curve
