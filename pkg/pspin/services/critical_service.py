"""
Critical points of C_beta, the RS criterion and the RS/1RSB boundary.

The zeros of D_beta in (0, 1) are the critical points of C_beta; there are
none or two of them (a double root exactly at tangency). The boundary
(beta1, q1) solves C_beta(q) = D_beta(q) = 0 and is found by bisection in
beta on the value of C_beta at the larger zero of D_beta, which is
increasing in beta.
"""
import logging
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from pspin.config import get_settings
from pspin.errors import BracketError, DomainError, NoTransitionError
from pspin.schemas.model import ModelSpec
from pspin.schemas.quadrature import QuadratureRule
from pspin.schemas.reports import (BoundarySolution, CriterionReport, DCheck,
                                   GapCheck, PeakCheck)
from pspin.services import rs_service
from pspin.services.quadrature_service import gauss_hermite, resolve_rule
from pspin.validation import validate_positive, validate_strictly_increasing

logger = logging.getLogger(__name__)

ROOT_XTOL = 1e-12
TANGENCY_TOL = 1e-10
RS_TOL = 1e-9
# models whose D-roots crowd against q = 1
REFINED_GRID_MIN_DEGREE = 10
REFINED_MAX_EXPONENT = 13

BRACKET_LOW = 0.5
BRACKET_HIGH = 2.0
BRACKET_LIMIT = 10.0
BETA_TOL = 1e-9
# value reported for beta with no critical point, where C < 0 on (0, 1]
NO_ROOT_SENTINEL = -1.0


def root_grid(p: int, size: Optional[int] = None) -> np.ndarray:
    """
    Interior scan points of (0, 1): a uniform grid, joined for p >= 10 by
    points 1 - 10^-s with s uniform on [1, 13].
    """
    size = size or get_settings().root_grid_size
    grid = np.linspace(0.0, 1.0, size)[1:-1]
    if p >= REFINED_GRID_MIN_DEGREE:
        refined = 1.0 - 10.0 ** (-np.linspace(1.0, REFINED_MAX_EXPONENT, size))
        grid = np.union1d(grid, refined)
    return grid[(grid > 0.0) & (grid < 1.0)]


def _closing_root(D, last: float, model: ModelSpec) -> float:
    top = float(np.nextafter(1.0, 0.0))
    if D(top) < 0.0:
        return brentq(D, last, top, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
    logger.debug(
        f"D is positive up to q = {top!r} (p={model.p}, beta={model.beta}); "
        "taking that point as the larger critical point"
    )
    return top


def d_roots(
    model: ModelSpec, rule: Optional[QuadratureRule] = None, grid_size: Optional[int] = None
) -> list[float]:
    """
    Zeros of D_beta in (0, 1), ascending.

    Sign changes on the scan grid are refined by brentq to 1e-12. D(1) is
    never positive, so when the scan ends with D > 0 the larger zero lies
    between the last scan point and 1 and is refined there; if D stays
    positive up to the last float below 1, that float is reported. Without a
    sign change, a grid maximum of D within 1e-10 of zero is refined and
    reported as a double root.
    """
    validate_positive(model.beta, "beta")
    rule = resolve_rule(rule)
    grid = root_grid(model.p, grid_size)
    values = np.asarray(rs_service.D(model, grid, rule))

    def D(u: float) -> float:
        return float(rs_service.D(model, u, rule))

    roots = []
    signs = np.sign(values)
    for i in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        roots.append(brentq(D, grid[i], grid[i + 1], xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps))
    roots += [float(u) for u, v in zip(grid, values) if v == 0.0]
    if values[-1] > 0.0:
        roots.append(_closing_root(D, float(grid[-1]), model))
    if roots:
        return sorted(float(r) for r in roots)

    peak = int(np.argmax(values))
    if values[peak] < -1e-6:
        return []
    lo = grid[max(peak - 1, 0)]
    hi = grid[min(peak + 1, len(grid) - 1)]
    result = minimize_scalar(
        lambda u: -D(u), bounds=(lo, hi), method="bounded", options={"xatol": ROOT_XTOL}
    )
    if abs(result.fun) < TANGENCY_TOL:
        logger.warning(
            f"D touches zero without crossing at u={result.x:.12g} "
            f"(p={model.p}, beta={model.beta}); reporting a double root"
        )
        return [float(result.x)]
    return []


def peak_value(model: ModelSpec, rule: Optional[QuadratureRule] = None) -> tuple[Optional[float], float]:
    """
    The larger zero of D_beta (the local maximum of C_beta) and C_beta there.

    Without critical points the location is None and the value is a negative
    sentinel.
    """
    rule = resolve_rule(rule)
    roots = d_roots(model, rule)
    if not roots:
        return None, NO_ROOT_SENTINEL
    q = roots[-1]
    return q, float(rs_service.C(model, q, rule))


def classify_rs(model: ModelSpec, rule: Optional[QuadratureRule] = None) -> bool:
    """True iff C_beta <= 1e-9 at every zero of D_beta."""
    rule = resolve_rule(rule)
    return all(float(rs_service.C(model, u, rule)) <= RS_TOL for u in d_roots(model, rule))


def check_criterion(
    p: int,
    beta_low: float,
    beta_high: float,
    probes: Sequence[float],
    q2: float,
    rule: Optional[QuadratureRule] = None,
) -> CriterionReport:
    """
    Check the sufficient conditions for beta1 to lie in [beta_low, beta_high]:

        (1a) D(q0_1) > D(q0_2) > 0 > D(q1_1) > D(q1_2) at beta_low
        (1b) C1(q1_1) - C2(q0_2) < 0 at beta_low
        (2)  C(q2) > 0 at beta_high

    Raises:
        OrderingError: if the four probes are not strictly increasing in (0, 1)
        DomainError: if the betas are not 0 < beta_low < beta_high
    """
    validate_positive(beta_low, "beta_low")
    if not beta_low < beta_high:
        raise DomainError(f"need beta_low < beta_high, got {beta_low} and {beta_high}")
    if len(probes) != 4:
        raise DomainError(f"exactly four probe points are needed, got {len(probes)}")
    probes = validate_strictly_increasing([0.0] + list(probes) + [1.0], "probe points")[1:-1]
    if not 0.0 < q2 < 1.0:
        raise DomainError(f"q2 must lie in (0, 1), got {q2}")
    rule = resolve_rule(rule)

    low = ModelSpec(p=p, beta=beta_low)
    high = ModelSpec(p=p, beta=beta_high)
    d = [float(rs_service.D(low, q, rule)) for q in probes]
    cond_1a = DCheck(passed=d[0] > d[1] > 0.0 > d[2] > d[3], values=tuple(d))
    gap = float(rs_service.C1(low, probes[2], rule)) - float(rs_service.C2(low, probes[1]))
    cond_1b = GapCheck(passed=gap < 0.0, value=gap)
    peak = float(rs_service.C(high, q2, rule))
    cond_2 = PeakCheck(passed=peak > 0.0, value=peak)
    return CriterionReport(
        p=p,
        beta_low=beta_low,
        beta_high=beta_high,
        probes=tuple(probes),
        q2=q2,
        cond_1a=cond_1a,
        cond_1b=cond_1b,
        cond_2=cond_2,
        verdict=cond_1a.passed and cond_1b.passed and cond_2.passed,
    )


@lru_cache(maxsize=32)
def _solve_boundary(p: int, order: int) -> BoundarySolution:
    rule = gauss_hermite(order)

    def value(beta: float) -> float:
        return peak_value(ModelSpec(p=p, beta=beta), rule)[1]

    low, high = BRACKET_LOW, BRACKET_HIGH
    if value(low) > 0.0:
        raise BracketError(f"C is already positive at beta={low} for p={p}")
    while value(high) <= 0.0:
        if high >= BRACKET_LIMIT:
            raise BracketError(f"no sign change of the boundary function for beta in (0, {BRACKET_LIMIT}]")
        high = min(2.0 * high, BRACKET_LIMIT)
        logger.debug(f"expanding boundary bracket to [{low}, {high}]")

    iterations = 0
    while high - low > BETA_TOL:
        mid = 0.5 * (low + high)
        if value(mid) > 0.0:
            high = mid
        else:
            low = mid
        iterations += 1
        logger.debug(f"p={p}: bisection step {iterations}, bracket [{low:.10f}, {high:.10f}]")

    beta1 = 0.5 * (low + high)
    model = ModelSpec(p=p, beta=beta1)
    q1, residual_c = peak_value(model, rule)
    if q1 is None:
        raise BracketError(f"no critical point of C at the located beta={beta1} for p={p}")
    residual_d = float(rs_service.D(model, q1, rule))
    logger.info(f"p={p}: beta1={beta1:.10f}, q1={q1:.10f} after {iterations} bisection steps")
    return BoundarySolution(
        p=p,
        beta1=beta1,
        q1=q1,
        residual_C=residual_c,
        residual_D=residual_d,
        bracket_width=high - low,
    )


def solve_boundary(p: int, rule: Optional[QuadratureRule] = None) -> BoundarySolution:
    """
    (beta1, q1) solving C_beta(q) = D_beta(q) = 0 with q the larger zero of D_beta.

    Results are cached per (p, quadrature order).

    Raises:
        NoTransitionError: for p = 2
        BracketError: if no sign change is found for beta in (0, 10]
    """
    if p == 2:
        raise NoTransitionError("the SK model (p = 2) has no phase transition between RS and 1RSB")
    if p < 2:
        raise DomainError(f"p must be at least 2, got {p}")
    rule = resolve_rule(rule)
    return _solve_boundary(p, rule.order)


def sk_scan(
    model: ModelSpec, grid_size: Optional[int] = None, rule: Optional[QuadratureRule] = None
) -> bool:
    """True if some grid point has |D| <= 1e-9 and C > 1e-9 at once."""
    rule = resolve_rule(rule)
    grid = np.linspace(0.0, 1.0, grid_size or get_settings().grid_size)
    c = np.asarray(rs_service.C(model, grid, rule))
    d = np.asarray(rs_service.D(model, grid, rule))
    hits = (np.abs(d) <= RS_TOL) & (c > RS_TOL)
    if np.any(hits):
        logger.warning(f"boundary-type point found at q={grid[np.argmax(hits)]} for p={model.p}")
    return bool(np.any(hits))


def boundary_slope(solution: BoundarySolution, rule: Optional[QuadratureRule] = None) -> float:
    """dC/dbeta at the solved boundary point, which equals xi(q1) / beta1."""
    model = ModelSpec(p=solution.p, beta=solution.beta1)
    return float(rs_service.dC_dbeta(model, solution.q1, rule))

