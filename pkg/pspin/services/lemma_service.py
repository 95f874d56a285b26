"""
Numerical and exact verification of the lemmas behind the boundary analysis:
convexity of T, the quintic root count and isolation, the G1 structure and
the monotonicity of G2.
"""
import logging
from typing import Optional, Sequence

import numpy as np
from sympy import Rational

from pspin.schemas.model import ModelSpec
from pspin.schemas.quadrature import QuadratureRule
from pspin.schemas.reports import LemmaCheck, LemmaReport
from pspin.services import model_service as ms
from pspin.services import rs_service, sturm_service
from pspin.services.quadrature_service import resolve_rule

logger = logging.getLogger(__name__)

DEFAULT_DEGREES = (3, 4, 10)
DEFAULT_BETAS = (0.5, 1.0, 1.5)
CONVEXITY_GRID = np.linspace(0.05, 0.95, 91)
CONVEXITY_STEP = 1e-4
CONVEXITY_TOL = -1e-6
G2_GRID = np.linspace(0.0, 5.0, 201)
G2_SLOPE_POINTS = (0.5, 5.0, 20.0)
# central-difference half-width, relative to x
G2_SLOPE_STEP = 0.1
EXPECTED_QUINTIC_ROOTS = 2
QUINTIC_WINDOWS = (
    (Rational("0.4225"), Rational("0.4356")),
    (Rational("0.8836"), Rational("0.9025")),
)


def t_convexity(model: ModelSpec, rule: Optional[QuadratureRule] = None) -> float:
    """
    Minimum over u in [0.05, 0.95] of the central difference of T' at step
    1e-4, relative to max(1, |T'(u)|). Non-negative up to round-off when T is
    convex.
    """
    rule = resolve_rule(rule)
    u = CONVEXITY_GRID
    h = CONVEXITY_STEP
    slope = np.asarray(rs_service.T_prime(model, u, rule))
    curvature = (
        np.asarray(rs_service.T_prime(model, u + h, rule))
        - np.asarray(rs_service.T_prime(model, u - h, rule))
    ) / (2 * h)
    return float(np.min(curvature / np.maximum(1.0, np.abs(slope))))


def compderiv_defect(
    model: ModelSpec, grid: Optional[np.ndarray] = None, step: float = 1e-5,
    rule: Optional[QuadratureRule] = None,
) -> float:
    """Largest gap between a central difference of C and (xi''/2) D on an interior grid."""
    rule = resolve_rule(rule)
    grid = np.linspace(0.01, 0.99, 101) if grid is None else grid
    difference = (
        np.asarray(rs_service.C(model, grid + step, rule))
        - np.asarray(rs_service.C(model, grid - step, rule))
    ) / (2 * step)
    exact = 0.5 * np.asarray(ms.xi_pp(model, grid)) * np.asarray(rs_service.D(model, grid, rule))
    return float(np.max(np.abs(difference - exact)))


def g2_increasing(rule: Optional[QuadratureRule] = None) -> tuple[bool, float]:
    """Whether G2 is increasing on a grid of [0, 5], with the smallest increment."""
    values = np.asarray(rs_service.G2(G2_GRID, rule))
    increments = np.diff(values)
    return bool(np.all(increments > 0.0)), float(increments.min())


def g2_slopes(
    points: Sequence[float] = G2_SLOPE_POINTS, rule: Optional[QuadratureRule] = None
) -> np.ndarray:
    """Central differences of G2 at each point x with half-width 0.1 x."""
    x = np.asarray(points, dtype=float)
    h = G2_SLOPE_STEP * x
    upper = np.asarray(rs_service.G2(x + h, rule))
    lower = np.asarray(rs_service.G2(x - h, rule))
    return (upper - lower) / (2 * h)


def _quintic_checks() -> list[LemmaCheck]:
    quintic = sturm_service.quintic()
    count = sturm_service.count_roots(quintic, 0, 1)
    intervals = sturm_service.isolate_roots(quintic, 0, 1)
    inside = len(intervals) == len(QUINTIC_WINDOWS) and all(
        low <= lo and hi <= high for (lo, hi), (low, high) in zip(intervals, QUINTIC_WINDOWS)
    )
    shown = ", ".join(f"({float(lo):.7f}, {float(hi):.7f}]" for lo, hi in intervals)
    return [
        LemmaCheck(
            name="quintic root count",
            passed=count == EXPECTED_QUINTIC_ROOTS,
            detail=f"{count} roots in [0, 1]",
        ),
        LemmaCheck(name="quintic root isolation", passed=inside, detail=shown),
        LemmaCheck(
            name="G1 derivative identity",
            passed=sturm_service.g1_identity_holds(),
            detail="A^2 - (1 - t^2) B^2 = t^2 (t^4 - 3t^2 + 3)^2 p(t^2)",
        ),
    ]


def verify_lemmas(
    degrees: Sequence[int] = DEFAULT_DEGREES,
    betas: Sequence[float] = DEFAULT_BETAS,
    rule: Optional[QuadratureRule] = None,
) -> LemmaReport:
    rule = resolve_rule(rule)
    checks = []
    for p in degrees:
        for beta in betas:
            value = t_convexity(ModelSpec(p=p, beta=beta), rule)
            checks.append(
                LemmaCheck(
                    name=f"T convexity p={p} beta={beta:g}",
                    passed=value >= CONVEXITY_TOL,
                    detail=f"min second difference {value:.3e}",
                )
            )

    checks += _quintic_checks()

    g1 = sturm_service.verify_g1_structure()
    checks.append(
        LemmaCheck(
            name="G1 structure",
            passed=g1.passed,
            detail=(
                f"min {g1.min_value:.6f} on {g1.grid_points} points, "
                f"max in {list(g1.local_max_interval)}: {g1.local_max_found}, "
                f"min in {list(g1.local_min_interval)}: {g1.local_min_found}, "
                f"lower bound {g1.lower_bound:.6f}"
            ),
        )
    )

    increasing, smallest = g2_increasing(rule)
    checks.append(
        LemmaCheck(
            name="G2 increasing",
            passed=increasing,
            detail=f"smallest increment {smallest:.3e} on [0, 5]",
        )
    )
    slopes = g2_slopes(rule=rule)
    checks.append(
        LemmaCheck(
            name="G2 slope",
            passed=bool(np.all(slopes > 0.0)),
            detail=", ".join(f"x={x:g}: {s:.3e}" for x, s in zip(G2_SLOPE_POINTS, slopes)),
        )
    )

    report = LemmaReport(checks=checks)
    if not report.passed:
        logger.warning(f"lemma checks failed: {report.failed}")
    return report
