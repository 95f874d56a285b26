"""
The 1RSB fixed-point system and phase classification.

For mu = m delta_0 + (1 - m) delta_q the stationarity conditions of the
Parisi functional are

    C1(m, q) = -(1/m^2) log E cosh^m(Y_q g) + (1/m) E_m[log cosh(Y_q g)] - theta(q)/2 = 0
    D1(m, q) = E_m[tanh^2(Y_q g)] - q = 0

where E_m is the expectation reweighted by cosh^m(Y_q g). At m = 1 they are
C_beta(q) and D_beta(q), so the solution branch starts at (1, q1) on the
boundary and is followed in beta by a damped Newton iteration.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from pspin.errors import (BelowTransitionError, DomainError, NotInWindowError,
                          PspinError)
from pspin.schemas.measure import CriterionCurve, DiscreteMeasure
from pspin.schemas.model import ModelSpec
from pspin.schemas.phase import Phase, PhasePoint
from pspin.schemas.quadrature import QuadratureRule
from pspin.schemas.reports import BoundarySolution, OneRsbSolution
from pspin.services import model_service as ms
from pspin.services import rs_service
from pspin.services.cole_hopf_service import criterion_curve, parisi_functional
from pspin.services.critical_service import classify_rs, solve_boundary
from pspin.services.quadrature_service import (cosh_pow_ratio, logcosh,
                                               log_expect_cosh_pow, resolve_rule,
                                               sech2)
from pspin.validation import validate_mass, validate_positive

logger = logging.getLogger(__name__)

START_OFFSET = 1e-3
FD_STEP = 1e-6
RESIDUAL_TOL = 1e-8
MAX_ITERATIONS = 100
MIN_DAMPING = 1.0 / 2**20
THRESHOLD_GAP = 1e-9
# above this scale tanh^2 averages are formed as 1 - E_m[sech^2]
LARGE_SCALE = 1.0


def _tanh2(x: np.ndarray) -> np.ndarray:
    return np.tanh(x) ** 2


def _check(m: float, q: float) -> tuple[float, float]:
    m = validate_mass(m)
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    return m, q


def _c1(model: ModelSpec, m: float, q: float, rule: QuadratureRule) -> float:
    Y = float(ms.y_of(model, q))
    log_norm = float(log_expect_cosh_pow(rule, Y, m))
    mean = float(cosh_pow_ratio(rule, Y, m, logcosh))
    return -log_norm / m**2 + mean / m - 0.5 * float(ms.theta(model, q))


def _d1(model: ModelSpec, m: float, q: float, rule: QuadratureRule) -> float:
    Y = float(ms.y_of(model, q))
    if Y > LARGE_SCALE:
        return (1.0 - q) - float(cosh_pow_ratio(rule, Y, m, sech2))
    return float(cosh_pow_ratio(rule, Y, m, _tanh2)) - q


def C1_1rsb(model: ModelSpec, m: float, q: float, rule: Optional[QuadratureRule] = None) -> float:
    """First 1RSB equation; equal to C_beta(q) at m = 1."""
    m, q = _check(m, q)
    rule = resolve_rule(rule)
    if m == 1.0:
        return float(rs_service.C(model, q, rule))
    return _c1(model, m, q, rule)


def D1_1rsb(model: ModelSpec, m: float, q: float, rule: Optional[QuadratureRule] = None) -> float:
    """Second 1RSB equation; equal to D_beta(q) at m = 1."""
    m, q = _check(m, q)
    rule = resolve_rule(rule)
    if m == 1.0:
        return float(rs_service.D(model, q, rule))
    return _d1(model, m, q, rule)


def _residual(model: ModelSpec, m: float, q: float, rule: QuadratureRule) -> np.ndarray:
    # m may exceed 1 by a finite-difference step here
    return np.array([_c1(model, m, q, rule), _d1(model, m, q, rule)])


def _jacobian(model: ModelSpec, m: float, q: float, rule: QuadratureRule) -> np.ndarray:
    h = FD_STEP
    dm = (_residual(model, m + h, q, rule) - _residual(model, m - h, q, rule)) / (2 * h)
    dq = (_residual(model, m, q + h, rule) - _residual(model, m, q - h, rule)) / (2 * h)
    return np.column_stack([dm, dq])


def solve_1rsb(
    model: ModelSpec,
    hint: Optional[BoundarySolution] = None,
    start: Optional[tuple[float, float]] = None,
    rule: Optional[QuadratureRule] = None,
    tolerance: float = RESIDUAL_TOL,
) -> OneRsbSolution:
    """
    Solve C1(m, q) = D1(m, q) = 0 at a beta above the boundary.

    Newton steps use a central-difference Jacobian and are halved until the
    residual norm decreases and the iterate stays in (0, 1] x (0, 1). The
    default start is (1 - 1e-3, q1).

    Raises:
        BelowTransitionError: if beta <= beta1
        NotInWindowError: if the iteration stalls, leaves the window, or
            lands on the threshold m = 1
    """
    validate_positive(model.beta, "beta")
    rule = resolve_rule(rule)
    boundary = hint or solve_boundary(model.p, rule)
    if model.beta <= boundary.beta1:
        raise BelowTransitionError(
            f"beta={model.beta} is not above the transition beta1={boundary.beta1:.10f} for p={model.p}"
        )
    m, q = start if start is not None else (1.0 - START_OFFSET, boundary.q1)

    residual = _residual(model, m, q, rule)
    iterations = 0
    while np.max(np.abs(residual)) > tolerance:
        if iterations >= MAX_ITERATIONS:
            raise NotInWindowError(f"Newton did not converge in {MAX_ITERATIONS} iterations")
        try:
            step = np.linalg.solve(_jacobian(model, m, q, rule), -residual)
        except np.linalg.LinAlgError as e:
            raise NotInWindowError(f"singular Jacobian at m={m}, q={q}") from e

        norm = np.linalg.norm(residual)
        damping = 1.0
        while True:
            m_new = min(m + damping * step[0], 1.0)
            q_new = q + damping * step[1]
            if m_new > 0.0 and 0.0 < q_new < 1.0:
                trial = _residual(model, m_new, q_new, rule)
                if np.linalg.norm(trial) < norm:
                    break
            damping *= 0.5
            if damping < MIN_DAMPING:
                raise NotInWindowError(
                    f"line search failed at m={m:.10f}, q={q:.10f} (p={model.p}, beta={model.beta})"
                )
        m, q, residual = m_new, q_new, trial
        iterations += 1
        logger.debug(
            f"Newton step {iterations}: m={m:.12f}, q={q:.12f}, |F|={np.max(np.abs(residual)):.3e}, "
            f"damping={damping:g}"
        )

    if m >= 1.0 - THRESHOLD_GAP:
        raise NotInWindowError(f"iteration converged onto the threshold m = 1 at q={q:.10f}")
    logger.info(f"1RSB solution at p={model.p}, beta={model.beta}: m={m:.10f}, q={q:.10f}")
    return OneRsbSolution(
        p=model.p,
        beta=model.beta,
        m=m,
        q=q,
        residual_C=float(residual[0]),
        residual_D=float(residual[1]),
        iterations=iterations,
    )


def with_curve(solution: OneRsbSolution, curve: CriterionCurve) -> OneRsbSolution:
    """Attach the criterion-curve summary to a solution."""
    return solution.model_copy(
        update={
            "max_violation": curve.max_violation,
            "zero_at_origin": curve.zeros_at_support[0],
            "zero_at_q": curve.zeros_at_support[1],
        }
    )


def classify_phase(
    model: ModelSpec,
    rule: Optional[QuadratureRule] = None,
    grid_size: Optional[int] = None,
    tolerance: Optional[float] = None,
    start: Optional[tuple[float, float]] = None,
) -> PhasePoint:
    """
    RS if the RS criterion holds; OneRSB if the 1RSB system has a solution
    whose criterion curve is non-positive and vanishes at 0 and q; Unknown
    otherwise.
    """
    if model.p < 3:
        raise DomainError(f"phase classification needs p >= 3, got {model.p}")
    validate_positive(model.beta, "beta")
    rule = resolve_rule(rule)
    rs_measure = DiscreteMeasure.dirac(0.0)
    annealed = parisi_functional(rs_measure, model, rule)

    if classify_rs(model, rule):
        curve = criterion_curve(rs_measure, model, grid_size, tolerance, rule)
        return PhasePoint(
            p=model.p,
            beta=model.beta,
            phase=Phase.RS,
            max_f_violation=curve.max_violation,
            parisi_value=annealed,
        )

    try:
        solution = solve_1rsb(model, start=start, rule=rule)
    except PspinError as e:
        logger.warning(f"no 1RSB candidate at p={model.p}, beta={model.beta}: {e}")
        curve = criterion_curve(rs_measure, model, grid_size, tolerance, rule)
        return PhasePoint(
            p=model.p,
            beta=model.beta,
            phase=Phase.UNKNOWN,
            max_f_violation=curve.max_violation,
            parisi_value=annealed,
        )

    measure = DiscreteMeasure.two_atom(solution.m, solution.q)
    curve = criterion_curve(measure, model, grid_size, tolerance, rule)
    solution = with_curve(solution, curve)
    logger.debug(f"criterion check of the 1RSB solution: {solution}")
    value = parisi_functional(measure, model, rule)
    if curve.certifies:
        phase = Phase.ONE_RSB
    else:
        phase = Phase.UNKNOWN
        value = min(value, annealed)
        logger.warning(
            f"1RSB candidate at p={model.p}, beta={model.beta} fails the criterion "
            f"(max f = {solution.max_violation:.3e})"
        )
    return PhasePoint(
        p=model.p,
        beta=model.beta,
        phase=phase,
        m=solution.m,
        q=solution.q,
        max_f_violation=solution.max_violation,
        parisi_value=value,
    )


def sweep_phases(
    p: int,
    betas: Sequence[float],
    warm_start: bool = True,
    rule: Optional[QuadratureRule] = None,
    grid_size: Optional[int] = None,
    max_workers: Optional[int] = None,
) -> list[PhasePoint]:
    """
    Classify each beta in order.

    With warm starting, each 1RSB solve starts from the previous row's
    (m, q). Without it, rows are independent and run on a thread pool; the
    result keeps the order of betas either way.
    """
    rule = resolve_rule(rule)
    solve_boundary(p, rule)

    if not warm_start:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            return list(
                executor.map(
                    lambda beta: classify_phase(ModelSpec(p=p, beta=beta), rule, grid_size), betas
                )
            )

    points = []
    start = None
    for beta in betas:
        point = classify_phase(ModelSpec(p=p, beta=beta), rule, grid_size, start=start)
        start = (point.m, point.q) if point.phase == Phase.ONE_RSB else None
        points.append(point)
    return points
