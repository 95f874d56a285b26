"""
Exact Sturm sequences over the rationals.

Polynomials are sympy Polys over QQ; every sign is evaluated exactly. The
number of distinct real roots in (a, b] is V(a) - V(b), where V counts sign
changes of the Sturm chain at a point.
"""
import logging
from typing import Sequence, Union

import numpy as np
from sympy import Poly, QQ, Rational, gcd, symbols

from pspin.errors import DomainError
from pspin.schemas.reports import G1Report
from pspin.services import rs_service
from pspin.validation import validate_positive_integer

logger = logging.getLogger(__name__)

t = symbols("t")

RationalLike = Union[int, Rational, str]

ISOLATION_WIDTH = Rational(1, 10**6)

# 25t^5 + 90t^4 - 309t^3 + 324t^2 - 153t + 27, ascending coefficients
QUINTIC = (27, -153, 324, -309, 90, 25)
A_COEFFS = (27, 0, -90, 0, 117, 0, -51, 0, -6, 0, 5)
B_COEFFS = (-27, 0, 81, 0, -99, 0, 36)
QUARTIC_FACTOR = (3, 0, -3, 0, 1)

G1_GRID_POINTS = 999
LOCAL_MAX_INTERVAL = (0.65, 0.66)
LOCAL_MIN_INTERVAL = (0.94, 0.95)
LOWER_BOUND_CELLS = 10


def polynomial(coefficients: Sequence[RationalLike]) -> Poly:
    """
    Poly over QQ from ascending coefficients, trailing zeros stripped.

    Raises:
        DomainError: for the zero polynomial
    """
    coefficients = [Rational(c) for c in coefficients]
    while coefficients and coefficients[-1] == 0:
        coefficients.pop()
    if not coefficients:
        raise DomainError("the zero polynomial has no canonical form")
    return Poly(list(reversed(coefficients)), t, domain=QQ)


def quintic() -> Poly:
    return polynomial(QUINTIC)


def squarefree_part(poly: Poly) -> Poly:
    """poly / gcd(poly, poly'), which has the same distinct roots, all simple."""
    common = gcd(poly, poly.diff(t))
    if common.degree() <= 0:
        return poly
    return poly.quo(common)


def sturm_sequence(poly: Poly) -> list[Poly]:
    """
    p0 = p, p1 = p', p_{i+1} = -rem(p_{i-1}, p_i), stopping before the zero
    remainder.

    A repeated root leaves the gcd as the last element; sign counting then
    divides it out.

    Raises:
        DomainError: for a constant polynomial
    """
    if poly.degree() < 1:
        raise DomainError("a Sturm sequence needs a non-constant polynomial")
    sequence = [poly, poly.diff(t)]
    while True:
        remainder = sequence[-2].rem(sequence[-1])
        if remainder.is_zero:
            break
        sequence.append(-remainder)
    return sequence


def _sign_changes(values) -> int:
    nonzero = [v for v in values if v != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if (a > 0) != (b > 0))


def sign_variations(sequence: list[Poly], x: RationalLike) -> int:
    x = Rational(x)
    return _sign_changes([p.eval(x) for p in sequence])


def _shift_off_root(part: Poly, sequence: list[Poly], x: Rational) -> Rational:
    """
    x itself if it is not a root; otherwise x + 1/N for the first doubling N
    that is not a root and leaves no root in (x, x + 1/N].
    """
    if part.eval(x) != 0:
        return x
    n = 2
    while True:
        shifted = x + Rational(1, n)
        if part.eval(shifted) != 0 and sign_variations(sequence, x) == sign_variations(sequence, shifted):
            logger.info(f"endpoint {x} is a root; moved to {shifted}")
            return shifted
        n *= 2


def _nonroot_midpoint(part: Poly, lo: Rational, hi: Rational) -> Rational:
    mid = (lo + hi) / 2
    k = 2
    while part.eval(mid) == 0:
        mid = lo + (hi - lo) * (Rational(1, 2) + Rational(1, 2**k))
        k += 1
    return mid


def count_roots(poly: Poly, a: RationalLike, b: RationalLike) -> int:
    """
    Number of distinct real roots of poly in (a, b].

    Endpoints that are roots are moved right by an exact 1/N that crosses no
    other root, which keeps the count on (a, b] unchanged.

    Raises:
        DomainError: unless a < b
    """
    a, b = Rational(a), Rational(b)
    if not a < b:
        raise DomainError(f"count_roots needs a < b, got ({a}, {b}]")
    part = squarefree_part(poly)
    if part.degree() < 1:
        return 0
    sequence = sturm_sequence(part)
    a = _shift_off_root(part, sequence, a)
    b = _shift_off_root(part, sequence, b)
    return sign_variations(sequence, a) - sign_variations(sequence, b)


def isolate_roots(
    poly: Poly, a: RationalLike, b: RationalLike, width: Rational = ISOLATION_WIDTH
) -> list[tuple[Rational, Rational]]:
    """
    Disjoint intervals (lo, hi], each of width <= width and holding exactly one
    root of poly in (a, b], found by Sturm-guided bisection. No interval
    endpoint is a root, so the squarefree part changes sign across each one.
    """
    a, b = Rational(a), Rational(b)
    if not a < b:
        raise DomainError(f"isolate_roots needs a < b, got ({a}, {b}]")
    part = squarefree_part(poly)
    if part.degree() < 1:
        return []
    sequence = sturm_sequence(part)
    a = _shift_off_root(part, sequence, a)
    b = _shift_off_root(part, sequence, b)

    def count(lo: Rational, hi: Rational) -> int:
        return sign_variations(sequence, lo) - sign_variations(sequence, hi)

    intervals = []
    pending = [(a, b)]
    while pending:
        lo, hi = pending.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1 and hi - lo <= width:
            intervals.append((lo, hi))
            continue
        mid = _nonroot_midpoint(part, lo, hi)
        pending.append((mid, hi))
        pending.append((lo, mid))
    return sorted(intervals)


def g1_identity_holds() -> bool:
    """
    A^2 - (1 - t^2) B^2 == t^2 (t^4 - 3t^2 + 3)^2 p(t^2) exactly, where p is
    the quintic and A, B are the numerator pieces of G1'.
    """
    A = polynomial(A_COEFFS)
    B = polynomial(B_COEFFS)
    one_minus_t2 = polynomial((1, 0, -1))
    t_squared = polynomial((0, 0, 1))
    quintic_in_t2 = quintic().compose(t_squared)
    lhs = A**2 - one_minus_t2 * B**2
    rhs = t_squared * polynomial(QUARTIC_FACTOR) ** 2 * quintic_in_t2
    return lhs == rhs


def _slope_sign_change(grid: np.ndarray, values: np.ndarray, interval, rising_first: bool) -> bool:
    slopes = np.diff(values)
    midpoints = 0.5 * (grid[1:] + grid[:-1])
    inside = np.nonzero((midpoints >= interval[0]) & (midpoints <= interval[1]))[0]
    for i in inside[:-1]:
        before, after = slopes[i], slopes[i + 1]
        if rising_first and before > 0 > after:
            return True
        if not rising_first and before < 0 < after:
            return True
    return False


def g1_cell_bounds(
    interval: tuple[float, float] = LOCAL_MIN_INTERVAL, cells: int = LOWER_BOUND_CELLS
) -> np.ndarray:
    """
    arctanh(a) - G1_quotient(b) on each of `cells` equal cells [a, b] of interval.

    Both arctanh and the quotient increase on [0, 1), so each entry bounds
    G1 from below on its cell.

    Raises:
        DomainError: if the interval is not inside [0, 1) or cells < 1
    """
    low, high = interval
    if not 0.0 <= low < high < 1.0:
        raise DomainError(f"interval must satisfy 0 <= a < b < 1, got {interval}")
    validate_positive_integer(cells, field_name="cells")
    edges = np.linspace(low, high, cells + 1)
    return np.arctanh(edges[:-1]) - np.asarray(rs_service.G1_quotient(edges[1:]))


def g1_lower_bound(
    interval: tuple[float, float] = LOCAL_MIN_INTERVAL, cells: int = LOWER_BOUND_CELLS
) -> float:
    """Smallest cell bound; a single cell over [0.94, 0.95] is too coarse to be positive."""
    return float(np.min(g1_cell_bounds(interval, cells)))


def verify_g1_structure() -> G1Report:
    """
    G1 on the 999 interior points k/1000 of (0, 1): positivity, a local maximum
    in [0.65, 0.66], a local minimum in [0.94, 0.95], and the cellwise
    lower bound on [0.94, 0.95].
    """
    grid = np.arange(1, G1_GRID_POINTS + 1) / (G1_GRID_POINTS + 1)
    values = np.asarray(rs_service.G1(grid))
    bound = g1_lower_bound()
    report = G1Report(
        grid_points=len(grid),
        min_value=float(values.min()),
        positive_on_grid=bool(np.all(values > 0.0)),
        local_max_interval=LOCAL_MAX_INTERVAL,
        local_max_found=_slope_sign_change(grid, values, LOCAL_MAX_INTERVAL, rising_first=True),
        local_min_interval=LOCAL_MIN_INTERVAL,
        local_min_found=_slope_sign_change(grid, values, LOCAL_MIN_INTERVAL, rising_first=False),
        lower_bound=bound,
        lower_bound_positive=bound > 0.0,
    )
    logger.debug(f"G1 structure: {report}")
    return report
