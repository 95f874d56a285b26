import logging
from typing import TextIO

import numpy as np

from pspin.errors import UsageError
from pspin.routers.output import write_json_lines, write_phase_csv, write_phase_table
from pspin.services.one_rsb_service import sweep_phases
from pspin.services.quadrature_service import gauss_hermite
from pspin.validation import validate_positive

logger = logging.getLogger(__name__)


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "sweep", parents=parents, help="classify phases on a uniform beta grid"
    )
    parser.add_argument("--p", type=int, required=True, help="spin degree, at least 3")
    parser.add_argument("--beta-min", type=float, required=True)
    parser.add_argument("--beta-max", type=float, required=True)
    parser.add_argument("--steps", type=int, required=True, help="number of beta values, at least 2")
    parser.add_argument(
        "--no-warm-start",
        action="store_true",
        help="solve rows independently (and in parallel) instead of by continuation",
    )
    parser.add_argument("--format", choices=["json", "csv", "text"], default="csv")
    parser.set_defaults(handler=run)


def betas_for(beta_min: float, beta_max: float, steps: int) -> list[float]:
    """
    Raises:
        UsageError: unless 0 < beta_min < beta_max and steps >= 2
    """
    validate_positive(beta_min, "beta-min")
    if not beta_min < beta_max:
        raise UsageError(f"--beta-min must be below --beta-max, got {beta_min} and {beta_max}")
    if steps < 2:
        raise UsageError(f"--steps must be at least 2, got {steps}")
    return [float(beta) for beta in np.linspace(beta_min, beta_max, steps)]


def run(args, out: TextIO) -> int:
    betas = betas_for(args.beta_min, args.beta_max, args.steps)
    logger.info(f"sweeping p={args.p} over {len(betas)} values of beta")
    points = sweep_phases(
        args.p,
        betas,
        warm_start=not args.no_warm_start,
        rule=gauss_hermite(args.quad_order),
        grid_size=args.grid,
    )
    if args.format == "json":
        write_json_lines(points, out)
    elif args.format == "text":
        write_phase_table(points, out)
    else:
        write_phase_csv(points, out)
    return 0
