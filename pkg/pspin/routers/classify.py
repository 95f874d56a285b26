from typing import TextIO

from pspin.routers.output import write_json, write_phase_csv, write_text
from pspin.schemas.model import ModelSpec
from pspin.services.one_rsb_service import classify_phase
from pspin.services.quadrature_service import gauss_hermite
from pspin.validation import validate_positive


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "classify", parents=parents, help="classify the phase at one (p, beta)"
    )
    parser.add_argument("--p", type=int, required=True, help="spin degree, at least 3")
    parser.add_argument("--beta", type=float, required=True, help="inverse temperature")
    parser.add_argument("--format", choices=["json", "csv", "text"], default="text")
    parser.set_defaults(handler=run)


def run(args, out: TextIO) -> int:
    beta = validate_positive(args.beta, "beta")
    point = classify_phase(
        ModelSpec(p=args.p, beta=beta), gauss_hermite(args.quad_order), grid_size=args.grid
    )
    if args.format == "json":
        write_json(point, out)
    elif args.format == "csv":
        write_phase_csv([point], out)
    else:
        write_text(point, out)
    return 0
