from typing import TextIO

from pspin.routers.output import write_json, write_model_csv, write_text
from pspin.services.critical_service import solve_boundary
from pspin.services.quadrature_service import gauss_hermite


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "locate", parents=parents, help="locate the RS/1RSB boundary (beta1, q1) for one p"
    )
    parser.add_argument("--p", type=int, required=True, help="spin degree")
    parser.add_argument("--format", choices=["json", "csv", "text"], default="text")
    parser.set_defaults(handler=run)


def run(args, out: TextIO) -> int:
    solution = solve_boundary(args.p, gauss_hermite(args.quad_order))
    if args.format == "json":
        write_json(solution, out)
    elif args.format == "csv":
        write_model_csv(solution, out)
    else:
        write_text(solution, out)
    return 0
