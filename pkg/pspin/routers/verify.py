import csv
from typing import TextIO

from pspin.errors import LemmaVerificationError
from pspin.routers.output import write_json
from pspin.services.lemma_service import DEFAULT_DEGREES, verify_lemmas
from pspin.services.quadrature_service import gauss_hermite


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser(
        "verify-lemmas", parents=parents, help="run the numeric and exact lemma checks"
    )
    parser.add_argument(
        "--p",
        type=int,
        nargs="+",
        default=list(DEFAULT_DEGREES),
        help="spin degrees for the T convexity grid",
    )
    parser.add_argument("--format", choices=["json", "csv", "text"], default="text")
    parser.set_defaults(handler=run)


def run(args, out: TextIO) -> int:
    report = verify_lemmas(degrees=args.p, rule=gauss_hermite(args.quad_order))
    if args.format == "json":
        write_json(report, out)
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["name", "passed", "detail"])
        for check in report.checks:
            writer.writerow([check.name, check.passed, check.detail])
    else:
        width = max(len(check.name) for check in report.checks)
        for check in report.checks:
            status = "PASS" if check.passed else "FAIL"
            out.write(f"{status}  {check.name.ljust(width)}  {check.detail}\n")
    if not report.passed:
        raise LemmaVerificationError(f"failed checks: {', '.join(report.failed)}")
    return 0
