"""
Command-line entry point.

    python -m pspin.main locate --p 3
    python -m pspin.main classify --p 3 --beta 1.1 --format json
    python -m pspin.main sweep --p 3 --beta-min 0.9 --beta-max 1.2 --steps 31
    python -m pspin.main verify-lemmas

Results go to stdout; logging goes to stderr. Exit codes: 0 ok, 1 usage,
2 no transition (p = 2), 3 bracket failure, 4 lemma verification failure.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence, TextIO

from pspin import __version__
from pspin.config import get_settings
from pspin.errors import PspinError, UsageError
from pspin.routers import classify, locate, sweep, verify

logger = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    settings = get_settings()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--quad-order",
        type=int,
        default=settings.quad_order,
        help=f"Gauss-Hermite order (default {settings.quad_order})",
    )
    common.add_argument(
        "--grid",
        type=int,
        default=settings.grid_size,
        help=f"criterion-curve grid size (default {settings.grid_size})",
    )

    parser = ArgumentParser(
        prog="pspin",
        description="RS / 1RSB phase structure of the Ising pure p-spin glass",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    for router in (locate, classify, sweep, verify):
        router.register(subparsers, [common])
    return parser


def configure_logging(level: str) -> None:
    logging.basicConfig(
        stream=sys.stderr,
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    try:
        configure_logging(get_settings().log_level)
        args = build_parser().parse_args(argv)
        return args.handler(args, out)
    except PspinError as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return UsageError.exit_code


if __name__ == "__main__":
    sys.exit(main())
