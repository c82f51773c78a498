"""CLI for cdslab - basket CDS Monte Carlo with counterparty risk."""

import argparse
import sys

from cdslab.cli_common import EXIT_INTERRUPTED, _get_version, configure_logging
from cdslab.cli_meta import build_meta_parser
from cdslab.cli_price import build_price_parser
from cdslab.cli_sweep import build_sweep_parser
from cdslab.cli_validate import build_validate_parser


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cdslab",
        description="Price basket CDS with counterparty risk by Euler Monte Carlo and study convergence",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"cdslab {_get_version()}",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="Log progress to stderr (-vv for debug)",
    )

    subparsers = parser.add_subparsers(dest="command")

    build_price_parser(subparsers)
    build_sweep_parser(subparsers)
    build_validate_parser(subparsers)
    build_meta_parser(subparsers)

    args = parser.parse_args(argv)
    if not hasattr(args, "func") or args.func is None:
        parser.print_help()
        return 0
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        # Exit cleanly on Ctrl+C (130 = 128 + SIGINT)
        return EXIT_INTERRUPTED


if __name__ == "__main__":
    sys.exit(main())
