"""CLI handlers for meta commands (path, config)."""

import argparse
import sys

from cdslab.cli_common import WORKERS_ENV
from cdslab.paths import config_dir, config_file, default_out_dir


def cmd_path(args) -> int:
    """Show where defaults are read from and where artifacts go."""
    print(f"Config directory: {config_dir()}")
    print(f"Config file:      {config_file()}")
    print(f"Default output:   {default_out_dir()}")
    return 0


def _print_effective_defaults() -> None:
    import os

    from cdslab.config import get_run_defaults
    from cdslab.domain import SimConfig

    defaults = get_run_defaults()
    env = os.environ.get(WORKERS_ENV)
    if env:
        workers = f"{env} (from ${WORKERS_ENV})"
    elif "workers" in defaults:
        workers = f"{defaults['workers']} (from config)"
    else:
        workers = "1"
    out = defaults.get("out", str(default_out_dir()))

    print("Effective run defaults (run configs and flags take precedence):")
    print(f"  workers     {workers}")
    print(f"  out         {out}")
    print(f"  chunk_size  {SimConfig.chunk_size} unless simulation.chunk_size is set in the run config")


def cmd_config(args) -> int:
    """View or modify user defaults."""
    from cdslab.config import check_run_setting, get_config, set_config

    if args.action == "path":
        print(config_file())
        return 0

    if args.action == "get":
        if not args.key:
            print("Usage: cdslab config get <key>", file=sys.stderr)
            return 1
        value = get_config(args.key)
        if value is None:
            print(f"Key not set: {args.key}", file=sys.stderr)
            return 1
        print(value)
        return 0

    if args.action == "set":
        if not args.key or args.value is None:
            print("Usage: cdslab config set <key> <value>", file=sys.stderr)
            return 1
        problem = check_run_setting(args.key, args.value)
        if problem:
            print(f"Error: {problem}", file=sys.stderr)
            return 1
        set_config(args.key, args.value)
        print(f"Set {args.key} = {args.value}")
        return 0

    path = config_file()
    if path.exists():
        print(path.read_text().strip())
        print()
    else:
        print("No config file found.")
        print(f"Create one with: cdslab config set run.workers 4  ({path})")
        print()
    _print_effective_defaults()
    return 0


def build_meta_parser(subparsers) -> None:
    """Add 'path' and 'config' subparsers."""
    p_path = subparsers.add_parser("path", help="Show config and output locations")
    p_path.set_defaults(func=cmd_path)

    p_config = subparsers.add_parser(
        "config",
        help="View or modify user run defaults",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""keys:
  run.workers      default worker processes (never changes results)
  run.out          default output directory

examples:
  cdslab config                        # file contents and effective defaults
  cdslab config get run.workers
  cdslab config set run.workers 8""",
    )
    p_config.add_argument("action", nargs="?", choices=["get", "set", "path"], help="Action to perform")
    p_config.add_argument("key", nargs="?", help="Dotted key, e.g. run.workers")
    p_config.add_argument("value", nargs="?", help="Value to set (for 'set')")
    p_config.set_defaults(func=cmd_config)
