"""Shared CLI utilities."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from datetime import UTC, datetime
from pathlib import Path

from cdslab.domain import RunConfig, RunManifest

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_DEGENERATE = 3
EXIT_NOT_CONVERGING = 4
EXIT_FAULT = 5
EXIT_INTERRUPTED = 130

WORKERS_ENV = "CDS_WORKERS"


def configure_logging(verbosity: int) -> None:
    """Attach a stderr handler: -v for INFO, -vv for DEBUG, nothing otherwise."""
    if verbosity <= 0:
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("cdslab")
    root.addHandler(handler)
    root.setLevel(logging.INFO if verbosity == 1 else logging.DEBUG)


def positive_int(value: str) -> int:
    """argparse type for integers >= 1."""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: '{value}'") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {number}")
    return number


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags shared by commands that simulate from a run config."""
    parser.add_argument("--config", required=True, metavar="PATH", help="JSON run config (model, contract, simulation)")
    parser.add_argument("--paths", type=positive_int, metavar="M", help="Override simulation.paths")
    parser.add_argument("--steps", type=positive_int, metavar="N", help="Override simulation.steps (h = T/N)")
    parser.add_argument("--seed", type=int, metavar="S", help="Override simulation.seed")
    parser.add_argument(
        "--workers",
        type=positive_int,
        metavar="W",
        help=f"Worker processes (default: ${WORKERS_ENV}, then config); never changes results",
    )
    parser.add_argument("--out", metavar="DIR", help="Output directory (default: [run] out, then ./cdslab-out)")
    parser.add_argument(
        "--unsafe-model",
        action="store_true",
        help="Run even if the model fails validation (negative controls only)",
    )


def _env_workers() -> int | None:
    from cdslab.loader import ConfigError

    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(WORKERS_ENV, f"expected an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(WORKERS_ENV, f"must be >= 1, got {value}")
    return value


def load_run(args) -> tuple[RunConfig, str]:
    """Load the run config with flag, environment and user-default precedence.

    Only the worker count may come from user defaults; everything that shapes
    the numbers comes from the document or the flags.

    Returns the config and its git-style fingerprint.
    """
    from cdslab.config import get_run_defaults
    from cdslab.ids import config_fingerprint
    from cdslab.loader import load_run_config

    user = get_run_defaults()
    defaults = {"workers": user["workers"]} if "workers" in user else {}
    overrides = {
        "paths": getattr(args, "paths", None),
        "steps": getattr(args, "steps", None),
        "seed": getattr(args, "seed", None),
        "workers": getattr(args, "workers", None) or _env_workers(),
    }
    run, raw = load_run_config(Path(args.config), defaults=defaults, overrides=overrides)
    return run, config_fingerprint(raw)


def resolve_out_dir(args) -> Path:
    """--out, then [run] out, then ./cdslab-out; created if missing."""
    from cdslab.config import get_run_defaults
    from cdslab.paths import default_out_dir

    if getattr(args, "out", None):
        out = Path(args.out)
    elif "out" in (user := get_run_defaults()):
        out = Path(user["out"]).expanduser()
    else:
        out = default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    return out


def now_iso() -> str:
    return datetime.now(UTC).isoformat(timespec="seconds")


@dataclass
class RunRecorder:
    """Collects artifacts of one command and writes the manifest at the end."""

    manifest: RunManifest
    out_dir: Path

    def add(self, *paths: Path) -> None:
        for path in paths:
            self.manifest.artifacts.append(path.name)

    def finish(self) -> Path:
        from cdslab.output import write_manifest

        self.manifest.finished_at = now_iso()
        return write_manifest(self.out_dir, self.manifest)


def print_findings(findings, *, file=None) -> None:
    """One line per finding: [severity] assumption-or-check: message."""
    for f in findings:
        label = f.assumption or f.check
        print(f"  [{f.severity}] {label}: {f.message}", file=file or sys.stderr)


def report_error(exc: Exception) -> int:
    """Print a run failure to stderr and map it to an exit code."""
    from cdslab.assumptions import ModelValidationError
    from cdslab.loader import ConfigError
    from cdslab.pricer import DegeneratePremiumLeg, InvalidBatch

    if isinstance(exc, ConfigError):
        print(f"Error: invalid config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if isinstance(exc, ModelValidationError):
        print(f"Error: {exc}", file=sys.stderr)
        print("Tip: pass --unsafe-model to run it anyway as a negative control", file=sys.stderr)
        return EXIT_INVALID
    if isinstance(exc, DegeneratePremiumLeg):
        print(f"Error: degenerate premium leg: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    if isinstance(exc, InvalidBatch):
        print(f"Error: invalid batch: {exc}", file=sys.stderr)
        return EXIT_FAULT
    raise exc


def _get_version() -> str:
    """Get package version from metadata."""
    try:
        from importlib.metadata import version

        return version("cdslab")
    except Exception:
        return "unknown"
