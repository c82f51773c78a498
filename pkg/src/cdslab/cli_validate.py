"""CLI handlers for 'cdslab validate' and 'cdslab tangency'."""

from __future__ import annotations

import argparse
import json
import sys

from cdslab.cli_common import (
    EXIT_FAILURE,
    EXIT_INVALID,
    EXIT_OK,
    RunRecorder,
    load_run,
    now_iso,
    positive_int,
    report_error,
    resolve_out_dir,
)
from cdslab.domain import RunManifest, SimConfig


def _validate_list(args) -> int:
    from cdslab.assumptions import list_checks

    checks = list_checks()
    if args.json:
        out = [{"name": c.name, "assumption": c.assumption, "description": c.description} for c in checks]
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print("Available checks:")
    for check in checks:
        label = f" [{check.assumption}]" if check.assumption else ""
        print(f"  {check.name}{label}")
        print(f"    {check.description}")
    return EXIT_OK


def _oracle_comparison(run) -> dict | None:
    """Engine default probability vs the first-passage closed form, for single-name configs.

    Raises:
        InvalidBatch: If the oracle run faults beyond FAULT_RATE_LIMIT.
    """
    from cdslab.engine import simulate_batch
    from cdslab.pricer import check_batch
    from cdslab.validation import (
        DiagnosticsFold,
        OracleDomainError,
        default_probability,
        fpt_probability,
        single_name,
    )

    name = single_name(run.model, run.contract)
    if name is None:
        return None
    try:
        closed_form = fpt_probability(name.v0, name.barrier, name.gamma, name.mu, name.sigma, name.maturity)
    except OracleDomainError as e:
        return {"skipped": str(e)}

    result = simulate_batch(run.model, run.contract, run.sim, DiagnosticsFold(run.contract))
    check_batch(result)
    p, se = default_probability(result.value[0])
    return {
        "closed_form": closed_form,
        "monte_carlo": p,
        "se": se,
        "n_steps": run.sim.steps,
        "n_paths": result.value[0].n,
        "faults": result.faults,
        # Discrete monitoring can only miss crossings.
        "consistent": p <= closed_form + 3 * se,
    }


def cmd_validate(args) -> int:
    """Check model assumptions and compare against the single-name oracle."""
    from cdslab.assumptions import validate
    from cdslab.loader import ConfigError
    from cdslab.pricer import InvalidBatch

    if args.list:
        return _validate_list(args)
    if not args.config:
        print("Usage: cdslab validate --config PATH  (or --list)", file=sys.stderr)
        return EXIT_INVALID

    try:
        run, fingerprint = load_run(args)
    except ConfigError as e:
        return report_error(e)

    report = validate(run.model, run.contract)
    try:
        oracle = _oracle_comparison(run) if report.ok and not args.no_oracle else None
    except InvalidBatch as e:
        return report_error(e)

    if args.json:
        out = {"fingerprint": fingerprint, **report.to_dict()}
        if oracle is not None:
            out["oracle"] = oracle
        print(json.dumps(out, indent=2))
    else:
        print(f"Config: {args.config} ({fingerprint[:12]})")
        for assumption, status in report.summary.items():
            print(f"  {assumption}: {status}")
        for f in report.findings:
            if f.status in ("fail", "unknown") or f.severity == "error":
                print(f"  [{f.severity}] {f.assumption or f.check}: {f.message}")
        if oracle is not None:
            if "skipped" in oracle:
                print(f"Oracle: skipped ({oracle['skipped']})")
            else:
                print(
                    f"Oracle: P(tau <= T) closed form {oracle['closed_form']:.6f}, "
                    f"engine {oracle['monte_carlo']:.6f} +/- {oracle['se']:.6f} (N={oracle['n_steps']}, faults={oracle['faults']})"
                )

    if oracle is not None and oracle.get("consistent") is False:
        print("Warning: engine default probability exceeds the continuous-monitoring closed form", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_tangency(args) -> int:
    """Exact hitting-time check on the tangent path |t - 1/2| and its shifts."""
    from cdslab.output import write_tangency
    from cdslab.validation import tangency_demo

    started = now_iso()
    report = tangency_demo(args.n_max)

    out_dir = resolve_out_dir(args)
    recorder = RunRecorder(
        RunManifest(
            command="tangency",
            config_path="",
            config_fingerprint="",
            sim=SimConfig(steps=report.resolution, paths=1),
            out_dir=str(out_dir),
            started_at=started,
        ),
        out_dir,
    )
    recorder.add(*write_tangency(out_dir, report))
    recorder.finish()

    print(f"pi(x, 0)       = {report.unshifted_time}")
    for row in report.rows:
        print(f"pi(x + 1/{row.n}, 0) = {row.hitting_time}")
    if not report.ok:
        shown = ", ".join(str(n) for n in report.failures[:10])
        print(f"Error: tangency assertion failed (unshifted {report.unshifted_time}; shifts hit for n = {shown})", file=sys.stderr)
        return EXIT_FAILURE
    print(f"ok: all shifts up to n = {report.n_max} censored at {report.horizon}")
    return EXIT_OK


def build_validate_parser(subparsers) -> None:
    """Add 'validate' and 'tangency' subparsers."""
    p_validate = subparsers.add_parser(
        "validate",
        help="Check model assumptions (and the single-name oracle)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""examples:
  cdslab validate --config configs/benchmark.json
  cdslab validate --config configs/single_name.json --paths 200000 --steps 1024
  cdslab validate --list""",
    )
    p_validate.add_argument("--config", metavar="PATH", help="JSON run config")
    p_validate.add_argument("--paths", type=positive_int, metavar="M", help="Override simulation.paths for the oracle run")
    p_validate.add_argument("--steps", type=positive_int, metavar="N", help="Override simulation.steps for the oracle run")
    p_validate.add_argument("--seed", type=int, metavar="S", help="Override simulation.seed")
    p_validate.add_argument("--workers", type=positive_int, metavar="W", help="Worker processes for the oracle run")
    p_validate.add_argument("--no-oracle", action="store_true", help="Skip the single-name oracle comparison")
    p_validate.add_argument("--list", action="store_true", help="List built-in checks")
    p_validate.add_argument("--json", action="store_true", help="Output as JSON")
    p_validate.set_defaults(func=cmd_validate)

    p_tangency = subparsers.add_parser("tangency", help="Reproduce the hitting-time tangency counterexample")
    p_tangency.add_argument(
        "--n-max", type=positive_int, default=10**6, metavar="N", help="Largest shift index (default: 1000000)"
    )
    p_tangency.add_argument("--out", metavar="DIR", help="Output directory for tangency.csv")
    p_tangency.set_defaults(func=cmd_tangency)
