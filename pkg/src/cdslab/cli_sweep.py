"""CLI handler for 'cdslab sweep'."""

from __future__ import annotations

import argparse
import sys

from cdslab.cli_common import (
    EXIT_NOT_CONVERGING,
    EXIT_OK,
    RunRecorder,
    add_run_arguments,
    load_run,
    now_iso,
    positive_int,
    print_findings,
    report_error,
    resolve_out_dir,
)
from cdslab.domain import RunManifest


def cmd_sweep(args) -> int:
    """Coupled estimates over halving step sizes plus diagnostics."""
    from cdslab.assumptions import ModelValidationError, validate
    from cdslab.loader import ConfigError
    from cdslab.output import fmt_float, fmt_table, write_sweep
    from cdslab.pricer import DegeneratePremiumLeg, InvalidBatch
    from cdslab.validation import run_sweep, sweep_steps

    started = now_iso()
    try:
        run, fingerprint = load_run(args)
        report = validate(run.model, run.contract)
        if not report.ok:
            if not args.unsafe_model:
                raise ModelValidationError(report.errors)
            print("Warning: model fails validation; running anyway (--unsafe-model)", file=sys.stderr)
            print_findings(report.errors)
        steps = sweep_steps(run.sim.steps, args.levels)
        sweep = run_sweep(run.model, run.contract, steps, run.sim, fingerprint=fingerprint, unsafe=args.unsafe_model)
    except (ConfigError, ModelValidationError, DegeneratePremiumLeg, InvalidBatch) as e:
        return report_error(e)

    out_dir = resolve_out_dir(args)
    recorder = RunRecorder(
        RunManifest(
            command="sweep",
            config_path=str(args.config),
            config_fingerprint=fingerprint,
            sim=run.sim,
            out_dir=str(out_dir),
            started_at=started,
        ),
        out_dir,
    )
    recorder.add(*write_sweep(out_dir, sweep))
    recorder.finish()

    headers = ["N", "h", "c_hat", "se", "|dc|", "se(dc)", "E[j]", "E[sup^4]", "simul", "on-date", "P(trig)"]
    rows = [
        [
            str(lvl.n_steps),
            fmt_float(lvl.h, 4),
            fmt_float(lvl.c_hat),
            fmt_float(lvl.se_c, 3),
            fmt_float(lvl.delta_c, 3),
            fmt_float(lvl.se_delta, 3),
            fmt_float(lvl.mean_jump, 4),
            fmt_float(lvl.moment4, 4),
            fmt_float(lvl.simultaneous_rate, 3),
            fmt_float(lvl.premium_hit_rate, 3),
            fmt_float(lvl.trigger_prob, 4),
        ]
        for lvl in sweep.levels
    ]
    print(fmt_table(headers, rows))
    print(f"output: {out_dir}")

    if args.assert_convergence and not sweep.is_converging():
        deltas = ", ".join(fmt_float(d, 3) for d in sweep.deltas)
        print(f"Error: |dc| column is not strictly decreasing: {deltas}", file=sys.stderr)
        return EXIT_NOT_CONVERGING
    return EXIT_OK


def build_sweep_parser(subparsers) -> None:
    """Add the 'sweep' subparser."""
    p_sweep = subparsers.add_parser(
        "sweep",
        help="Convergence sweep over halving step sizes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""examples:
  cdslab sweep --config configs/benchmark.json --levels 5        # N, 2N, ..., 16N
  cdslab sweep --config configs/benchmark.json --assert-convergence""",
    )
    add_run_arguments(p_sweep)
    p_sweep.add_argument("--levels", type=positive_int, default=4, metavar="L", help="Number of levels (default: 4)")
    p_sweep.add_argument(
        "--assert-convergence",
        action="store_true",
        help=f"Exit {EXIT_NOT_CONVERGING} unless |c(h) - c(h/2)| strictly decreases",
    )
    p_sweep.set_defaults(func=cmd_sweep)
