"""CLI handler for 'cdslab price'."""

from __future__ import annotations

import argparse
import sys

from cdslab.cli_common import (
    EXIT_OK,
    RunRecorder,
    add_run_arguments,
    load_run,
    now_iso,
    print_findings,
    report_error,
    resolve_out_dir,
)
from cdslab.domain import RunManifest

DUMP_NAME = "paths.bin"


def cmd_price(args) -> int:
    """Estimate the swap rate and write price.json / price.csv."""
    from cdslab.assumptions import ModelValidationError, validate
    from cdslab.loader import ConfigError
    from cdslab.output import fmt_float, fmt_rate, price_record, write_price
    from cdslab.pricer import DegeneratePremiumLeg, InvalidBatch, estimate_swap_rate

    started = now_iso()
    try:
        run, fingerprint = load_run(args)
        report = validate(run.model, run.contract)
        if not report.ok:
            if not args.unsafe_model:
                raise ModelValidationError(report.errors)
            print("Warning: model fails validation; running anyway (--unsafe-model)", file=sys.stderr)
            print_findings(report.errors)
        estimate = estimate_swap_rate(run.model, run.contract, run.sim, unsafe=args.unsafe_model)
    except (ConfigError, ModelValidationError, DegeneratePremiumLeg, InvalidBatch) as e:
        return report_error(e)

    out_dir = resolve_out_dir(args)
    recorder = RunRecorder(
        RunManifest(
            command="price",
            config_path=str(args.config),
            config_fingerprint=fingerprint,
            sim=run.sim,
            out_dir=str(out_dir),
            started_at=started,
        ),
        out_dir,
    )
    record = price_record(estimate, fingerprint=fingerprint, seed=run.sim.seed, seniority=run.contract.seniority)
    recorder.add(*write_price(out_dir, record))
    if args.dump_paths:
        recorder.add(_dump_paths(run, args.dump_paths, out_dir, allow_singular=args.unsafe_model))
    recorder.finish()

    print(f"c_hat:     {estimate.c_hat!r} ({fmt_rate(estimate.c_hat)})")
    print(f"se:        {fmt_float(estimate.se_c, 3)}")
    print(f"legs:      F1 {fmt_float(estimate.mean_f1)}  F2 {fmt_float(estimate.mean_f2)}")
    print(f"grid:      N={estimate.n_steps} h={fmt_float(estimate.h)}  paths={estimate.n_paths}  faults={estimate.faults}")
    print(f"output:    {out_dir}")
    if estimate.faults:
        print(f"Warning: {estimate.faults} paths faulted and were excluded", file=sys.stderr)
    return EXIT_OK


def _dump_paths(run, count: int, out_dir, *, allow_singular: bool):
    from cdslab.engine import simulate_path, substream, write_path_dump

    count = min(count, run.sim.paths)
    grids = (
        simulate_path(run.model, run.contract, run.sim, substream(run.sim.seed, p), allow_singular=allow_singular)
        for p in range(count)
    )
    path = out_dir / DUMP_NAME
    write_path_dump(path, grids)
    return path


def build_price_parser(subparsers) -> None:
    """Add the 'price' subparser."""
    p_price = subparsers.add_parser(
        "price",
        help="Estimate the i-th to default swap rate",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""examples:
  cdslab price --config configs/benchmark.json
  cdslab price --config configs/benchmark.json --paths 100000 --workers 8
  cdslab price --config configs/benchmark.json --dump-paths 10   # also write paths.bin""",
    )
    add_run_arguments(p_price)
    p_price.add_argument("--dump-paths", type=int, default=0, metavar="D", help="Write the first D paths to paths.bin")
    p_price.set_defaults(func=cmd_price)

