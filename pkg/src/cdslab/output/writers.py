"""Artifact writers: JSON summaries, CSV tables and the run manifest.

CSV column orders are frozen (documented in docs/reference/config-schema.md).
Floats are written with repr so re-runs are byte-identical.
"""

from __future__ import annotations

import csv
import json
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

from cdslab.domain import PriceEstimate, RunManifest, SweepReport
from cdslab.validation import TangencyReport

PRICE_COLUMNS = (
    "fingerprint",
    "seed",
    "seniority",
    "n_steps",
    "h",
    "n_paths",
    "c_hat",
    "se_c",
    "mean_f1",
    "mean_f2",
    "se_f1",
    "se_f2",
    "cov_f12",
    "faults",
)

SWEEP_COLUMNS = (
    "n_steps",
    "h",
    "c_hat",
    "se_c",
    "delta_c",
    "se_delta",
    "mean_jump",
    "moment4",
    "simultaneous_rate",
    "premium_hit_rate",
    "trigger_prob",
    "trigger_prob_se",
    "n_paths",
    "faults",
)

TANGENCY_COLUMNS = ("n", "hitting_time", "hitting_time_exact")

MANIFEST_NAME = "manifest.json"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_json(path: Path, payload: Mapping) -> Path:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Mapping], *, append: bool = False) -> Path:
    """Write rows in ``columns`` order; in append mode the header is written only for a new file."""
    new_file = not (append and path.exists())
    with open(path, "a" if append else "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        if new_file:
            writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(col)) for col in columns])
    return path


def price_record(estimate: PriceEstimate, *, fingerprint: str, seed: int, seniority: int) -> dict:
    return {**estimate.to_dict(), "fingerprint": fingerprint, "seed": seed, "seniority": seniority}


def write_price(out_dir: Path, record: Mapping) -> list[Path]:
    """price.json (overwritten) and one appended price.csv row."""
    return [
        write_json(out_dir / "price.json", record),
        write_csv(out_dir / "price.csv", PRICE_COLUMNS, [record], append=True),
    ]


def write_sweep(out_dir: Path, report: SweepReport) -> list[Path]:
    payload = report.to_dict()
    return [
        write_json(out_dir / "sweep.json", payload),
        write_csv(out_dir / "sweep.csv", SWEEP_COLUMNS, payload["levels"]),
    ]


def write_tangency(out_dir: Path, report: TangencyReport) -> list[Path]:
    rows = [
        {"n": row.n, "hitting_time": float(row.hitting_time), "hitting_time_exact": str(row.hitting_time)}
        for row in report.rows
    ]
    return [write_csv(out_dir / "tangency.csv", TANGENCY_COLUMNS, rows)]


def write_manifest(out_dir: Path, manifest: RunManifest) -> Path:
    """Write manifest.json; it lists itself among the artifacts."""
    path = out_dir / MANIFEST_NAME
    if MANIFEST_NAME not in manifest.artifacts:
        manifest.artifacts.append(MANIFEST_NAME)
    return write_json(path, manifest.to_dict())
