"""Artifact writers and terminal formatting."""

from cdslab.output.common import fmt_float, fmt_rate, fmt_table
from cdslab.output.writers import (
    MANIFEST_NAME,
    PRICE_COLUMNS,
    SWEEP_COLUMNS,
    TANGENCY_COLUMNS,
    price_record,
    write_csv,
    write_json,
    write_manifest,
    write_price,
    write_sweep,
    write_tangency,
)

__all__ = [
    # Writers
    "MANIFEST_NAME",
    "PRICE_COLUMNS",
    "SWEEP_COLUMNS",
    "TANGENCY_COLUMNS",
    "price_record",
    "write_csv",
    "write_json",
    "write_manifest",
    "write_price",
    "write_sweep",
    "write_tangency",
    # Formatting
    "fmt_float",
    "fmt_rate",
    "fmt_table",
]
