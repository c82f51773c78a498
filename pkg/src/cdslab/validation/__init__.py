"""Analytic oracles and empirical convergence diagnostics."""

from cdslab.validation.diagnostics import (
    DiagnosticsFold,
    LevelCounts,
    default_probability,
    jump_statistic,
    premium_date_hit_rate,
    simultaneous_default_rate,
)
from cdslab.validation.oracles import (
    OracleDomainError,
    OracleEstimate,
    SingleName,
    fpt_probability,
    naive_fpt_probability,
    single_name,
)
from cdslab.validation.sweep import SweepFold, run_sweep, sweep_steps
from cdslab.validation.tangency import TangencyReport, TangencyRow, table_points, tangency_demo

__all__ = [
    "DiagnosticsFold",
    "LevelCounts",
    "OracleDomainError",
    "OracleEstimate",
    "SingleName",
    "SweepFold",
    "TangencyReport",
    "TangencyRow",
    "default_probability",
    "fpt_probability",
    "jump_statistic",
    "naive_fpt_probability",
    "premium_date_hit_rate",
    "run_sweep",
    "simultaneous_default_rate",
    "single_name",
    "sweep_steps",
    "table_points",
    "tangency_demo",
]
