"""cdslab - basket CDS Monte Carlo with counterparty risk.

Public API re-exports for programmatic access.
"""

from cdslab.domain import (
    Barrier,
    ContagionRule,
    ContractSpec,
    Curve,
    DiscountRule,
    MarketModel,
    PathGrid,
    PriceEstimate,
    RunConfig,
    SimConfig,
    SweepReport,
    TimeGrid,
)
from cdslab.loader import ConfigError, load_run_config, parse_run_config

# Simulation symbols are lazy to avoid pulling scipy into config-only commands.
_LAZY_NAMES = {
    "validate": "cdslab.assumptions",
    "ModelValidationError": "cdslab.assumptions",
    "chol_factor": "cdslab.dynamics",
    "instantaneous_sigma": "cdslab.dynamics",
    "simulate_batch": "cdslab.engine",
    "simulate_path": "cdslab.engine",
    "substream": "cdslab.engine",
    "estimate_swap_rate": "cdslab.pricer",
    "coupled_estimates": "cdslab.pricer",
    "DegeneratePremiumLeg": "cdslab.pricer",
    "InvalidBatch": "cdslab.pricer",
    "fpt_probability": "cdslab.validation",
    "run_sweep": "cdslab.validation",
    "tangency_demo": "cdslab.validation",
}


def __getattr__(name: str):
    if name in _LAZY_NAMES:
        import importlib

        val = getattr(importlib.import_module(_LAZY_NAMES[name]), name)
        globals()[name] = val
        return val
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "Barrier",
    "ConfigError",
    "ContagionRule",
    "ContractSpec",
    "Curve",
    "DiscountRule",
    "MarketModel",
    "PathGrid",
    "PriceEstimate",
    "RunConfig",
    "SimConfig",
    "SweepReport",
    "TimeGrid",
    "load_run_config",
    "parse_run_config",
    *sorted(_LAZY_NAMES),
]
