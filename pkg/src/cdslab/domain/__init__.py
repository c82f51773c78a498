"""Domain objects for cdslab."""

from .models import (
    CONTAGION_MODES,
    DEFAULT_K_BOUND,
    DISCOUNT_MODES,
    Barrier,
    ContagionRule,
    ContractSpec,
    Curve,
    DiscountRule,
    MarketModel,
    RunConfig,
    SimConfig,
    TimeGrid,
)
from .results import PathGrid, PriceEstimate, RunManifest, SweepLevel, SweepReport

__all__ = [
    # Models
    "Barrier",
    "CONTAGION_MODES",
    "ContagionRule",
    "ContractSpec",
    "Curve",
    "DEFAULT_K_BOUND",
    "DISCOUNT_MODES",
    "DiscountRule",
    "MarketModel",
    "RunConfig",
    "SimConfig",
    "TimeGrid",
    # Results
    "PathGrid",
    "PriceEstimate",
    "RunManifest",
    "SweepLevel",
    "SweepReport",
]
