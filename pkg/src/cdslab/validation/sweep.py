"""Convergence sweep: coupled swap-rate estimates plus diagnostics per step size."""

from __future__ import annotations

import logging
from collections.abc import Sequence

from cdslab.assumptions import validate
from cdslab.domain import ContractSpec, MarketModel, SimConfig, SweepLevel, SweepReport
from cdslab.engine import ChunkPaths, simulate_coupled_batch
from cdslab.pricer import LegFold, LegMoments, check_batch, difference_se, estimates_from_moments
from cdslab.validation.diagnostics import (
    DiagnosticsFold,
    LevelCounts,
    default_probability,
    premium_date_hit_rate,
    simultaneous_default_rate,
)

logger = logging.getLogger(__name__)

SweepValue = tuple[LegMoments, tuple[LevelCounts, ...]]


class SweepFold:
    """Legs and diagnostics in a single pass over each chunk."""

    def __init__(self, contract: ContractSpec, *, counterparty_risk: bool = True):
        self.legs = LegFold(contract, counterparty_risk=counterparty_risk)
        self.diagnostics = DiagnosticsFold(contract)

    def fold_chunk(self, chunks: Sequence[ChunkPaths]) -> SweepValue:
        return self.legs.fold_chunk(chunks), self.diagnostics.fold_chunk(chunks)

    def merge(self, left: SweepValue, right: SweepValue) -> SweepValue:
        return self.legs.merge(left[0], right[0]), self.diagnostics.merge(left[1], right[1])


def sweep_steps(base_steps: int, levels: int) -> list[int]:
    """Step counts N, 2N, 4N, ... (h halving), coarsest first."""
    if levels < 1:
        raise ValueError("levels must be >= 1")
    return [base_steps * 2**level for level in range(levels)]


def run_sweep(
    model: MarketModel,
    contract: ContractSpec,
    steps: Sequence[int],
    sim: SimConfig,
    *,
    fingerprint: str = "",
    unsafe: bool = False,
) -> SweepReport:
    """Coupled estimates and diagnostics at each step count, coarsest first.

    ``steps`` must be nondecreasing with power-of-two ratios; ``sim.steps``
    is ignored. Paths, seed, chunk size and workers come from ``sim``.

    Raises:
        ModelValidationError: If the model is rejected (unless ``unsafe``).
        DegeneratePremiumLeg: If any level's premium leg is numerically zero.
        InvalidBatch: If the fault rate exceeds the batch limit.
    """
    steps = [int(s) for s in steps]
    if not steps:
        raise ValueError("at least one level is required")
    if any(b < a for a, b in zip(steps, steps[1:])):
        raise ValueError(f"steps must be ordered coarsest first, got {steps}")
    if not unsafe:
        validate(model, contract).raise_for_errors()

    result = simulate_coupled_batch(model, contract, sim, steps, SweepFold(contract), allow_singular=unsafe)
    check_batch(result)
    moments, counts = result.value
    estimates = estimates_from_moments(moments, steps, contract, faults=result.faults)

    levels = []
    for idx, (est, cnt) in enumerate(zip(estimates, counts, strict=True)):
        finer = idx + 1 < len(estimates)
        p, p_se = default_probability(cnt)
        levels.append(
            SweepLevel(
                n_steps=est.n_steps,
                h=est.h,
                c_hat=est.c_hat,
                se_c=est.se_c,
                delta_c=abs(est.c_hat - estimates[idx + 1].c_hat) if finer else None,
                se_delta=difference_se(moments, idx, idx + 1) if finer else None,
                mean_jump=cnt.mean_jump,
                moment4=cnt.moment4,
                simultaneous_rate=simultaneous_default_rate(cnt),
                premium_hit_rate=premium_date_hit_rate(cnt),
                trigger_prob=p,
                trigger_prob_se=p_se,
                n_paths=est.n_paths,
                faults=result.faults,
            )
        )
        logger.info("level N=%d: c_hat %.6g, mean jump %.4g", est.n_steps, est.c_hat, cnt.mean_jump)

    return SweepReport(levels=tuple(levels), fingerprint=fingerprint, seed=sim.seed, seniority=contract.seniority)
