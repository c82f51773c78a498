"""Swap-rate estimation: c_hat = E[F1] / E[F2] by Monte Carlo.

A single LegFold handles one or several step-size levels: it accumulates the
joint first and second moments of (F1, F2) at every level, which yields the
per-level ratio estimates and the coupled standard error of their differences.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from cdslab.assumptions import validate
from cdslab.domain import ContractSpec, MarketModel, PriceEstimate, SimConfig, TimeGrid
from cdslab.engine import FAULT_RATE_LIMIT, BatchResult, ChunkPaths, simulate_batch, simulate_coupled_batch
from cdslab.math import gradient_se, ratio_gradient, ratio_se, row_products, sample_mean_cov
from cdslab.pathops import DiscountContext, default_times, premium_leg, protection_leg

logger = logging.getLogger(__name__)

# mean_f2 below this fraction of the total year fraction is treated as zero.
DEGENERATE_THRESHOLD = 1e-12


class DegeneratePremiumLeg(Exception):
    """Premium leg is numerically zero; the ratio would be noise."""


class InvalidBatch(Exception):
    """Too many simulation faults for the batch to be trusted."""


@dataclass(frozen=True, eq=False)
class LegMoments:
    """Running sums of x = (F1_0, F2_0, F1_1, F2_1, ...) over valid paths."""

    n: int
    total: np.ndarray
    outer: np.ndarray

    def merge(self, other: LegMoments) -> LegMoments:
        return LegMoments(n=self.n + other.n, total=self.total + other.total, outer=self.outer + other.outer)

    @property
    def levels(self) -> int:
        return self.total.shape[0] // 2

    def mean_cov(self) -> tuple[np.ndarray, np.ndarray]:
        return sample_mean_cov(self.n, self.total, self.outer)


def leg_samples(
    chunks: Sequence[ChunkPaths],
    contract: ContractSpec,
    *,
    counterparty_risk: bool = True,
) -> np.ndarray:
    """Per-path legs at every level, shape (c, 2 * levels)."""
    columns = []
    for chunk in chunks:
        tau = default_times(chunk.default_step, chunk.grid)
        discount = DiscountContext(contract.rate, h=chunk.grid.h, rate_path=chunk.rate_path)
        columns.append(protection_leg(tau, contract, discount, counterparty_risk=counterparty_risk))
        columns.append(premium_leg(tau, contract, discount, counterparty_risk=counterparty_risk))
    return np.column_stack(columns)


class LegFold:
    """Fold accumulating joint leg moments; faulted paths are excluded at every level."""

    def __init__(self, contract: ContractSpec, *, counterparty_risk: bool = True):
        self.contract = contract
        self.counterparty_risk = counterparty_risk

    def fold_chunk(self, chunks: Sequence[ChunkPaths]) -> LegMoments:
        samples = leg_samples(chunks, self.contract, counterparty_risk=self.counterparty_risk)
        valid = ~np.logical_or.reduce([c.faulted for c in chunks])
        x = samples[valid]
        return LegMoments(n=x.shape[0], total=np.sum(x, axis=0), outer=row_products(x))

    def merge(self, left: LegMoments, right: LegMoments) -> LegMoments:
        return left.merge(right)


def check_batch(result: BatchResult) -> None:
    if not result.valid:
        raise InvalidBatch(
            f"{result.faults} of {result.n_paths} paths faulted (rate {result.fault_rate:.2e} > {FAULT_RATE_LIMIT:.0e})"
        )


def estimates_from_moments(
    moments: LegMoments,
    steps: Sequence[int],
    contract: ContractSpec,
    *,
    faults: int = 0,
) -> list[PriceEstimate]:
    """One PriceEstimate per level.

    Raises:
        DegeneratePremiumLeg: If any level's premium leg mean is below
            DEGENERATE_THRESHOLD times the total year fraction.
    """
    if moments.n == 0:
        raise InvalidBatch("no valid paths")
    mean, cov = moments.mean_cov()
    floor = DEGENERATE_THRESHOLD * contract.annuity_length
    out = []
    for level, n_steps in enumerate(steps):
        a, b = 2 * level, 2 * level + 1
        m1, m2 = float(mean[a]), float(mean[b])
        if m2 < floor:
            raise DegeneratePremiumLeg(f"premium leg mean {m2:.3e} below {floor:.3e} at {n_steps} steps")
        grid = TimeGrid(contract.maturity, n_steps)
        out.append(
            PriceEstimate(
                c_hat=m1 / m2,
                mean_f1=m1,
                mean_f2=m2,
                se_f1=float(np.sqrt(cov[a, a] / moments.n)),
                se_f2=float(np.sqrt(cov[b, b] / moments.n)),
                cov_f12=float(cov[a, b]),
                se_c=ratio_se(m1, m2, cov[a, a], cov[b, b], cov[a, b], moments.n),
                n_paths=moments.n,
                h=grid.h,
                n_steps=n_steps,
                faults=faults,
            )
        )
    return out


def difference_se(moments: LegMoments, level: int, other: int) -> float:
    """Coupled delta-method standard error of c_hat[level] - c_hat[other]."""
    mean, cov = moments.mean_cov()
    grad = np.zeros_like(mean)
    grad[2 * level : 2 * level + 2] = ratio_gradient(mean[2 * level], mean[2 * level + 1])
    grad[2 * other : 2 * other + 2] -= ratio_gradient(mean[2 * other], mean[2 * other + 1])
    return gradient_se(grad, cov, moments.n)


def estimate_swap_rate(
    model: MarketModel,
    contract: ContractSpec,
    sim: SimConfig,
    *,
    counterparty_risk: bool = True,
    unsafe: bool = False,
) -> PriceEstimate:
    """Estimate the i-th to default swap rate at step count ``sim.steps``.

    Args:
        counterparty_risk: When False, the writer-survival indicators are forced to 1.
        unsafe: Skip rejection of models that fail validation.

    Raises:
        ModelValidationError: If the model is rejected (unless ``unsafe``).
        DegeneratePremiumLeg: If the premium leg is numerically zero.
        InvalidBatch: If the fault rate exceeds FAULT_RATE_LIMIT.
    """
    if not unsafe:
        validate(model, contract).raise_for_errors()
    fold = LegFold(contract, counterparty_risk=counterparty_risk)
    result = simulate_batch(model, contract, sim, fold, allow_singular=unsafe)
    check_batch(result)
    estimate = estimates_from_moments(result.value, [sim.steps], contract, faults=result.faults)[0]
    logger.info("c_hat = %.6g (se %.2g, %d paths, h = %.4g)", estimate.c_hat, estimate.se_c, estimate.n_paths, estimate.h)
    return estimate


def coupled_estimates(
    model: MarketModel,
    contract: ContractSpec,
    steps: Sequence[int],
    sim: SimConfig,
    *,
    counterparty_risk: bool = True,
    unsafe: bool = False,
) -> list[PriceEstimate]:
    """Estimates at several step counts sharing the same Brownian paths.

    ``steps`` lists N per level, each h half the previous (N doubling);
    repeated values are allowed.
    """
    if not unsafe:
        validate(model, contract).raise_for_errors()
    fold = LegFold(contract, counterparty_risk=counterparty_risk)
    result = simulate_coupled_batch(model, contract, sim, steps, fold, allow_singular=unsafe)
    check_batch(result)
    return estimates_from_moments(result.value, steps, contract, faults=result.faults)
