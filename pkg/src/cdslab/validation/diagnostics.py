"""Per-level path diagnostics for convergence sweeps.

Counts are folded over the same deterministic chunks as the pricing legs:
jump statistic, fourth moment of the running sup, simultaneous counterparty
and i-th defaults, defaults landing exactly on premium dates, and the
i-th default probability.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from cdslab.domain import ContractSpec, PathGrid, TimeGrid
from cdslab.engine import ChunkPaths
from cdslab.pathops import ordered_steps

_TIME_ATOL = 1e-12


def jump_statistic(path: PathGrid) -> float:
    """Largest step increment norm max_n |V_{n+1} - V_n|."""
    if path.n_steps == 0:
        return 0.0
    increments = np.diff(path.values, axis=0)
    return float(np.max(np.sqrt(np.sum(increments**2, axis=1))))


def _on_or_before(step: np.ndarray, grid: TimeGrid, t: float) -> np.ndarray:
    return (step >= 0) & (step * grid.h <= t * (1 + 1e-12))


def simultaneous_defaults(default_step: np.ndarray, grid: TimeGrid, seniority: int) -> np.ndarray:
    """Mask of paths where the counterparty and the i-th default share a grid step at or before maturity."""
    s0 = default_step[:, 0]
    si = ordered_steps(default_step)[:, seniority - 1]
    return (s0 == si) & _on_or_before(si, grid, grid.maturity)


def premium_date_hits(default_step: np.ndarray, grid: TimeGrid, contract: ContractSpec) -> np.ndarray:
    """Mask of paths whose counterparty or i-th default time equals a premium date.

    Censored times (no default) are never counted.
    """
    dates = np.asarray(contract.premium_dates, dtype=np.float64)
    si = ordered_steps(default_step)[:, contract.seniority - 1]
    hits = np.zeros(default_step.shape[0], dtype=bool)
    for step in (default_step[:, 0], si):
        t = step * grid.h
        on_date = np.isclose(t[:, None], dates[None, :], rtol=0.0, atol=_TIME_ATOL * max(1.0, grid.maturity))
        hits |= (step >= 0) & on_date.any(axis=1)
    return hits


def triggered(default_step: np.ndarray, grid: TimeGrid, seniority: int) -> np.ndarray:
    """Mask of paths with tau_(i) <= maturity."""
    si = ordered_steps(default_step)[:, seniority - 1]
    return _on_or_before(si, grid, grid.maturity)


@dataclass(frozen=True)
class LevelCounts:
    """Diagnostic sums for one step size over valid (unfaulted) paths."""

    n: int = 0
    jump_sum: float = 0.0
    moment4_sum: float = 0.0
    simultaneous: int = 0
    premium_hits: int = 0
    triggered: int = 0

    def merge(self, other: LevelCounts) -> LevelCounts:
        return LevelCounts(
            n=self.n + other.n,
            jump_sum=self.jump_sum + other.jump_sum,
            moment4_sum=self.moment4_sum + other.moment4_sum,
            simultaneous=self.simultaneous + other.simultaneous,
            premium_hits=self.premium_hits + other.premium_hits,
            triggered=self.triggered + other.triggered,
        )

    @property
    def mean_jump(self) -> float:
        return self.jump_sum / self.n if self.n else math.nan

    @property
    def moment4(self) -> float:
        """Estimate of E[sup_t |V(t)|^4] over the whole grid."""
        return self.moment4_sum / self.n if self.n else math.nan


def simultaneous_default_rate(counts: LevelCounts) -> float:
    """Fraction of paths with tau_0 = tau_(i) <= T at the same grid step."""
    return counts.simultaneous / counts.n if counts.n else 0.0


def premium_date_hit_rate(counts: LevelCounts) -> float:
    """Fraction of paths whose tau_0 or tau_(i) lands exactly on a premium date."""
    return counts.premium_hits / counts.n if counts.n else 0.0


def default_probability(counts: LevelCounts) -> tuple[float, float]:
    """P(tau_(i) <= T) and its binomial standard error."""
    if not counts.n:
        return 0.0, 0.0
    p = counts.triggered / counts.n
    return p, math.sqrt(p * (1 - p) / counts.n)


def level_counts(chunk: ChunkPaths, contract: ContractSpec, valid: np.ndarray) -> LevelCounts:
    steps = chunk.default_step[valid]
    grid = chunk.grid
    return LevelCounts(
        n=int(np.count_nonzero(valid)),
        jump_sum=float(np.sum(chunk.jump_max[valid])),
        moment4_sum=float(np.sum(chunk.sup_norm4[valid])),
        simultaneous=int(np.count_nonzero(simultaneous_defaults(steps, grid, contract.seniority))),
        premium_hits=int(np.count_nonzero(premium_date_hits(steps, grid, contract))),
        triggered=int(np.count_nonzero(triggered(steps, grid, contract.seniority))),
    )


class DiagnosticsFold:
    """Fold producing one LevelCounts per step-size level."""

    def __init__(self, contract: ContractSpec):
        self.contract = contract

    def fold_chunk(self, chunks: Sequence[ChunkPaths]) -> tuple[LevelCounts, ...]:
        valid = ~np.logical_or.reduce([c.faulted for c in chunks])
        return tuple(level_counts(c, self.contract, valid) for c in chunks)

    def merge(self, left: tuple[LevelCounts, ...], right: tuple[LevelCounts, ...]) -> tuple[LevelCounts, ...]:
        return tuple(a.merge(b) for a, b in zip(left, right, strict=True))
