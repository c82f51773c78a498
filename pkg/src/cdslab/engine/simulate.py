"""Euler scheme for the path-dependent firm-value SDE.

V_{n+1} = V_n + diag(V_n) (mu_n h + sigma_n sqrt(h) Z_{n+1}) on V itself, with
no positivity clamp. Defaults are monitored at grid points only and the
volatility used for step n sees the defaults recorded at or before t_n.
Paths of a chunk are advanced together; each row is an independent path.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from cdslab.domain import ContractSpec, MarketModel, PathGrid, SimConfig, TimeGrid
from cdslab.dynamics import correlation_factor, instantaneous_sigma
from cdslab.engine.rng import RngSubstream
from cdslab.pathops import DefaultTimes, default_count

logger = logging.getLogger(__name__)


def noise_dim(model: MarketModel, contract: ContractSpec) -> int:
    """Normal draws per step: k + 1, plus one for a simulated short rate."""
    return model.dim + (1 if contract.rate.stochastic else 0)


def euler_step(v_n, mu_n, sigma_n, z, h: float) -> np.ndarray:
    """One Euler step: v + diag(v) (mu h + sigma sqrt(h) z).

    Leading axes of ``v_n``, ``sigma_n`` and ``z`` index paths; a single path
    is the unbatched case. ``z`` may carry extra trailing draws, which are
    ignored.
    """
    v_n = np.asarray(v_n, dtype=np.float64)
    sigma_n = np.asarray(sigma_n, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    # sigma @ z spelled out column by column: a path rounds the same whatever
    # batch it sits in (BLAS kernels depend on shape).
    shock = sigma_n[..., 0] * z[..., :1]
    for j in range(1, sigma_n.shape[-1]):
        shock = shock + sigma_n[..., j] * z[..., j : j + 1]
    return v_n + v_n * (np.asarray(mu_n) * h + shock * math.sqrt(h))


# Column by column, as in euler_step.
def _row_sq(x: np.ndarray) -> np.ndarray:
    acc = x[:, 0] * x[:, 0]
    for j in range(1, x.shape[1]):
        acc = acc + x[:, j] * x[:, j]
    return acc


@dataclass(frozen=True, eq=False)
class ChunkPaths:
    """Per-path summaries of a simulated chunk; full values only when retained."""

    grid: TimeGrid
    start: int
    default_step: np.ndarray  # (c, k + 1), -1 where the barrier was never breached
    faulted: np.ndarray  # (c,)
    jump_max: np.ndarray  # max_n |V_{n+1} - V_n|
    sup_norm4: np.ndarray  # max_n |V_n|^4
    maturity_values: np.ndarray  # (c, k + 1) at t = maturity
    rate_path: np.ndarray | None = None  # (c, n_steps + 1)
    values: np.ndarray | None = None  # (c, n_steps + 1, k + 1)

    @property
    def size(self) -> int:
        return self.default_step.shape[0]

    def path(self, i: int) -> PathGrid:
        """Materialize one retained path as a PathGrid."""
        if self.values is None:
            raise ValueError("chunk was simulated without retaining values")
        steps = self.default_step[i]
        tau = DefaultTimes.from_steps(steps, self.grid)
        alpha = np.array([default_count(tau, t) for t in self.grid.times], dtype=np.int64)
        return PathGrid(
            h=self.grid.h,
            values=self.values[i],
            default_step=tuple(int(s) if s >= 0 else None for s in steps),
            alpha_path=alpha,
            rate_path=None if self.rate_path is None else self.rate_path[i],
            faulted=bool(self.faulted[i]),
        )


def simulate_chunk(
    model: MarketModel,
    contract: ContractSpec,
    grid: TimeGrid,
    normals: np.ndarray,
    *,
    factor: np.ndarray,
    start: int = 0,
    retain: bool = False,
) -> ChunkPaths:
    """Advance a chunk of paths over the whole grid.

    Args:
        normals: Shape (c, n_steps, noise_dim); row n drives the step t_n -> t_{n+1}.
        factor: Correlation factor A (A @ A.T == correlation).
        start: Path index of the first row, for fault reporting.
        retain: Keep every grid value (memory O(c * grid)).
    """
    c = normals.shape[0]
    dim = model.dim
    n_steps = grid.n_steps
    h = grid.h
    sqrt_h = math.sqrt(h)
    times = grid.times
    monitored = grid.monitored
    levels = contract.barrier_levels(times)
    can_default = ~contract.default_free
    rule = contract.rate

    v = np.tile(model.v0, (c, 1))
    default_step = np.full((c, dim), -1, dtype=np.int64)
    faulted = np.zeros(c, dtype=bool)
    jump_max = np.zeros(c)
    sup_norm4 = np.full(c, float(np.sum(model.v0**2)) ** 2)
    maturity_values = v.copy()
    stored = np.empty((c, n_steps + 1, dim)) if retain else None
    rate = None
    if rule.stochastic:
        rate = np.empty((c, n_steps + 1))
        rate[:, 0] = rule.r0
    constant_drift = None if model.has_drift_curves else model.drift_at(0.0)

    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(n_steps + 1):
            if stored is not None:
                stored[:, n] = v
            if n == grid.steps:
                maturity_values = v.copy()
            if monitored[n]:
                hit = (v <= levels[n]) & can_default & (default_step < 0) & ~faulted[:, None]
                default_step[hit] = n
            if n == n_steps:
                break

            alpha = np.count_nonzero(default_step[:, 1:] >= 0, axis=1)
            sigma = instantaneous_sigma(model, alpha, factor)
            mu = constant_drift if constant_drift is not None else model.drift_at(times[n])
            v_next = euler_step(v, mu, sigma, normals[:, n], h)

            norm4 = _row_sq(v_next) ** 2
            bad = ~(np.isfinite(v_next).all(axis=1) & np.isfinite(norm4)) & ~faulted
            if bad.any():
                for i in np.flatnonzero(bad):
                    logger.warning("simulation fault: path %d non-finite at step %d", start + i, n + 1)
                faulted |= bad
            v_next[faulted] = v[faulted]
            norm4[faulted] = sup_norm4[faulted]

            jump_max = np.maximum(jump_max, np.sqrt(_row_sq(v_next - v)))
            sup_norm4 = np.maximum(sup_norm4, norm4)
            if rate is not None:
                r = rate[:, n]
                rate[:, n + 1] = r + rule.speed * (rule.level - r) * h + rule.vol * sqrt_h * normals[:, n, dim]
            v = v_next

    return ChunkPaths(
        grid=grid,
        start=start,
        default_step=default_step,
        faulted=faulted,
        jump_max=jump_max,
        sup_norm4=sup_norm4,
        maturity_values=maturity_values,
        rate_path=rate,
        values=stored,
    )


def simulate_path(
    model: MarketModel,
    contract: ContractSpec,
    sim: SimConfig,
    stream: RngSubstream,
    *,
    allow_singular: bool = False,
) -> PathGrid:
    """Simulate and retain a single path drawn from ``stream``."""
    grid = TimeGrid(contract.maturity, sim.steps)
    factor = correlation_factor(model, allow_singular=allow_singular)
    normals = stream.normals(grid.n_steps, noise_dim(model, contract))[None]
    chunk = simulate_chunk(model, contract, grid, normals, factor=factor, start=stream.path_index, retain=True)
    return chunk.path(0)
