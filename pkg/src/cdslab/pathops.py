"""Path functionals: hitting time, order statistics, default count, legs, discounting.

Default times are grid times (or the horizon T + 1 when no breach happened);
premium dates are used exactly, off-grid or not. Every leg function accepts
a batch of default-time rows, shape (c, k + 1), and the scalar versions wrap
them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cdslab.domain import Barrier, ContractSpec, DiscountRule, PathGrid, TimeGrid


class RankError(ValueError):
    """Order-statistic rank outside 1..n."""


@dataclass(frozen=True)
class DefaultTimes:
    """Default times of all names; censored names sit at the horizon."""

    tau: tuple[float, ...]
    horizon: float
    defaulted: tuple[bool, ...] = ()

    def __post_init__(self):
        if not self.defaulted:
            object.__setattr__(self, "defaulted", tuple(t < self.horizon for t in self.tau))

    @property
    def tau_ordered(self) -> tuple[float, ...]:
        """Sorted reference-name times tau_(1) <= ... <= tau_(k)."""
        return tuple(sorted(self.tau[1:]))

    @classmethod
    def from_steps(cls, default_step, grid: TimeGrid) -> DefaultTimes:
        """Default times of one path from its engine default steps (-1 means none)."""
        steps = np.asarray(default_step)
        tau = tuple(float(t) for t in grid.time_of(steps))
        return cls(tau=tau, horizon=grid.horizon, defaulted=tuple(bool(s >= 0) for s in steps))

    @classmethod
    def from_path(cls, path: PathGrid, horizon: float) -> DefaultTimes:
        tau = tuple(horizon if s is None else min(s * path.h, horizon) for s in path.default_step)
        return cls(tau=tau, horizon=horizon, defaulted=tuple(s is not None for s in path.default_step))


def default_times(default_step: np.ndarray, grid: TimeGrid) -> np.ndarray:
    """Vectorized default times from engine default steps (-1 means none)."""
    return grid.time_of(default_step)


def ordered_steps(default_step: np.ndarray) -> np.ndarray:
    """Reference-name default steps sorted ascending; no default sorts last as -1."""
    ref = np.where(default_step[:, 1:] < 0, np.iinfo(np.int64).max, default_step[:, 1:])
    ordered = np.sort(ref, axis=1)
    return np.where(ordered == np.iinfo(np.int64).max, -1, ordered)


def first_hit_index(values, levels) -> np.ndarray:
    """Index of the first entry with value <= level along the last axis, -1 if none."""
    hit = np.asarray(values) <= np.asarray(levels)
    return np.where(hit.any(axis=-1), hit.argmax(axis=-1), -1)


def hitting_time(values, barrier: Barrier | float, times, horizon: float) -> float:
    """First grid time at which a piecewise-constant path is at or below the barrier.

    Returns the horizon when there is no such time. A default-free barrier
    (level 0 as a Barrier) is never hit.
    """
    times = np.asarray(times, dtype=np.float64)
    if isinstance(barrier, Barrier):
        if barrier.default_free:
            return horizon
        levels = barrier.value(times)
    else:
        levels = np.broadcast_to(np.asarray(barrier, dtype=np.float64), times.shape)
    inside = times <= horizon * (1 + 1e-12)
    idx = int(first_hit_index(np.asarray(values)[inside], levels[inside]))
    return horizon if idx < 0 else float(times[idx])


def order_statistic(values, j: int) -> float | np.ndarray:
    """j-th smallest value (1-based) along the last axis, ties kept.

    A vector gives a float; a batch of rows gives one value per row.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[-1] if values.ndim else 0
    if not 1 <= j <= n:
        raise RankError(f"rank {j} outside 1..{n}")
    picked = np.sort(values, axis=-1)[..., j - 1]
    return float(picked) if picked.ndim == 0 else picked


def default_count(tau: DefaultTimes, t: float) -> int:
    """Number of defaulted reference names with tau_i <= t (counterparty excluded)."""
    return sum(1 for ti, d in zip(tau.tau[1:], tau.defaulted[1:]) if d and ti <= t)


@dataclass(frozen=True, eq=False)
class DiscountContext:
    """Discounting for one path or a batch of paths.

    ``rate_path`` (shape (n_steps + 1,) or (c, n_steps + 1)) and ``h`` are
    required in vasicek-component mode; the rate is piecewise constant on
    the grid, so its left-Riemann integral is exact.
    """

    rule: DiscountRule
    h: float | None = None
    rate_path: np.ndarray | None = None

    def integral(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        if not self.rule.stochastic:
            return self.rule.integral(t)
        if self.rate_path is None or self.h is None:
            raise ValueError("vasicek-component discounting needs rate_path and h")
        r = np.asarray(self.rate_path)
        h = self.h
        cum = np.concatenate([np.zeros(r.shape[:-1] + (1,)), np.cumsum(r[..., :-1] * h, axis=-1)], axis=-1)
        idx = np.clip(np.floor(t / h * (1 + 1e-12)).astype(np.int64), 0, r.shape[-1] - 1)
        if r.ndim == 1:
            return cum[idx] + r[idx] * (t - idx * h)
        flat_idx = idx.reshape(r.shape[0], -1)
        base = np.take_along_axis(cum, flat_idx, axis=1).reshape(idx.shape)
        rate = np.take_along_axis(r, flat_idx, axis=1).reshape(idx.shape)
        return base + rate * (t - idx * h)

    def factor(self, t) -> np.ndarray:
        return np.exp(-self.integral(t))


def discount_factor(ctx: DiscountContext, t: float) -> float:
    """exp(-integral of the short rate over [0, t])."""
    return float(ctx.factor(t))


def protection_leg(
    tau: np.ndarray,
    contract: ContractSpec,
    discount: DiscountContext,
    *,
    counterparty_risk: bool = True,
) -> np.ndarray:
    """F1 per row: D(tau_(i)) (1 - delta_i) 1(tau_(i) <= T) 1(tau_0 > tau_(i) ^ T)."""
    tau = np.atleast_2d(np.asarray(tau, dtype=np.float64))
    t_i = order_statistic(tau[:, 1:], contract.seniority)
    triggered = t_i <= contract.maturity
    if counterparty_risk:
        triggered &= tau[:, 0] > np.minimum(t_i, contract.maturity)
    factor = discount.factor(t_i)
    return np.where(triggered, contract.loss_given_default * factor, 0.0)


def premium_leg(
    tau: np.ndarray,
    contract: ContractSpec,
    discount: DiscountContext,
    *,
    counterparty_risk: bool = True,
) -> np.ndarray:
    """F2 per row: sum_j D(t_j) dt_j 1(tau_(i) > t_j) 1(tau_0 > t_j)."""
    tau = np.atleast_2d(np.asarray(tau, dtype=np.float64))
    c = tau.shape[0]
    dates = np.asarray(contract.premium_dates, dtype=np.float64)
    t_i = order_statistic(tau[:, 1:], contract.seniority)
    alive = t_i[:, None] > dates[None, :]
    if counterparty_risk:
        alive &= tau[:, 0:1] > dates[None, :]
    factors = np.broadcast_to(discount.factor(np.broadcast_to(dates, (c, dates.size))), (c, dates.size))
    return np.sum(np.where(alive, factors * contract.delta_t, 0.0), axis=1)


def protection_value(tau: DefaultTimes, contract: ContractSpec, discount: DiscountContext) -> float:
    """F1 for a single path."""
    return float(protection_leg(np.asarray(tau.tau)[None], contract, discount)[0])


def premium_value(tau: DefaultTimes, contract: ContractSpec, discount: DiscountContext) -> float:
    """F2 for a single path."""
    return float(premium_leg(np.asarray(tau.tau)[None], contract, discount)[0])
