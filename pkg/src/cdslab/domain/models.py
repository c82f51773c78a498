"""Domain models for cdslab.

Market → Contract → Simulation. These are immutable data objects shared
across worker processes; the numerics live in dynamics, engine and pathops.

Name index 0 is always the counterparty (the protection writer), indices
1..k the reference portfolio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

ContagionMode = Literal["none", "linear-in-defaults"]
DiscountMode = Literal["constant", "deterministic-curve", "vasicek-component"]

CONTAGION_MODES: tuple[str, ...] = ("none", "linear-in-defaults")
DISCOUNT_MODES: tuple[str, ...] = ("constant", "deterministic-curve", "vasicek-component")

# Only used to make the boundedness assumption checkable, never to clamp dynamics.
DEFAULT_K_BOUND = 1e6


def _frozen_array(values, *, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Curve:
    """Piecewise-linear curve starting at t=0, flat beyond the last knot."""

    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.times or len(self.times) != len(self.values):
            raise ValueError("curve needs matching, non-empty times and values")
        if self.times[0] != 0.0:
            raise ValueError("curve must start at t=0")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("curve times must be strictly increasing")

    def __call__(self, t):
        return np.interp(t, self.times, self.values)

    def integral(self, t):
        """Exact integral of the curve over [0, t]."""
        knots = np.asarray(self.times)
        vals = np.asarray(self.values)
        t = np.asarray(t, dtype=np.float64)
        segments = np.diff(knots) * (vals[1:] + vals[:-1]) / 2
        cumulative = np.concatenate(([0.0], np.cumsum(segments)))
        idx = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, len(knots) - 1)
        return cumulative[idx] + (t - knots[idx]) * (vals[idx] + np.interp(t, knots, vals)) / 2

    def max_slope(self) -> float:
        if len(self.times) < 2:
            return 0.0
        return float(np.max(np.abs(np.diff(self.values) / np.diff(self.times))))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class ContagionRule:
    """Volatility of name i is base_vol_i * (1 + a_i * min(alpha, max_jumps)).

    alpha is the running number of defaulted reference names. With
    mode="none" the multipliers are ignored.
    """

    mode: ContagionMode = "none"
    jump_coeff: tuple[float, ...] = ()
    max_jumps: int | None = None


@dataclass(frozen=True, eq=False)
class MarketModel:
    """Firm-value dynamics for the counterparty and k reference names."""

    v0: np.ndarray
    drift: tuple[float | Curve, ...]
    base_vol: np.ndarray
    correlation: np.ndarray
    contagion: ContagionRule = field(default_factory=ContagionRule)
    names: tuple[str, ...] = ()
    k_bound: float = DEFAULT_K_BOUND

    def __post_init__(self):
        # Only shapes are enforced here; content is judged by assumptions.validate
        # so that deliberately unsafe models can still be built.
        object.__setattr__(self, "v0", _frozen_array(self.v0, ndim=1))
        object.__setattr__(self, "base_vol", _frozen_array(self.base_vol, ndim=1))
        object.__setattr__(self, "correlation", _frozen_array(self.correlation, ndim=2))
        object.__setattr__(self, "drift", tuple(self.drift))
        dim = self.v0.shape[0]
        if dim < 2:
            raise ValueError("model needs a counterparty and at least one reference name")
        if self.base_vol.shape != (dim,) or len(self.drift) != dim:
            raise ValueError(f"drift and base_vol must have {dim} entries")
        if self.correlation.shape != (dim, dim):
            raise ValueError(f"correlation must be {dim}x{dim}")
        coeff = self.contagion.jump_coeff
        if coeff and len(coeff) != dim:
            raise ValueError(f"contagion.jump_coeff must have {dim} entries")
        if not self.names:
            object.__setattr__(self, "names", ("counterparty", *(f"ref{i}" for i in range(1, dim))))
        elif len(self.names) != dim:
            raise ValueError(f"names must have {dim} entries")

    @property
    def dim(self) -> int:
        """Number of firm-value components, k + 1."""
        return self.v0.shape[0]

    @property
    def n_ref(self) -> int:
        return self.dim - 1

    @property
    def jump_coeff(self) -> np.ndarray:
        if self.contagion.mode == "none" or not self.contagion.jump_coeff:
            return np.zeros(self.dim)
        return np.asarray(self.contagion.jump_coeff, dtype=np.float64)

    @property
    def max_jumps(self) -> int:
        cap = self.contagion.max_jumps
        return self.n_ref if cap is None else cap

    @property
    def has_drift_curves(self) -> bool:
        return any(isinstance(d, Curve) for d in self.drift)

    def drift_at(self, t: float) -> np.ndarray:
        return np.array([d(t) if isinstance(d, Curve) else d for d in self.drift], dtype=np.float64)


@dataclass(frozen=True)
class Barrier:
    """Exponential default barrier level * exp(growth * t); level 0 means default-free."""

    level: float = 0.0
    growth: float = 0.0

    @property
    def default_free(self) -> bool:
        return self.level == 0.0

    def value(self, t):
        return self.level * np.exp(self.growth * np.asarray(t, dtype=np.float64))


@dataclass(frozen=True)
class DiscountRule:
    """Short-rate rule for discounting.

    constant: ``rate`` per year. deterministic-curve: ``curve`` r(t).
    vasicek-component: an extra simulated dimension
    dr = speed * (level - r) dt + vol dW with r(0) = r0.
    """

    mode: DiscountMode = "constant"
    rate: float = 0.0
    curve: Curve | None = None
    speed: float = 0.0
    level: float = 0.0
    vol: float = 0.0
    r0: float = 0.0

    def __post_init__(self):
        if self.mode == "deterministic-curve" and self.curve is None:
            raise ValueError("deterministic-curve discounting needs a curve")

    @property
    def stochastic(self) -> bool:
        return self.mode == "vasicek-component"

    def integral(self, t):
        """Integral of the deterministic short rate over [0, t]."""
        if self.mode == "constant":
            return self.rate * np.asarray(t, dtype=np.float64)
        if self.mode == "deterministic-curve":
            assert self.curve is not None
            return self.curve.integral(t)
        raise ValueError("vasicek-component discounting needs a simulated rate path")


@dataclass(frozen=True)
class ContractSpec:
    """i-th to default basket CDS written by name 0."""

    maturity: float
    premium_dates: tuple[float, ...]
    recovery: tuple[float, ...]
    seniority: int
    barriers: tuple[Barrier, ...]
    rate: DiscountRule = field(default_factory=DiscountRule)

    @property
    def horizon(self) -> float:
        """Truncation horizon, always maturity + 1."""
        return self.maturity + 1.0

    @property
    def delta_t(self) -> np.ndarray:
        dates = np.asarray(self.premium_dates, dtype=np.float64)
        return np.diff(dates, prepend=0.0)

    @property
    def annuity_length(self) -> float:
        """Sum of premium year fractions (equals the last premium date)."""
        return float(np.sum(self.delta_t))

    @property
    def loss_given_default(self) -> float:
        return 1.0 - self.recovery[self.seniority - 1]

    @property
    def default_free(self) -> np.ndarray:
        return np.array([b.default_free for b in self.barriers])

    def barrier_levels(self, times) -> np.ndarray:
        """Barrier values at each time, shape (len(times), k + 1)."""
        times = np.asarray(times, dtype=np.float64)
        levels = np.array([b.level for b in self.barriers])
        growth = np.array([b.growth for b in self.barriers])
        return levels[None, :] * np.exp(np.outer(times, growth))


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo controls; ``steps`` is N with h = maturity / N."""

    steps: int
    paths: int
    seed: int = 0
    workers: int = 1
    chunk_size: int = 512

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.paths < 1:
            raise ValueError("paths must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True, eq=False)
class TimeGrid:
    """Equally spaced grid t_n = n*h continued past maturity to cover the horizon."""

    maturity: float
    steps: int

    @property
    def h(self) -> float:
        return self.maturity / self.steps

    @property
    def horizon(self) -> float:
        return self.maturity + 1.0

    @property
    def n_steps(self) -> int:
        """N-hat = ceil(horizon / h)."""
        return math.ceil(self.horizon / self.h - 1e-9)

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.h

    @property
    def monitored(self) -> np.ndarray:
        """Grid points inside [0, horizon]; a trailing point past it is not monitored."""
        return self.times <= self.horizon * (1 + 1e-12)

    def time_of(self, step):
        """Grid time of a step index, or the horizon where step < 0 (no default)."""
        step = np.asarray(step)
        return np.where(step < 0, self.horizon, np.minimum(step * self.h, self.horizon))


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs: one JSON config document."""

    model: MarketModel
    contract: ContractSpec
    sim: SimConfig
