"""Single-name first-passage oracles.

The closed form is the classical inverse-Gaussian law of a log-normal firm
value against an exponential barrier under continuous monitoring. The naive
Monte Carlo oracle is a separate, deliberately simple implementation
(sequential generator, exact log-normal steps) that shares no code with the
engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from cdslab.domain import ContractSpec, Curve, MarketModel


class OracleDomainError(ValueError):
    """Oracle parameters outside the closed form's domain."""


@dataclass(frozen=True)
class SingleName:
    """Parameters of a single reference name reduced from a full model."""

    v0: float
    barrier: float
    gamma: float
    mu: float
    sigma: float
    maturity: float


@dataclass(frozen=True)
class OracleEstimate:
    probability: float
    se: float
    paths: int
    steps: int


def fpt_probability(v0: float, barrier: float, gamma: float, mu: float, sigma: float, maturity: float) -> float:
    """P(first passage of v0 * exp((mu - sigma^2/2) t + sigma W_t) below barrier * exp(gamma t) by maturity).

    With x0 = ln(v0 / barrier) and nu = mu - sigma^2/2 - gamma:
    Phi((-x0 - nu T) / (sigma sqrt T)) + exp(-2 nu x0 / sigma^2) Phi((-x0 + nu T) / (sigma sqrt T)).

    Raises:
        OracleDomainError: Unless v0 > barrier > 0, sigma > 0 and maturity > 0.
    """
    if not barrier > 0:
        raise OracleDomainError(f"barrier must be positive, got {barrier}")
    if not v0 > barrier:
        raise OracleDomainError(f"v0 must exceed the barrier, got v0={v0}, barrier={barrier}")
    if not sigma > 0:
        raise OracleDomainError(f"sigma must be positive, got {sigma}")
    if not maturity > 0:
        raise OracleDomainError(f"maturity must be positive, got {maturity}")

    x0 = math.log(v0 / barrier)
    nu = mu - sigma**2 / 2 - gamma
    scale = sigma * math.sqrt(maturity)
    first = norm.cdf((-x0 - nu * maturity) / scale)
    # exp(a) * Phi(b) in log space; a can be large when nu < 0.
    log_second = -2 * nu * x0 / sigma**2 + norm.logcdf((-x0 + nu * maturity) / scale)
    prob = float(first + math.exp(min(log_second, 0.0)))
    return min(max(prob, 0.0), 1.0)


def naive_fpt_probability(
    name: SingleName,
    *,
    steps: int,
    paths: int,
    seed: int = 0,
) -> OracleEstimate:
    """Discretely monitored default probability by brute-force Monte Carlo.

    Exact log-normal steps on a grid of ``steps`` intervals over [0, maturity];
    default when log V <= log barrier(t_n) at any grid point, inception included.
    """
    if steps < 1 or paths < 1:
        raise OracleDomainError("steps and paths must be positive")
    rng = np.random.default_rng(seed)
    h = name.maturity / steps
    drift = (name.mu - name.sigma**2 / 2) * h
    vol = name.sigma * math.sqrt(h)
    log_barrier = math.log(name.barrier)

    x = np.full(paths, math.log(name.v0))
    alive = x > log_barrier
    for n in range(1, steps + 1):
        x += drift + vol * rng.standard_normal(paths)
        alive &= x > log_barrier + name.gamma * n * h

    p = 1.0 - float(np.count_nonzero(alive)) / paths
    return OracleEstimate(probability=p, se=math.sqrt(p * (1 - p) / paths), paths=paths, steps=steps)


def single_name(model: MarketModel, contract: ContractSpec) -> SingleName | None:
    """Reduce a model to its one reference name, or None if that is not possible.

    Reducible when there is exactly one reference name with a constant drift
    and a non-zero barrier; the counterparty and contagion never affect name 1
    before its own default.
    """
    if model.n_ref != 1:
        return None
    drift = model.drift[1]
    barrier = contract.barriers[1]
    if isinstance(drift, Curve) or barrier.default_free:
        return None
    return SingleName(
        v0=float(model.v0[1]),
        barrier=barrier.level,
        gamma=barrier.growth,
        mu=float(drift),
        sigma=float(model.base_vol[1]),
        maturity=contract.maturity,
    )
