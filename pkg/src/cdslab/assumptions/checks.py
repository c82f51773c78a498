"""Assumption check definitions and built-in checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Protocol

import numpy as np

from cdslab.domain import CONTAGION_MODES, DISCOUNT_MODES, ContractSpec, MarketModel
from cdslab.dynamics import CholeskyError, chol_factor, vol_scale

AssumptionStatus = Literal["pass", "fail", "certified", "unknown"]
Severity = Literal["info", "warning", "error"]


@dataclass(frozen=True)
class Finding:
    """A single outcome reported by a check.

    Attributes:
        check: Check name that produced this finding (e.g., "nondegeneracy").
        assumption: Assumption label ("A1".."A5"), or None for input checks.
        status: "pass", "fail", "certified" (holds by construction) or "unknown".
        severity: "error" findings make the report fail.
        message: Human-readable description.
        context: Optional structured data for programmatic consumers.
    """

    check: str
    assumption: str | None
    status: AssumptionStatus
    severity: Severity
    message: str
    context: dict | None = None


@dataclass(frozen=True)
class CheckInfo:
    """Metadata about an available check."""

    name: str
    assumption: str | None
    description: str


@dataclass
class CheckContext:
    """Inputs passed to all checks; expensive derived values are cached."""

    model: MarketModel
    contract: ContractSpec
    _eigvals: np.ndarray | None = field(default=None, repr=False)

    @property
    def correlation_eigvals(self) -> np.ndarray:
        if self._eigvals is None:
            rho = self.model.correlation
            self._eigvals = np.linalg.eigvalsh((rho + rho.T) / 2)
        return self._eigvals


class Check(Protocol):
    """Protocol for assumption checks.

    Attributes:
        name: Unique check identifier.
        assumption: Which assumption the check certifies, if any.
        description: What the check verifies.
    """

    name: str
    assumption: str | None
    description: str

    def run(self, ctx: CheckContext) -> list[Finding]:
        """Run the check and return its findings."""
        ...


# =============================================================================
# Built-in Checks
# =============================================================================


class InputsCheck:
    """Structural validity of model and contract values."""

    name = "inputs"
    assumption = None
    description = "Positive firm values, premium schedule ending at maturity, recoveries, seniority, barriers, rates"

    def run(self, ctx: CheckContext) -> list[Finding]:
        model, contract = ctx.model, ctx.contract
        problems: list[str] = []

        if np.any(model.v0 <= 0):
            problems.append(f"v0 must be positive, got {model.v0.tolist()}")

        dates = contract.premium_dates
        if contract.maturity <= 0:
            problems.append("maturity must be positive")
        if not dates:
            problems.append("premium_dates must not be empty")
        else:
            if dates[0] <= 0 or any(b <= a for a, b in zip(dates, dates[1:])):
                problems.append("premium_dates must be positive and strictly increasing")
            if dates[-1] != contract.maturity:
                problems.append(f"premium_dates must end at maturity {contract.maturity}, got {dates[-1]}")

        k = model.n_ref
        if len(contract.recovery) != k:
            problems.append(f"recovery must have {k} entries (one per seniority)")
        elif any(not 0.0 <= d <= 1.0 for d in contract.recovery):
            problems.append("recovery rates must lie in [0, 1]")
        if not 1 <= contract.seniority <= k:
            problems.append(f"seniority must be in 1..{k}, got {contract.seniority}")

        if len(contract.barriers) != model.dim:
            problems.append(f"barriers must have {model.dim} entries")
        elif any(b.level < 0 or b.growth < 0 for b in contract.barriers):
            problems.append("barrier levels and growth rates must be nonnegative")

        rate = contract.rate
        if rate.mode not in DISCOUNT_MODES:
            problems.append(f"unknown discount mode {rate.mode!r}")
        elif rate.mode == "constant" and rate.rate <= 0:
            problems.append(f"constant short rate must be positive, got {rate.rate}")
        elif rate.mode == "vasicek-component" and rate.speed < 0:
            problems.append("vasicek mean-reversion speed must be nonnegative")

        if problems:
            return [Finding(self.name, None, "fail", "error", p) for p in problems]
        return [Finding(self.name, None, "pass", "info", "model and contract values are well formed")]


class BoundednessCheck:
    """Assumption 1: coefficients, jump sizes and jump counts bounded by K."""

    name = "boundedness"
    assumption = "A1"
    description = "Drift, volatility and contagion jumps bounded by k_bound; jump count capped by k"

    def run(self, ctx: CheckContext) -> list[Finding]:
        model = ctx.model
        bound = model.k_bound
        problems: list[str] = []

        for i, d in enumerate(model.drift):
            if isinstance(d, (int, float)):
                if abs(d) > bound:
                    problems.append(f"|drift[{i}]| = {abs(d)} exceeds bound {bound}")
            else:
                if d.max_abs() > bound:
                    problems.append(f"drift curve {i} exceeds bound {bound}")
                if d.max_slope() > bound:
                    problems.append(f"drift curve {i} is steeper than bound {bound} (Holder-1/2 constant)")

        coeff = model.jump_coeff
        if np.any(coeff < 0):
            problems.append("contagion jump coefficients must be nonnegative")
        if not 0 <= model.max_jumps <= model.n_ref:
            problems.append(f"max_jumps must be in 0..{model.n_ref}, got {model.max_jumps}")

        peak = float(np.max(np.abs(vol_scale(model, model.n_ref))))
        if peak > bound:
            problems.append(f"peak volatility {peak} exceeds bound {bound}")

        if problems:
            return [Finding(self.name, self.assumption, "fail", "error", p) for p in problems]
        return [
            Finding(
                self.name,
                self.assumption,
                "pass",
                "info",
                f"coefficients bounded by {bound:g}; at most {model.max_jumps} volatility jumps",
                context={"peak_vol": peak},
            )
        ]


class NondegeneracyCheck:
    """Assumption 2: sigma sigma^T >= lambda I uniformly."""

    name = "nondegeneracy"
    assumption = "A2"
    description = "Positive base vols and a symmetric, unit-diagonal, positive definite correlation"

    def run(self, ctx: CheckContext) -> list[Finding]:
        model = ctx.model
        rho = model.correlation
        problems: list[str] = []

        if np.any(model.base_vol <= 0):
            problems.append(f"base volatilities must be positive, got {model.base_vol.tolist()}")
        if not np.allclose(np.diag(rho), 1.0, rtol=0.0, atol=1e-14):
            problems.append("correlation diagonal must be 1")

        minor = None
        try:
            chol_factor(rho)
        except CholeskyError as e:
            minor = e.minor
            problems.append(f"correlation matrix is singular or indefinite (leading minor {e.minor})")
        except ValueError as e:
            problems.append(str(e))

        rate = ctx.contract.rate
        if rate.stochastic and rate.vol <= 0:
            problems.append("vasicek rate volatility must be positive")

        if problems:
            context = {"failing_minor": minor} if minor is not None else None
            return [Finding(self.name, self.assumption, "fail", "error", p, context=context) for p in problems]

        lam = float(np.min(model.base_vol)) ** 2 * float(ctx.correlation_eigvals[0])
        return [
            Finding(
                self.name,
                self.assumption,
                "pass",
                "info",
                f"uniformly nondegenerate with lambda = {lam:.6g}",
                context={"lambda": lam},
            )
        ]


class CoefficientContinuityCheck:
    """Assumption 3: coefficient functionals continuous at the relevant paths."""

    name = "coefficient-continuity"
    assumption = "A3"
    description = "Certified by construction for the default-count contagion family"

    def run(self, ctx: CheckContext) -> list[Finding]:
        mode = ctx.model.contagion.mode
        if mode in CONTAGION_MODES:
            return [
                Finding(
                    self.name,
                    self.assumption,
                    "certified",
                    "info",
                    f"contagion mode {mode!r} is continuous at non-tangent paths by construction",
                )
            ]
        return [Finding(self.name, self.assumption, "unknown", "warning", f"contagion mode {mode!r} is not certified")]


class ZeroCorrelationCheck:
    """Assumption 4: counterparty uncorrelated with every reference name."""

    name = "zero-correlation"
    assumption = "A4"
    description = "rho[0, i] == 0 for all reference names i"

    def run(self, ctx: CheckContext) -> list[Finding]:
        row = ctx.model.correlation[0, 1:]
        if np.all(row == 0.0):
            return [Finding(self.name, self.assumption, "pass", "info", "counterparty is uncorrelated with the basket")]
        nonzero = [i + 1 for i in np.flatnonzero(row != 0.0)]
        return [
            Finding(
                self.name,
                self.assumption,
                "fail",
                "info",
                f"counterparty correlated with reference names {nonzero}",
                context={"names": nonzero},
            )
        ]


class PiecewiseConstantCheck:
    """Assumption 5: sigma piecewise constant with nonsingular pieces."""

    name = "piecewise-constant"
    assumption = "A5"
    description = "Volatility changes only at default times of reference names"

    def run(self, ctx: CheckContext) -> list[Finding]:
        mode = ctx.model.contagion.mode
        if mode in CONTAGION_MODES:
            return [
                Finding(
                    self.name,
                    self.assumption,
                    "pass",
                    "info",
                    "volatility depends on the path only through the default count",
                )
            ]
        return [Finding(self.name, self.assumption, "fail", "info", f"contagion mode {mode!r} is not piecewise constant")]


class ConvergenceConditionsCheck:
    """Swap-rate convergence needs Assumption 4 or Assumption 5 on top of 1-3."""

    name = "convergence-conditions"
    assumption = None
    description = "At least one of zero counterparty correlation or piecewise-constant volatility holds"

    def run(self, ctx: CheckContext) -> list[Finding]:
        a4 = ZeroCorrelationCheck().run(ctx)[0].status == "pass"
        a5 = PiecewiseConstantCheck().run(ctx)[0].status == "pass"
        if a4 or a5:
            via = " and ".join(label for label, ok in (("A4", a4), ("A5", a5)) if ok)
            return [Finding(self.name, None, "pass", "info", f"swap-rate convergence covered via {via}")]
        return [Finding(self.name, None, "fail", "error", "neither A4 nor A5 holds; swap-rate convergence not covered")]


BUILTIN_CHECKS: list[Check] = [
    InputsCheck(),
    BoundednessCheck(),
    NondegeneracyCheck(),
    CoefficientContinuityCheck(),
    ZeroCorrelationCheck(),
    PiecewiseConstantCheck(),
    ConvergenceConditionsCheck(),
]
