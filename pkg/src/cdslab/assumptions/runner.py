"""Assumption runner: orchestrates checks into a ValidationReport."""

from __future__ import annotations

from dataclasses import dataclass

from cdslab.assumptions.checks import (
    BUILTIN_CHECKS,
    AssumptionStatus,
    CheckContext,
    CheckInfo,
    Finding,
)
from cdslab.domain import ContractSpec, MarketModel

ASSUMPTIONS = ("A1", "A2", "A3", "A4", "A5")


class ModelValidationError(Exception):
    """Raised when a model or contract is rejected."""

    def __init__(self, findings: list[Finding]):
        self.findings = findings
        lines = [f"{f.assumption or f.check}: {f.message}" for f in findings]
        super().__init__("invalid model or contract:\n  " + "\n  ".join(lines))


@dataclass(frozen=True)
class ValidationReport:
    """Findings of every check, in check order."""

    findings: tuple[Finding, ...]

    def status(self, assumption: str) -> AssumptionStatus:
        """Aggregate status for one assumption label."""
        statuses = {f.status for f in self.findings if f.assumption == assumption}
        for status in ("fail", "unknown", "certified"):
            if status in statuses:
                return status  # type: ignore[return-value]
        return "pass" if statuses else "unknown"

    @property
    def summary(self) -> dict[str, AssumptionStatus]:
        return {a: self.status(a) for a in ASSUMPTIONS}

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_for_errors(self) -> None:
        if self.errors:
            raise ModelValidationError(self.errors)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "assumptions": self.summary,
            "findings": [
                {
                    "check": f.check,
                    "assumption": f.assumption,
                    "status": f.status,
                    "severity": f.severity,
                    "message": f.message,
                    "context": f.context,
                }
                for f in self.findings
            ],
        }


def list_checks() -> list[CheckInfo]:
    """Return metadata about all available checks."""
    return [
        CheckInfo(name=check.name, assumption=check.assumption, description=check.description)
        for check in BUILTIN_CHECKS
    ]


def validate(model: MarketModel, contract: ContractSpec, *, checks: list[str] | None = None) -> ValidationReport:
    """Run assumption checks; never raises for model content.

    Args:
        model: Market model to judge.
        contract: Contract the model is priced against.
        checks: Specific check names to run, or None for all.

    Raises:
        ValueError: If a specified check name doesn't exist.
    """
    checks_to_run = BUILTIN_CHECKS
    if checks:
        available = {c.name for c in BUILTIN_CHECKS}
        unknown = set(checks) - available
        if unknown:
            raise ValueError(f"Unknown check(s): {', '.join(sorted(unknown))}")
        checks_to_run = [c for c in BUILTIN_CHECKS if c.name in checks]

    ctx = CheckContext(model=model, contract=contract)
    findings: list[Finding] = []
    for check in checks_to_run:
        try:
            findings.extend(check.run(ctx))
        except Exception as e:
            # Check itself failed - report as error finding
            findings.append(
                Finding(
                    check=check.name,
                    assumption=check.assumption,
                    status="fail",
                    severity="error",
                    message=f"Check failed to run: {e}",
                )
            )
    return ValidationReport(findings=tuple(findings))
