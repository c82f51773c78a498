"""Machine-checkable model assumptions."""

from cdslab.assumptions.checks import (
    Check,
    CheckContext,
    CheckInfo,
    Finding,
)
from cdslab.assumptions.runner import ModelValidationError, ValidationReport, list_checks, validate

__all__ = [
    "Check",
    "CheckContext",
    "CheckInfo",
    "Finding",
    "ModelValidationError",
    "ValidationReport",
    "list_checks",
    "validate",
]
