"""JSON run-config ingestion.

One document holds ``model``, ``contract`` and ``simulation``; the schema is
documented in docs/reference/config-schema.md. Structural problems raise
ConfigError naming the dotted field (or the JSON line and column); model
content is judged later by assumptions.validate.
"""

from __future__ import annotations

import json
import math
from collections.abc import Mapping
from pathlib import Path
from typing import Any

import numpy as np

from cdslab.domain import (
    CONTAGION_MODES,
    DEFAULT_K_BOUND,
    DISCOUNT_MODES,
    Barrier,
    ContagionRule,
    ContractSpec,
    Curve,
    DiscountRule,
    MarketModel,
    RunConfig,
    SimConfig,
)

SIM_KEYS = ("steps", "paths", "seed", "workers", "chunk_size")


class ConfigError(Exception):
    """Malformed run config: bad JSON, or a missing or invalid field."""

    def __init__(self, field: str, message: str, line: int | None = None, column: int | None = None):
        self.field = field
        self.message = message
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self) -> str:
        if self.line is not None:
            return f"line {self.line}, column {self.column}: {self.message}"
        if not self.field:
            return self.message
        return f"{self.field}: {self.message}"


def _get(obj: Mapping, key: str, path: str, *, required: bool = True, default: Any = None) -> Any:
    if key not in obj:
        if required:
            raise ConfigError(f"{path}.{key}" if path else key, "missing required field")
        return default
    return obj[key]


def _section(obj: Mapping, key: str, *, required: bool = True) -> Mapping:
    value = _get(obj, key, "", required=required, default={})
    if not isinstance(value, Mapping):
        raise ConfigError(key, "must be an object")
    return value


def _number(value: Any, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(field, f"expected a finite number, got {value!r}")
    return float(value)


def _integer(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(field, f"expected an integer, got {value!r}")
    return value


def _numbers(value: Any, field: str, *, length: int | None = None) -> list[float]:
    if not isinstance(value, list):
        raise ConfigError(field, "expected a list of numbers")
    out = [_number(v, f"{field}[{i}]") for i, v in enumerate(value)]
    if length is not None and len(out) != length:
        raise ConfigError(field, f"expected {length} entries, got {len(out)}")
    return out


def _broadcast(value: Any, field: str, length: int) -> list[float]:
    """Scalar shorthand for a per-name vector."""
    if isinstance(value, list):
        return _numbers(value, field, length=length)
    return [_number(value, field)] * length


def _curve(value: Any, field: str) -> Curve:
    if not isinstance(value, Mapping):
        raise ConfigError(field, "expected an object with times and values")
    times = _numbers(_get(value, "times", field), f"{field}.times")
    values = _numbers(_get(value, "values", field), f"{field}.values")
    try:
        return Curve(times=tuple(times), values=tuple(values))
    except ValueError as e:
        raise ConfigError(field, str(e)) from e


def _drift(value: Any, field: str, length: int) -> tuple[float | Curve, ...]:
    if not isinstance(value, list):
        return (_number(value, field),) * length
    if len(value) != length:
        raise ConfigError(field, f"expected {length} entries, got {len(value)}")
    out: list[float | Curve] = []
    for i, item in enumerate(value):
        item_field = f"{field}[{i}]"
        out.append(_curve(item, item_field) if isinstance(item, Mapping) else _number(item, item_field))
    return tuple(out)


def _correlation(value: Any, dim: int) -> np.ndarray:
    if value is None:
        return np.eye(dim)
    if not isinstance(value, list) or len(value) != dim:
        raise ConfigError("model.correlation", f"expected a {dim}x{dim} matrix")
    rows = [_numbers(row, f"model.correlation[{i}]", length=dim) for i, row in enumerate(value)]
    return np.array(rows)


def parse_model(obj: Mapping) -> MarketModel:
    v0 = _numbers(_get(obj, "v0", "model"), "model.v0")
    dim = len(v0)
    if dim < 2:
        raise ConfigError("model.v0", "need the counterparty and at least one reference name")

    contagion_obj = _get(obj, "contagion", "model", required=False, default={})
    if not isinstance(contagion_obj, Mapping):
        raise ConfigError("model.contagion", "must be an object")
    mode = _get(contagion_obj, "mode", "model.contagion", required=False, default="none")
    if mode not in CONTAGION_MODES:
        raise ConfigError("model.contagion.mode", f"unknown mode {mode!r}; expected one of {', '.join(CONTAGION_MODES)}")
    coeff = _get(contagion_obj, "jump_coeff", "model.contagion", required=False, default=0.0)
    max_jumps = _get(contagion_obj, "max_jumps", "model.contagion", required=False)
    contagion = ContagionRule(
        mode=mode,
        jump_coeff=tuple(_broadcast(coeff, "model.contagion.jump_coeff", dim)),
        max_jumps=None if max_jumps is None else _integer(max_jumps, "model.contagion.max_jumps"),
    )

    names = _get(obj, "names", "model", required=False, default=[])
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ConfigError("model.names", "expected a list of strings")
    if names and len(names) != dim:
        raise ConfigError("model.names", f"expected {dim} entries, got {len(names)}")

    return MarketModel(
        v0=np.array(v0),
        drift=_drift(_get(obj, "drift", "model"), "model.drift", dim),
        base_vol=np.array(_broadcast(_get(obj, "base_vol", "model"), "model.base_vol", dim)),
        correlation=_correlation(_get(obj, "correlation", "model", required=False), dim),
        contagion=contagion,
        names=tuple(names),
        k_bound=_number(_get(obj, "k_bound", "model", required=False, default=DEFAULT_K_BOUND), "model.k_bound"),
    )


def premium_schedule(maturity: float, frequency: float) -> tuple[float, ...]:
    """Dates j / frequency up to maturity; the last date is exactly the maturity."""
    if frequency <= 0:
        raise ConfigError("contract.premium_frequency", "must be positive")
    count = math.floor(maturity * frequency + 1e-9)
    dates = [j / frequency for j in range(1, count + 1)]
    if dates and math.isclose(dates[-1], maturity, rel_tol=1e-9):
        dates[-1] = maturity
    else:
        dates.append(maturity)
    return tuple(dates)


def _barriers(value: Any, dim: int) -> tuple[Barrier, ...]:
    if not isinstance(value, list) or len(value) != dim:
        raise ConfigError("contract.barriers", f"expected {dim} entries")
    out = []
    for i, item in enumerate(value):
        field = f"contract.barriers[{i}]"
        if isinstance(item, Mapping):
            level = _number(_get(item, "level", field), f"{field}.level")
            growth = _number(_get(item, "growth", field, required=False, default=0.0), f"{field}.growth")
        else:
            level, growth = _number(item, field), 0.0
        out.append(Barrier(level=level, growth=growth))
    return tuple(out)


def parse_rate(value: Any) -> DiscountRule:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return DiscountRule(mode="constant", rate=_number(value, "contract.rate"))
    if not isinstance(value, Mapping):
        raise ConfigError("contract.rate", "expected a number or an object")
    mode = _get(value, "mode", "contract.rate", required=False, default="constant")
    if mode not in DISCOUNT_MODES:
        raise ConfigError("contract.rate.mode", f"unknown mode {mode!r}; expected one of {', '.join(DISCOUNT_MODES)}")
    if mode == "constant":
        return DiscountRule(mode="constant", rate=_number(_get(value, "r", "contract.rate"), "contract.rate.r"))
    if mode == "deterministic-curve":
        return DiscountRule(mode="deterministic-curve", curve=_curve(_get(value, "curve", "contract.rate"), "contract.rate.curve"))
    params = {key: _number(_get(value, key, "contract.rate"), f"contract.rate.{key}") for key in ("speed", "level", "vol", "r0")}
    return DiscountRule(mode="vasicek-component", **params)


def parse_contract(obj: Mapping, dim: int) -> ContractSpec:
    maturity = _number(_get(obj, "maturity", "contract"), "contract.maturity")
    if "premium_dates" in obj:
        dates = tuple(_numbers(obj["premium_dates"], "contract.premium_dates"))
        if not dates:
            raise ConfigError("contract.premium_dates", "must not be empty")
    elif "premium_frequency" in obj:
        dates = premium_schedule(maturity, _number(obj["premium_frequency"], "contract.premium_frequency"))
    else:
        raise ConfigError("contract.premium_dates", "missing required field (or give contract.premium_frequency)")

    seniority = _integer(_get(obj, "seniority", "contract", required=False, default=1), "contract.seniority")
    recovery = _broadcast(_get(obj, "recovery", "contract"), "contract.recovery", dim - 1)
    return ContractSpec(
        maturity=maturity,
        premium_dates=dates,
        recovery=tuple(recovery),
        seniority=seniority,
        barriers=_barriers(_get(obj, "barriers", "contract"), dim),
        rate=parse_rate(_get(obj, "rate", "contract")),
    )


def parse_simulation(obj: Mapping, *, defaults: Mapping | None = None, overrides: Mapping | None = None) -> SimConfig:
    """SimConfig from the JSON block; ``defaults`` sit below it and non-None ``overrides`` above it."""
    merged: dict[str, int] = {}
    for source in (defaults or {}, obj):
        for key in SIM_KEYS:
            if key in source:
                merged[key] = _integer(source[key], f"simulation.{key}")
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    for key in ("steps", "paths"):
        if key not in merged:
            raise ConfigError(f"simulation.{key}", "missing required field")
    try:
        return SimConfig(**merged)
    except ValueError as e:
        raise ConfigError("simulation", str(e)) from e


def parse_run_config(
    data: str | bytes,
    *,
    defaults: Mapping | None = None,
    overrides: Mapping | None = None,
) -> RunConfig:
    """Parse a run-config document.

    Raises:
        ConfigError: On malformed JSON (with line and column) or a missing or
            structurally invalid field.
    """
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise ConfigError("", e.msg, line=e.lineno, column=e.colno) from e
    if not isinstance(doc, Mapping):
        raise ConfigError("", "top level must be an object")

    try:
        model = parse_model(_section(doc, "model"))
    except ValueError as e:
        raise ConfigError("model", str(e)) from e
    try:
        contract = parse_contract(_section(doc, "contract"), model.dim)
    except ValueError as e:
        raise ConfigError("contract", str(e)) from e
    sim = parse_simulation(_section(doc, "simulation", required=False), defaults=defaults, overrides=overrides)
    return RunConfig(model=model, contract=contract, sim=sim)


def load_run_config(
    path: Path,
    *,
    defaults: Mapping | None = None,
    overrides: Mapping | None = None,
) -> tuple[RunConfig, bytes]:
    """Read and parse ``path``; returns the config and the raw bytes (for fingerprinting)."""
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise ConfigError("", f"cannot read {path}: {e.strerror}") from e
    return parse_run_config(data, defaults=defaults, overrides=overrides), data
