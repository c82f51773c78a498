"""Shared test fixtures for the cdslab test suite."""

import copy
import json
from pathlib import Path

import numpy as np
import pytest

from cdslab.domain import (
    Barrier,
    ContagionRule,
    ContractSpec,
    DiscountRule,
    MarketModel,
    SimConfig,
)
from cdslab.loader import parse_run_config

CONFIGS_DIR = Path(__file__).parent.parent / "configs"


def make_model(
    v0=(100.0, 100.0, 100.0),
    drift=0.03,
    base_vol=0.2,
    correlation=None,
    jump_coeff=None,
    max_jumps=None,
):
    """Build a MarketModel with sensible defaults (counterparty plus two names)."""
    dim = len(v0)
    drift = tuple(drift) if isinstance(drift, (list, tuple)) else (drift,) * dim
    base_vol = np.broadcast_to(np.asarray(base_vol, dtype=float), (dim,))
    contagion = ContagionRule()
    if jump_coeff is not None:
        coeff = tuple(jump_coeff) if isinstance(jump_coeff, (list, tuple)) else (jump_coeff,) * dim
        contagion = ContagionRule(mode="linear-in-defaults", jump_coeff=coeff, max_jumps=max_jumps)
    return MarketModel(
        v0=np.asarray(v0, dtype=float),
        drift=drift,
        base_vol=base_vol,
        correlation=np.eye(dim) if correlation is None else np.asarray(correlation, dtype=float),
        contagion=contagion,
    )


def make_contract(
    n_ref=2,
    maturity=1.0,
    frequency=4,
    recovery=0.4,
    seniority=1,
    barriers=None,
    rate=0.03,
):
    """Build a ContractSpec with equally spaced premium dates ending at maturity."""
    count = int(round(maturity * frequency))
    dates = tuple(maturity * j / count for j in range(1, count + 1))
    if barriers is None:
        barriers = (0.0,) + (70.0,) * n_ref
    return ContractSpec(
        maturity=maturity,
        premium_dates=dates,
        recovery=(recovery,) * n_ref if isinstance(recovery, float) else tuple(recovery),
        seniority=seniority,
        barriers=tuple(b if isinstance(b, Barrier) else Barrier(level=b) for b in barriers),
        rate=rate if isinstance(rate, DiscountRule) else DiscountRule(mode="constant", rate=rate),
    )


def make_sim(steps=8, paths=256, seed=1, workers=1, chunk_size=64):
    return SimConfig(steps=steps, paths=paths, seed=seed, workers=workers, chunk_size=chunk_size)


SMALL_CONFIG = {
    "model": {
        "v0": [100.0, 100.0, 100.0],
        "drift": 0.03,
        "base_vol": [0.2, 0.3, 0.35],
        "correlation": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.3], [0.0, 0.3, 1.0]],
        "contagion": {"mode": "linear-in-defaults", "jump_coeff": [0.5, 0.0, 0.0]},
    },
    "contract": {
        "maturity": 1.0,
        "premium_frequency": 4,
        "recovery": 0.4,
        "seniority": 1,
        "barriers": [70.0, 85.0, 85.0],
        "rate": {"mode": "constant", "r": 0.03},
    },
    "simulation": {"steps": 8, "paths": 512, "seed": 7, "chunk_size": 128},
}


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    """Keep user defaults and worker env out of every test."""
    monkeypatch.setenv("XDG_CONFIG_HOME", str(tmp_path / "xdg"))
    monkeypatch.delenv("CDS_WORKERS", raising=False)


@pytest.fixture
def config_dict():
    """A fresh copy of a small, fast run config (k=2, 8 steps, 512 paths)."""
    return copy.deepcopy(SMALL_CONFIG)


@pytest.fixture
def config_file(config_dict):
    """Write a run config to a path; keyword arguments replace top-level sections."""

    def _write(path: Path, **sections) -> Path:
        doc = {**config_dict, **sections}
        path.write_text(json.dumps(doc, indent=2))
        return path

    return _write


@pytest.fixture(scope="session")
def benchmark_run():
    """The benchmark config shipped in configs/."""
    return parse_run_config((CONFIGS_DIR / "benchmark.json").read_bytes())


@pytest.fixture(scope="session")
def single_name_run():
    return parse_run_config((CONFIGS_DIR / "single_name.json").read_bytes())


@pytest.fixture
def small_run(config_dict):
    return parse_run_config(json.dumps(config_dict))
