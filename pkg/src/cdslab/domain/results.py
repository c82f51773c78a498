"""Result objects produced by simulation, pricing and sweeps."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .models import SimConfig


@dataclass(frozen=True, eq=False)
class PathGrid:
    """One stored Euler path of all names on the time grid."""

    h: float
    values: np.ndarray  # (n_steps + 1, k + 1)
    default_step: tuple[int | None, ...]
    alpha_path: np.ndarray  # defaulted reference names at each grid index
    rate_path: np.ndarray | None = None
    faulted: bool = False

    @property
    def n_steps(self) -> int:
        return self.values.shape[0] - 1

    @property
    def n_ref(self) -> int:
        return self.values.shape[1] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_steps + 1) * self.h


@dataclass(frozen=True)
class PriceEstimate:
    """Ratio-of-means swap rate estimate with delta-method uncertainty."""

    c_hat: float
    mean_f1: float
    mean_f2: float
    se_f1: float
    se_f2: float
    cov_f12: float
    se_c: float
    n_paths: int
    h: float
    n_steps: int
    faults: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SweepLevel:
    """Diagnostics for one step size of a convergence sweep."""

    n_steps: int
    h: float
    c_hat: float
    se_c: float
    delta_c: float | None  # |c_hat(h) - c_hat(h/2)|, None on the finest level
    se_delta: float | None
    mean_jump: float
    moment4: float
    simultaneous_rate: float
    premium_hit_rate: float
    trigger_prob: float
    trigger_prob_se: float
    n_paths: int
    faults: int


@dataclass(frozen=True)
class SweepReport:
    """Per-level convergence table, coarsest level first."""

    levels: tuple[SweepLevel, ...]
    fingerprint: str
    seed: int
    seniority: int

    @property
    def deltas(self) -> list[float]:
        return [lvl.delta_c for lvl in self.levels if lvl.delta_c is not None]

    def is_converging(self) -> bool:
        """True when the |delta c| column is strictly decreasing."""
        deltas = self.deltas
        return all(b < a for a, b in zip(deltas, deltas[1:]))

    def to_dict(self) -> dict:
        return {
            "fingerprint": self.fingerprint,
            "seed": self.seed,
            "seniority": self.seniority,
            "levels": [asdict(lvl) for lvl in self.levels],
        }


@dataclass
class RunManifest:
    """What a CLI run consumed and produced."""

    command: str
    config_path: str
    config_fingerprint: str
    sim: SimConfig
    out_dir: str
    started_at: str
    finished_at: str | None = None
    artifacts: list[str] = field(default_factory=list)

    @property
    def seed(self) -> int:
        return self.sim.seed

    def to_dict(self) -> dict:
        out = asdict(self)
        out["seed"] = self.seed
        return out
