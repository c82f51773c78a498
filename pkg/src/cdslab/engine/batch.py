"""Deterministic chunked batch simulation.

Paths are split into fixed-size chunks; each chunk is simulated and reduced
independently, and partials are merged in ascending chunk order. The result
therefore depends on (seed, paths, chunk_size, steps) and never on the number
of workers.

Coupled runs simulate several step sizes on the same Brownian paths: the
finest grid's normals are drawn once per path and coarser grids use sums of
consecutive fine increments.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Generic, Protocol, TypeVar

import numpy as np

from cdslab.domain import ContractSpec, MarketModel, SimConfig, TimeGrid
from cdslab.dynamics import correlation_factor
from cdslab.engine.rng import chunk_normals
from cdslab.engine.simulate import ChunkPaths, noise_dim, simulate_chunk

logger = logging.getLogger(__name__)

# A batch with more faulted paths than this fraction is flagged invalid.
FAULT_RATE_LIMIT = 1e-3

T = TypeVar("T")


class PathFold(Protocol[T]):
    """Reducer over chunks of simulated paths.

    ``fold_chunk`` receives one ChunkPaths per step-size level, all built on
    the same paths. ``merge`` must be associative; it is applied in ascending
    chunk order.
    """

    def fold_chunk(self, chunks: Sequence[ChunkPaths]) -> T: ...

    def merge(self, left: T, right: T) -> T: ...


@dataclass(frozen=True)
class BatchResult(Generic[T]):
    """Folded value plus fault bookkeeping."""

    value: T
    n_paths: int
    faults: int
    n_chunks: int

    @property
    def fault_rate(self) -> float:
        return self.faults / self.n_paths

    @property
    def valid(self) -> bool:
        return self.fault_rate <= FAULT_RATE_LIMIT


@dataclass(frozen=True)
class _ChunkTask:
    model: MarketModel
    contract: ContractSpec
    steps: tuple[int, ...]
    seed: int
    start: int
    stop: int
    fold: PathFold
    allow_singular: bool


def level_normals(fine: np.ndarray, factor: int, n_rows: int) -> np.ndarray:
    """Coarse-grid normals from fine ones: scaled sums of ``factor`` consecutive rows."""
    c, _, d = fine.shape
    block = fine[:, : n_rows * factor].reshape(c, n_rows, factor, d)
    return block.sum(axis=2) / math.sqrt(factor)


def coupling_factors(steps: Sequence[int]) -> list[int]:
    """Ratio of the finest step count to each level's; each must be a power of two."""
    finest = max(steps)
    factors = []
    for s in steps:
        ratio, rem = divmod(finest, s)
        if rem or ratio & (ratio - 1):
            raise ValueError(f"steps {list(steps)} are not related by halving h")
        factors.append(ratio)
    return factors


def _run_chunk(task: _ChunkTask) -> tuple[object, int]:
    model, contract = task.model, task.contract
    factor = correlation_factor(model, allow_singular=task.allow_singular)
    grids = [TimeGrid(contract.maturity, s) for s in task.steps]
    ratios = coupling_factors(task.steps)
    fine_rows = max(g.n_steps * r for g, r in zip(grids, ratios))
    fine = chunk_normals(task.seed, task.start, task.stop, fine_rows, noise_dim(model, contract))
    chunks = [
        simulate_chunk(model, contract, g, level_normals(fine, r, g.n_steps), factor=factor, start=task.start)
        for g, r in zip(grids, ratios)
    ]
    faulted = np.logical_or.reduce([c.faulted for c in chunks])
    return task.fold.fold_chunk(chunks), int(np.count_nonzero(faulted))


def _execute(tasks: list[_ChunkTask], workers: int) -> Iterator[tuple[object, int]]:
    if workers <= 1 or len(tasks) <= 1:
        yield from map(_run_chunk, tasks)
        return
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        yield from pool.map(_run_chunk, tasks)


def simulate_coupled_batch(
    model: MarketModel,
    contract: ContractSpec,
    sim: SimConfig,
    steps: Sequence[int],
    fold: PathFold[T],
    *,
    allow_singular: bool = False,
) -> BatchResult[T]:
    """Run ``sim.paths`` paths at every step count in ``steps`` on common random numbers."""
    steps = tuple(int(s) for s in steps)
    if not steps:
        raise ValueError("at least one step count is required")
    coupling_factors(steps)

    tasks = [
        _ChunkTask(
            model=model,
            contract=contract,
            steps=steps,
            seed=sim.seed,
            start=start,
            stop=min(start + sim.chunk_size, sim.paths),
            fold=fold,
            allow_singular=allow_singular,
        )
        for start in range(0, sim.paths, sim.chunk_size)
    ]
    logger.info(
        "batch: %d paths, steps %s, %d chunks of %d, %d workers",
        sim.paths,
        list(steps),
        len(tasks),
        sim.chunk_size,
        sim.workers,
    )

    value = None
    faults = 0
    for partial, chunk_faults in _execute(tasks, sim.workers):
        value = partial if value is None else fold.merge(value, partial)
        faults += chunk_faults

    result = BatchResult(value=value, n_paths=sim.paths, faults=faults, n_chunks=len(tasks))
    if faults:
        logger.warning("batch finished with %d faulted paths (rate %.2e)", faults, result.fault_rate)
    if not result.valid:
        logger.warning("batch invalid: fault rate %.2e exceeds %.0e", result.fault_rate, FAULT_RATE_LIMIT)
    return result  # type: ignore[return-value]


def simulate_batch(
    model: MarketModel,
    contract: ContractSpec,
    sim: SimConfig,
    fold: PathFold[T],
    *,
    allow_singular: bool = False,
) -> BatchResult[T]:
    """Run ``sim.paths`` paths at ``sim.steps``; path p uses substream (seed, p)."""
    return simulate_coupled_batch(model, contract, sim, [sim.steps], fold, allow_singular=allow_singular)
