"""Euler path simulation with reproducible parallel random streams."""

from cdslab.engine.batch import (
    FAULT_RATE_LIMIT,
    BatchResult,
    PathFold,
    coupling_factors,
    level_normals,
    simulate_batch,
    simulate_coupled_batch,
)
from cdslab.engine.pathdump import read_path_dump, write_path_dump
from cdslab.engine.rng import RngSubstream, chunk_normals, substream
from cdslab.engine.simulate import ChunkPaths, euler_step, noise_dim, simulate_chunk, simulate_path

__all__ = [
    "FAULT_RATE_LIMIT",
    "BatchResult",
    "ChunkPaths",
    "PathFold",
    "RngSubstream",
    "chunk_normals",
    "coupling_factors",
    "euler_step",
    "level_normals",
    "noise_dim",
    "read_path_dump",
    "simulate_batch",
    "simulate_chunk",
    "simulate_coupled_batch",
    "simulate_path",
    "substream",
    "write_path_dump",
]
