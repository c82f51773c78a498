"""Counter-based random number substreams.

Path p of a run with seed s draws from a Philox generator keyed by (s, p),
so the n-th normal vector of a path depends only on (s, p, n) and substreams
are independent by construction, not by sequential splitting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngSubstream:
    """Standard normal vectors for one path."""

    seed: int
    path_index: int

    @property
    def key(self) -> np.ndarray:
        return np.array([self.seed, self.path_index], dtype=np.uint64)

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(key=self.key))

    def normals(self, n_rows: int, dim: int) -> np.ndarray:
        """Rows Z_1..Z_n of i.i.d. standard normal vectors, shape (n_rows, dim)."""
        return self.generator().standard_normal((n_rows, dim))


def substream(seed: int, path_index: int) -> RngSubstream:
    return RngSubstream(seed=seed, path_index=path_index)


def chunk_normals(seed: int, start: int, stop: int, n_rows: int, dim: int) -> np.ndarray:
    """Normals for paths start..stop-1, shape (stop - start, n_rows, dim)."""
    out = np.empty((stop - start, n_rows, dim))
    for offset, p in enumerate(range(start, stop)):
        out[offset] = substream(seed, p).normals(n_rows, dim)
    return out
