"""Binary dump of stored paths for offline inspection.

Layout, little-endian, repeated once per path:
    float64  h
    int64    n_steps (N-hat)
    int64    k (reference names)
    float64  values[(n_steps + 1) * (k + 1)], row-major (time-major)
"""

from __future__ import annotations

import struct
from collections.abc import Iterable
from pathlib import Path

import numpy as np

from cdslab.domain import PathGrid

_HEADER = struct.Struct("<dqq")


def write_path_dump(path: Path, grids: Iterable[PathGrid]) -> int:
    """Write paths to ``path``; returns the number of paths written."""
    count = 0
    with open(path, "wb") as f:
        for grid in grids:
            f.write(_HEADER.pack(grid.h, grid.n_steps, grid.n_ref))
            f.write(np.ascontiguousarray(grid.values, dtype="<f8").tobytes(order="C"))
            count += 1
    return count


def read_path_dump(path: Path) -> list[tuple[float, np.ndarray]]:
    """Read back (h, values) pairs written by write_path_dump."""
    blob = Path(path).read_bytes()
    out = []
    offset = 0
    while offset < len(blob):
        h, n_steps, k = _HEADER.unpack_from(blob, offset)
        offset += _HEADER.size
        count = (n_steps + 1) * (k + 1)
        values = np.frombuffer(blob, dtype="<f8", count=count, offset=offset).reshape(n_steps + 1, k + 1)
        offset += count * 8
        out.append((h, values))
    return out
