"""Tangency counterexample for the hitting-time functional.

x(t) = |t - 1/2| touches the barrier 0 at t = 1/2 without crossing it, so its
hitting time is 1/2. Every upward shift x + 1/n never reaches the barrier and
is censored at the horizon, although x + 1/n -> x uniformly. The hitting time
is therefore not continuous at tangent paths.

All comparisons run in integer arithmetic: on a grid with spacing 1/r the
shifted path scaled by n * r is n * |2m - r| / 2 + r, an integer when r is even.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from cdslab.pathops import first_hit_index, hitting_time

logger = logging.getLogger(__name__)

MATURITY = 1
HORIZON = MATURITY + 1
DEFAULT_RESOLUTION = 4
_BLOCK = 1 << 16


@dataclass(frozen=True)
class TangencyRow:
    n: int
    hitting_time: Fraction


@dataclass
class TangencyReport:
    """Hitting times of x and of the shifted paths x + 1/n."""

    n_max: int
    resolution: int
    unshifted_time: Fraction
    rows: list[TangencyRow] = field(default_factory=list)
    failures: list[int] = field(default_factory=list)

    @property
    def horizon(self) -> Fraction:
        return Fraction(HORIZON)

    @property
    def ok(self) -> bool:
        return self.unshifted_time == Fraction(1, 2) and not self.failures


def table_points(n_max: int) -> list[int]:
    """1, 2, 5, 10, 20, 50, ... up to n_max, plus n_max itself."""
    points = []
    decade = 1
    while decade <= n_max:
        points.extend(m * decade for m in (1, 2, 5) if m * decade <= n_max)
        decade *= 10
    if not points or points[-1] != n_max:
        points.append(n_max)
    return points


def _grid_time(index: int, resolution: int) -> Fraction:
    if index < 0:
        return Fraction(HORIZON)
    return Fraction(index, resolution)


def tangency_demo(n_max: int, *, resolution: int = DEFAULT_RESOLUTION) -> TangencyReport:
    """Check pi(x, 0) = 1/2 and pi(x + 1/n, 0) = horizon for every n <= n_max.

    Args:
        resolution: Grid points per unit time; even, so that 1/2 is on the grid.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if resolution < 2 or resolution % 2:
        raise ValueError("resolution must be an even integer >= 2")

    n_grid = HORIZON * resolution
    m = np.arange(n_grid + 1, dtype=np.int64)
    # 2 * r * |t_m - 1/2| = |2m - r|
    tent = np.abs(2 * m - resolution)

    times = m / resolution
    unshifted = hitting_time(np.abs(times - 0.5), 0.0, times, float(HORIZON))
    unshifted_exact = _grid_time(int(first_hit_index(tent, 0)), resolution)
    if Fraction(unshifted) != unshifted_exact:
        logger.warning("float and integer hitting times disagree: %s vs %s", unshifted, unshifted_exact)

    report = TangencyReport(n_max=n_max, resolution=resolution, unshifted_time=unshifted_exact)
    wanted = set(table_points(n_max))
    for lo in range(1, n_max + 1, _BLOCK):
        n = np.arange(lo, min(lo + _BLOCK, n_max + 1), dtype=np.int64)
        # 2 * r * n * (x(t_m) + 1/n) = n * |2m - r| + 2r, compared against barrier 0
        shifted = n[:, None] * tent[None, :] + 2 * resolution
        first = first_hit_index(shifted, 0)
        for bad in n[first >= 0]:
            report.failures.append(int(bad))
        for i in np.flatnonzero(np.isin(n, list(wanted))):
            report.rows.append(TangencyRow(n=int(n[i]), hitting_time=_grid_time(int(first[i]), resolution)))
    return report
