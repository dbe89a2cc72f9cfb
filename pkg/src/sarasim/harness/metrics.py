"""Per-interval metrics and network lifetime."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import _kernels as K
from ..errors import NeverCovered
from ..geometry import Rect

COLUMNS = ("interval", "covered_frac", "awake_pct", "sleeping_pct", "dead_pct",
           "mean_radius_m", "mean_residual_j", "iters")
CLASSES = ("fixed", "adjustable")


def coverage_mask(positions, radii, awake, aoi: Rect, pitch: float) -> np.ndarray:
    nx = max(1, int(round(aoi.width / pitch)))
    ny = max(1, int(round(aoi.height / pitch)))
    on = np.asarray(awake, bool) & (np.asarray(radii) > 0)
    p = np.asarray(positions, float)[on]
    return K.grid_mask(np.ascontiguousarray(p[:, 0]), np.ascontiguousarray(p[:, 1]),
                       np.ascontiguousarray(np.asarray(radii, float)[on]),
                       aoi.xmin, aoi.ymin, nx, ny, pitch)


def coverage_fraction(positions, radii, awake, aoi: Rect, pitch: float = 0.25) -> float:
    """Share of cell-centred grid samples inside at least one awake disk."""
    if pitch <= 0:
        raise ValueError("pitch must be positive")
    return float(coverage_mask(positions, radii, awake, aoi, pitch).mean())


@dataclass
class MetricsSeries:
    """One row per operative interval.  ``per_class`` holds awake, sleeping
    and dead percentages within each sensor class; ``decided_frac`` is the
    share of alive sensors the configuration run decided before K struck."""

    interval: list[int] = field(default_factory=list)
    covered_frac: list[float] = field(default_factory=list)
    awake_pct: list[float] = field(default_factory=list)
    sleeping_pct: list[float] = field(default_factory=list)
    dead_pct: list[float] = field(default_factory=list)
    mean_radius_m: list[float] = field(default_factory=list)
    mean_residual_j: list[float] = field(default_factory=list)
    iters: list[int] = field(default_factory=list)
    decided_frac: list[float] = field(default_factory=list)
    loose_events: list[int] = field(default_factory=list)
    per_class: dict = field(default_factory=lambda: {
        c: {"awake_pct": [], "sleeping_pct": [], "dead_pct": []} for c in CLASSES})

    def __len__(self):
        return len(self.interval)

    def rows(self):
        return zip(*(getattr(self, c) for c in COLUMNS))

    def append(self, **row):
        for c in COLUMNS + ("decided_frac", "loose_events"):
            getattr(self, c).append(row.get(c, 0))

    def column(self, name) -> np.ndarray:
        return np.asarray(getattr(self, name))


def state_percentages(awake, alive, mask=None) -> tuple[float, float, float]:
    awake = np.asarray(awake, bool)
    alive = np.asarray(alive, bool)
    if mask is not None:
        awake, alive = awake[mask], alive[mask]
    n = len(alive)
    if n == 0:
        return 0.0, 0.0, 0.0
    a = 100.0 * np.count_nonzero(awake & alive) / n
    d = 100.0 * np.count_nonzero(~alive) / n
    return a, 100.0 - a - d, d


def lifetime(series: MetricsSeries | list, p: float) -> int:
    """First interval whose covered fraction falls below ``p`` percent.

    Returns ``len(series)`` when coverage never falls below the threshold.
    Raises NeverCovered when interval 0 is already below it.
    """
    if not 0 < p <= 100:
        raise ValueError("p must lie in (0, 100]")
    cov = np.asarray(series.covered_frac if isinstance(series, MetricsSeries) else series, float)
    below = np.flatnonzero(cov < p / 100.0)
    if len(below) == 0:
        return len(cov)
    if below[0] == 0:
        raise NeverCovered(f"coverage below {p}% from the first interval")
    return int(below[0])
