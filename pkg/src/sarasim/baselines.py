"""Two reference activation schemes.

``run_dlm_round`` is a greedy wake-up over a priority list: sensors that
have spent the least energy and whose circles carry the most intersection
points go first; a sensor stays asleep when the awake ones already cover its
disk.  Every sensor works at its maximum radius.

``run_vrcsc_round`` works on ordinary Voronoi cells.  Each adjustable sensor
shrinks to the farthest vertex of its cell; a redundant sensor goes to sleep
when the energy it saves beats the extra energy its neighbors spend on
growing into its cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels as K
from .coverage import disk_covered
from .energy import sensing_power
from .geometry import Point, power_cells_arrays
from .protocol import CoverSet, Network


@dataclass(frozen=True)
class IntersectionPoint:
    location: Point
    sensors: tuple[int, ...]


def _overlap_pairs(pos, ids, radii):
    """Pairs (a, b), a < b, of sensors in ``ids`` whose disks overlap."""
    if len(ids) < 2:
        return np.zeros((0, 2), np.int64)
    pairs = cKDTree(pos[ids]).query_pairs(2 * float(radii[ids].max()), output_type="ndarray")
    if len(pairs) == 0:
        return np.zeros((0, 2), np.int64)
    pairs = ids[pairs]
    d = np.hypot(*(pos[pairs[:, 0]] - pos[pairs[:, 1]]).T)
    return pairs[d <= radii[pairs[:, 0]] + radii[pairs[:, 1]]]


def _circle_pair_points(pos, radii, pairs):
    """Both intersection points of each crossing pair; rows of NaN otherwise."""
    a, b = pairs[:, 0], pairs[:, 1]
    delta = pos[b] - pos[a]
    d = np.hypot(*delta.T)
    r1, r2 = radii[a], radii[b]
    ok = (d > np.abs(r1 - r2)) & (d < r1 + r2)
    with np.errstate(invalid="ignore", divide="ignore"):
        u = (d * d + r1 * r1 - r2 * r2) / (2 * d)
        h = np.sqrt(np.maximum(r1 * r1 - u * u, 0.0))
        base = pos[a] + delta * (u / d)[:, None]
        perp = np.stack([-delta[:, 1], delta[:, 0]], axis=1) * (h / d)[:, None]
    p1, p2 = base + perp, base - perp
    p1[~ok] = np.nan
    p2[~ok] = np.nan
    return p1, p2


def _inside(aoi, p):
    return ((p[:, 0] >= aoi.xmin) & (p[:, 0] <= aoi.xmax)
            & (p[:, 1] >= aoi.ymin) & (p[:, 1] <= aoi.ymax))


def _border_crossings(net: Network, ids, radii):
    """Number of points where each circle crosses the AoI border."""
    aoi = net.aoi
    x, y = net.positions[ids, 0], net.positions[ids, 1]
    r = radii[ids]
    count = np.zeros(len(ids), np.int64)
    for off, lo, hi, other in ((x - aoi.xmin, aoi.ymin, aoi.ymax, y),
                               (aoi.xmax - x, aoi.ymin, aoi.ymax, y),
                               (y - aoi.ymin, aoi.xmin, aoi.xmax, x),
                               (aoi.ymax - y, aoi.xmin, aoi.xmax, x)):
        h = np.sqrt(np.maximum(r * r - off * off, 0.0))
        hit = off < r
        for sgn in (-1.0, 1.0):
            q = other + sgn * h
            count += hit & (q >= lo) & (q <= hi)
    return count


def intersection_points(net: Network, ids, radii=None) -> list[IntersectionPoint]:
    """Pairwise circle intersection points lying inside the AoI."""
    radii = net.r_max if radii is None else radii
    ids = np.asarray(ids, dtype=np.int64)
    pairs = _overlap_pairs(net.positions, ids, radii)
    out = []
    if len(pairs) == 0:
        return out
    p1, p2 = _circle_pair_points(net.positions, radii, pairs)
    for p in (p1, p2):
        keep = _inside(net.aoi, np.nan_to_num(p, nan=-np.inf))
        for (a, b), q in zip(pairs[keep], p[keep]):
            out.append(IntersectionPoint(Point(float(q[0]), float(q[1])), (int(a), int(b))))
    return out


def intersection_counts(net: Network, ids, radii=None) -> np.ndarray:
    """Intersection points on each circle: with other circles inside the AoI
    and with the AoI border."""
    radii = net.r_max if radii is None else radii
    ids = np.asarray(ids, dtype=np.int64)
    counts = np.zeros(len(net), np.int64)
    pairs = _overlap_pairs(net.positions, ids, radii)
    if len(pairs):
        p1, p2 = _circle_pair_points(net.positions, radii, pairs)
        for p in (p1, p2):
            keep = _inside(net.aoi, np.nan_to_num(p, nan=-np.inf))
            np.add.at(counts, pairs[keep, 0], 1)
            np.add.at(counts, pairs[keep, 1], 1)
    if len(ids):
        counts[ids] += _border_crossings(net, ids, radii)
    return counts


def _neighbor_lists(n, pairs):
    nb = [[] for _ in range(n)]
    for a, b in pairs:
        nb[a].append(b)
        nb[b].append(a)
    return [np.array(x, dtype=np.int64) for x in nb]


def _covered_by(net: Network, i: int, others, radii) -> bool:
    if len(others) == 0:
        return False
    p = net.positions[others]
    x, y = net.positions[i]
    return disk_covered(x, y, radii[i], np.ascontiguousarray(p[:, 0]),
                        np.ascontiguousarray(p[:, 1]), radii[others], net.aoi)


def run_dlm_round(net: Network, alive=None, consumed=None) -> CoverSet:
    """Greedy activation at maximum radius.

    Parameters
    ----------
    alive : bool array, optional
        Sensors that may take part (default all).
    consumed : float array, optional
        Energy spent so far; lower is woken first.
    """
    n = len(net)
    alive = np.ones(n, bool) if alive is None else np.asarray(alive, bool)
    consumed = np.zeros(n) if consumed is None else np.asarray(consumed, float)
    ids = np.flatnonzero(alive)
    radii = net.r_max
    counts = intersection_counts(net, ids, radii)
    order = ids[np.lexsort((ids, -counts[ids], consumed[ids]))]
    nb = _neighbor_lists(n, _overlap_pairs(net.positions, ids, radii))
    awake = np.zeros(n, bool)
    for i in order:
        c = nb[i]
        if not _covered_by(net, int(i), c[awake[c]], radii):
            awake[i] = True
    r = np.where(awake, radii, 0.0)
    return CoverSet(r, awake, 1, np.where(alive, 1, -1))


class _VoronoiState:
    """Ordinary Voronoi cells of the awake sensors, updated incrementally."""

    def __init__(self, net: Network, awake: np.ndarray):
        self.net = net
        self.awake = awake
        self.zero = np.zeros(len(net))
        self.far = np.zeros(len(net))
        self.nbrs: list[np.ndarray] = [np.zeros(0, np.int64)] * len(net)
        self.poly: list[tuple] = [None] * len(net)
        self.update(np.flatnonzero(awake))

    def cells(self, targets, active):
        return power_cells_arrays(self.net.positions, self.zero, self.net.aoi,
                                  np.asarray(targets, np.int64), active)

    def _far(self, targets, vx, vy, nv):
        pos = self.net.positions[targets]
        k = np.arange(vx.shape[1])[None, :] < nv[:, None]
        d = np.where(k, np.hypot(vx - pos[:, :1], vy - pos[:, 1:]), 0.0)
        return d.max(axis=1)

    def update(self, targets):
        if len(targets) == 0:
            return
        vx, vy, vl, nv = self.cells(targets, self.awake)
        self.far[targets] = self._far(targets, vx, vy, nv)
        for t, i in enumerate(targets):
            lab = vl[t, :nv[t]]
            self.nbrs[i] = np.unique(lab[lab >= 0])
            self.poly[i] = (vx[t, :nv[t]].copy(), vy[t, :nv[t]].copy())

    def radius(self, ids, far=None):
        far = self.far[ids] if far is None else far
        net = self.net
        r = np.clip(far, net.r_min[ids], net.r_max[ids])
        return np.where(net.fixed[ids], net.r_max[ids], r)

    def far_without(self, i, targets):
        active = self.awake.copy()
        active[i] = False
        vx, vy, _, nv = self.cells(targets, active)
        return self._far(targets, vx, vy, nv)


def voronoi_radii(net: Network, awake: np.ndarray) -> np.ndarray:
    """Farthest Voronoi-vertex distance of every awake adjustable sensor,
    clamped to [r_min, r_max]; fixed sensors keep their radius."""
    st = _VoronoiState(net, np.asarray(awake, bool).copy())
    ids = np.flatnonzero(awake)
    r = np.zeros(len(net))
    r[ids] = st.radius(ids)
    return r


def run_vrcsc_round(net: Network, alive=None, threshold: float = 1.0) -> CoverSet:
    """Voronoi-based sleep decisions and radius reduction.

    A sensor is a sleep candidate when its Voronoi cell, within reach of its
    maximum radius, is covered by other awake sensors at their maximum radii.
    This matches covering the whole disk only when all radii are equal.
    Candidates are visited best net saving first and re-checked on the spot;
    a candidate sleeps when its sensing draw exceeds ``threshold`` times the
    extra draw of the neighbors that inherit its cell.  Radii are set from
    the final cells.
    """
    n = len(net)
    alive = np.ones(n, bool) if alive is None else np.asarray(alive, bool)
    sm = net.sensing
    awake = alive.copy()
    ids = np.flatnonzero(alive)
    nb = _neighbor_lists(n, _overlap_pairs(net.positions, ids, net.r_max))
    st = _VoronoiState(net, awake)

    def redundant(i):
        # with equal radii, covering the cell is the same as covering the disk
        c = nb[i]
        c = c[awake[c]]
        xs, ys = st.poly[i]
        if len(c) == 0 or len(xs) == 0:
            return len(xs) == 0
        x, y = net.positions[i]
        reach = min(st.far[i], net.r_max[i])
        c = c[np.hypot(*(net.positions[c] - (x, y)).T) < net.r_max[c] + reach]
        if len(c) == 0:
            return False
        p = net.positions[c]
        vd = np.hypot(xs[None, :] - p[:, :1], ys[None, :] - p[:, 1:]).max(axis=1)
        if (vd <= net.r_max[c]).any():
            return True  # one disk swallows the whole cell
        return not K.residual_extrema(xs, ys, len(xs), True, x, y, net.r_max[i],
                                      np.ascontiguousarray(p[:, 0]), np.ascontiguousarray(p[:, 1]),
                                      net.r_max[c], x, y, True)[0]

    def net_saving(i):
        benefit = sensing_power(sm, float(st.radius(np.array([i]))[0]))
        js = st.nbrs[i]
        js = js[~net.fixed[js]]
        if len(js) == 0:
            return benefit
        grown = st.radius(js, st.far_without(i, js))
        cost = float(np.sum(sensing_power(sm, grown) - sensing_power(sm, st.radius(js))))
        return benefit - threshold * max(cost, 0.0)

    cand = [int(i) for i in ids if redundant(int(i))]
    scores = np.array([net_saving(i) for i in cand])
    for k in np.lexsort((np.array(cand), -scores)) if cand else []:
        i = cand[k]
        if awake.sum() <= 1 or not redundant(i) or net_saving(i) <= 0.0:
            continue
        awake[i] = False
        st.update(st.nbrs[i][awake[st.nbrs[i]]])
    r = np.zeros(n)
    live = np.flatnonzero(awake)
    r[live] = st.radius(live)
    return CoverSet(r, awake, 1, np.where(alive, 1, -1))
