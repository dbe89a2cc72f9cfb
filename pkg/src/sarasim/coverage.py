"""Redundancy tests and residual-region queries on power cells.

A sensor's cell is the only part of the AoI it is solely responsible for:
any point of its cell that lies in another sensor's disk also lies in its
own disk.  The helpers here classify how a disk relates to its cell, test
whether a disk is swallowed by a set of other disks, and find the farthest
uncovered point of a cell once some neighbors' disks are removed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels as K
from .errors import NoIntersection, TangentCircles
from .geometry import (Circle, ConvexPolygon, Point, Rect, closest_point, farthest_vertex,
                       laguerre_distance_sq)

BOUNDARY_TOL = 1e-6


class CoverageClass(enum.Enum):
    FULLY_COVERS = "fully_covers"
    PARTIALLY_COVERS = "partially_covers"
    COVERS_NOTHING = "covers_nothing"


class FarthestKind(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY_STRICT = "boundary_strict"
    BOUNDARY_LOOSE = "boundary_loose"


@dataclass(frozen=True)
class ResidualRegion:
    """``base`` minus the union of the ``subtracted`` closed disks."""

    base: ConvexPolygon
    subtracted: tuple[Circle, ...] = field(default_factory=tuple)

    def contains(self, p: Point) -> bool:
        if not self.base.contains(p):
            return False
        return all(laguerre_distance_sq(c, p) > 0 for c in self.subtracted)


@dataclass(frozen=True)
class Extrema:
    empty: bool
    far: Point | None
    far_d: float
    near: Point | None
    near_d: float


def _circle_arrays(circles: Sequence[Circle]):
    cx = np.array([c.center.x for c in circles], dtype=float)
    cy = np.array([c.center.y for c in circles], dtype=float)
    cr = np.array([c.radius for c in circles], dtype=float)
    return cx, cy, cr


def region_extrema(xs, ys, cx, cy, cr, gx, gy, disk=None) -> tuple:
    """Array-level residual query; returns the raw kernel tuple.

    ``disk`` optionally intersects the polygon with a further disk
    ``(x, y, r)`` before subtracting the covering disks.
    """
    if disk is None:
        return K.residual_extrema(xs, ys, len(xs), False, 0.0, 0.0, 0.0, cx, cy, cr, gx, gy, False)
    return K.residual_extrema(xs, ys, len(xs), True, disk[0], disk[1], disk[2],
                              cx, cy, cr, gx, gy, False)


def disk_covered(x, y, r, cx, cy, cr, rect: Rect | None = None) -> bool:
    """True if the closed disk (restricted to ``rect``) lies in the union of
    the covering disks."""
    cx, cy, cr = (np.ascontiguousarray(a, dtype=float) for a in (cx, cy, cr))
    if rect is None:
        return bool(K.disk_union_covers(x, y, r, cx, cy, cr, -np.inf, -np.inf, np.inf, np.inf))
    return bool(K.disk_union_covers(x, y, r, cx, cy, cr, rect.xmin, rect.ymin, rect.xmax, rect.ymax))


def _disk_covered_pieces(x, y, r, cx, cy, cr, rect: Rect | None = None) -> bool:
    # slower piecewise-boundary formulation, kept as a cross-check
    if r <= 0:
        return True
    if rect is None:
        pad = r + 1.0
        xs = np.array([x - pad, x + pad, x + pad, x - pad])
        ys = np.array([y - pad, y - pad, y + pad, y + pad])
    else:
        xs = np.array([rect.xmin, rect.xmax, rect.xmax, rect.xmin])
        ys = np.array([rect.ymin, rect.ymin, rect.ymax, rect.ymax])
    found = K.residual_extrema(xs, ys, 4, True, x, y, r, cx, cy, cr, x, y, True)[0]
    return not found


def extrema(region: ResidualRegion, generator: Point) -> Extrema:
    xs, ys = region.base.arrays()
    cx, cy, cr = _circle_arrays(region.subtracted)
    found, fd, fx, fy, nd, nx, ny = region_extrema(xs, ys, cx, cy, cr, generator.x, generator.y)
    if not found:
        return Extrema(True, None, -1.0, None, math.inf)
    return Extrema(False, Point(fx, fy), fd, Point(nx, ny), nd)


def classify(sensor: Circle, cell: ConvexPolygon) -> CoverageClass:
    _, far = farthest_vertex(cell, sensor.center)
    if sensor.radius >= far:
        return CoverageClass.FULLY_COVERS
    _, near = closest_point(cell, sensor.center)
    if sensor.radius < near:
        return CoverageClass.COVERS_NOTHING
    return CoverageClass.PARTIALLY_COVERS


def is_redundant(sensor: Circle, candidates: Sequence[Circle], aoi: Rect | None = None) -> bool:
    """Whether the sensing disk (clipped to ``aoi`` when given) lies inside the
    union of the candidate disks."""
    if not candidates:
        return False
    cx, cy, cr = _circle_arrays(candidates)
    return disk_covered(sensor.center.x, sensor.center.y, sensor.radius, cx, cy, cr, aoi)


def residual_farthest(region: ResidualRegion, generator: Point) -> tuple[Point, float] | None:
    """Farthest point of the residual region from ``generator``; None if the
    region has no area."""
    e = extrema(region, generator)
    if e.empty:
        return None
    return e.far, e.far_d


def opposite_farthest(c_l: Circle, c_k: Circle, f: Point, tol: float = BOUNDARY_TOL) -> Point:
    """The intersection point of ``c_l`` and ``c_k`` other than ``f``."""
    dx = c_k.center.x - c_l.center.x
    dy = c_k.center.y - c_l.center.y
    d = math.hypot(dx, dy)
    r1, r2 = c_l.radius, c_k.radius
    if d == 0 or d > r1 + r2 + K.EPS or d < abs(r1 - r2) - K.EPS:
        raise NoIntersection("circles do not intersect")
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h2 = r1 * r1 - a * a
    if h2 <= (K.EPS) ** 2 or abs(d - (r1 + r2)) <= K.EPS or abs(d - abs(r1 - r2)) <= K.EPS:
        raise TangentCircles("circles touch in a single point")
    h = math.sqrt(h2)
    mx = c_l.center.x + a * dx / d
    my = c_l.center.y + a * dy / d
    p1 = Point(mx - h * dy / d, my + h * dx / d)
    p2 = Point(mx + h * dy / d, my - h * dx / d)
    d1, d2 = p1.dist(f), p2.dist(f)
    if min(d1, d2) > tol:
        raise NoIntersection("f is not an intersection point of the two circles")
    return p2 if d1 <= d2 else p1


def _edge_owner(a: Point, b: Point, s: Circle, neighbors: Sequence[Circle], tol: float):
    ps_a, ps_b = laguerre_distance_sq(s, a), laguerre_distance_sq(s, b)
    best, best_err = None, math.inf
    for c in neighbors:
        err = max(abs(laguerre_distance_sq(c, a) - ps_a), abs(laguerre_distance_sq(c, b) - ps_b))
        if err < best_err:
            best, best_err = c, err
    scale = max(1.0, abs(ps_a), abs(ps_b))
    return best if best_err <= tol * scale else None


def farthest_kind(s: Circle, cell: ConvexPolygon, neighbors: Sequence[Circle],
                  tol: float = BOUNDARY_TOL) -> FarthestKind:
    """Strict/loose test for the farthest vertex of a cell.

    The two axes meeting at the farthest vertex f come from neighbors l and
    k.  The vertex is loose when the second intersection F' of their circles
    falls strictly inside the wedge of the cell at f (the side holding s).
    Vertices cut by the AoI border count as strict.

    Raises
    ------
    ValueError
        If the farthest vertex lies outside the sensing disk by more than
        ``tol`` (no boundary farthest vertex exists).
    """
    f, d = farthest_vertex(cell, s.center)
    if d < s.radius - tol:
        return FarthestKind.INTERIOR
    if d > s.radius + tol:
        raise ValueError("farthest vertex is not covered by the sensor")
    verts = cell.vertices
    k = verts.index(f)
    prev_v, next_v = verts[k - 1], verts[(k + 1) % len(verts)]
    geom_tol = 1e-7
    c_in = _edge_owner(prev_v, f, s, neighbors, geom_tol)
    c_out = _edge_owner(f, next_v, s, neighbors, geom_tol)
    if c_in is None or c_out is None or c_in is c_out:
        return FarthestKind.BOUNDARY_STRICT
    try:
        fp = opposite_farthest(c_in, c_out, f, tol=1e-4)
    except (NoIntersection, TangentCircles):
        return FarthestKind.BOUNDARY_STRICT
    ps = laguerre_distance_sq(s, fp)
    margin = 1e-9
    if ps < laguerre_distance_sq(c_in, fp) - margin and ps < laguerre_distance_sq(c_out, fp) - margin:
        return FarthestKind.BOUNDARY_LOOSE
    return FarthestKind.BOUNDARY_STRICT
