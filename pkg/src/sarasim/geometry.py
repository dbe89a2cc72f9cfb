"""Power (Voronoi-Laguerre) diagram primitives.

The power distance of a point P from a circle C with centre c and radius r
is ``|P - c|^2 - r^2``.  The cell of a circle is the set of AoI points whose
power distance to it is no larger than to any other circle.  Cells are
convex, may be empty (null) and, when all radii match, reduce to ordinary
Voronoi cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import CoincidentCenters, DegenerateCell

EPS = K.EPS


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("point coordinates must be finite")

    def dist(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be non-negative")

    @classmethod
    def at(cls, x: float, y: float, r: float) -> "Circle":
        return cls(Point(x, y), r)


@dataclass(frozen=True)
class Line:
    """``a*x + b*y + c = 0`` with ``a**2 + b**2 == 1``."""

    a: float
    b: float
    c: float

    @classmethod
    def normalized(cls, a: float, b: float, c: float) -> "Line":
        n = math.hypot(a, b)
        if n == 0:
            raise ValueError("degenerate line")
        return cls(a / n, b / n, c / n)

    def signed(self, p: Point) -> float:
        return self.a * p.x + self.b * p.y + self.c


@dataclass(frozen=True)
class Rect:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("empty rectangle")

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, p: Point) -> bool:
        return self.xmin <= p.x <= self.xmax and self.ymin <= p.y <= self.ymax


@dataclass(frozen=True)
class HalfPlane:
    """Points with ``a*x + b*y <= c``."""

    a: float
    b: float
    c: float


@dataclass(frozen=True)
class ConvexPolygon:
    """Counter-clockwise convex polygon."""

    vertices: tuple[Point, ...]

    @classmethod
    def from_arrays(cls, xs, ys) -> "ConvexPolygon":
        return cls(tuple(Point(float(x), float(y)) for x, y in zip(xs, ys)))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        xs = np.array([v.x for v in self.vertices], dtype=float)
        ys = np.array([v.y for v in self.vertices], dtype=float)
        return xs, ys

    @property
    def area(self) -> float:
        xs, ys = self.arrays()
        return float(K.polygon_area(xs, ys, len(xs)))

    def contains(self, p: Point, tol: float = EPS) -> bool:
        xs, ys = self.arrays()
        return bool(K._poly_margin(xs, ys, len(xs), p.x, p.y) >= -tol)


@dataclass(frozen=True)
class Cell:
    generator_id: int
    shape: ConvexPolygon | None
    neighbor_ids: frozenset[int] = field(default_factory=frozenset)
    # generator id for each edge (edge k runs from vertex k to k+1);
    # negative values mark AoI sides
    edge_owners: tuple[int, ...] = ()

    @property
    def is_null(self) -> bool:
        return self.shape is None


def laguerre_distance_sq(c: Circle, p: Point) -> float:
    dx = p.x - c.center.x
    dy = p.y - c.center.y
    return dx * dx + dy * dy - c.radius * c.radius


def radical_axis(c1: Circle, c2: Circle) -> Line:
    """Locus of equal power distance to both circles."""
    dx = c2.center.x - c1.center.x
    dy = c2.center.y - c1.center.y
    if math.hypot(dx, dy) <= EPS:
        raise CoincidentCenters("circles share a centre")
    # |P-c1|^2 - r1^2 = |P-c2|^2 - r2^2  ->  2 P.(c2-c1) - (|c2|^2-|c1|^2) + r2^2 - r1^2 = 0
    sq1 = c1.center.x ** 2 + c1.center.y ** 2
    sq2 = c2.center.x ** 2 + c2.center.y ** 2
    return Line.normalized(2 * dx, 2 * dy, -(sq2 - sq1) + c2.radius ** 2 - c1.radius ** 2)


@dataclass
class PowerDiagram:
    """Power diagram of a set of circles clipped to a rectangle.

    Cell geometry is stored in flat arrays for speed; ``cells`` builds the
    object view on demand.
    """

    aoi: Rect
    centers: np.ndarray
    radii: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    vlab: np.ndarray
    nv: np.ndarray
    nbr_ptr: np.ndarray
    nbr_idx: np.ndarray
    _cells: dict | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.nv)

    def is_null(self, i: int) -> bool:
        return self.nv[i] == 0

    @property
    def null_mask(self) -> np.ndarray:
        return self.nv == 0

    def polygon(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        n = self.nv[i]
        return self.vx[i, :n], self.vy[i, :n]

    def neighbors(self, i: int) -> np.ndarray:
        return self.nbr_idx[self.nbr_ptr[i]:self.nbr_ptr[i + 1]]

    def null_overlaps(self, i: int) -> np.ndarray:
        """Generators with a null cell whose disks overlap disk ``i``."""
        nulls = np.flatnonzero(self.null_mask)
        nulls = nulls[nulls != i]
        if len(nulls) == 0:
            return nulls
        d = np.hypot(*(self.centers[nulls] - self.centers[i]).T)
        return nulls[d <= self.radii[nulls] + self.radii[i]]

    @property
    def cells(self) -> dict[int, Cell]:
        if self._cells is None:
            out = {}
            for i in range(len(self.nv)):
                n = self.nv[i]
                if n == 0:
                    out[i] = Cell(i, None)
                    continue
                shape = ConvexPolygon.from_arrays(self.vx[i, :n], self.vy[i, :n])
                out[i] = Cell(i, shape, frozenset(int(j) for j in self.neighbors(i)),
                              tuple(int(l) for l in self.vlab[i, :n]))
            self._cells = out
        return self._cells


def _bucket_size(n: int, aoi: Rect) -> float:
    # about two generators per bucket
    return max(math.sqrt(aoi.area * 2.0 / max(n, 1)), 1e-3)


def check_distinct(centers: np.ndarray) -> None:
    from scipy.spatial import cKDTree

    if len(centers) < 2:
        return
    pairs = cKDTree(centers).query_pairs(EPS)
    if pairs:
        i, j = min(pairs)
        raise CoincidentCenters(f"sensors {i} and {j} share a position")


def power_cells_arrays(centers: np.ndarray, radii: np.ndarray, aoi: Rect,
                       targets: np.ndarray | None = None, active: np.ndarray | None = None):
    """Raw clipped power cells for ``targets`` (all generators by default),
    ignoring generators whose ``active`` flag is False."""
    centers = np.ascontiguousarray(centers, dtype=float).reshape(-1, 2)
    radii = np.ascontiguousarray(radii, dtype=float)
    if targets is None:
        targets = np.arange(len(centers), dtype=np.int64)
    else:
        targets = np.ascontiguousarray(targets, dtype=np.int64)
    if active is None:
        active = np.ones(len(centers), dtype=bool)
    vx, vy, vl, nv = K.power_cells(centers[:, 0].copy(), centers[:, 1].copy(), radii * radii,
                                   np.ascontiguousarray(active, dtype=bool), targets, aoi.xmin, aoi.ymin, aoi.xmax, aoi.ymax,
                                   _bucket_size(len(centers), aoi))
    if (nv < 0).any():
        raise DegenerateCell("cell vertex buffer overflow")
    return vx, vy, vl, nv


def _neighbor_csr(vx, vy, vl, nv, n):
    """Symmetric neighbor lists from edge labels (positive-length edges)."""
    T, M = vl.shape
    k = np.arange(M)
    valid = k[None, :] < nv[:, None]
    nxt = np.where(k[None, :] + 1 < nv[:, None], k[None, :] + 1, 0)
    ex = np.take_along_axis(vx, nxt, axis=1) - vx
    ey = np.take_along_axis(vy, nxt, axis=1) - vy
    keep = valid & (vl >= 0) & (np.hypot(ex, ey) > EPS)
    r, c = np.nonzero(keep)
    c = vl[r, c]
    r, c = np.concatenate([r, c]), np.concatenate([c, r])
    key = np.unique(r.astype(np.int64) * n + c)
    rows, cols = key // n, key % n
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, rows + 1, 1)
    return np.cumsum(ptr), cols.astype(np.int64)


def diagram_from_arrays(centers: np.ndarray, radii: np.ndarray, aoi: Rect) -> PowerDiagram:
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(radii, dtype=float)
    vx, vy, vl, nv = power_cells_arrays(centers, radii, aoi)
    ptr, idx = _neighbor_csr(vx, vy, vl, nv, len(centers))
    return PowerDiagram(aoi, centers, radii, vx, vy, vl, nv, ptr, idx)


def build_power_diagram(circles: Sequence[Circle], aoi: Rect) -> PowerDiagram:
    """Power diagram of ``circles`` clipped to ``aoi``.

    Raises
    ------
    CoincidentCenters
        If two circles share a centre.
    """
    centers = np.array([[c.center.x, c.center.y] for c in circles], dtype=float).reshape(-1, 2)
    radii = np.array([c.radius for c in circles], dtype=float)
    check_distinct(centers)
    for c in circles:
        if not aoi.contains(c.center):
            raise ValueError("circle centre outside the AoI")
    return diagram_from_arrays(centers, radii, aoi)


def _require_polygon(cell: ConvexPolygon):
    if cell is None or len(cell.vertices) < 3:
        raise DegenerateCell("polygon needs at least three vertices")


def farthest_vertex(cell: ConvexPolygon, generator: Point) -> tuple[Point, float]:
    """Vertex farthest from ``generator``; ties go to the lowest index."""
    _require_polygon(cell)
    best, best_d = None, -1.0
    for v in cell.vertices:
        d = v.dist(generator)
        if d > best_d + EPS:
            best, best_d = v, d
    return best, best_d


def closest_point(cell: ConvexPolygon, generator: Point) -> tuple[Point, float]:
    """Euclidean projection of ``generator`` onto the polygon."""
    _require_polygon(cell)
    if cell.contains(generator):
        return generator, 0.0
    verts = cell.vertices
    best, best_d = None, math.inf
    for k, a in enumerate(verts):
        b = verts[(k + 1) % len(verts)]
        ex, ey = b.x - a.x, b.y - a.y
        L2 = ex * ex + ey * ey
        t = 0.0 if L2 == 0 else ((generator.x - a.x) * ex + (generator.y - a.y) * ey) / L2
        t = min(max(t, 0.0), 1.0)
        q = Point(a.x + t * ex, a.y + t * ey)
        d = q.dist(generator)
        if d < best_d:
            best, best_d = q, d
    return best, best_d


def clip_to_aoi(halfplanes: Iterable[HalfPlane], aoi: Rect) -> ConvexPolygon | None:
    """Intersection of the AoI with a set of half-planes, or None if empty."""
    xs = np.array([aoi.xmin, aoi.xmax, aoi.xmax, aoi.xmin])
    ys = np.array([aoi.ymin, aoi.ymin, aoi.ymax, aoi.ymax])
    labs = np.array([K.AOI_BOTTOM, K.AOI_RIGHT, K.AOI_TOP, K.AOI_LEFT], dtype=np.int64)
    n = 4
    for k, h in enumerate(halfplanes):
        nrm = math.hypot(h.a, h.b)
        if nrm == 0:
            if h.c < 0:
                return None
            continue
        cap = n + 2
        ox, oy, ol = np.empty(cap), np.empty(cap), np.empty(cap, dtype=np.int64)
        n = K.clip_halfplane(xs, ys, labs, n, h.a / nrm, h.b / nrm, h.c / nrm, k, ox, oy, ol)
        if n <= 0:
            return None
        xs, ys, labs = ox[:n], oy[:n], ol[:n]
    if K.polygon_area(xs, ys, n) < 1e-12:
        return None
    return ConvexPolygon.from_arrays(xs, ys)


def assign_grid(centers: np.ndarray, radii: np.ndarray, px: np.ndarray, py: np.ndarray):
    """Brute-force owner (argmin power distance) of each sample point, plus the
    minimum power distance.  Used as a test oracle and for rendering."""
    best = np.full(px.shape, np.inf)
    owner = np.full(px.shape, -1, dtype=np.int64)
    for i, ((x, y), r) in enumerate(zip(centers, radii)):
        p = (px - x) ** 2 + (py - y) ** 2 - r * r
        better = p < best
        best = np.where(better, p, best)
        owner = np.where(better, i, owner)
    return owner, best
