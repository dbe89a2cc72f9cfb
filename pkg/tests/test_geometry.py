import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.spatial import Voronoi

from sarasim.errors import CoincidentCenters, DegenerateCell
from sarasim.geometry import (Circle, ConvexPolygon, HalfPlane, Point, Rect, assign_grid,
                              build_power_diagram, clip_to_aoi, closest_point,
                              diagram_from_arrays, farthest_vertex, laguerre_distance_sq,
                              radical_axis)

from conftest import AOI, grid, random_instance


def square(x0, y0, x1, y1):
    return ConvexPolygon((Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)))


@pytest.mark.parametrize("p, expected", [((5, 0), 16), ((3, 0), 0), ((0, 0), -9)])
def test_laguerre_distance(p, expected):
    assert laguerre_distance_sq(Circle.at(0, 0, 3), Point(*p)) == expected


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(0.1, 10))
def test_laguerre_sign_matches_inside(x, y, r):
    c = Circle.at(0, 0, r)
    p = Point(x, y)
    assert (laguerre_distance_sq(c, p) < 0) == (math.hypot(x, y) < r)


def test_radical_axis_equal_radii_is_bisector():
    line = radical_axis(Circle.at(0, 0, 2), Circle.at(4, 0, 2))
    assert abs(line.b) < 1e-12
    assert -line.c / line.a == pytest.approx(2.0)


def test_radical_axis_unequal_radii():
    line = radical_axis(Circle.at(0, 0, 3), Circle.at(4, 0, 1))
    assert -line.c / line.a == pytest.approx(3.0)


@given(st.floats(0, 10), st.floats(0, 10), st.floats(1, 6), st.floats(1, 6))
def test_radical_axis_through_intersections(x2, y2, r1, r2):
    d = math.hypot(x2, y2)
    if not (abs(r1 - r2) + 1e-3 < d < r1 + r2 - 1e-3):
        return
    c1, c2 = Circle.at(0, 0, r1), Circle.at(x2, y2, r2)
    line = radical_axis(c1, c2)
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h = math.sqrt(r1 * r1 - a * a)
    for sgn in (-1, 1):
        p = Point(a * x2 / d - sgn * h * y2 / d, a * y2 / d + sgn * h * x2 / d)
        assert abs(line.signed(p)) < 1e-9
        assert laguerre_distance_sq(c1, p) == pytest.approx(laguerre_distance_sq(c2, p), abs=1e-9)
    assert abs(line.a * y2 - line.b * x2) < 1e-12  # normal parallel to the centre segment


def test_radical_axis_rejects_coincident():
    with pytest.raises(CoincidentCenters):
        radical_axis(Circle.at(1, 1, 2), Circle.at(1, 1, 3))


def test_two_equal_circles_split_by_bisector():
    aoi = Rect(0, 0, 10, 10)
    d = build_power_diagram([Circle.at(2, 5, 1), Circle.at(8, 5, 1)], aoi)
    xs, ys = d.polygon(0)
    assert xs.max() == pytest.approx(5.0)
    assert d.cells[0].shape.area == pytest.approx(50.0)
    assert d.cells[0].neighbor_ids == {1} and d.cells[1].neighbor_ids == {0}


def test_equal_radii_match_ordinary_voronoi(rng):
    pos, _ = random_instance(rng, n=30)
    d = diagram_from_arrays(pos, np.full(30, 4.0), AOI)
    vor = Voronoi(pos)
    ours = np.column_stack([d.vx[d.nv > 0].ravel(), d.vy[d.nv > 0].ravel()])
    finite = vor.vertices[(vor.vertices >= 0).all(axis=1) & (vor.vertices <= 80).all(axis=1)]
    # every interior Voronoi vertex appears among the cell vertices
    for v in finite:
        assert np.hypot(*(ours - v).T).min() < 1e-9


def test_ringed_small_circle_is_null():
    aoi = Rect(0, 0, 20, 20)
    circles = [Circle.at(10, 10, 0.5)] + [Circle.at(10 + dx, 10 + dy, 4.0)
                                           for dx, dy in ((2, 0), (-2, 0), (0, 2), (0, -2))]
    d = build_power_diagram(circles, aoi)
    assert d.cells[0].is_null and d.cells[0].neighbor_ids == frozenset()
    gx, gy = grid(aoi, 0.05)
    owner, _ = assign_grid(d.centers, d.radii, gx, gy)
    assert not (owner == 0).any()
    assert set(d.null_overlaps(1)) == {0}


def test_build_rejects_coincident_and_outside():
    with pytest.raises(CoincidentCenters):
        build_power_diagram([Circle.at(1, 1, 1), Circle.at(1, 1, 2)], AOI)
    with pytest.raises(ValueError):
        build_power_diagram([Circle.at(-1, 1, 1)], AOI)


def test_grid_oracle_and_tiling(rng):
    gx, gy = grid(AOI, 0.25)
    for _ in range(5):
        pos, r = random_instance(rng)
        d = diagram_from_arrays(pos, r, AOI)
        owner, best = assign_grid(pos, r, gx, gy)
        area = sum(d.cells[i].shape.area for i in range(len(pos)) if not d.is_null(i))
        assert area == pytest.approx(AOI.area, rel=1e-6)
        for i in range(len(pos)):
            if d.is_null(i):
                continue
            poly = d.cells[i].shape
            xs, ys = poly.arrays()
            # points strictly inside the cell must be won by its generator
            inside = _inside(xs, ys, gx, gy, margin=1e-6)
            p = (gx - pos[i, 0]) ** 2 + (gy - pos[i, 1]) ** 2 - r[i] ** 2
            assert (p[inside] <= best[inside] + 1e-9).all()


def test_neighbors_symmetric(rng):
    pos, r = random_instance(rng, n=50)
    d = diagram_from_arrays(pos, r, AOI)
    for i in range(50):
        for j in d.neighbors(i):
            assert i in d.neighbors(j)


def _inside(xs, ys, px, py, margin=0.0):
    ok = np.ones(px.shape, bool)
    n = len(xs)
    for k in range(n):
        ax, ay, bx, by = xs[k], ys[k], xs[(k + 1) % n], ys[(k + 1) % n]
        ok &= (bx - ax) * (py - ay) - (by - ay) * (px - ax) > margin
    return ok


def test_farthest_vertex_square_tie_break():
    sq = square(-0.5, -0.5, 0.5, 0.5)
    v, d = farthest_vertex(sq, Point(0, 0))
    assert v == sq.vertices[0]
    assert d == pytest.approx(math.sqrt(2) / 2)


def test_farthest_vertex_from_corner():
    v, d = farthest_vertex(square(0, 0, 1, 1), Point(0, 0))
    assert (v.x, v.y) == (1, 1)


def test_farthest_vertex_matches_brute_force(rng):
    for _ in range(20):
        pts = rng.uniform(0, 10, (12, 2))
        from scipy.spatial import ConvexHull
        hull = pts[ConvexHull(pts).vertices]
        poly = ConvexPolygon.from_arrays(hull[:, 0], hull[:, 1])
        g = Point(*rng.uniform(0, 10, 2))
        _, d = farthest_vertex(poly, g)
        assert d == pytest.approx(np.hypot(*(hull - (g.x, g.y)).T).max())


def test_degenerate_cell():
    with pytest.raises(DegenerateCell):
        farthest_vertex(ConvexPolygon((Point(0, 0), Point(1, 0))), Point(0, 0))
    with pytest.raises(DegenerateCell):
        closest_point(None, Point(0, 0))


def test_closest_point_cases(rng):
    sq = square(0, 0, 1, 1)
    assert closest_point(sq, Point(0.3, 0.4))[1] == 0.0
    p, d = closest_point(sq, Point(0, -1))
    assert (p.x, p.y, d) == (0, 0, 1)
    t = np.arange(0, 1, 1e-3)
    bx = np.concatenate([t, np.ones_like(t), 1 - t, np.zeros_like(t)])
    by = np.concatenate([np.zeros_like(t), t, np.ones_like(t), 1 - t])
    for _ in range(10):
        g = rng.uniform(-3, 4, 2)
        if 0 <= g[0] <= 1 and 0 <= g[1] <= 1:
            continue
        _, d = closest_point(sq, Point(*g))
        assert d == pytest.approx(np.hypot(bx - g[0], by - g[1]).min(), abs=1e-3)


def test_clip_to_aoi():
    full = clip_to_aoi([HalfPlane(-1, 0, 0)], AOI)  # x >= 0
    assert full.area == pytest.approx(AOI.area)
    assert clip_to_aoi([HalfPlane(-1, 0, -100)], AOI) is None  # x >= 100


def test_clip_matches_grid_oracle(rng):
    gx, gy = grid(AOI, 0.1)
    for _ in range(10):
        hps = []
        for _ in range(rng.integers(1, 6)):
            ang = rng.uniform(0, 2 * np.pi)
            a, b = math.cos(ang), math.sin(ang)
            c = a * rng.uniform(10, 70) + b * rng.uniform(10, 70)
            hps.append(HalfPlane(a, b, c))
        member = np.ones(gx.shape, bool)
        for h in hps:
            member &= h.a * gx + h.b * gy <= h.c
        poly = clip_to_aoi(hps, AOI)
        if poly is None:
            assert member.mean() < 1e-3
            continue
        assert poly.area == pytest.approx(member.mean() * AOI.area, abs=0.1 * 4 * 80 + 1)
        xs, ys = poly.arrays()
        inside = _inside(xs, ys, gx, gy, margin=1e-6)
        assert member[inside].all()
