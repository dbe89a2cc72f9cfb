import numpy as np
import pytest

from sarasim.baselines import (intersection_counts, intersection_points, run_dlm_round,
                               run_vrcsc_round, voronoi_radii)
from sarasim.coverage import disk_covered
from sarasim.energy import sensing_power
from sarasim.geometry import Rect, build_power_diagram, farthest_vertex, Point
from sarasim.harness.metrics import coverage_fraction
from sarasim.protocol import Network, SaraParams, run_sara

from conftest import AOI


def random_net(rng, n, r_max=6.0, r_min=2.0, hetero=False, aoi=AOI):
    pos = rng.uniform(0, aoi.xmax, (n, 2))
    rm = np.where(rng.random(n) < 0.5, 3.0, 6.0) if hetero else np.full(n, r_max)
    return Network(pos, False, rm, np.minimum(r_min, rm), aoi)


def test_dlm_single_sensor():
    net = Network([[40, 40]], False, 6.0, 2.0, AOI)
    cs = run_dlm_round(net)
    assert cs.awake.tolist() == [True] and cs.radii[0] == 6.0


def test_dlm_keeps_redundant_center():
    aoi = Rect(0, 0, 10, 10)
    pos = [[5, 5], [2.5, 2.5], [7.5, 2.5], [2.5, 7.5], [7.5, 7.5]]
    net = Network(pos, True, 3.6, 3.6, aoi)
    p = net.positions[1:]
    assert disk_covered(5, 5, 3.6, p[:, 0].copy(), p[:, 1].copy(), np.full(4, 3.6), aoi)
    consumed = np.array([0.0, 5.0, 5.0, 5.0, 5.0])  # the centre has spent least
    cs = run_dlm_round(net, consumed=consumed)
    assert cs.awake.all()


def test_dlm_covers_every_intersection_point(rng):
    for _ in range(3):
        net = random_net(rng, 300, hetero=True)
        cs = run_dlm_round(net)
        pts = intersection_points(net, np.arange(len(net)))
        xy = np.array([[q.location.x, q.location.y] for q in pts])
        on = np.flatnonzero(cs.awake)
        d = np.hypot(xy[:, None, 0] - net.positions[on, 0], xy[:, None, 1] - net.positions[on, 1])
        assert (d <= net.r_max[on] + 1e-9).any(axis=1).all()
        assert np.array_equal(cs.radii[cs.awake], net.r_max[cs.awake])


def test_intersection_counts_two_circles():
    net = Network([[40, 40], [43, 40]], False, 2.0, 2.0, AOI)
    assert intersection_counts(net, [0, 1]).tolist() == [2, 2]
    edge = Network([[1, 40]], False, 2.0, 2.0, AOI)
    assert intersection_counts(edge, [0]).tolist() == [2]


def test_dlm_preserves_coverage(rng):
    net = random_net(rng, 400, hetero=True)
    on = np.ones(len(net), bool)
    cs = run_dlm_round(net)
    assert coverage_fraction(net.positions, cs.radii, cs.awake, AOI) == pytest.approx(
        coverage_fraction(net.positions, net.r_max, on, AOI), abs=0.005)


def test_vrcsc_sparse_radii_are_voronoi_farthest():
    aoi = Rect(0, 0, 30, 30)
    pos = np.array([[5, 5], [20, 8], [10, 22], [25, 25]], float)
    net = Network(pos, False, 40.0, 0.0, aoi)
    cs = run_vrcsc_round(net)
    assert cs.awake.all()
    d = build_power_diagram(net.circles(np.zeros(4)), aoi)
    for i in range(4):
        _, far = farthest_vertex(d.cells[i].shape, Point(*pos[i]))
        assert cs.radii[i] == pytest.approx(far)


def test_vrcsc_stops_at_voronoi_vertex_where_sara_goes_further():
    # four corner sensors cannot reach the middle; the centre sensor must stay
    aoi = Rect(0, 0, 12, 12)
    net = Network([[3, 3], [9, 3], [3, 9], [9, 9], [6, 6]], False, 4.0, 0.1, aoi)
    v = run_vrcsc_round(net)
    s = run_sara(net, SaraParams(K=None))
    assert v.radii[4] == pytest.approx(3.0)
    assert s.awake[4] and s.radii[4] < 0.5
    full = coverage_fraction(net.positions, net.r_max, np.ones(5, bool), aoi, 0.02)
    assert coverage_fraction(net.positions, s.radii, s.awake, aoi, 0.02) == full
    assert coverage_fraction(net.positions, v.radii, v.awake, aoi, 0.02) == full


def test_vrcsc_homogeneous_preserves_coverage(rng):
    for _ in range(2):
        net = random_net(rng, 500)
        on = np.ones(len(net), bool)
        cs = run_vrcsc_round(net)
        assert coverage_fraction(net.positions, cs.radii, cs.awake, AOI) == pytest.approx(
            coverage_fraction(net.positions, net.r_max, on, AOI), abs=0.005)


def test_vrcsc_radius_not_below_voronoi(rng):
    net = random_net(rng, 300, r_min=0.0)
    cs = run_vrcsc_round(net)
    vr = voronoi_radii(net, cs.awake)
    on = cs.awake
    assert (cs.radii[on] >= np.minimum(vr[on], net.r_max[on]) - 1e-12).all()


def test_vrcsc_fixed_sensors_keep_radius(rng):
    pos = rng.uniform(0, 80, (300, 2))
    fixed = np.arange(300) % 2 == 0
    net = Network(pos, fixed, 6.0, 2.0, AOI)
    cs = run_vrcsc_round(net)
    assert (cs.radii[fixed & cs.awake] == 6.0).all()


def test_sara_draws_less_sensing_power_than_vrcsc(rng):
    for _ in range(2):
        net = random_net(rng, 900)
        s = run_sara(net, SaraParams(), rng)
        v = run_vrcsc_round(net)
        assert sensing_power(net.sensing, s.radii).sum() < sensing_power(net.sensing, v.radii).sum()


def test_vrcsc_heterogeneous_can_leave_holes(rng):
    net = random_net(rng, 900, hetero=True)
    on = np.ones(len(net), bool)
    cs = run_vrcsc_round(net)
    assert coverage_fraction(net.positions, cs.radii, cs.awake, AOI) < coverage_fraction(
        net.positions, net.r_max, on, AOI)


def test_dead_sensors_excluded(rng):
    net = random_net(rng, 200)
    alive = rng.random(200) < 0.6
    for cs in (run_dlm_round(net, alive), run_vrcsc_round(net, alive)):
        assert not cs.awake[~alive].any()
