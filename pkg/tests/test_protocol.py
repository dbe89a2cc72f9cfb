import numpy as np
import pytest

from sarasim.coverage import disk_covered
from sarasim.errors import ConvergenceError, EmptyNeighborhood
from sarasim.geometry import Rect
from sarasim.harness.metrics import coverage_fraction
from sarasim.protocol import (AlphaCriterion, Assessment, Decision, Kind, Network, SaraParams,
                              SaraRun, adjustable_step, fixed_step, get_alpha, run_sara)

from conftest import AOI

SMALL = Rect(0, 0, 40, 40)


def random_net(rng, n, fixed_frac=0.0, r_max=6.0, r_min=2.0, aoi=SMALL, hetero=False):
    pos = np.column_stack([rng.uniform(aoi.xmin, aoi.xmax, n), rng.uniform(aoi.ymin, aoi.ymax, n)])
    fixed = rng.random(n) < fixed_frac
    rm = np.where(rng.random(n) < 0.5, 3.0, 6.0) if hetero else np.full(n, r_max)
    return Network(pos, fixed, rm, np.minimum(r_min, rm), aoi)


def test_get_alpha_examples():
    assert get_alpha(3.0, [3.0, 3.0], AlphaCriterion.ENERGY_GAIN, 0.05) == 1.0
    assert get_alpha(1.0, [1.0, 5.0], AlphaCriterion.ENERGY_GAIN, 0.05) == 0.05
    assert get_alpha(3.0, [1.0, 5.0, 3.0], AlphaCriterion.ENERGY_GAIN, 0.05) == 0.5
    assert get_alpha(5.0, [1.0, 5.0], AlphaCriterion.ENERGY_GAIN, 0.05) == 1.0
    with pytest.raises(EmptyNeighborhood):
        get_alpha(1.0, [], AlphaCriterion.ENERGY_GAIN, 0.05)


def test_get_alpha_inverted_criteria():
    # lower residual energy or lifetime means higher priority
    for crit in (AlphaCriterion.RESIDUAL_ENERGY, AlphaCriterion.RESIDUAL_LIFETIME):
        assert get_alpha(1.0, [1.0, 5.0], crit, 0.05) == 1.0
        assert get_alpha(5.0, [1.0, 5.0], crit, 0.05) == 0.05


def test_fixed_step():
    assert fixed_step(False, 1.0, 0.0) is Decision.TURN_ON
    assert fixed_step(True, 1.0, 0.99) is Decision.SLEEP
    assert fixed_step(True, 0.3, 0.5) is Decision.WAIT


def test_adjustable_step_examples():
    a = Assessment(Kind.INTERIOR, d_bar=2.0)
    assert adjustable_step(6.0, a, 1.0).r == pytest.approx(2.0)
    assert adjustable_step(6.0, a, 0.25).r == pytest.approx(5.0)
    s = adjustable_step(6.0, Assessment(Kind.PARTIAL), 0.5)
    assert s.decided and s.r == 6.0
    s = adjustable_step(6.0, Assessment(Kind.STRICT, d_bar=6.0), 0.5)
    assert s.decided and s.r == 6.0


def test_covers_nothing_decays_then_sleeps():
    r, steps = 6.0, 0
    while True:
        s = adjustable_step(r, Assessment(Kind.COVERS_NOTHING), 0.05, r_min=0.0)
        steps += 1
        if s.decision is Decision.SLEEP:
            break
        assert s.r == pytest.approx(r * 0.95)
        r = s.r
    assert steps > 100 and s.r == 0.0


def test_isolated_fixed_sensor_turns_on():
    net = Network([[20, 20], [2, 2]], True, 3.0, 3.0, SMALL)
    cs = run_sara(net)
    assert cs.awake.all() and cs.iterations == 1
    assert (cs.decided_at == 1).all()


def test_swallowed_fixed_sensor_sleeps():
    net = Network([[20, 20], [20.5, 20]], True, [6.0, 2.0], 0.0, SMALL)
    cs = run_sara(net)
    assert cs.awake.tolist() == [True, False]


def test_two_mutually_redundant_fixed_sensors():
    # sensors 0 and 1 are each covered by the other plus four flanking disks,
    # which leave a hole at (20.15, 20) that only 0 and 1 reach
    c = 20.15
    pos = [[20, 20], [20.3, 20], [c - 2, 20], [c + 2, 20], [c, 22], [c, 18]]
    radii = [2, 2, 1.6, 1.6, 1.6, 1.6]
    net = Network(pos, True, radii, radii, SMALL)
    on = np.ones(6, bool)
    before = coverage_fraction(net.positions, net.r_max, on, net.aoi, 0.02)
    slept = set()
    for seed in range(40):
        cs = run_sara(net, rng=np.random.default_rng(seed))
        assert cs.awake[:2].sum() == 1
        slept.add(int(np.flatnonzero(~cs.awake[:2])[0]))
        assert coverage_fraction(net.positions, cs.radii, cs.awake, net.aoi, 0.02) == before
    assert slept == {0, 1}


def test_all_fixed_no_redundant_left(rng):
    net = random_net(rng, 150, fixed_frac=1.0, hetero=True)
    cs = run_sara(net, SaraParams(K=None), rng)
    for i in np.flatnonzero(cs.awake):
        others = np.flatnonzero(cs.awake & (np.arange(len(net)) != i))
        p = net.positions[others]
        assert not disk_covered(*net.positions[i], net.r_max[i], p[:, 0].copy(), p[:, 1].copy(),
                                net.r_max[others], net.aoi)


def test_coverage_preserved_mixed(rng):
    for hetero in (False, True):
        net = random_net(rng, 250, fixed_frac=0.5, hetero=hetero)
        on = np.ones(len(net), bool)
        before = coverage_fraction(net.positions, net.r_max, on, net.aoi, 0.25)
        cs = run_sara(net, SaraParams(), rng)
        after = coverage_fraction(net.positions, cs.radii, cs.awake, net.aoi, 0.25)
        assert abs(after - before) <= 0.005


def test_radius_monotone_and_bounds(rng):
    net = random_net(rng, 200, fixed_frac=0.3)
    run = SaraRun(net, SaraParams(K=None), rng)
    prev = run.r.copy()
    while not run.decided.all():
        run.step()
        assert (run.r <= prev + 1e-12).all()
        prev = run.r.copy()
    adj = run.awake & ~net.fixed
    assert (run.r[adj] >= net.r_min[adj] - 1e-12).all()
    assert (run.r[net.fixed & run.awake] == net.r_max[net.fixed & run.awake]).all()
    assert not run.r[~run.awake].any()


def test_alpha_range_and_argmax(rng):
    net = random_net(rng, 120)
    run = SaraRun(net, SaraParams(), rng)
    gain, _ = run._local_gains()
    alphas = run._alphas(np.arange(len(gain), dtype=np.int64), gain)
    assert ((alphas >= 0.05 - 1e-12) & (alphas <= 1.0)).all()
    top = int(np.argmax(gain))
    assert alphas[top] == 1.0


def test_determinism(rng):
    net = random_net(rng, 200, fixed_frac=0.4)
    a = run_sara(net, SaraParams(), np.random.default_rng(7))
    b = run_sara(net, SaraParams(), np.random.default_rng(7))
    assert np.array_equal(a.radii, b.radii) and np.array_equal(a.awake, b.awake)


def test_k_freezes_undecided(rng):
    net = random_net(rng, 300)
    cs = run_sara(net, SaraParams(K=2), rng)
    assert cs.iterations == 2
    assert cs.frozen == int(((cs.decided_at < 0) & np.ones(len(net), bool)).sum())


def test_hard_cap_raises(rng):
    net = random_net(rng, 300)
    with pytest.raises(ConvergenceError):
        run_sara(net, SaraParams(K=None, hard_cap=2), rng)


def test_alive_mask_respected(rng):
    net = random_net(rng, 100)
    alive = rng.random(100) < 0.7
    cs = run_sara(net, SaraParams(), rng, alive=alive)
    assert not cs.awake[~alive].any()
