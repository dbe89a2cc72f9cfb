"""Round-based lifetime simulation over operative intervals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..baselines import run_dlm_round, run_vrcsc_round
from ..energy import drain_all, mw_hours_to_joules, sensing_power
from ..protocol import CoverSet, run_sara
from .config import ScenarioConfig
from .deploy import Deployment, deploy, protocol_rng
from .metrics import CLASSES, MetricsSeries, coverage_fraction, state_percentages


@dataclass
class Snapshot:
    interval: int
    cover: CoverSet
    alive: np.ndarray
    energy: np.ndarray


@dataclass
class SimulationResult:
    config: ScenarioConfig
    deployment: Deployment
    series: MetricsSeries
    snapshots: dict[int, Snapshot] = field(default_factory=dict)


def interval_power(net, cover: CoverSet, alive) -> np.ndarray:
    """Draw of every sensor over an interval, in mW."""
    awake = cover.awake & alive
    p = np.where(awake, net.comm.awake_idle + sensing_power(net.sensing, np.where(awake, cover.radii, 0.0)),
                 net.comm.sleeping)
    return np.where(alive, p, 0.0)


class Simulation:
    """Step-by-step driver; ``run`` loops until the stop condition."""

    def __init__(self, cfg: ScenarioConfig, deployment: Deployment | None = None):
        self.cfg = cfg
        self.dep = deploy(cfg) if deployment is None else deployment
        self.net = self.dep.network
        self.energy = self.dep.energy.copy()
        self.rng = protocol_rng(cfg.seed)
        self.params = cfg.sara_params()
        self.series = MetricsSeries()
        self.t = 0
        self.cover: CoverSet | None = None
        self._alive_at_config = None

    @property
    def alive(self) -> np.ndarray:
        return self.energy > 0

    def configure(self) -> CoverSet:
        alive = self.alive
        algo = self.cfg.algo
        if algo == "sara":
            return run_sara(self.net, self.params, self.rng, alive, self.energy)
        if algo == "dlm":
            return run_dlm_round(self.net, alive, self.dep.energy - self.energy)
        # VRCSC keeps its configuration until some sensor dies
        if self.cover is None or (alive != self._alive_at_config).any():
            self._alive_at_config = alive.copy()
            return run_vrcsc_round(self.net, alive, self.cfg.vrcsc_threshold)
        return CoverSet(self.cover.radii, self.cover.awake & alive, 0, self.cover.decided_at)

    def record(self, cover: CoverSet):
        cfg, net = self.cfg, self.net
        alive = self.alive
        awake = cover.awake & alive
        a, s, d = state_percentages(awake, alive)
        cov = coverage_fraction(net.positions, cover.radii, awake, net.aoi, cfg.pitch)
        n_alive = np.count_nonzero(alive)
        decided = np.count_nonzero(alive & (cover.decided_at >= 0))
        self.series.append(
            interval=self.t, covered_frac=cov, awake_pct=a, sleeping_pct=s, dead_pct=d,
            mean_radius_m=float(cover.radii[awake].mean()) if awake.any() else 0.0,
            mean_residual_j=float(self.energy.mean()), iters=int(cover.iterations),
            decided_frac=decided / n_alive if n_alive else 1.0,
            loose_events=int(cover.loose_events))
        for name, mask in zip(CLASSES, (net.fixed, ~net.fixed)):
            for key, v in zip(("awake_pct", "sleeping_pct", "dead_pct"),
                              state_percentages(awake, alive, mask)):
                self.series.per_class[name][key].append(v)
        return cov

    def step(self) -> bool:
        """Configure, record and drain one interval; False once the run should stop."""
        alive = self.alive
        if alive.any():
            cover = self.configure()
        else:
            n = len(self.net)
            cover = CoverSet(np.zeros(n), np.zeros(n, bool), 0, np.full(n, -1))
        self.cover = cover
        cov = self.record(cover)
        self.last_power = interval_power(self.net, cover, alive)
        self.energy = drain_all(self.energy, self.last_power, self.cfg.interval_h)
        self.t += 1
        stop = (cov < min(self.cfg.thresholds) / 100.0 or not alive.any()
                or self.t >= self.cfg.max_intervals)
        return not stop

    def drained(self) -> float:
        return float(np.sum(mw_hours_to_joules(self.last_power, self.cfg.interval_h)))

    def run(self, snapshot_at=()) -> SimulationResult:
        want = set(snapshot_at)
        snaps = {}
        going = True
        while going:
            t = self.t
            alive, energy = self.alive, self.energy.copy()
            going = self.step()
            if t in want:
                snaps[t] = Snapshot(t, self.cover, alive, energy)
        return SimulationResult(self.cfg, self.dep, self.series, snaps)


def simulate(cfg: ScenarioConfig, snapshot_at=()) -> SimulationResult:
    """Run ``cfg`` to the end of the network's life.

    Each interval: configure with the chosen algorithm, record metrics for
    the configuration, drain batteries over the interval.  Stops after the
    first interval whose coverage is below the smallest lifetime threshold,
    when every sensor is dead, or at ``max_intervals``.
    """
    return Simulation(cfg).run(snapshot_at)
