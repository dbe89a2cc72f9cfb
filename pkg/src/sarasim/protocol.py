"""Distributed activation and radius adaptation over power cells.

Every iteration has two phases.  Fixed-radius sensors first decide whether
to stay on: the ones whose disk is not swallowed by awake neighbors turn on
for good, the redundant ones wait a random back-off, re-check and then sleep
with probability alpha.  Adjustable sensors then shrink towards the
farthest point of their cell not yet covered by decided neighbors.  alpha is
a sensor's energy gain normalised over its undecided neighborhood, so the
sensors that save most move first.

The simulation idealises messaging: all information exchanged within an
iteration arrives instantly, and the back-off is a total order drawn from
the run's random generator.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import _kernels as K
from .coverage import BOUNDARY_TOL, disk_covered
from .energy import CommModel, SensingModel, sensing_power
from .errors import ConvergenceError, EmptyNeighborhood
from .geometry import Circle, Point, Rect, check_distinct, diagram_from_arrays

HARD_CAP = 10_000
CONVERGE_EPS = 1e-6


class SensorClass(enum.Enum):
    FIXED = "fixed"
    ADJUSTABLE = "adjustable"


class State(enum.Enum):
    AWAKE = "awake"
    SLEEPING = "sleeping"
    DEAD = "dead"


class AlphaCriterion(enum.Enum):
    ENERGY_GAIN = "energy_gain"
    RESIDUAL_ENERGY = "residual_energy"
    RESIDUAL_LIFETIME = "residual_lifetime"


class Decision(enum.Enum):
    TURN_ON = "turn_on"
    SLEEP = "sleep"
    WAIT = "wait"
    SHRINK = "shrink"
    KEEP = "keep"


class Kind(enum.Enum):
    """How an adjustable sensor relates to what is left of its cell."""

    COVERS_NOTHING = "covers_nothing"
    PARTIAL = "partial"
    INTERIOR = "interior"
    STRICT = "strict"
    LOOSE = "loose"


@dataclass
class Sensor:
    id: int
    position: Point
    cls: SensorClass
    r_max: float  # the fixed radius for fixed sensors
    r_min: float = 0.0
    r: float | None = None
    tx_range: float = 30.0
    energy: float = float("inf")
    state: State = State.AWAKE
    decided: bool = False

    def __post_init__(self):
        if self.r is None:
            self.r = self.r_max
        if self.cls is SensorClass.FIXED and self.r not in (0.0, self.r_max):
            raise ValueError("a fixed sensor is either off or at its fixed radius")
        if not 0 <= self.r <= self.r_max:
            raise ValueError("radius outside [0, r_max]")


@dataclass(frozen=True)
class SaraParams:
    alpha_min: float = 0.05
    K: int | None = 20  # None: run until every sensor has decided
    t_backoff_max: float = 1.0
    criterion: AlphaCriterion = AlphaCriterion.ENERGY_GAIN
    boundary_tol: float = BOUNDARY_TOL
    hard_cap: int = HARD_CAP

    def __post_init__(self):
        if not 0 < self.alpha_min < 1:
            raise ValueError("alpha_min must lie in (0, 1)")
        if self.K is not None and self.K < 1:
            raise ValueError("K must be a positive integer or None")
        if self.t_backoff_max <= 0:
            raise ValueError("t_backoff_max must be positive")


@dataclass
class Network:
    """Static description of a deployment (positions and capabilities)."""

    positions: np.ndarray
    fixed: np.ndarray
    r_max: np.ndarray
    r_min: np.ndarray
    aoi: Rect
    sensing: SensingModel = field(default_factory=SensingModel)
    comm: CommModel = field(default_factory=CommModel)
    tx_range: float = 30.0

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        n = len(self.positions)
        self.fixed = np.broadcast_to(np.asarray(self.fixed, dtype=bool), (n,)).copy()
        self.r_max = np.broadcast_to(np.asarray(self.r_max, dtype=float), (n,)).copy()
        self.r_min = np.broadcast_to(np.asarray(self.r_min, dtype=float), (n,)).copy()
        self.r_min[self.fixed] = self.r_max[self.fixed]
        check_distinct(self.positions)

    def __len__(self):
        return len(self.positions)

    @classmethod
    def from_sensors(cls, sensors: Sequence[Sensor], aoi: Rect, **kw) -> "Network":
        pos = np.array([[s.position.x, s.position.y] for s in sensors], dtype=float)
        return cls(pos, np.array([s.cls is SensorClass.FIXED for s in sensors]),
                   np.array([s.r_max for s in sensors]), np.array([s.r_min for s in sensors]),
                   aoi, **kw)

    def circles(self, radii=None) -> list[Circle]:
        radii = self.r_max if radii is None else radii
        return [Circle.at(x, y, r) for (x, y), r in zip(self.positions, radii)]


@dataclass
class CoverSet:
    """Outcome of one protocol execution."""

    radii: np.ndarray
    awake: np.ndarray
    iterations: int
    decided_at: np.ndarray  # iteration of decision, -1 if frozen by K or dead
    loose_events: int = 0
    frozen: int = 0

    def circles(self, positions) -> list[Circle]:
        return [Circle.at(x, y, r) for (x, y), r, a in zip(positions, self.radii, self.awake) if a]


def get_alpha(value: float, neighborhood: Sequence[float],
              criterion: AlphaCriterion = AlphaCriterion.ENERGY_GAIN,
              alpha_min: float = 0.05) -> float:
    """Normalised priority of a sensor within its undecided neighborhood.

    ``neighborhood`` must include the sensor's own value.  With the energy
    gain criterion higher gains move faster; with the residual energy and
    residual lifetime criteria the sensors with less left move faster.
    """
    if len(neighborhood) == 0:
        raise EmptyNeighborhood("neighborhood must contain the sensor itself")
    lo, hi = min(neighborhood), max(neighborhood)
    if hi == lo:
        return 1.0
    if criterion is AlphaCriterion.ENERGY_GAIN:
        a = (value - lo) / (hi - lo)
    else:
        a = (hi - value) / (hi - lo)
    return float(min(1.0, max(a, alpha_min)))


def fixed_step(redundant: bool, alpha: float, u: float) -> Decision:
    """Fixed-sensor decision after the back-off re-check.

    ``u`` is a uniform draw from [0, 1); the sensor sleeps when ``u < alpha``.
    """
    if not redundant:
        return Decision.TURN_ON
    return Decision.SLEEP if u < alpha else Decision.WAIT


@dataclass(frozen=True)
class Assessment:
    kind: Kind
    d_bar: float = 0.0  # target distance for the radius update
    gain: float = 0.0
    support: tuple[int, ...] = ()  # undecided sensors a loose reduction relies on


@dataclass(frozen=True)
class StepResult:
    decision: Decision
    r: float
    decided: bool


_KIND_CODE = {Kind.COVERS_NOTHING: K.KIND_NOTHING, Kind.PARTIAL: K.KIND_PARTIAL,
              Kind.INTERIOR: K.KIND_INTERIOR, Kind.STRICT: K.KIND_STRICT, Kind.LOOSE: K.KIND_LOOSE}
_CODE_KIND = {v: k for k, v in _KIND_CODE.items()}
_STEP = {K.STEP_KEEP: Decision.KEEP, K.STEP_SHRINK: Decision.SHRINK,
         K.STEP_SLEEP: Decision.SLEEP, K.STEP_WAIT: Decision.WAIT}


def adjustable_step(r: float, a: Assessment, alpha: float, r_min: float = 0.0) -> StepResult:
    """Radius update of an undecided adjustable sensor.

    The radius moves a fraction alpha of the way to the target distance.
    A sensor covering nothing shrinks towards zero and sleeps once it would
    fall below ``r_min`` (or below the convergence epsilon).  When the step
    would change the radius by less than the convergence epsilon the sensor
    settles at its target and decides.  Partially covering sensors and
    sensors at a strict boundary point keep their radius and decide.
    """
    code, new, dec = K.radius_update(_KIND_CODE[a.kind], float(r), float(a.d_bar),
                                     float(alpha), float(r_min), CONVERGE_EPS)
    return StepResult(_STEP[code], float(new), bool(dec))


class SaraRun:
    """State of one protocol execution over the alive sensors of a network."""

    def __init__(self, net: Network, params: SaraParams, rng: np.random.Generator,
                 alive: np.ndarray | None = None, energy: np.ndarray | None = None):
        self.net = net
        self.params = params
        self.rng = rng
        n = len(net)
        self.alive = np.ones(n, bool) if alive is None else np.asarray(alive, bool).copy()
        self.energy = np.full(n, np.inf) if energy is None else np.asarray(energy, float)
        self.r = np.where(self.alive, net.r_max, 0.0)
        self.awake = self.alive.copy()
        self.decided = ~self.alive
        self.decided_at = np.full(n, -1, dtype=np.int64)
        self.iteration = 0
        self.loose_events = 0
        self._ovl = self._overlap_lists()
        self._refresh()

    def _overlap_lists(self) -> dict:
        # overlap candidates never grow during a run because radii only shrink
        net = self.net
        ids = np.flatnonzero(self.alive)
        out = {int(i): np.zeros(0, np.int64) for i in ids}
        if len(ids) < 2:
            return out
        tree = cKDTree(net.positions[ids])
        pairs = tree.query_pairs(2 * float(net.r_max[ids].max()), output_type="ndarray")
        if len(pairs) == 0:
            return out
        a, b = ids[pairs[:, 0]], ids[pairs[:, 1]]
        d = np.hypot(*(net.positions[a] - net.positions[b]).T)
        keep = d <= net.r_max[a] + net.r_max[b]
        src = np.concatenate([a[keep], b[keep]])
        dst = np.concatenate([b[keep], a[keep]])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        lo = np.searchsorted(src, ids, side="left")
        hi = np.searchsorted(src, ids, side="right")
        for i, s0, s1 in zip(ids, lo, hi):
            out[int(i)] = dst[s0:s1]
        return out

    # -- views -------------------------------------------------------------

    def _refresh(self):
        """Rebuild the power diagram of the awake sensors and the local
        neighborhoods (cell neighbors plus overlapping null-cell sensors)."""
        self.gid = np.flatnonzero(self.awake)
        self.lid = np.full(len(self.net), -1, dtype=np.int64)
        m = len(self.gid)
        self.lid[self.gid] = np.arange(m)
        pos = self.net.positions[self.gid]
        self.lpx = np.ascontiguousarray(pos[:, 0])
        self.lpy = np.ascontiguousarray(pos[:, 1])
        self.lr = self.r[self.gid].copy()
        if m == 0:
            self.diagram = None
            self.ptr = np.zeros(1, np.int64)
            self.idx = np.zeros(0, np.int64)
            return
        D = diagram_from_arrays(pos, self.lr, self.net.aoi)
        self.diagram = D
        rows = np.repeat(np.arange(m), np.diff(D.nbr_ptr))
        cols = D.nbr_idx
        nulls = np.flatnonzero(D.null_mask)
        if len(nulls):
            tree = cKDTree(pos)
            hits = tree.query_ball_point(pos[nulls], self.lr[nulls] + self.lr.max())
            jj = np.repeat(nulls, [len(h) for h in hits])
            ii = np.fromiter((i for h in hits for i in h), dtype=np.int64, count=len(jj))
            d = np.hypot(self.lpx[ii] - self.lpx[jj], self.lpy[ii] - self.lpy[jj])
            ok = (ii != jj) & (d <= self.lr[ii] + self.lr[jj])
            rows = np.concatenate([rows, ii[ok]])
            cols = np.concatenate([cols, jj[ok]])
            key = np.unique(rows * m + cols)
            rows, cols = key // m, key % m
        ptr = np.zeros(m + 1, np.int64)
        np.add.at(ptr, rows + 1, 1)
        self.ptr = np.cumsum(ptr)
        self.idx = np.ascontiguousarray(cols, dtype=np.int64)

    def overlapping(self, i: int) -> np.ndarray:
        """Awake sensors whose current disks overlap disk ``i``."""
        c = self._ovl[i]
        c = c[self.awake[c]]
        d = np.hypot(*(self.net.positions[c] - self.net.positions[i]).T)
        return c[d <= self.r[c] + self.r[i]]

    def around(self, i: int) -> np.ndarray:
        """Power-diagram neighbors plus overlapping null-cell sensors."""
        l = self.lid[i]
        return self.gid[self.idx[self.ptr[l]:self.ptr[l + 1]]]

    def polygon(self, i: int):
        return self.diagram.polygon(self.lid[i])

    # -- predicates --------------------------------------------------------

    def redundant(self, i: int) -> bool:
        """Whether disk ``i`` (within the AoI) is covered by the other awake disks.

        Candidates are all overlapping awake sensors; the cell neighbors plus
        overlapping null-cell sensors give the same answer.
        """
        c = self.overlapping(i)
        if len(c) == 0:
            return False
        p = self.net.positions[c]
        x, y = self.net.positions[i]
        return disk_covered(x, y, self.r[i], np.ascontiguousarray(p[:, 0]),
                            np.ascontiguousarray(p[:, 1]), self.r[c], self.net.aoi)

    def _assess_local(self, tl: np.ndarray):
        sm = self.net.sensing
        ldec = self.decided[self.gid]
        lrmin = self.net.r_min[self.gid]
        D = self.diagram
        return K.assess_cells(tl, D.vx, D.vy, D.nv, self.ptr, self.idx, self.lpx, self.lpy,
                              self.lr, ldec, lrmin, self.params.boundary_tol, sm.a, sm.b, sm.c)

    def assess(self, i: int) -> Assessment:
        """Relation of adjustable sensor ``i`` to the uncovered part of its cell."""
        kind, dbar, gain, sptr, sup = self._assess_local(np.array([self.lid[i]], np.int64))
        return Assessment(_CODE_KIND[int(kind[0])], float(dbar[0]), float(gain[0]),
                          tuple(int(j) for j in self.gid[sup]))

    def _values(self, gain_local: np.ndarray) -> tuple[np.ndarray, bool]:
        crit = self.params.criterion
        if crit is AlphaCriterion.ENERGY_GAIN:
            return gain_local, True
        e = self.energy[self.gid]
        if crit is AlphaCriterion.RESIDUAL_ENERGY:
            return e, False
        p = sensing_power(self.net.sensing, self.lr)
        with np.errstate(divide="ignore"):
            return np.where(p > 0, e / np.where(p > 0, p, 1.0), np.inf), False

    def _local_gains(self) -> tuple[np.ndarray, np.ndarray]:
        """Energy gains of every pending sensor (local indexing) and the
        assessment of the pending adjustable ones."""
        lfix = self.net.fixed[self.gid]
        pend = ~self.decided[self.gid]
        gain = np.zeros(len(self.gid))
        fx = pend & lfix
        gain[fx] = sensing_power(self.net.sensing, self.lr[fx])
        tl = np.flatnonzero(pend & ~lfix)
        res = self._assess_local(tl)
        gain[tl] = res[2]
        return gain, (tl,) + tuple(res)

    def _alphas(self, tl: np.ndarray, gain: np.ndarray) -> np.ndarray:
        value, higher = self._values(gain)
        pend = ~self.decided[self.gid]
        return K.alpha_batch(tl, self.ptr, self.idx, pend, np.ascontiguousarray(value, float),
                             higher, self.params.alpha_min)

    def alpha(self, i: int) -> float:
        gain, _ = self._local_gains()
        return float(self._alphas(np.array([self.lid[i]], np.int64), gain)[0])

    # -- phases ------------------------------------------------------------

    def _decide(self, i: int, sleep: bool = False):
        self.decided[i] = True
        self.decided_at[i] = self.iteration
        if sleep:
            self.awake[i] = False
            self.r[i] = 0.0

    def fixed_phase(self) -> bool:
        """Turn-on / back-off / sleep decisions of undecided fixed sensors.
        Returns True when any sensor went to sleep."""
        todo = np.flatnonzero(self.awake & ~self.decided & self.net.fixed)
        if len(todo) == 0:
            return False
        redundant = []
        for i in todo:
            i = int(i)
            if self.redundant(i):
                redundant.append(i)
            else:
                self._decide(i)
        if not redundant:
            return False
        gain, _ = self._local_gains()
        alphas = self._alphas(self.lid[redundant], gain)
        t_star = self.rng.uniform(0.0, self.params.t_backoff_max, len(redundant))
        coins = self.rng.random(len(redundant))
        slept = False
        for k in np.argsort(t_star, kind="stable"):
            i = redundant[k]
            d = fixed_step(self.redundant(i), alphas[k], coins[k])
            if d is Decision.TURN_ON:
                self._decide(i)
            elif d is Decision.SLEEP:
                self._decide(i, sleep=True)
                slept = True
        if slept:
            self._refresh()
        return slept

    def adjustable_phase(self):
        gain, (tl, kind, dbar, _, sptr, sup) = self._local_gains()
        if len(tl) == 0:
            return
        alphas = self._alphas(tl, gain)
        code, new, dec = K.radius_update_batch(kind, self.lr[tl], dbar, alphas,
                                               self.net.r_min[self.gid[tl]], CONVERGE_EPS)
        ids = self.gid[tl]
        changed = np.zeros(len(self.net), bool)
        changed[ids] = new != self.r[ids]
        self.r[ids] = new
        for i in ids[dec]:
            self._decide(int(i), sleep=self.r[i] == 0.0)
        # serialised extra reduction of loose sensors, lowest id first
        for t in np.flatnonzero(kind == K.KIND_LOOSE):
            i = int(ids[t])
            if self.decided[i] or changed[self.around(i)].any():
                continue
            self.loose_events += 1
            for j in self.gid[sup[sptr[t]:sptr[t + 1]]]:
                if self.awake[j] and not self.decided[j]:
                    self._decide(int(j))
            changed[i] = True
            if dbar[t] <= 0.0:
                self._decide(i, sleep=True)
            else:
                self.r[i] = dbar[t]
        if changed.any():
            self._refresh()
        else:
            self.lr = self.r[self.gid].copy()

    def step(self):
        self.iteration += 1
        self.fixed_phase()
        self.adjustable_phase()

    def run(self) -> CoverSet:
        p = self.params
        cap = p.hard_cap if p.K is None else min(p.K, p.hard_cap)
        while (self.awake & ~self.decided).any():
            if self.iteration >= cap:
                if p.K is None or p.K > p.hard_cap:
                    raise ConvergenceError(f"no convergence after {self.iteration} iterations")
                break
            self.step()
        frozen = int((self.awake & ~self.decided).sum())
        self.decided[self.awake] = True
        return CoverSet(self.r.copy(), self.awake.copy(), self.iteration,
                        self.decided_at.copy(), self.loose_events, frozen)


def run_sara(net: Network, params: SaraParams = SaraParams(),
             rng: np.random.Generator | None = None, alive=None, energy=None) -> CoverSet:
    """Run the protocol on the alive sensors, starting from maximum radii."""
    rng = np.random.default_rng(0) if rng is None else rng
    return SaraRun(net, params, rng, alive, energy).run()
