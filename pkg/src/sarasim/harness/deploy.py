"""Random deployments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..geometry import EPS
from ..protocol import Network
from .config import ScenarioConfig


@dataclass
class Deployment:
    network: Network
    energy: np.ndarray  # initial joules per sensor

    @property
    def n(self) -> int:
        return len(self.network)


def deployment_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 0])


def protocol_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng([seed, 1])


def distinct_positions(pos: np.ndarray, rng: np.random.Generator, aoi) -> np.ndarray:
    """Redraw points that coincide with an earlier one until all are distinct."""
    pos = pos.copy()
    while True:
        pairs = cKDTree(pos).query_pairs(EPS, output_type="ndarray")
        if len(pairs) == 0:
            return pos
        redo = np.unique(pairs.max(axis=1))
        pos[redo] = uniform_points(rng, len(redo), aoi)


def uniform_points(rng, n, aoi) -> np.ndarray:
    return np.column_stack([rng.uniform(aoi.xmin, aoi.xmax, n),
                            rng.uniform(aoi.ymin, aoi.ymax, n)])


def _split(values, n) -> np.ndarray:
    # equal blocks, earlier values take the remainder
    counts = np.full(len(values), n // len(values))
    counts[: n % len(values)] += 1
    return np.repeat(np.asarray(values, float), counts)


def class_layout(cfg: ScenarioConfig, rng) -> tuple[np.ndarray, np.ndarray]:
    """Fixed flags and maximum/fixed radii, shuffled over sensor ids."""
    n = cfg.n_sensors
    n_fixed = int(round(n * cfg.pct_fixed / 100.0))
    fixed = np.zeros(n, bool)
    fixed[:n_fixed] = True
    radii = np.concatenate([_split(cfg.r_fixed, n_fixed), _split(cfg.r_max, n - n_fixed)])
    perm = rng.permutation(n)
    return fixed[perm], radii[perm]


def deploy(cfg: ScenarioConfig, positions: np.ndarray | None = None) -> Deployment:
    """Uniform positions, class mix as configured, energies uniform in (0, capacity].

    ``positions`` overrides the drawn positions; coincident ones are redrawn.
    """
    rng = deployment_rng(cfg.seed)
    aoi = cfg.aoi
    pos = uniform_points(rng, cfg.n_sensors, aoi) if positions is None else np.asarray(positions, float)
    pos = distinct_positions(pos, rng, aoi)
    fixed, radii = class_layout(cfg, rng)
    energy = cfg.capacity_j * (1.0 - rng.random(cfg.n_sensors))
    net = Network(pos, fixed, radii, np.minimum(cfg.r_min, radii), aoi,
                  cfg.sensing, cfg.comm, cfg.tx_range)
    return Deployment(net, energy)
