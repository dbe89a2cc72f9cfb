"""Power draw, batteries and the per-interval energy gain.

Powers are in milliwatts, energies in joules and durations in hours.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import NegativeRadius

MAH_TO_J_PER_V = 3.6  # 1 mAh at 1 V


@dataclass(frozen=True)
class SensingModel:
    """``a * r**c + b`` milliwatts while the sensing unit is on.

    With the defaults a node awake at 6 m draws 220·a = 3.45 mW in total,
    which empties a 1840 mAh, 3 V battery in 1600 h.  The node's own awake
    draw is 4·a, the largest value for which covering an area with more,
    smaller disks never costs more than with fewer, larger ones between 2 m
    and 6 m.
    """

    a: float = 3.45 / 220.0
    b: float = 0.0
    c: float = 3.0

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("a and b must be non-negative")
        if not 2.0 <= self.c <= 4.0:
            raise ValueError("exponent c must lie in [2, 4]")


@dataclass(frozen=True)
class CommModel:
    """Radio plus MCU draw per state, in milliwatts."""

    awake_idle: float = 4 * 3.45 / 220.0
    sleeping: float = 4 * 3.45 / 220.0 / 100.0

    def __post_init__(self):
        if not self.awake_idle >= self.sleeping >= 0:
            raise ValueError("need awake_idle >= sleeping >= 0")


@dataclass(frozen=True)
class Battery:
    capacity: float  # joules
    remaining: float

    def __post_init__(self):
        if not 0 <= self.remaining <= self.capacity + 1e-12:
            raise ValueError("remaining energy outside [0, capacity]")

    @property
    def dead(self) -> bool:
        return self.remaining <= 0.0


def mah_to_joules(mah: float, volts: float = 3.0) -> float:
    return mah * volts * MAH_TO_J_PER_V


def mw_hours_to_joules(mw, hours):
    return np.asarray(mw) * 1e-3 * np.asarray(hours) * 3600.0


def sensing_power(model: SensingModel, r):
    """Sensing draw at radius ``r`` (scalar or array); 0 when r == 0."""
    r_arr = np.asarray(r, dtype=float)
    if (r_arr < 0).any():
        raise NegativeRadius("radius must be non-negative")
    p = np.where(r_arr > 0, model.a * r_arr ** model.c + model.b, 0.0)
    return float(p) if p.ndim == 0 else p


def energy_gain(model: SensingModel, r_prev: float, *, fixed: bool = False,
                uncovered: bool = False, residual_d: float | None = None,
                dt: float = 1.0) -> float:
    """Energy a sensor could save over an interval of length ``dt``.

    A fixed sensor can only save its whole draw, as can an adjustable sensor
    whose cell is null or lies outside its disk.  Otherwise the saving is the
    difference between the current radius and the distance to the farthest
    point still left for it to cover.  Never negative.
    """
    full = sensing_power(model, r_prev)
    if fixed or uncovered or residual_d is None:
        return full * dt
    target = min(max(residual_d, 0.0), r_prev)
    return (full - sensing_power(model, target) if target > 0 else full) * dt


def drain(battery: Battery, power: float, dt: float) -> Battery:
    """Spend ``power`` mW for ``dt`` hours, clamped at zero."""
    if dt < 0:
        raise ValueError("dt must be non-negative")
    used = float(mw_hours_to_joules(power, dt))
    return replace(battery, remaining=max(0.0, battery.remaining - used))


def drain_all(remaining: np.ndarray, power_mw: np.ndarray, dt: float) -> np.ndarray:
    return np.maximum(0.0, remaining - mw_hours_to_joules(power_mw, dt))
