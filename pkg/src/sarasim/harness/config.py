"""Scenario configuration: a flat ``key = value`` text format plus presets.

Lines starting with ``#`` are comments.  Lists are comma separated.  A
``preset`` key loads a named scenario first; every other key in the file
overrides it.  ``k = none`` runs the protocol until every sensor decides.
"""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass, field, fields
from pathlib import Path

from ..energy import CommModel, SensingModel, mah_to_joules
from ..errors import ConfigError
from ..geometry import Rect
from ..protocol import AlphaCriterion, SaraParams

ALGORITHMS = ("sara", "dlm", "vrcsc")


@dataclass(frozen=True)
class ScenarioConfig:
    preset: str = ""
    aoi_width: float = 80.0
    aoi_height: float = 80.0
    n_sensors: int = 900
    pct_fixed: float = 0.0
    pct_adjustable: float = 100.0
    r_fixed: tuple[float, ...] = (6.0,)  # split evenly among fixed sensors
    r_max: tuple[float, ...] = (6.0,)  # split evenly among adjustable sensors
    r_min: float = 2.0
    tx_range: float = 30.0
    sensing_a: float = SensingModel.a
    sensing_b: float = SensingModel.b
    sensing_c: float = SensingModel.c
    awake_idle_mw: float = CommModel.awake_idle
    sleeping_mw: float = CommModel.sleeping
    battery_mah: float = 1840.0
    voltage: float = 3.0
    interval_h: float = 24.0
    algo: str = "sara"
    alpha_criterion: str = "energy_gain"
    alpha_min: float = 0.05
    k: int | None = 20
    thresholds: tuple[float, ...] = (80.0, 90.0, 95.0, 100.0)
    seed: int = 0
    pitch: float = 0.25
    vrcsc_threshold: float = 1.0
    max_intervals: int = 10_000

    def __post_init__(self):
        if self.n_sensors < 1:
            raise ConfigError("n_sensors must be at least 1")
        if abs(self.pct_fixed + self.pct_adjustable - 100.0) > 1e-9:
            raise ConfigError("pct_fixed + pct_adjustable must equal 100")
        if min(self.pct_fixed, self.pct_adjustable) < 0:
            raise ConfigError("percentages must be non-negative")
        if self.aoi_width <= 0 or self.aoi_height <= 0:
            raise ConfigError("AoI sides must be positive")
        if not self.r_fixed or not self.r_max or min(self.r_fixed + self.r_max) <= 0:
            raise ConfigError("radii must be positive")
        if not 0 <= self.r_min <= min(self.r_max):
            raise ConfigError("r_min must lie in [0, min(r_max)]")
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"algo must be one of {', '.join(ALGORITHMS)}")
        if self.alpha_criterion not in {c.value for c in AlphaCriterion}:
            raise ConfigError(f"unknown alpha criterion {self.alpha_criterion!r}")
        if self.k is not None and self.k < 1:
            raise ConfigError("k must be a positive integer or none")
        if not self.thresholds or not all(0 < p <= 100 for p in self.thresholds):
            raise ConfigError("thresholds must lie in (0, 100]")
        if self.pitch <= 0 or self.interval_h <= 0 or self.battery_mah < 0:
            raise ConfigError("pitch and interval must be positive, capacity non-negative")
        try:
            self.sensing
            self.comm
        except ValueError as e:
            raise ConfigError(str(e)) from None
        if self.tx_range < 2 * self.max_radius:
            warnings.warn(f"tx_range {self.tx_range} m is below twice the largest "
                          f"sensing radius ({self.max_radius} m); the network may be "
                          "disconnected", stacklevel=3)

    @property
    def max_radius(self) -> float:
        radii = (self.r_fixed if self.pct_fixed else ()) + (self.r_max if self.pct_adjustable else ())
        return max(radii)

    @property
    def aoi(self) -> Rect:
        return Rect(0.0, 0.0, self.aoi_width, self.aoi_height)

    @property
    def sensing(self) -> SensingModel:
        return SensingModel(self.sensing_a, self.sensing_b, self.sensing_c)

    @property
    def comm(self) -> CommModel:
        return CommModel(self.awake_idle_mw, self.sleeping_mw)

    @property
    def capacity_j(self) -> float:
        return mah_to_joules(self.battery_mah, self.voltage)

    def sara_params(self) -> SaraParams:
        return SaraParams(alpha_min=self.alpha_min, K=self.k,
                          criterion=AlphaCriterion(self.alpha_criterion))

    def replace(self, **kw) -> "ScenarioConfig":
        return dataclasses.replace(self, **kw)

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def to_text(self) -> str:
        return "".join(f"{k} = {_format(v)}\n" for k, v in self.to_dict().items())


PRESETS: dict[str, dict] = {
    "adjustable-homogeneous": dict(pct_fixed=0.0, pct_adjustable=100.0, r_max=(6.0,), r_min=2.0),
    "adjustable-heterogeneous": dict(pct_fixed=0.0, pct_adjustable=100.0,
                                     r_max=(6.0, 3.0), r_min=2.0),
    "fixed-heterogeneous": dict(pct_fixed=100.0, pct_adjustable=0.0, r_fixed=(3.0, 6.0)),
    "mixed-homogeneous": dict(pct_fixed=50.0, pct_adjustable=50.0, r_fixed=(6.0,),
                              r_max=(6.0,), r_min=2.0),
    "mixed-heterogeneous": dict(pct_fixed=50.0, pct_adjustable=50.0, r_fixed=(3.0,),
                                r_max=(6.0,), r_min=2.0),
}


def _format(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, tuple):
        return ",".join(_format(x) for x in v)
    return repr(v) if isinstance(v, float) else str(v)


_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def _parse_value(key: str, raw: str):
    kind = _TYPES[key]
    raw = raw.strip()
    try:
        if kind == "str":
            return raw
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "int | None":
            return None if raw.lower() in ("none", "inf", "unbounded") else int(raw)
        if kind.startswith("tuple"):
            return tuple(float(x) for x in raw.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    raise ConfigError(f"unsupported key type for {key}")


def preset(name: str, **overrides) -> ScenarioConfig:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    return ScenarioConfig(preset=name, **{**PRESETS[name], **overrides})


def from_mapping(values: dict) -> ScenarioConfig:
    """Build a config from raw string or typed values, applying ``preset`` first."""
    unknown = set(values) - set(_TYPES)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    typed = {k: _parse_value(k, v) if isinstance(v, str) else v for k, v in values.items()}
    name = typed.pop("preset", "")
    base = PRESETS.get(name) if name else {}
    if base is None:
        raise ConfigError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}")
    return ScenarioConfig(preset=name, **{**base, **typed})


def parse_config(text: str) -> dict:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value'")
        k, v = (s.strip() for s in line.split("=", 1))
        out[k] = v
    return out


def load_config(path: str | Path, **overrides) -> ScenarioConfig:
    values = parse_config(Path(path).read_text())
    values.update({k: v for k, v in overrides.items() if v is not None})
    return from_mapping(values)
