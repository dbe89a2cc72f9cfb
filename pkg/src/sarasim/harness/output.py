"""CSV, manifest and SVG output."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .. import __version__
from ..geometry import diagram_from_arrays
from .config import ScenarioConfig
from .metrics import COLUMNS, MetricsSeries

_INT_COLUMNS = {"interval", "iters"}


def _fmt(v) -> str:
    return str(int(v)) if isinstance(v, (int, np.integer)) else repr(float(v))


def write_csv(series: MetricsSeries, path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in series.rows():
            w.writerow([_fmt(v) for v in row])
    return path


def read_csv(path: str | Path) -> MetricsSeries:
    s = MetricsSeries()
    with Path(path).open(newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if tuple(header) != COLUMNS:
            raise ValueError(f"unexpected header {header}")
        for row in r:
            for name, v in zip(COLUMNS, row):
                getattr(s, name).append(int(v) if name in _INT_COLUMNS else float(v))
    return s


def write_manifest(cfg: ScenarioConfig, path: str | Path, **extra) -> Path:
    path = Path(path)
    doc = {"version": __version__, "seed": cfg.seed, "config": cfg.to_dict(), **extra}
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def write_class_csv(series: MetricsSeries, path: str | Path) -> Path:
    path = Path(path)
    keys = [(c, k) for c, d in series.per_class.items() for k in d]
    with path.open("w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["interval"] + [f"{c}_{k}" for c, k in keys])
        for i, t in enumerate(series.interval):
            w.writerow([t] + [repr(float(series.per_class[c][k][i])) for c, k in keys])
    return path


def render_svg(positions, radii, awake, aoi, path: str | Path | None = None,
               scale: float = 8.0, fixed=None) -> str:
    """Power cells of the awake sensors plus their disks.

    Cells are outlined in grey, disks of adjustable sensors in blue and of
    fixed ones in orange; sleeping sensors are small hollow dots.
    """
    positions = np.asarray(positions, float)
    radii = np.asarray(radii, float)
    awake = np.asarray(awake, bool) & (radii > 0)
    fixed = np.zeros(len(positions), bool) if fixed is None else np.asarray(fixed, bool)
    w, h = aoi.width * scale, aoi.height * scale

    def X(x):
        return (x - aoi.xmin) * scale

    def Y(y):
        return h - (y - aoi.ymin) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0f}" height="{h:.0f}" '
           f'viewBox="0 0 {w:.2f} {h:.2f}">',
           f'<rect x="0" y="0" width="{w:.2f}" height="{h:.2f}" fill="white" stroke="black"/>']
    ids = np.flatnonzero(awake)
    if len(ids):
        dia = diagram_from_arrays(positions[ids], radii[ids], aoi)
        out.append('<g fill="none" stroke="#888" stroke-width="1">')
        for k in range(len(ids)):
            if dia.is_null(k):
                continue
            xs, ys = dia.polygon(k)
            pts = " ".join(f"{X(x):.2f},{Y(y):.2f}" for x, y in zip(xs, ys))
            out.append(f'<polygon points="{pts}"/>')
        out.append("</g>")
    out.append('<g fill-opacity="0.12" stroke-width="1">')
    for i in ids:
        col = "#d95f02" if fixed[i] else "#1b6ac9"
        out.append(f'<circle cx="{X(positions[i, 0]):.2f}" cy="{Y(positions[i, 1]):.2f}" '
                   f'r="{radii[i] * scale:.2f}" fill="{col}" stroke="{col}"/>')
    out.append("</g>")
    for i in range(len(positions)):
        fill = "black" if awake[i] else "none"
        out.append(f'<circle cx="{X(positions[i, 0]):.2f}" cy="{Y(positions[i, 1]):.2f}" '
                   f'r="1.5" fill="{fill}" stroke="black" stroke-width="0.5"/>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
