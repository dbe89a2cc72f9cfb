import numpy as np
import pytest
from hypothesis import settings

from sarasim.geometry import Rect

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

AOI = Rect(0.0, 0.0, 80.0, 80.0)


def random_instance(rng, n=None, rmin=1.0, rmax=8.0, aoi=AOI):
    n = int(rng.integers(2, 51)) if n is None else n
    pos = np.column_stack([rng.uniform(aoi.xmin, aoi.xmax, n), rng.uniform(aoi.ymin, aoi.ymax, n)])
    return pos, rng.uniform(rmin, rmax, n)


def grid(aoi=AOI, pitch=0.25):
    xs = aoi.xmin + (np.arange(int(round(aoi.width / pitch))) + 0.5) * pitch
    ys = aoi.ymin + (np.arange(int(round(aoi.height / pitch))) + 0.5) * pitch
    return np.meshgrid(xs, ys)


def disk_samples(x, y, r, pitch=0.02):
    """Interior grid plus boundary ring of a disk."""
    g = np.arange(-r, r + pitch / 2, pitch)
    gx, gy = np.meshgrid(g, g)
    inside = gx ** 2 + gy ** 2 <= r * r
    t = np.linspace(0, 2 * np.pi, max(64, int(2 * np.pi * r / pitch)), endpoint=False)
    px = np.concatenate([gx[inside] + x, x + r * np.cos(t)])
    py = np.concatenate([gy[inside] + y, y + r * np.sin(t)])
    return px, py


def covered_by(px, py, cx, cy, cr, tol=1e-9):
    if len(cx) == 0:
        return np.zeros(px.shape, bool)
    d2 = (px[..., None] - cx) ** 2 + (py[..., None] - cy) ** 2
    return (d2 <= (cr + tol) ** 2).any(axis=-1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
