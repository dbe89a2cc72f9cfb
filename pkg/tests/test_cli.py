import csv
import json
import subprocess
import sys

import pytest

from sarasim.cli import _seed_list, main

SMALL = """\
preset = adjustable-homogeneous
n_sensors = 50
aoi_width = 30
aoi_height = 30
pitch = 0.5
battery_mah = 100
thresholds = 60
"""


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text(SMALL)
    return path


def test_simulate(cfg_file, tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["simulate", "--config", str(cfg_file), "--seed", "3", "--algo", "dlm",
                 "--out", str(out)]) == 0
    header = (out / "metrics.csv").read_text().splitlines()[0]
    assert header == "interval,covered_frac,awake_pct,sleeping_pct,dead_pct,mean_radius_m,mean_residual_j,iters"
    doc = json.loads((out / "metrics.json").read_text())
    assert doc["config"]["algo"] == "dlm" and doc["seed"] == 3
    assert doc["config"]["n_sensors"] == 50
    assert (out / "metrics_classes.csv").exists()
    assert "lifetime_60" in capsys.readouterr().out


def test_flags_override_file(cfg_file, tmp_path):
    out = tmp_path / "run"
    main(["simulate", "--config", str(cfg_file), "--k", "none", "--pitch", "1.0",
          "--alpha", "residual_energy", "--out", str(out)])
    cfg = json.loads((out / "metrics.json").read_text())["config"]
    assert cfg["k"] is None and cfg["pitch"] == 1.0
    assert cfg["alpha_criterion"] == "residual_energy"


def test_same_seed_same_bytes(cfg_file, tmp_path):
    for d in ("a", "b"):
        main(["simulate", "--config", str(cfg_file), "--seed", "1", "--out", str(tmp_path / d)])
    assert (tmp_path / "a" / "metrics.csv").read_bytes() == (tmp_path / "b" / "metrics.csv").read_bytes()


def test_sweep(cfg_file, tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--config", str(cfg_file), "--seeds", "0-1", "--algos", "sara,dlm",
                 "--n", "30,40", "--out", str(out)]) == 0
    rows = list(csv.DictReader((out / "summary.csv").open()))
    assert len(rows) == 8
    assert {r["algo"] for r in rows} == {"sara", "dlm"}
    assert {r["n_sensors"] for r in rows} == {"30", "40"}
    assert (out / "sara_n30_s1.csv").exists()


def test_render(cfg_file, tmp_path):
    svg = tmp_path / "s.svg"
    assert main(["render", "--config", str(cfg_file), "--interval", "1", "--out", str(svg)]) == 0
    text = svg.read_text()
    assert text.startswith("<svg") and "<polygon" in text


def test_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("pct_fixed = 20\n")
    assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "config error" in capsys.readouterr().err


def test_seed_list():
    assert _seed_list("0-3") == [0, 1, 2, 3]
    assert _seed_list("1,4,7-8") == [1, 4, 7, 8]


def test_module_entry(cfg_file, tmp_path):
    r = subprocess.run([sys.executable, "-m", "sarasim", "simulate", "--config", str(cfg_file),
                        "--out", str(tmp_path / "m")], capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "m" / "metrics.csv").exists()
