"""One configuration round of each scheme on the same deployment.

Compares how many sensors stay awake, how far they reach, what the network
draws, and what fraction of the area is still covered.
"""

import time

import numpy as np

from sarasim.baselines import run_dlm_round, run_vrcsc_round
from sarasim.energy import sensing_power
from sarasim.harness import coverage_fraction, deploy, preset
from sarasim.harness.deploy import protocol_rng
from sarasim.protocol import run_sara

for name in ("adjustable-homogeneous", "adjustable-heterogeneous"):
    cfg = preset(name, seed=3)
    dep = deploy(cfg)
    net = dep.network
    full = coverage_fraction(net.positions, net.r_max, np.ones(len(net), bool), net.aoi)
    print(f"\n{name}: {len(net)} sensors, all on covers {100 * full:.2f}%")
    rounds = {
        "sara": lambda: run_sara(net, cfg.sara_params(), protocol_rng(cfg.seed), energy=dep.energy),
        "vrcsc": lambda: run_vrcsc_round(net),
        "dlm": lambda: run_dlm_round(net),
    }
    for algo, go in rounds.items():
        t = time.perf_counter()
        cs = go()
        dt = time.perf_counter() - t
        on = cs.awake
        cov = coverage_fraction(net.positions, cs.radii, on, net.aoi)
        draw = float(np.sum(sensing_power(net.sensing, cs.radii[on])) + on.sum() * net.comm.awake_idle)
        print(f"  {algo:5s} awake {on.sum():4d}  mean r {cs.radii[on].mean():4.2f} m  "
              f"draw {draw:7.1f} mW  covered {100 * cov:6.2f}%  ({dt:.2f} s)")
