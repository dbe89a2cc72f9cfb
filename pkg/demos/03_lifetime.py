"""Network lifetime under the three schemes, on a smaller field so it
finishes in a minute or two.

Each interval the scheme picks who stays awake and at what radius; batteries
then drain for 24 hours.  Lifetime is the first interval whose coverage
falls below a threshold.
"""

from sarasim.harness import lifetime, preset, simulate

base = preset("mixed-homogeneous", n_sensors=250, aoi_width=40.0, aoi_height=40.0,
              thresholds=(80.0, 90.0, 95.0, 100.0), seed=1)

print(f"{'':6s}" + "".join(f"{p:>8.0f}%" for p in base.thresholds))
for algo in ("sara", "vrcsc", "dlm"):
    s = simulate(base.replace(algo=algo)).series
    row = "".join(f"{lifetime(s, p):9d}" for p in base.thresholds)
    print(f"{algo:6s}{row}   (awake at start {s.awake_pct[0]:.0f}%)")
