"""Command line entry point: ``sarasim simulate|sweep|render``."""

from __future__ import annotations

import argparse
import csv
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ConfigError, NeverCovered
from .harness.config import ALGORITHMS, PRESETS, ScenarioConfig, from_mapping, parse_config
from .harness.metrics import lifetime
from .harness.output import render_svg, write_class_csv, write_csv, write_manifest
from .harness.simulate import simulate


def _base_values(args) -> dict:
    values = parse_config(Path(args.config).read_text()) if args.config else {}
    if getattr(args, "preset", None):
        values["preset"] = args.preset
    for key, flag in (("seed", "seed"), ("algo", "algo"), ("pitch", "pitch"),
                      ("alpha_criterion", "alpha")):
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    if getattr(args, "k", None) is not None:
        values["k"] = args.k
    return values


def _run_one(cfg: ScenarioConfig, out: Path, stem: str) -> dict:
    res = simulate(cfg)
    write_csv(res.series, out / f"{stem}.csv")
    write_class_csv(res.series, out / f"{stem}_classes.csv")
    lt = {}
    for p in cfg.thresholds:
        try:
            lt[f"lifetime_{p:g}"] = lifetime(res.series, p)
        except NeverCovered:
            lt[f"lifetime_{p:g}"] = 0
    write_manifest(cfg, out / f"{stem}.json", intervals=len(res.series), **lt)
    return {"n_sensors": cfg.n_sensors, "algo": cfg.algo, "seed": cfg.seed, **lt}


def cmd_simulate(args) -> int:
    cfg = from_mapping(_base_values(args))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    row = _run_one(cfg, out, "metrics")
    print(" ".join(f"{k}={v}" for k, v in row.items()))
    return 0


def _seed_list(text: str) -> list[int]:
    seeds = []
    for part in text.split(","):
        lo, _, hi = part.partition("-")
        seeds.extend(range(int(lo), int(hi) + 1) if hi else [int(lo)])
    return seeds


def _sweep_job(job):
    values, out, stem = job
    return _run_one(from_mapping(values), Path(out), stem)


def cmd_sweep(args) -> int:
    base = _base_values(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    algos = args.algos.split(",") if args.algos else [base.get("algo", "sara")]
    sizes = [int(x) for x in args.n.split(",")] if args.n else [None]
    jobs = []
    for n in sizes:
        for algo in algos:
            for seed in _seed_list(args.seeds):
                v = dict(base, algo=algo, seed=str(seed))
                if n is not None:
                    v["n_sensors"] = str(n)
                from_mapping(v)  # fail fast on bad combinations
                jobs.append((v, str(out), f"{algo}_n{v.get('n_sensors', 'cfg')}_s{seed}"))
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as ex:
            rows = list(ex.map(_sweep_job, jobs))
    else:
        rows = [_sweep_job(j) for j in jobs]
    with (out / "summary.csv").open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"{len(rows)} runs written to {out}")
    return 0


def cmd_render(args) -> int:
    cfg = from_mapping(_base_values(args))
    res = simulate(cfg.replace(max_intervals=args.interval + 1), snapshot_at=[args.interval])
    snap = res.snapshots.get(args.interval)
    if snap is None:
        print(f"simulation ended before interval {args.interval}", file=sys.stderr)
        return 1
    net = res.deployment.network
    render_svg(net.positions, snap.cover.radii, snap.cover.awake & snap.alive, net.aoi,
               args.out, fixed=net.fixed)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sarasim", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value scenario file")
        sp.add_argument("--preset", choices=sorted(PRESETS))
        sp.add_argument("--seed", type=int)
        sp.add_argument("--algo", choices=ALGORITHMS)
        sp.add_argument("--pitch", type=float, help="coverage grid pitch in metres")
        sp.add_argument("--k", help="iteration cap per protocol run, or 'none'")
        sp.add_argument("--alpha", choices=["energy_gain", "residual_energy", "residual_lifetime"])

    s = sub.add_parser("simulate", help="one lifetime simulation")
    common(s)
    s.add_argument("--out", default="out", help="output directory")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("sweep", help="many seeds, sizes and algorithms")
    common(s)
    s.add_argument("--seeds", default="0-9", help="e.g. 0-9 or 1,4,7")
    s.add_argument("--n", help="comma separated sensor counts")
    s.add_argument("--algos", help="comma separated algorithms")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default="sweep")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("render", help="SVG of the configuration at one interval")
    common(s)
    s.add_argument("--interval", type=int, default=0)
    s.add_argument("--out", default="snapshot.svg")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
