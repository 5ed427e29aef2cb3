"""Command-line entry point: experiments in, CSV (plus figures) out.

Subcommands::

    hocfd convergence   --config cfg.json [--out out.csv] [--arm both] [--plot]
    hocfd manufactured  --config cfg.json ...
    hocfd stability     --config cfg.json ...
    hocfd smooth-preview --config cfg.json ...
    hocfd mc-check      --config cfg.json ...

Every run writes the primary CSV, a ``*_manifest.json`` echo of the
configuration (seed, versions, wall time), and, unless ``--no-plot`` is
given, a PNG figure alongside.  Exit codes: 0 success, 2 configuration or
validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import black_scholes as bs
from . import report
from .harness import (ConfigError, ExperimentError, config_from_dict, market_from_dict,
                      mc_check, run_convergence, run_manufactured, run_stability_scan)
from .linear_algebra import LinearAlgebraError
from .smoothing import detect_smoothing_points, smooth_initial
from .time_integrator import TimeSteppingError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        cfg = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    _validate_schema(cfg)
    return cfg


def _validate_schema(cfg: dict) -> None:
    schema_path = Path(__file__).resolve().parents[2] / "docs" / "config_schema.json"
    if not schema_path.is_file():  # installed without docs tree
        return
    import jsonschema

    try:
        jsonschema.validate(cfg, json.loads(schema_path.read_text()))
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config failed schema validation: {exc.message}") from exc


def _apply_overrides(cfg: dict, args) -> dict:
    cfg = dict(cfg)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if getattr(args, "arm", None):
        cfg["arms"] = ["hoc", "baseline"] if args.arm == "both" else [args.arm]
    return cfg


def _out_path(cfg: dict, args, default_name: str) -> Path:
    out = args.out or cfg.get("out") or default_name
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_convergence(args) -> int:
    raw = _apply_overrides(_load_config(args.config), args)
    cfg = config_from_dict(raw)
    t0 = time.perf_counter()
    result = run_convergence(cfg)
    wall = time.perf_counter() - t0
    out = _out_path(raw, args, f"{cfg.kind}.csv")
    report.write_convergence_csv(out, result)
    report.write_manifest(out, raw, cfg.seed, wall)
    if args.plot:
        report.plot_convergence(result, out.with_suffix(".png"), title=cfg.kind)
    for (arm, norm), order in sorted(result.orders.items()):
        print(f"{cfg.kind}: {arm} {norm} fitted order {order:.3f}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_manufactured(args) -> int:
    raw = _apply_overrides(_load_config(args.config), args)
    raw.setdefault("kind", "manufactured")
    cfg = config_from_dict(raw)
    t0 = time.perf_counter()
    result = run_manufactured(cfg)
    wall = time.perf_counter() - t0
    out = _out_path(raw, args, "manufactured.csv")
    report.write_convergence_csv(out, result)
    report.write_manifest(out, raw, cfg.seed, wall)
    if args.plot:
        report.plot_convergence(result, out.with_suffix(".png"), title="manufactured")
    for (arm, norm), order in sorted(result.orders.items()):
        print(f"manufactured dim={cfg.dim}: {arm} {norm} fitted order {order:.3f}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_stability(args) -> int:
    raw = _apply_overrides(_load_config(args.config), args)
    raw.setdefault("kind", "stability_scan")
    cfg = config_from_dict(raw)
    scan = dict(cfg.scan)
    if "a_range" in scan and not (float(scan["a_range"][1]) < 0):
        raise ConfigError("stability scan requires a < 0 throughout the sampled range")
    t0 = time.perf_counter()
    rep = run_stability_scan(cfg)
    wall = time.perf_counter() - t0
    dim = int(cfg.scan.get("dim", cfg.dim))
    out = _out_path(raw, args, "stability_scan.csv")
    report.write_stability_csv(out, rep, dim)
    report.write_manifest(out, raw, cfg.seed, wall)
    if args.plot:
        report.plot_stability(rep, out.with_suffix(".png"), title=f"stability scan dim {dim}")
    print(f"max |G|^2 - 1 over scan: {rep.max_violation:.3e}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_smooth_preview(args) -> int:
    raw = _apply_overrides(_load_config(args.config), args)
    mp = market_from_dict(raw["market"])
    n_cells = int(raw.get("n_cells", 20))
    bounds = bs.default_x_bounds(mp, float(raw["s_span"])) if raw.get("s_span") else None
    tp = bs.transform(mp, bounds)
    grid = tp.build_grid(n_cells)
    flags = bs.kink_cell_predicate(mp)(grid)
    selected = detect_smoothing_points(flags, grid)
    smoothed = smooth_initial(tp.u0, grid, selected, quad_order=int(raw.get("quad_order", 8)))
    mesh = np.meshgrid(*(grid.axis_nodes(k) for k in range(grid.dim)), indexing="ij")
    raw_u0 = np.asarray(tp.u0(tuple(mesh)), dtype=float).ravel()
    sel_set = set(selected)
    out = _out_path(raw, args, "smooth_preview.csv")
    t0 = time.perf_counter()
    with out.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow([f"i{k}" for k in range(grid.dim)]
                   + [f"x{k}" for k in range(grid.dim)] + ["selected", "u0", "u0_smoothed"])
        for idx in grid.iter_indices():
            lin = grid.linearize(idx)
            coords = grid.node_coords(idx)
            w.writerow([*idx, *(repr(c) for c in coords), int(idx in sel_set),
                        repr(float(raw_u0[lin])), repr(float(smoothed[lin]))])
    report.write_manifest(out, raw, int(raw.get("seed", 0)), time.perf_counter() - t0,
                          extra={"selected_nodes": len(selected)})
    if args.plot and grid.dim == 2:
        report.plot_smoothing_points(grid, selected, flags, out.with_suffix(".png"),
                                     title=f"smoothing nodes, {n_cells} cells/axis")
    print(f"selected {len(selected)} of {grid.n_nodes} nodes; wrote {out}")
    return EXIT_OK


def _cmd_mc_check(args) -> int:
    raw = _apply_overrides(_load_config(args.config), args)
    mp = market_from_dict(raw["market"])
    t0 = time.perf_counter()
    res = mc_check(
        mp,
        n_cells=int(raw.get("n_cells", 80)),
        mesh_ratio=float(raw.get("mesh_ratio", 0.4)),
        paths=int(raw.get("paths", 10**6)),
        seed=int(raw.get("seed", 0)),
        solver_tol=float(raw.get("solver_tol", 1e-10)),
        smoothing=bool(raw.get("smoothing", True)),
        s_span=float(raw["s_span"]) if raw.get("s_span") else None,
    )
    wall = time.perf_counter() - t0
    out = _out_path(raw, args, "mc_check.csv")
    with out.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["pde_price", "mc_price", "mc_se", "gap_in_se"])
        w.writerow([repr(res["pde_price"]), repr(res["mc_price"]),
                    repr(res["mc_se"]), repr(res["gap_in_se"])])
    report.write_manifest(out, raw, int(raw.get("seed", 0)), wall)
    print(f"pde {res['pde_price']:.6f} vs mc {res['mc_price']:.6f} "
          f"(se {res['mc_se']:.2e}, gap {res['gap_in_se']:.2f} se)")
    print(f"wrote {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hocfd", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, has_arm in (
        ("convergence", _cmd_convergence, True),
        ("manufactured", _cmd_manufactured, True),
        ("stability", _cmd_stability, False),
        ("smooth-preview", _cmd_smooth_preview, False),
        ("mc-check", _cmd_mc_check, False),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON experiment configuration")
        p.add_argument("--out", help="output CSV path (default from config or kind)")
        p.add_argument("--seed", type=int, help="override the configured seed")
        p.add_argument("--threads", type=int, default=1,
                       help="advisory worker count, recorded in the manifest")
        if has_arm:
            p.add_argument("--arm", choices=("hoc", "baseline", "both"),
                           help="restrict scheme arms")
        p.add_argument("--plot", dest="plot", action="store_true", default=True)
        p.add_argument("--no-plot", dest="plot", action="store_false")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    if getattr(args, "threads", 1) is not None and args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, bs.MarketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ExperimentError, TimeSteppingError, LinearAlgebraError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
