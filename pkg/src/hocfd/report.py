"""Delimited output and figure rendering for experiment results.

CSV files are the primary product: fixed column sets, full-precision floats,
bitwise-reproducible for a fixed configuration and seed except for the
runtime column, which is documented as exempt.  Each CSV is accompanied by a
JSON run manifest (configuration echo, seed, package versions, wall time).
Figures are rendered as PNG files next to the CSV when plotting is enabled;
image bytes are not part of the reproducibility contract.
"""

from __future__ import annotations

import csv
import json
import platform
import time
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from . import __version__
from .harness import NORMS, ConvergenceResult
from .stability import StabilityReport

CONVERGENCE_COLUMNS = ["n_cells", "h", "arm", "err_linf", "err_rel_l2", "runtime_seconds", "note"]
ORDER_COLUMNS = ["arm", "norm", "fitted_order"]
STABILITY_COLUMNS = ["dim", "a", "b", "c", "h", "lambda", "k", "max_violation", "argmax_z"]


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_convergence_csv(path, result: ConvergenceResult) -> None:
    path = Path(path)
    with path.open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CONVERGENCE_COLUMNS)
        for r in result.rows:
            w.writerow([
                r.n_cells, _fmt(r.h), r.arm,
                _fmt(r.errors.get("linf", float("nan"))),
                _fmt(r.errors.get("rel_l2", float("nan"))),
                _fmt(r.runtime_seconds), r.note,
            ])
    with order_path(path).open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(ORDER_COLUMNS)
        for (arm, norm), order in sorted(result.orders.items()):
            w.writerow([arm, norm, _fmt(order)])


def order_path(csv_path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.stem + "_orders" + p.suffix)


def write_stability_csv(path, report: StabilityReport, dim: int) -> None:
    with Path(path).open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(STABILITY_COLUMNS)
        for r in report.records:
            w.writerow([
                dim, _fmt(r.a),
                ";".join(f"{i}{j}:{_fmt(v)}" for (i, j), v in sorted(r.b.items())),
                ";".join(_fmt(v) for v in r.c),
                _fmt(r.h), _fmt(r.lam), _fmt(r.k),
                _fmt(r.max_violation),
                ";".join(_fmt(z) for z in r.argmax_z),
            ])


def write_manifest(csv_path, config: dict, seed: int, wall_seconds: float, extra: dict | None = None) -> Path:
    p = Path(csv_path)
    out = p.with_name(p.stem + "_manifest.json")
    payload = {
        "config": config,
        "seed": seed,
        "versions": {
            "hocfd": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "wall_seconds": wall_seconds,
        "written_at_unix": time.time(),
    }
    if extra:
        payload.update(extra)
    out.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return out


def plot_convergence(result: ConvergenceResult, path, title: str = "") -> None:
    """Log-log error-versus-resolution figure, one panel per norm."""
    fig, axes = plt.subplots(1, len(NORMS), figsize=(10, 4))
    styles = {"hoc": "o-", "baseline": "s--"}
    for ax, norm in zip(np.atleast_1d(axes), NORMS):
        for arm in ("hoc", "baseline"):
            pts = sorted(
                (r.n_cells, r.errors[norm]) for r in result.rows
                if r.arm == arm and norm in r.errors
            )
            if not pts:
                continue
            n, e = zip(*pts)
            label = arm
            if (arm, norm) in result.orders:
                label += f" (order {result.orders[(arm, norm)]:.2f})"
            ax.loglog(n, e, styles[arm], label=label)
        ax.set_xlabel("cells per axis")
        ax.set_ylabel({"linf": "max error", "rel_l2": "relative l2 error"}[norm])
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def plot_stability(report: StabilityReport, path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    viol = [r.max_violation for r in report.records]
    ax.semilogy(np.maximum(np.abs(viol), 1e-18), ".", ms=4)
    ax.axhline(1e-12, color="r", lw=1, label="tolerance 1e-12")
    ax.set_xlabel("scan record")
    ax.set_ylabel("|max(|G|^2 - 1)|")
    ax.legend()
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def plot_smoothing_points(grid, selected, kink_flags, path, title: str = "") -> None:
    """Scatter of the smoothing node set over the flagged-cell band (2-D only)."""
    if grid.dim != 2:
        raise ValueError("smoothing preview plots are 2-D only")
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = grid.axis_nodes(0)
    ys = grid.axis_nodes(1)
    cells = np.argwhere(kink_flags)
    for i, j in cells:
        ax.add_patch(plt.Rectangle((xs[i], ys[j]), xs[i + 1] - xs[i], ys[j + 1] - ys[j],
                                   color="orange", alpha=0.4, lw=0))
    if selected:
        pts = np.array([grid.node_coords(p) for p in selected])
        ax.plot(pts[:, 0], pts[:, 1], "k.", ms=3, label="smoothed nodes")
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_aspect("equal")
    ax.legend(loc="upper right")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
