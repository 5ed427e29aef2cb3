"""Reproducible experiment driver: convergence studies, order fits, scans.

Convergence experiments solve one problem on a doubling sequence of grids,
take the finest level of the fourth-order arm as the reference solution,
restrict it to the shared nodes of each coarser grid (the cell counts must
nest), and fit the order as minus the least-squares slope of log(error)
against log(cells per axis).  Manufactured runs compare against the known
exact solution instead of a reference grid.  All experiments are
deterministic for a fixed configuration and seed; wall-clock runtimes are
reported in a separate column that is excluded from that contract.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import black_scholes as bs
from .grid import Grid, build_grid
from .linear_algebra import SolverConfig
from .manufactured import manufactured_problem
from .smoothing import detect_smoothing_points, smooth_initial
from .stability import StabilityReport, scan_stability
from .time_integrator import DiscreteProblem, ExactDirichletPolicy, run


class ConfigError(ValueError):
    pass


class ExperimentError(RuntimeError):
    pass


NORMS = ("linf", "rel_l2")
KINDS = ("convergence_2d", "convergence_3d", "dividend_tanh_2d", "stability_scan", "manufactured")


@dataclass
class ExperimentConfig:
    kind: str
    grids: list[int] = field(default_factory=list)
    mesh_ratio: float = 0.4
    arms: tuple[str, ...] = ("hoc", "baseline")
    smoothing: bool = True
    seed: int = 0
    solver_tol: float = 1e-10
    quad_order: int = 8
    market: bs.MarketParams | None = None
    s_span: float | None = None  # price-range half-decades of the default box
    # manufactured
    dim: int = 2
    t_max: float = 0.3
    # stability scan
    scan: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; pick one of {KINDS}")
        if self.mesh_ratio <= 0:
            raise ConfigError("mesh ratio must be positive")
        for arm in self.arms:
            if arm not in ("hoc", "baseline"):
                raise ConfigError(f"unknown arm {arm!r}")
        if self.kind.startswith(("convergence", "dividend")):
            if self.market is None:
                raise ConfigError("market parameters required for pricing experiments")
            if len(self.grids) < 3:
                raise ConfigError("need at least three grid levels (finest is the reference)")
            if sorted(self.grids) != list(self.grids) or len(set(self.grids)) != len(self.grids):
                raise ConfigError("grid sequence must be strictly increasing")
            ref = self.grids[-1]
            for n in self.grids[:-1]:
                if ref % n:
                    raise ConfigError(f"reference cells {ref} must be a multiple of {n}")
        if self.kind == "manufactured":
            if len(self.grids) < 2:
                raise ConfigError("need at least two grid levels for an order fit")
            if self.dim not in (2, 3):
                raise ConfigError("manufactured experiments cover dim 2 and 3")


@dataclass
class ConvergenceRow:
    n_cells: int
    h: float
    arm: str
    errors: dict[str, float]
    runtime_seconds: float
    note: str = ""


@dataclass
class ConvergenceResult:
    rows: list[ConvergenceRow]
    orders: dict[tuple[str, str], float]  # (arm, norm) -> fitted order
    ref_arm: str | None = None
    ref_cells: int | None = None


def fit_order(n_cells, errors) -> float:
    """Minus the least-squares slope of log(error) against log(cells)."""
    n = np.asarray(n_cells, dtype=float)
    e = np.asarray(errors, dtype=float)
    keep = np.isfinite(e) & (e > 0)
    if keep.sum() < 2:
        raise ExperimentError("order fit needs at least two valid error points")
    slope = np.polyfit(np.log(n[keep]), np.log(e[keep]), 1)[0]
    return -float(slope)


def _restrict(values: np.ndarray, fine: Grid, coarse: Grid) -> np.ndarray:
    stride = fine.counts[0] // coarse.counts[0]
    sel = tuple(slice(None, None, stride) for _ in range(fine.dim))
    return values.reshape(fine.shape)[sel].ravel()


def _steps_for(t_max: float, lam: float, h: float) -> tuple[int, float]:
    n = max(1, round(t_max / (lam * h * h)))
    return n, t_max / n


def _initial_vector(tp: bs.TransformedProblem, grid: Grid, smoothing: bool, quad_order: int):
    if not smoothing:
        mesh = np.meshgrid(*(grid.axis_nodes(k) for k in range(grid.dim)), indexing="ij")
        return np.asarray(tp.u0(tuple(mesh)), dtype=float).ravel()
    points = detect_smoothing_points(bs.kink_cell_predicate(tp.market), grid)
    return smooth_initial(tp.u0, grid, points, quad_order=quad_order)


def run_convergence(cfg: ExperimentConfig) -> ConvergenceResult:
    """Solve on every grid level and arm; errors against the fine reference."""
    if cfg.kind == "manufactured":
        return run_manufactured(cfg)
    mp = cfg.market
    bounds = bs.default_x_bounds(mp, cfg.s_span) if cfg.s_span else None
    tp = bs.transform(mp, bounds)
    policy = bs.boundary_policy(mp)
    solver = SolverConfig(rel_tol=cfg.solver_tol)
    ref_arm = "hoc" if "hoc" in cfg.arms else cfg.arms[0]

    solutions: dict[tuple[str, int], np.ndarray] = {}
    grids: dict[int, Grid] = {}
    rows: list[ConvergenceRow] = []
    for n_cells in cfg.grids:
        grid = tp.build_grid(n_cells)
        grids[n_cells] = grid
        u0 = _initial_vector(tp, grid, cfg.smoothing, cfg.quad_order)
        n_steps, dt = _steps_for(mp.maturity, cfg.mesh_ratio, grid.steps[0])
        arms = tuple(cfg.arms)
        if ref_arm not in arms and n_cells == cfg.grids[-1]:
            arms = arms + (ref_arm,)
        for arm in arms:
            t0 = time.perf_counter()
            note = ""
            try:
                problem = DiscreteProblem(grid, tp.field, arm, dt, policy, u0)
                solutions[(arm, n_cells)] = run(problem, mp.maturity, solver)
            except Exception as exc:
                note = f"solve failed: {exc}"
            elapsed = time.perf_counter() - t0
            if arm in cfg.arms:
                rows.append(ConvergenceRow(n_cells, grid.steps[0], arm, {}, elapsed, note))

    ref_cells = cfg.grids[-1]
    if (ref_arm, ref_cells) not in solutions:
        raise ExperimentError("reference solve failed; no error measurements possible")
    ref_grid = grids[ref_cells]
    ref_values = solutions[(ref_arm, ref_cells)]

    for row in rows:
        if row.n_cells == ref_cells or row.note:
            continue
        sol = solutions.get((row.arm, row.n_cells))
        if sol is None:
            continue
        ref_restricted = _restrict(ref_values, ref_grid, grids[row.n_cells])
        diff = sol - ref_restricted
        row.errors = {
            "linf": float(np.max(np.abs(diff))),
            "rel_l2": float(np.linalg.norm(diff) / np.linalg.norm(ref_restricted)),
        }

    orders = {}
    for arm in cfg.arms:
        for norm in NORMS:
            pts = [(r.n_cells, r.errors[norm]) for r in rows
                   if r.arm == arm and norm in r.errors]
            if len(pts) >= 2:
                orders[(arm, norm)] = fit_order(*zip(*pts))
    return ConvergenceResult(rows, orders, ref_arm=ref_arm, ref_cells=ref_cells)


def run_manufactured(cfg: ExperimentConfig) -> ConvergenceResult:
    """Exact-solution errors at t_max for the variable-coefficient problem."""
    prob = manufactured_problem(cfg.dim)
    policy = ExactDirichletPolicy(prob.u_star)
    solver = SolverConfig(rel_tol=cfg.solver_tol)
    rows: list[ConvergenceRow] = []
    for n_cells in cfg.grids:
        grid = build_grid(prob.bounds, [n_cells] * cfg.dim)
        mesh = np.meshgrid(*(grid.axis_nodes(k) for k in range(cfg.dim)), indexing="ij")
        u0 = prob.u_star(tuple(mesh), 0.0).ravel()
        exact = prob.u_star(tuple(mesh), cfg.t_max).ravel()
        n_steps, dt = _steps_for(cfg.t_max, cfg.mesh_ratio, grid.steps[0])
        for arm in cfg.arms:
            t0 = time.perf_counter()
            note = ""
            errors = {}
            try:
                problem = DiscreteProblem(grid, prob.field, arm, dt, policy, u0)
                sol = run(problem, cfg.t_max, solver)
                diff = sol - exact
                errors = {
                    "linf": float(np.max(np.abs(diff))),
                    "rel_l2": float(np.linalg.norm(diff) / np.linalg.norm(exact)),
                }
            except Exception as exc:
                note = f"solve failed: {exc}"
            rows.append(ConvergenceRow(n_cells, grid.steps[0], arm,
                                       errors, time.perf_counter() - t0, note))
    orders = {}
    for arm in cfg.arms:
        for norm in NORMS:
            pts = [(r.n_cells, r.errors[norm]) for r in rows
                   if r.arm == arm and norm in r.errors]
            if len(pts) >= 2:
                orders[(arm, norm)] = fit_order(*zip(*pts))
    return ConvergenceResult(rows, orders)


def run_stability_scan(cfg: ExperimentConfig) -> StabilityReport:
    params = dict(cfg.scan)
    dim = int(params.pop("dim", cfg.dim))
    return scan_stability(dim, **params)


def mc_check(
    mp: bs.MarketParams,
    n_cells: int = 80,
    mesh_ratio: float = 0.4,
    paths: int = 10**6,
    seed: int = 0,
    solver_tol: float = 1e-10,
    smoothing: bool = True,
    s_span: float | None = None,
) -> dict:
    """Price at spot = strike for every asset: scheme vs Monte Carlo.

    The at-the-money point x = 0 is a grid node for even cell counts.
    Returns both prices, the Monte Carlo standard error, and the gap in
    standard-error units.
    """
    if n_cells % 2:
        raise ConfigError("even cell count required so x = 0 is a node")
    tp = bs.transform(mp, bs.default_x_bounds(mp, s_span) if s_span else None)
    grid = tp.build_grid(n_cells)
    u0 = _initial_vector(tp, grid, smoothing, 8)
    n_steps, dt = _steps_for(mp.maturity, mesh_ratio, grid.steps[0])
    problem = DiscreteProblem(grid, tp.field, "hoc", dt, bs.boundary_policy(mp), u0)
    u = run(problem, mp.maturity, SolverConfig(rel_tol=solver_tol))
    center = grid.linearize(tuple(n_cells // 2 for _ in range(mp.n)))
    pde_price = float(tp.to_price(u[center], mp.maturity))
    mc_price, mc_se = bs.mc_reference(mp, tuple(mp.strike for _ in range(mp.n)), paths, seed)
    return {
        "pde_price": pde_price,
        "mc_price": mc_price,
        "mc_se": mc_se,
        "gap_in_se": abs(pde_price - mc_price) / mc_se if mc_se > 0 else math.inf,
    }


# ---------------------------------------------------------------------------
# experiment presets matching the shipped studies
# ---------------------------------------------------------------------------

def two_asset_market(rho12: float, strike: float = 10.0, maturity: float = 0.25) -> bs.MarketParams:
    return bs.MarketParams(
        n=2, sigma=(0.25, 0.35), rho={(0, 1): rho12} if rho12 else {},
        r=math.log(1.05), delta=(0.0, 0.0), omega=(0.35, 0.65),
        strike=strike, maturity=maturity, power=1, gamma=0.25,
    )


def three_asset_market(power: int, correlated: bool = True,
                       strike: float = 10.0, maturity: float = 0.25) -> bs.MarketParams:
    rho = {(0, 1): -0.4, (0, 2): -0.1, (1, 2): -0.2} if correlated else {}
    return bs.MarketParams(
        n=3, sigma=(0.3, 0.3, 0.3), rho=rho, r=math.log(1.05),
        delta=(0.01, 0.01, 0.01), omega=(1 / 3, 1 / 3, 1 / 3),
        strike=strike, maturity=maturity, power=power, gamma=0.3,
    )


def ramp_dividend_market(rho12: float, strike: float = 10.0,
                         maturity: float = 0.25) -> bs.MarketParams:
    omega = (0.35, 0.65)
    delta = (
        bs.TanhDividend(delta_star=0.02, zeta=0.35, s_star=0.9 * strike / omega[0]),
        bs.TanhDividend(delta_star=0.01, zeta=0.5, s_star=0.9 * strike / omega[1]),
    )
    return bs.MarketParams(
        n=2, sigma=(0.25, 0.35), rho={(0, 1): rho12} if rho12 else {},
        r=math.log(1.05), delta=delta, omega=omega,
        strike=strike, maturity=maturity, power=1, gamma=0.25,
    )


# ---------------------------------------------------------------------------
# configuration parsing (JSON-friendly dicts)
# ---------------------------------------------------------------------------

def market_from_dict(d: dict) -> bs.MarketParams:
    delta = []
    for entry in d["delta"]:
        if isinstance(entry, dict):
            delta.append(bs.TanhDividend(
                delta_star=float(entry["delta_star"]),
                zeta=float(entry["zeta"]),
                s_star=float(entry["s_star"]),
            ))
        else:
            delta.append(float(entry))
    rho = {}
    for i, j, v in d.get("rho", []):
        rho[(int(i), int(j))] = float(v)
    return bs.MarketParams(
        n=int(d["n"]),
        sigma=tuple(float(s) for s in d["sigma"]),
        rho=rho,
        r=float(d["r"]),
        delta=tuple(delta),
        omega=tuple(float(w) for w in d["omega"]),
        strike=float(d["strike"]),
        maturity=float(d["maturity"]),
        power=int(d.get("power", 1)),
        gamma=float(d.get("gamma", 0.25)),
    )


def config_from_dict(d: dict) -> ExperimentConfig:
    try:
        market = market_from_dict(d["market"]) if "market" in d else None
        return ExperimentConfig(
            kind=d["kind"],
            grids=[int(n) for n in d.get("grids", [])],
            mesh_ratio=float(d.get("mesh_ratio", 0.4)),
            arms=tuple(d.get("arms", ["hoc", "baseline"])),
            smoothing=bool(d.get("smoothing", True)),
            seed=int(d.get("seed", 0)),
            solver_tol=float(d.get("solver_tol", 1e-10)),
            quad_order=int(d.get("quad_order", 8)),
            market=market,
            s_span=float(d["s_span"]) if d.get("s_span") else None,
            dim=int(d.get("dim", 2)),
            t_max=float(d.get("t_max", 0.3)),
            scan=dict(d.get("scan", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad configuration: {exc}") from exc
