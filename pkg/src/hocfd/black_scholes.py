"""Multi-asset Black-Scholes power-put pricing as a transformed parabolic problem.

Under the log-price transform

    x_i = gamma ln(S_i / K) / sigma_i,   tau = T - t,   u = e^{r tau} V / K,

the n-asset Black-Scholes equation becomes a constant-diffusion problem of
the class this package discretizes, with

    a_i = -gamma^2 / 2,   b_ij = -gamma^2 rho_ij,   c_i = gamma varsigma_i,
    varsigma_i = sigma_i / 2 - (r - delta_i) / sigma_i,   g = 0.

All a_i coincide, so the step-size feasibility condition holds with a common
h and the fourth-order compact scheme applies in any dimension.  Space
dependence enters only through state-dependent continuous dividends
delta_i(S_i) (a tanh ramp), which feeds c_i and its first two derivatives.

The payoff max(K - sum omega_i S_i, 0)^p transforms to the initial data

    u(x, 0) = K^{p-1} max(1 - sum omega_i e^{sigma_i x_i / gamma}, 0)^p,

kinked on the surface sum omega_i e^{sigma_i x_i / gamma} = 1.

Boundary faces reduce the PDE by dropping the pinned axes (asset hitting 0
or the far truncation behaves the same way for a put), which is exactly the
generic reduced-scheme boundary policy; corners freeze the initial value.

``mc_reference`` prices by risk-neutral Monte Carlo with exact log-normal
terminal sampling, as an oracle independent of the PDE path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import Grid, build_grid
from .pde_model import CoefficientField, constant_closure, zero_closure
from .time_integrator import ReducedSchemePolicy


class MarketError(ValueError):
    pass


@dataclass(frozen=True)
class TanhDividend:
    """Continuous dividend rising smoothly from 0 toward delta_star around s_star."""

    delta_star: float
    zeta: float
    s_star: float

    def rate(self, s):
        z = self.zeta
        return 0.5 * self.delta_star * (np.tanh(z * (s - self.s_star)) - math.tanh(-z * self.s_star))

    def rate_ds(self, s):
        return 0.5 * self.delta_star * self.zeta * _sech2(self.zeta * (s - self.s_star))

    def rate_dss(self, s):
        u = self.zeta * (s - self.s_star)
        return -self.delta_star * self.zeta**2 * _sech2(u) * np.tanh(u)


def _sech2(u):
    # stable for large |u|: sech^2(u) = 4 e^{-2|u|} / (1 + e^{-2|u|})^2
    e = np.exp(-2.0 * np.abs(u))
    return 4.0 * e / (1.0 + e) ** 2


@dataclass(frozen=True)
class MarketParams:
    n: int
    sigma: tuple[float, ...]
    rho: dict[tuple[int, int], float]
    r: float
    delta: tuple  # per asset: float or TanhDividend
    omega: tuple[float, ...]
    strike: float
    maturity: float
    power: int = 1
    gamma: float = 0.25

    def __post_init__(self):
        if not (len(self.sigma) == len(self.delta) == len(self.omega) == self.n):
            raise MarketError("per-asset parameter length mismatch")
        if any(s <= 0 for s in self.sigma):
            raise MarketError("volatilities must be positive")
        if abs(sum(self.omega) - 1.0) > 1e-12:
            raise MarketError("asset weights must sum to one")
        if self.strike <= 0 or self.maturity <= 0:
            raise MarketError("need positive strike and maturity")
        if self.power < 1 or int(self.power) != self.power:
            raise MarketError("power must be a positive integer")
        if self.gamma <= 0:
            raise MarketError("scaling parameter must be positive")
        corr = self.correlation_matrix()
        if np.min(np.linalg.eigvalsh(corr)) < -1e-10:
            raise MarketError("correlation matrix is not positive semidefinite")

    def correlation_matrix(self) -> np.ndarray:
        corr = np.eye(self.n)
        for (i, j), v in self.rho.items():
            if not -1.0 < v < 1.0:
                raise MarketError(f"correlation rho[{i},{j}]={v} outside (-1, 1)")
            corr[i, j] = corr[j, i] = v
        return corr

    def varsigma(self, i: int, s=None):
        """sigma_i/2 - (r - delta_i)/sigma_i; for tanh dividends at price s."""
        d = self.delta[i]
        rate = d.rate(s) if isinstance(d, TanhDividend) else d
        return self.sigma[i] / 2.0 - (self.r - rate) / self.sigma[i]


@dataclass
class TransformedProblem:
    market: MarketParams
    field: CoefficientField
    bounds: tuple[tuple[float, float], ...]

    def build_grid(self, cells_per_axis: int) -> Grid:
        return build_grid(self.bounds, [cells_per_axis] * self.market.n)

    def x_from_s(self, s, i: int):
        mp = self.market
        return mp.gamma * np.log(np.asarray(s) / mp.strike) / mp.sigma[i]

    def s_from_x(self, x, i: int):
        mp = self.market
        return mp.strike * np.exp(mp.sigma[i] * np.asarray(x) / mp.gamma)

    def u0(self, x):
        return payoff_u0(self.market, x)

    def to_price(self, u, tau):
        """Option values V from scheme values u at backward time tau."""
        return self.market.strike * np.exp(-self.market.r * tau) * np.asarray(u)

    def from_price(self, v, tau):
        return np.exp(self.market.r * tau) * np.asarray(v) / self.market.strike


def default_x_bounds(mp: MarketParams, s_span: float = 4.0) -> tuple[tuple[float, float], ...]:
    """Symmetric cubic box [-L, L]^n in x.

    L is set from the least volatile asset so every asset's price range
    covers at least [K / s_span, K * s_span]; with one shared L the common
    step size required by the mixed-derivative feasibility condition can use
    the same cell count on every axis.  The default span keeps the strike
    many diffusion standard deviations away from the truncation (the far
    boundary's influence there is far below discretization error) while the
    practical grids stay inside the scheme's asymptotic range.
    """
    half = mp.gamma * math.log(s_span) / min(mp.sigma)
    return tuple((-half, half) for _ in range(mp.n))


def transform(mp: MarketParams, x_bounds=None) -> TransformedProblem:
    """Coefficient field of the transformed equation on the given x-box."""
    n = mp.n
    gam = mp.gamma
    a = constant_closure(-0.5 * gam * gam)
    b = {}
    for i in range(n):
        for j in range(i + 1, n):
            rho = mp.rho.get((i, j), 0.0)
            if rho != 0.0:
                b[(i, j)] = constant_closure(-gam * gam * rho)
    c = []
    derivs = {}
    for i in range(n):
        d = mp.delta[i]
        if isinstance(d, TanhDividend):
            def ci(x, tau, i=i, d=d):
                s = mp.strike * np.exp(mp.sigma[i] * np.asarray(x[i]) / gam)
                return gam * (mp.sigma[i] / 2.0 - (mp.r - d.rate(s)) / mp.sigma[i])

            def ci_1(x, tau, i=i, d=d):
                s = mp.strike * np.exp(mp.sigma[i] * np.asarray(x[i]) / gam)
                return s * d.rate_ds(s)

            def ci_11(x, tau, i=i, d=d):
                s = mp.strike * np.exp(mp.sigma[i] * np.asarray(x[i]) / gam)
                return (mp.sigma[i] * s / gam) * (d.rate_ds(s) + s * d.rate_dss(s))

            c.append(ci)
            derivs[("c", i, (i,))] = ci_1
            derivs[("c", i, (i, i))] = ci_11
        else:
            c.append(constant_closure(gam * mp.varsigma(i)))
    fld = CoefficientField(
        dim=n, a=tuple(a for _ in range(n)), b=b, c=tuple(c),
        g=zero_closure, derivs=derivs,
        coeffs_time_dependent=False, g_time_dependent=False,
    )
    bounds = tuple(x_bounds) if x_bounds is not None else default_x_bounds(mp)
    return TransformedProblem(market=mp, field=fld, bounds=bounds)


def payoff_u0(mp: MarketParams, x):
    """Transformed power-put payoff K^{p-1} max(1 - sum w_i e^{sigma_i x_i / gamma}, 0)^p."""
    basket = basket_moneyness(mp, x)
    core = np.maximum(1.0 - basket, 0.0)
    return mp.strike ** (mp.power - 1) * core**mp.power


def basket_moneyness(mp: MarketParams, x):
    """sum omega_i e^{sigma_i x_i / gamma} (equals sum omega_i S_i / K)."""
    total = 0.0
    for i in range(mp.n):
        total = total + mp.omega[i] * np.exp(mp.sigma[i] * np.asarray(x[i]) / mp.gamma)
    return total


def kink_cell_predicate(mp: MarketParams):
    """Cell flags for smoothing: a cell is flagged when the payoff kink surface
    sum omega_i e^{sigma_i x_i / gamma} = 1 separates its corners."""

    def flags(grid: Grid) -> np.ndarray:
        mesh = np.meshgrid(*(grid.axis_nodes(k) for k in range(grid.dim)), indexing="ij")
        positive = basket_moneyness(mp, mesh) > 1.0
        any_pos = np.zeros(tuple(grid.counts), dtype=bool)
        all_pos = np.ones(tuple(grid.counts), dtype=bool)
        for corner in np.ndindex(*(2,) * grid.dim):
            sel = tuple(slice(c, c + grid.counts[k]) for k, c in enumerate(corner))
            any_pos |= positive[sel]
            all_pos &= positive[sel]
        return any_pos & ~all_pos

    return flags


def boundary_policy(mp: MarketParams) -> ReducedSchemePolicy:
    """Faces and edges solve the dimension-reduced equation; corners freeze u0.

    Pinning S_i = 0 or S_i = S_i^max simply drops axis i from the equation
    for a put, so one policy covers every lower/upper combination.
    """
    return ReducedSchemePolicy()


def mc_reference(
    mp: MarketParams, s0, paths: int, seed: int, batch_size: int = 250_000
) -> tuple[float, float]:
    """Monte Carlo price and standard error at spot vector ``s0``.

    Exact log-normal terminal sampling under the risk-neutral measure with
    Cholesky-correlated normals; deterministic for a given seed through
    counter-based per-batch substreams.  Requires constant dividends and
    paths >= 10^4.
    """
    if paths < 10_000:
        raise MarketError("need at least 1e4 paths for a meaningful reference")
    if any(isinstance(d, TanhDividend) for d in mp.delta):
        raise MarketError("mc_reference supports constant dividends only")
    s0 = np.asarray(s0, dtype=float)
    if s0.shape != (mp.n,):
        raise MarketError("spot vector length mismatch")
    corr = mp.correlation_matrix()
    w, v = np.linalg.eigh(corr)
    chol = v @ np.diag(np.sqrt(np.maximum(w, 0.0))) @ v.T  # PSD-safe factor
    t = mp.maturity
    sig = np.asarray(mp.sigma)
    drift = (mp.r - np.asarray(mp.delta, dtype=float) - 0.5 * sig**2) * t
    disc = math.exp(-mp.r * t)

    ss = np.random.SeedSequence(seed)
    n_batches = (paths + batch_size - 1) // batch_size
    children = ss.spawn(n_batches)
    total = 0.0
    total_sq = 0.0
    done = 0
    for child in children:
        m = min(batch_size, paths - done)
        rng = np.random.Generator(np.random.Philox(child))
        z = rng.standard_normal((m, mp.n)) @ chol.T
        st = s0 * np.exp(drift + sig * math.sqrt(t) * z)
        pay = disc * np.maximum(mp.strike - st @ np.asarray(mp.omega), 0.0) ** mp.power
        total += float(pay.sum())
        total_sq += float((pay**2).sum())
        done += m
    mean = total / paths
    var = max(total_sq / paths - mean**2, 0.0) * paths / max(paths - 1, 1)
    return mean, math.sqrt(var / paths)
