"""Manufactured-solution problems for order verification.

A smooth exact solution u*(x, tau) = e^{kappa tau} prod_i sin(x_i + phi_i) is
chosen together with fully variable coefficients (space-dependent shared a,
space-dependent mixed b_ij, cross-dependent c_i), and the source g is defined
by substituting u* into the PDE.  This is the one configuration that drives
every term of the fourth-order weights, including the complete discrete
source expression, so the measured convergence order checks the whole
coefficient transcription at once.

All closures, including the coefficient partials the scheme consumes, are
generated symbolically and lambdified; hand-differentiating the ~10-term g
would be the error-prone step this module exists to avoid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .pde_model import CoefficientField


@dataclass
class ManufacturedProblem:
    dim: int
    field: CoefficientField
    bounds: tuple[tuple[float, float], ...]
    u_star: callable  # (x tuple, tau) -> exact solution values


def _wrap(expr, xs, tau):
    fn = sp.lambdify((*xs, tau), expr, modules="numpy")

    def closure(x, t, _fn=fn):
        return _fn(*x, t)

    return closure


def manufactured_problem(dim: int, kappa: float = -0.6) -> ManufacturedProblem:
    """Variable-coefficient problem with known solution on [0, 1]^dim."""
    if dim not in (1, 2, 3):
        raise ValueError("manufactured problems cover dim 1..3")
    xs = sp.symbols(f"x0:{dim}", real=True)
    tau = sp.Symbol("tau", real=True)

    phases = [0.4, 1.1, 1.9][:dim]
    u = sp.exp(kappa * tau)
    for xi, ph in zip(xs, phases):
        u *= sp.sin(xi + ph)

    a = -sp.Rational(1, 2) * (1 + sp.Rational(1, 4) * sp.sin(sum(xs)))
    b = {}
    beta = {(0, 1): 0.4, (0, 2): 0.2, (1, 2): -0.25}
    for i in range(dim):
        for j in range(i + 1, dim):
            b[(i, j)] = beta[(i, j)] * (1 + sp.Rational(3, 10) * sp.sin(xs[i] - xs[j]))
    base_c = [0.3, -0.7, 0.5]
    c = []
    for i in range(dim):
        expr = base_c[i] + sp.Rational(2, 5) * sp.sin(xs[i]) * sp.cos(xs[(i + 1) % dim])
        c.append(expr)

    g = sp.diff(u, tau)
    for i in range(dim):
        g += a * sp.diff(u, xs[i], 2)
    for (i, j), bij in b.items():
        g += bij * sp.diff(u, xs[i], xs[j])
    for i in range(dim):
        g += c[i] * sp.diff(u, xs[i])
    g = sp.expand(g)

    derivs = {}
    for i in range(dim):
        for k in range(dim):
            derivs[("a", i, (k,))] = _wrap(sp.diff(a, xs[k]), xs, tau)
            derivs[("c", i, (k,))] = _wrap(sp.diff(c[i], xs[k]), xs, tau)
            for p in range(k, dim):
                derivs[("a", i, (k, p))] = _wrap(sp.diff(a, xs[k], xs[p]), xs, tau)
                derivs[("c", i, (k, p))] = _wrap(sp.diff(c[i], xs[k], xs[p]), xs, tau)
    for (i, j), bij in b.items():
        for k in range(dim):
            derivs[("b", i, j, (k,))] = _wrap(sp.diff(bij, xs[k]), xs, tau)
            for p in range(k, dim):
                derivs[("b", i, j, (k, p))] = _wrap(sp.diff(bij, xs[k], xs[p]), xs, tau)
    for k in range(dim):
        derivs[("g", (k,))] = _wrap(sp.diff(g, xs[k]), xs, tau)
        for p in range(k, dim):
            derivs[("g", (k, p))] = _wrap(sp.diff(g, xs[k], xs[p]), xs, tau)

    field = CoefficientField(
        dim=dim,
        a=tuple(_wrap(a, xs, tau) for _ in range(dim)),
        b={key: _wrap(expr, xs, tau) for key, expr in b.items()},
        c=tuple(_wrap(ci, xs, tau) for ci in c),
        g=_wrap(g, xs, tau),
        derivs=derivs,
        coeffs_time_dependent=False,
        g_time_dependent=True,
    )
    u_fn = _wrap(u, xs, tau)
    return ManufacturedProblem(
        dim=dim,
        field=field,
        bounds=tuple((0.0, 1.0) for _ in range(dim)),
        u_star=lambda x, t: np.asarray(u_fn(x, t), dtype=float),
    )
