"""PDE coefficient data and the mixed-derivative feasibility conditions.

The parabolic problems handled here have the form

    u_tau + sum_i a_i u_{x_i x_i} + sum_{i<j} b_ij u_{x_i x_j}
          + sum_i c_i u_{x_i} = g,       a_i < 0,

with space- and time-dependent coefficients.  A fourth-order compact
discretization exists only when, for every pair (i, j), either b_ij vanishes
or the step sizes satisfy (dx_j / dx_i)^2 = a_j / a_i throughout the interior;
``check_hoc_conditions`` verifies exactly that on a concrete grid.

Coefficient derivatives are supplied as analytic closures (the compact-scheme
weights consume exact partials; silently substituting finite differences
would degrade the fourth-order accuracy).  ``finite_difference_derivative_check``
guards user-supplied closures against each other.

All closures take ``(x, tau)`` where ``x`` is a tuple of per-axis coordinates;
scalar and ndarray coordinates are both accepted, so the same closures serve
point probes and vectorized whole-grid evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .grid import Grid

Closure = Callable[..., object]


class ParabolicityError(ValueError):
    """Some a_i is >= 0 somewhere it was sampled."""


def zero_closure(x, tau):
    return 0.0


def constant_closure(value: float) -> Closure:
    v = float(value)
    return lambda x, tau: v


def _axes_key(axes) -> tuple[int, ...]:
    axes = tuple(int(k) for k in axes)
    if len(axes) == 2 and axes[0] > axes[1]:
        axes = (axes[1], axes[0])
    return axes


@dataclass
class CoefficientField:
    """The coefficient functions of one PDE plus their partial derivatives.

    ``a`` and ``c`` hold one closure per axis, ``b`` maps axis pairs (i, j)
    with i < j to closures, ``g`` is the source.  ``derivs`` maps slot keys to
    closures; omitted slots default to zero:

        ("a", i, (k,))     first partial of a_i w.r.t. x_k
        ("a", i, (k, p))   second partial (k <= p); likewise for "b" and "c"
        ("b", i, j, (k,)) / ("b", i, j, (k, p))
        ("c", i, (k,)) / ("c", i, (k, p))
        ("g", (k,)) / ("g", (k, p))

    The time-dependence flags let the integrator reuse assembled matrices:
    ``coeffs_time_dependent`` covers a, b, c; ``g_time_dependent`` covers g.
    """

    dim: int
    a: tuple[Closure, ...]
    b: dict[tuple[int, int], Closure] = dc_field(default_factory=dict)
    c: tuple[Closure, ...] = ()
    g: Closure = zero_closure
    derivs: dict[tuple, Closure] = dc_field(default_factory=dict)
    coeffs_time_dependent: bool = False
    g_time_dependent: bool = False

    def __post_init__(self):
        if len(self.a) != self.dim:
            raise ValueError("need one diffusion closure per axis")
        if not self.c:
            self.c = tuple(zero_closure for _ in range(self.dim))
        if len(self.c) != self.dim:
            raise ValueError("need one convection closure per axis")
        for (i, j) in self.b:
            if not 0 <= i < j < self.dim:
                raise ValueError(f"bad mixed-derivative pair {(i, j)}")
        normalized = {}
        for key, fn in self.derivs.items():
            kind = key[0]
            if kind == "b":
                normalized[("b", key[1], key[2], _axes_key(key[3]))] = fn
            elif kind in ("a", "c"):
                normalized[(kind, key[1], _axes_key(key[2]))] = fn
            elif kind == "g":
                normalized[("g", _axes_key(key[1]))] = fn
            else:
                raise ValueError(f"unknown derivative slot {key}")
        self.derivs = normalized

    def b_fn(self, i: int, j: int) -> Closure:
        return self.b.get((i, j), zero_closure)

    def deriv(self, kind: str, *index_and_axes) -> Closure:
        *index, axes = index_and_axes
        key = (kind, *index, _axes_key(axes))
        return self.derivs.get(key, zero_closure)

    def restrict(self, fixed: dict[int, float]) -> "CoefficientField":
        """Field of the reduced PDE on a boundary face.

        The axes in ``fixed`` are pinned to the given coordinates and their
        second-derivative, mixed and convection terms are dropped; remaining
        axes are renumbered in increasing order.  This is the dimension
        reduction used for boundary conditions.
        """
        free = [k for k in range(self.dim) if k not in fixed]
        if not free:
            raise ValueError("cannot restrict away every axis")
        old_of_new = {new: old for new, old in enumerate(free)}

        def lift(fn: Closure) -> Closure:
            def wrapped(x, tau, _fn=fn):
                full = [None] * self.dim
                for new, old in old_of_new.items():
                    full[old] = x[new]
                for old, val in fixed.items():
                    full[old] = val
                return _fn(tuple(full), tau)

            return wrapped

        new_b = {}
        for (i, j), fn in self.b.items():
            if i in free and j in free:
                new_b[(free.index(i), free.index(j))] = lift(fn)
        new_derivs = {}
        for key, fn in self.derivs.items():
            kind = key[0]
            axes = key[-1]
            if any(ax not in free for ax in axes):
                continue
            new_axes = _axes_key(tuple(free.index(ax) for ax in axes))
            if kind == "g":
                new_derivs[("g", new_axes)] = lift(fn)
            elif kind == "b":
                _, i, j, _ = key
                if i in free and j in free:
                    new_derivs[("b", free.index(i), free.index(j), new_axes)] = lift(fn)
            else:
                _, i, _ = key
                if i in free:
                    new_derivs[(kind, free.index(i), new_axes)] = lift(fn)
        return CoefficientField(
            dim=len(free),
            a=tuple(lift(self.a[k]) for k in free),
            b=new_b,
            c=tuple(lift(self.c[k]) for k in free),
            g=lift(self.g),
            derivs=new_derivs,
            coeffs_time_dependent=self.coeffs_time_dependent,
            g_time_dependent=self.g_time_dependent,
        )


@dataclass
class CoefficientSample:
    """All coefficient and derivative values at one evaluation point.

    Leaves are floats for point sampling or ndarrays for bulk evaluation.
    Layout: ``da[i][k]`` is the first partial of a_i w.r.t. x_k, ``d2a[i][k][p]``
    the second (stored symmetrically); ``db``/``d2b`` are keyed by pair.
    """

    dim: int
    x: tuple
    tau: object
    a: list
    da: list
    d2a: list
    b: dict
    db: dict
    d2b: dict
    c: list
    dc: list
    d2c: list
    g: object
    dg: list
    d2g: list

    @property
    def a_shared(self):
        """The common diffusion coefficient (equal-a HOC branch)."""
        return self.a[0]


def sample(field: CoefficientField, x, tau, parts: str = "all") -> CoefficientSample:
    """Evaluate the closures of ``field`` once at (x, tau).

    ``parts="source"`` fills only what the discrete source expression reads
    (a, its first partials, b, c, g and the g partials), zeroing the rest;
    the default evaluates everything.  Raises ParabolicityError when any
    a_i >= 0 at the sampled point(s).
    """
    if parts not in ("all", "source"):
        raise ValueError(f"unknown parts {parts!r}")
    full = parts == "all"
    n = field.dim
    x = tuple(x)
    if len(x) != n:
        raise ValueError(f"point arity {len(x)} != dim {n}")

    a = [field.a[i](x, tau) for i in range(n)]
    for i, ai in enumerate(a):
        if not np.all(np.asarray(ai) < 0.0):
            raise ParabolicityError(f"a_{i} >= 0 at sampled point(s)")

    zeros_m = [[0.0] * n for _ in range(n)]
    da = [[field.deriv("a", i, (k,))(x, tau) for k in range(n)] for i in range(n)]
    d2a = [
        [[field.deriv("a", i, (k, p))(x, tau) for p in range(n)] for k in range(n)]
        if full else [row[:] for row in zeros_m]
        for i in range(n)
    ]
    b, db, d2b = {}, {}, {}
    for i in range(n):
        for j in range(i + 1, n):
            b[(i, j)] = field.b_fn(i, j)(x, tau)
            db[(i, j)] = (
                [field.deriv("b", i, j, (k,))(x, tau) for k in range(n)] if full else [0.0] * n
            )
            d2b[(i, j)] = (
                [[field.deriv("b", i, j, (k, p))(x, tau) for p in range(n)] for k in range(n)]
                if full else [row[:] for row in zeros_m]
            )
    c = [field.c[i](x, tau) for i in range(n)]
    dc = [
        [field.deriv("c", i, (k,))(x, tau) for k in range(n)] if full else [0.0] * n
        for i in range(n)
    ]
    d2c = [
        [[field.deriv("c", i, (k, p))(x, tau) for p in range(n)] for k in range(n)]
        if full else [row[:] for row in zeros_m]
        for i in range(n)
    ]
    g = field.g(x, tau)
    dg = [field.deriv("g", (k,))(x, tau) for k in range(n)]
    d2g = [[field.deriv("g", (k, p))(x, tau) for p in range(n)] for k in range(n)]

    return CoefficientSample(
        dim=n, x=x, tau=tau,
        a=a, da=da, d2a=d2a,
        b=b, db=db, d2b=d2b,
        c=c, dc=dc, d2c=d2c,
        g=g, dg=dg, d2g=d2g,
    )


@dataclass(frozen=True)
class PairVerdict:
    kind: str  # 'mixed_zero' | 'ratio_matched' | 'violated'
    max_deviation: float = 0.0


@dataclass(frozen=True)
class HocFeasibilityReport:
    feasible: bool
    verdicts: dict[tuple[int, int], PairVerdict]
    equal_a_required: bool


def _interior_mesh(grid: Grid):
    axes = [grid.axis_nodes(k)[1:-1] for k in range(grid.dim)]
    return np.meshgrid(*axes, indexing="ij")


def check_hoc_conditions(
    field: CoefficientField,
    grid: Grid,
    tau_samples,
    mixed_tol: float = 1e-12,
    ratio_tol: float = 1e-10,
) -> HocFeasibilityReport:
    """Check, pair by pair, the mixed-derivative feasibility condition.

    A pair (i, j) passes as 'mixed_zero' when |b_ij| <= mixed_tol at every
    interior node and sampled time; otherwise as 'ratio_matched' when
    |a_j/a_i - (dx_j/dx_i)^2| <= ratio_tol everywhere sampled; otherwise it is
    'violated' and carries the worst deviation.  Sampling is exhaustive over
    the interior nodes of the supplied grid.  Works in any dimension n >= 2.
    """
    if field.dim != grid.dim:
        raise ValueError("field and grid dimension mismatch")
    mesh = _interior_mesh(grid)
    x = tuple(mesh)
    verdicts: dict[tuple[int, int], PairVerdict] = {}
    for i in range(field.dim):
        for j in range(i + 1, field.dim):
            max_b = 0.0
            for tau in tau_samples:
                max_b = max(max_b, float(np.max(np.abs(field.b_fn(i, j)(x, tau)))))
            if max_b <= mixed_tol:
                verdicts[(i, j)] = PairVerdict("mixed_zero")
                continue
            step_ratio = (grid.steps[j] / grid.steps[i]) ** 2
            dev = 0.0
            for tau in tau_samples:
                ai = np.asarray(field.a[i](x, tau), dtype=float)
                aj = np.asarray(field.a[j](x, tau), dtype=float)
                dev = max(dev, float(np.max(np.abs(aj / ai - step_ratio))))
            if dev <= ratio_tol:
                verdicts[(i, j)] = PairVerdict("ratio_matched", dev)
            else:
                verdicts[(i, j)] = PairVerdict("violated", dev)
    feasible = all(v.kind != "violated" for v in verdicts.values())
    equal_a_required = any(v.kind != "mixed_zero" for v in verdicts.values())
    return HocFeasibilityReport(feasible, verdicts, equal_a_required)


def finite_difference_derivative_check(
    field: CoefficientField, x, tau, h_fd: float
) -> float:
    """Worst relative discrepancy between supplied partials and central FD.

    Every derivative slot the compact scheme can consume is checked, including
    those defaulting to zero, so omitted nonzero derivatives are caught.  The
    point must sit at least h_fd inside the domain of every closure.
    """
    n = field.dim
    x = tuple(float(v) for v in x)

    def fd1(fn, k):
        xp = list(x); xp[k] += h_fd
        xm = list(x); xm[k] -= h_fd
        return (fn(tuple(xp), tau) - fn(tuple(xm), tau)) / (2 * h_fd)

    def fd2(fn, k, p):
        if k == p:
            xp = list(x); xp[k] += h_fd
            xm = list(x); xm[k] -= h_fd
            return (fn(tuple(xp), tau) - 2 * fn(x, tau) + fn(tuple(xm), tau)) / h_fd**2
        xpp = list(x); xpp[k] += h_fd; xpp[p] += h_fd
        xpm = list(x); xpm[k] += h_fd; xpm[p] -= h_fd
        xmp = list(x); xmp[k] -= h_fd; xmp[p] += h_fd
        xmm = list(x); xmm[k] -= h_fd; xmm[p] -= h_fd
        return (
            fn(tuple(xpp), tau) - fn(tuple(xpm), tau)
            - fn(tuple(xmp), tau) + fn(tuple(xmm), tau)
        ) / (4 * h_fd**2)

    def rel(est, sup):
        scale = max(abs(est), abs(sup))
        return abs(est - sup) / scale if scale > 1e-14 else 0.0

    worst = 0.0
    targets = [("a", i, field.a[i]) for i in range(n)]
    targets += [("c", i, field.c[i]) for i in range(n)]
    targets += [("b", (i, j), field.b_fn(i, j)) for (i, j) in field.b]
    targets += [("g", None, field.g)]
    for kind, index, fn in targets:
        for k in range(n):
            if kind == "g":
                supplied = field.deriv("g", (k,))(x, tau)
            elif kind == "b":
                supplied = field.deriv("b", index[0], index[1], (k,))(x, tau)
            else:
                supplied = field.deriv(kind, index, (k,))(x, tau)
            worst = max(worst, rel(fd1(fn, k), supplied))
            for p in range(k, n):
                if kind == "g":
                    supplied = field.deriv("g", (k, p))(x, tau)
                elif kind == "b":
                    supplied = field.deriv("b", index[0], index[1], (k, p))(x, tau)
                else:
                    supplied = field.deriv(kind, index, (k, p))(x, tau)
                worst = max(worst, rel(fd2(fn, k, p), supplied))
    return worst
