"""Crank-Nicolson time stepping of the compact semi-discrete scheme.

One step solves

    sum_offsets A(x_hat, tau_{k+1}) U^{k+1} = sum_offsets B(x_hat, tau_k) U^k
                                              + (dt/2) (g~(tau_k) + g~(tau_{k+1}))

per interior node, with A = M_avg + (dt/2) K(tau_{k+1}),
B = M_avg - (dt/2) K(tau_k) and M_avg the mean of M at the two time levels.

Boundary nodes are handled through an injected policy: a face (any proper
subset of axes pinned to a bound) may carry the dimension-reduced scheme of
the same family built from the restricted coefficient field, or a Dirichlet
rule; corners are Dirichlet.  Assembly is vectorized: coefficients are
sampled on whole node blocks and the weight formulas evaluate elementwise.
Matrices are reused across steps whenever a, b, c are time-independent; the
right-hand side alone is refreshed when only g depends on time.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import Grid
from .hoc_stencil import StencilWeights, baseline_weights, hoc_g_tilde, hoc_weights
from .linear_algebra import CsrMatrix, SolverConfig, assemble_from_triplets, spmv, bicgstab
from .pde_model import CoefficientField, sample


class TimeSteppingError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# boundary rules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedPde:
    """Solve the dimension-reduced PDE of the same scheme family on this face."""


@dataclass(frozen=True)
class DirichletFrozen:
    """Hold the initial value: U^{k+1} = U^k."""


@dataclass(frozen=True)
class DirichletValue:
    """Prescribe U^{k+1} = value(x, tau_{k+1})."""

    value: Callable


class ExactDirichletPolicy:
    """Pin every boundary node to a known function (manufactured solutions)."""

    def __init__(self, value: Callable):
        self.value = value

    def rule_for(self, fixed: dict[int, str]):
        return DirichletValue(self.value)


class ReducedSchemePolicy:
    """Reduced scheme on every face and edge; corners freeze the initial value
    (the assembler turns a ReducedPde with no free axes into DirichletFrozen)."""

    def rule_for(self, fixed: dict[int, str]):
        return ReducedPde()


@dataclass
class DiscreteProblem:
    grid: Grid
    field: CoefficientField
    scheme: str  # 'hoc' | 'baseline'
    dt: float
    boundary_policy: object
    initial_values: np.ndarray

    def __post_init__(self):
        if self.scheme not in ("hoc", "baseline"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.dt < 0:
            raise ValueError("time step must be nonnegative")
        if self.scheme == "hoc" and not self.grid.is_uniform():
            raise ValueError("fourth-order scheme requires a uniform grid")
        self.initial_values = np.asarray(self.initial_values, dtype=np.float64)
        if self.initial_values.shape != (self.grid.n_nodes,):
            raise ValueError("initial vector length must equal the node count")


@dataclass
class StepMatrices:
    A: CsrMatrix
    B: CsrMatrix
    rhs_extra: np.ndarray


@dataclass
class _Group:
    fixed: dict[int, str]
    free: list[int]
    sel: tuple
    rows: np.ndarray
    rule: object  # None for the interior
    field: CoefficientField | None
    mesh: tuple
    full_mesh: tuple


class Assembler:
    """Precomputes node groups and restricted fields; emits CN matrices."""

    def __init__(self, p: DiscreteProblem):
        self.p = p
        g = p.grid
        self.lin = np.arange(g.n_nodes).reshape(g.shape)
        self.h = g.steps[0]
        self.groups: list[_Group] = []
        for states in itertools.product(("free", "min", "max"), repeat=g.dim):
            fixed = {k: s for k, s in enumerate(states) if s != "free"}
            free = [k for k, s in enumerate(states) if s == "free"]
            sel = tuple(
                slice(1, g.shape[k] - 1) if s == "free" else (0 if s == "min" else g.shape[k] - 1)
                for k, s in enumerate(states)
            )
            rows = self.lin[sel]
            rule = None
            fld = p.field
            if fixed:
                rule = p.boundary_policy.rule_for(dict(fixed))
                fld = None
                if isinstance(rule, ReducedPde):
                    if not free:
                        rule = DirichletFrozen()
                    else:
                        coords = {
                            k: (g.bounds[k][0] if side == "min" else g.bounds[k][1])
                            for k, side in fixed.items()
                        }
                        fld = p.field.restrict(coords)
            mesh = tuple(np.meshgrid(*(g.axis_nodes(k)[1:-1] for k in free), indexing="ij"))
            self.groups.append(
                _Group(fixed, free, sel, rows, rule, fld, mesh, self._full_coords(states))
            )
        self._matrix_cache: tuple[CsrMatrix, CsrMatrix] | None = None
        self._rhs_is_zero_static = False
        self._static_rhs: np.ndarray | None = None

    def _full_coords(self, states):
        """Coordinates of every node in the group, for Dirichlet value rules."""
        g = self.p.grid
        axes = []
        for k, s in enumerate(states):
            if s == "free":
                axes.append(g.axis_nodes(k)[1:-1])
            else:
                axes.append(np.array([g.bounds[k][0] if s == "min" else g.bounds[k][1]]))
        mesh = np.meshgrid(*axes, indexing="ij")
        return tuple(m.squeeze() for m in mesh)

    def _scheme_groups(self):
        for grp in self.groups:
            if grp.rule is None or isinstance(grp.rule, ReducedPde):
                yield grp

    def _weights(self, grp: _Group, tau) -> StencilWeights:
        smp = sample(grp.field, grp.mesh, tau)
        if self.p.scheme == "hoc":
            return hoc_weights(smp, self.h)
        return baseline_weights(smp, self.h)

    def matrices(self, tau_k: float) -> tuple[CsrMatrix, CsrMatrix]:
        """CN matrices A (implicit) and B (explicit) for the step at tau_k."""
        p = self.p
        static = not p.field.coeffs_time_dependent
        if static and self._matrix_cache is not None:
            return self._matrix_cache

        lo = {id(g): self._weights(g, tau_k) for g in self._scheme_groups()}
        if static:
            hi = lo
        else:
            hi = {id(g): self._weights(g, tau_k + p.dt) for g in self._scheme_groups()}

        rows_a, cols_a, vals_a = [], [], []
        rows_b, cols_b, vals_b = [], [], []
        for grp in self._scheme_groups():
            w_lo, w_hi = lo[id(grp)], hi[id(grp)]
            block_shape = grp.rows.shape
            for off in w_lo.k_weights:
                m_avg = 0.5 * (w_lo.m_weights[off] + w_hi.m_weights[off])
                a_val = m_avg + 0.5 * p.dt * w_hi.k_weights[off]
                b_val = m_avg - 0.5 * p.dt * w_lo.k_weights[off]
                nb_sel = list(grp.sel)
                for ax_pos, k in enumerate(grp.free):
                    sl = nb_sel[k]
                    nb_sel[k] = slice(sl.start + off[ax_pos], sl.stop + off[ax_pos])
                cols = self.lin[tuple(nb_sel)]
                rows_a.append(grp.rows.ravel())
                cols_a.append(cols.ravel())
                vals_a.append(np.broadcast_to(np.asarray(a_val, float), block_shape).ravel())
                rows_b.append(grp.rows.ravel())
                cols_b.append(cols.ravel())
                vals_b.append(np.broadcast_to(np.asarray(b_val, float), block_shape).ravel())

        for grp in self.groups:
            if grp.rule is None or isinstance(grp.rule, ReducedPde):
                continue
            r = np.atleast_1d(grp.rows).ravel()
            ones = np.ones(r.size)
            rows_a.append(r)
            cols_a.append(r)
            vals_a.append(ones)
            if isinstance(grp.rule, DirichletFrozen):
                rows_b.append(r)
                cols_b.append(r)
                vals_b.append(ones)
            elif not isinstance(grp.rule, DirichletValue):
                raise TimeSteppingError(f"unsupported boundary rule {grp.rule!r}")

        n = p.grid.n_nodes
        A = assemble_from_triplets(
            (np.concatenate(rows_a), np.concatenate(cols_a), np.concatenate(vals_a)), n, n)
        B = assemble_from_triplets(
            (np.concatenate(rows_b), np.concatenate(cols_b), np.concatenate(vals_b)), n, n)
        if static:
            self._matrix_cache = (A, B)
        return A, B

    def rhs(self, tau_k: float) -> np.ndarray:
        """(dt/2)(g~(tau_k) + g~(tau_k+dt)) on scheme rows; Dirichlet values."""
        p = self.p
        n = p.grid.n_nodes
        fully_static = not p.field.g_time_dependent and not p.field.coeffs_time_dependent
        g_static = not p.field.g_time_dependent
        if self._static_rhs is not None and fully_static and not self._has_value_rules():
            return self._static_rhs.copy()

        out = np.zeros(n)
        if not (g_static and self._rhs_is_zero_static):
            all_zero = True
            cached = getattr(self, "_g_cache", None)
            reuse = cached is not None and abs(cached[0] - tau_k) <= 1e-14 * max(1.0, abs(tau_k))
            hi_values = {}
            for grp in self._scheme_groups():
                if reuse:
                    lo = cached[1][id(grp)]
                else:
                    lo = self._g_tilde(grp, tau_k)
                hi = lo if fully_static else self._g_tilde(grp, tau_k + p.dt)
                hi_values[id(grp)] = hi
                val = 0.5 * p.dt * (np.asarray(lo, float) + np.asarray(hi, float))
                if np.any(val != 0.0):
                    all_zero = False
                    out[grp.rows.ravel()] = np.broadcast_to(val, grp.rows.shape).ravel()
            self._g_cache = (tau_k + p.dt, hi_values)
            if g_static and all_zero:
                self._rhs_is_zero_static = True

        for grp in self.groups:
            if isinstance(grp.rule, DirichletValue):
                vals = grp.rule.value(grp.full_mesh, tau_k + p.dt)
                out[np.atleast_1d(grp.rows).ravel()] = np.broadcast_to(
                    np.asarray(vals, float), np.atleast_1d(grp.rows).shape).ravel()
        if fully_static and not self._has_value_rules():
            self._static_rhs = out.copy()
        return out

    def _g_tilde(self, grp: _Group, tau):
        smp = sample(grp.field, grp.mesh, tau, parts="source")
        if self.p.scheme == "hoc":
            return hoc_g_tilde(smp, self.h)
        return smp.g

    def _has_value_rules(self) -> bool:
        return any(isinstance(g.rule, DirichletValue) for g in self.groups)

    def assemble(self, tau_k: float) -> StepMatrices:
        A, B = self.matrices(tau_k)
        return StepMatrices(A, B, self.rhs(tau_k))


def assemble_step(p: DiscreteProblem, tau_k: float) -> StepMatrices:
    """CN matrices and extra right-hand side for the step tau_k -> tau_k + dt."""
    return Assembler(p).assemble(tau_k)


def step(m: StepMatrices, u_k: np.ndarray, cfg: SolverConfig | None = None) -> np.ndarray:
    """Advance one step: solve A u_{k+1} = B u_k + rhs_extra."""
    rhs = spmv(m.B, u_k) + m.rhs_extra
    x, _, _ = bicgstab(m.A, rhs, x0=u_k, cfg=cfg)
    return x


def run(
    p: DiscreteProblem,
    tau_max: float,
    cfg: SolverConfig | None = None,
    observer: Callable | None = None,
) -> np.ndarray:
    """March from tau = 0 to tau_max in constant steps of p.dt.

    tau_max must be an integer multiple of dt (relative slack 1e-12); silent
    end-time drift would corrupt measured convergence orders.  The observer,
    when given, is called as observer(k, tau_k, u_k) with a copy of the state
    at every level including the initial and final ones.
    """
    if tau_max == 0.0:
        if observer:
            observer(0, 0.0, p.initial_values.copy())
        return p.initial_values.copy()
    if p.dt <= 0:
        raise TimeSteppingError("positive dt required to advance in time")
    n_steps = int(round(tau_max / p.dt))
    if n_steps < 1 or abs(n_steps * p.dt - tau_max) > 1e-12 * max(abs(tau_max), p.dt):
        raise TimeSteppingError(
            f"tau_max {tau_max} is not an integer multiple of dt {p.dt}"
        )
    asm = Assembler(p)
    u = p.initial_values.copy()
    if observer:
        observer(0, 0.0, u.copy())
    for k in range(n_steps):
        tau_k = k * p.dt
        try:
            A, B = asm.matrices(tau_k)
            rhs = spmv(B, u) + asm.rhs(tau_k)
            u, _, _ = bicgstab(A, rhs, x0=u, cfg=cfg)
        except Exception as exc:
            raise TimeSteppingError(f"step {k + 1} (tau={tau_k + p.dt:g}) failed: {exc}") from exc
        if observer:
            observer(k + 1, tau_k + p.dt, u.copy())
    return u
