"""Numerical von Neumann analysis of the fully discrete scheme.

For frozen coefficients (all derivative slots zero) the Crank-Nicolson scheme
acts on a Fourier mode exp(i sum_m j_m z_m) by the amplification factor

    G(z) = sum_offsets B(offset) e^{i <offset, z>}
         / sum_offsets A(offset) e^{i <offset, z>},

with A = M + (k/2) K and B = M - (k/2) K built from the production stencil
weights (k is the time step).  The necessary stability condition is
|G|^2 - 1 <= 0 for all modes.  ``scan_stability`` sweeps parameters with a
deterministic Halton sequence and a uniform mode grid and reports the worst
violation; ``corner_check`` evaluates the modes with cos(z_m / 2) = +-1,
which are the analytically settled cases when mixed terms are present.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .hoc_stencil import hoc_weights
from .pde_model import CoefficientSample


class DegenerateSymbolError(ArithmeticError):
    """The symbol's denominator vanished at the requested mode."""


@dataclass(frozen=True)
class FrozenSample:
    """Constant-coefficient data for symbol evaluation; a < 0, k is dt."""

    dim: int
    a: float
    b: dict[tuple[int, int], float]
    c: tuple[float, ...]
    h: float
    k: float

    def __post_init__(self):
        if self.a >= 0:
            raise ValueError("need a < 0")
        if self.h <= 0 or self.k <= 0:
            raise ValueError("need h > 0 and k > 0")
        if len(self.c) != self.dim:
            raise ValueError("one convection value per axis")

    def coefficient_sample(self) -> CoefficientSample:
        n = self.dim
        zeros_v = [0.0] * n
        zeros_m = [[0.0] * n for _ in range(n)]
        b, db, d2b = {}, {}, {}
        for i in range(n):
            for j in range(i + 1, n):
                b[(i, j)] = float(self.b.get((i, j), 0.0))
                db[(i, j)] = list(zeros_v)
                d2b[(i, j)] = [row[:] for row in zeros_m]
        return CoefficientSample(
            dim=n, x=(0.0,) * n, tau=0.0,
            a=[self.a] * n,
            da=[list(zeros_v) for _ in range(n)],
            d2a=[[row[:] for row in zeros_m] for _ in range(n)],
            b=b, db=db, d2b=d2b,
            c=list(self.c),
            dc=[list(zeros_v) for _ in range(n)],
            d2c=[[row[:] for row in zeros_m] for _ in range(n)],
            g=0.0, dg=list(zeros_v), d2g=[row[:] for row in zeros_m],
        )


@dataclass(frozen=True)
class FourierMode:
    """One mode, z_m in [0, 2*pi]; xi_m = cos(z_m/2), eta_m = sin(z_m/2)."""

    z: tuple[float, ...]

    @property
    def xi(self) -> tuple[float, ...]:
        return tuple(np.cos(np.asarray(self.z) / 2))

    @property
    def eta(self) -> tuple[float, ...]:
        return tuple(np.sin(np.asarray(self.z) / 2))


def _km_symbols(s: FrozenSample, z_axes):
    """Fourier symbols of K and M over the tensor mode grid, plus |M|+|K| scale."""
    w = hoc_weights(s.coefficient_sample(), s.h)
    n = s.dim
    k_t = np.zeros((3,) * n, dtype=complex)
    m_t = np.zeros((3,) * n, dtype=complex)
    for o in w.k_weights:
        idx = tuple(oi + 1 for oi in o)
        k_t[idx] = w.k_weights[o]
        m_t[idx] = w.m_weights[o]
    phases = [np.exp(1j * np.outer((-1, 0, 1), np.asarray(z))) for z in z_axes]
    letters = "abc"[:n]
    out = "".join(chr(ord("i") + m) for m in range(n))
    spec = ",".join([letters] + [f"{letters[m]}{out[m]}" for m in range(n)]) + "->" + out
    kz = np.einsum(spec, k_t, *phases, optimize=True)
    mz = np.einsum(spec, m_t, *phases, optimize=True)
    scale = float(np.sum(np.abs(k_t))) + float(np.sum(np.abs(m_t)))
    return kz, mz, scale


def _grid_from_symbols(kz, mz, scale, k_step):
    den = mz + 0.5 * k_step * kz
    num = mz - 0.5 * k_step * kz
    floor = 1e-14 * (1 + 0.5 * k_step) * scale
    bad = np.abs(den) < floor
    if np.any(bad):
        den = np.where(bad, np.nan, den)
    return num / den


def amplification_grid(s: FrozenSample, z_axes) -> np.ndarray:
    """G over the tensor grid of per-axis mode values (complex ndarray)."""
    kz, mz, scale = _km_symbols(s, z_axes)
    return _grid_from_symbols(kz, mz, scale, s.k)


def amplification_factor(s: FrozenSample, mode: FourierMode) -> complex:
    """G for one mode; raises DegenerateSymbolError if the denominator vanishes."""
    g = amplification_grid(s, [np.array([zm]) for zm in mode.z])
    val = complex(g.reshape(-1)[0])
    if np.isnan(val.real) or np.isnan(val.imag):
        raise DegenerateSymbolError(f"symbol denominator vanished at z={mode.z}")
    return val


def corner_check(s: FrozenSample) -> float:
    """max | |G|^2 - 1 | over the 2^n corner modes xi_m = +-1 (z_m in {0, 2pi})."""
    worst = 0.0
    for corner in itertools.product((0.0, 2 * np.pi), repeat=s.dim):
        g = amplification_factor(s, FourierMode(corner))
        worst = max(worst, abs(abs(g) ** 2 - 1.0))
    return worst


def mode_axis(modes_per_axis: int) -> np.ndarray:
    """Uniform [0, 2*pi) mode values plus the half mode and the 2*pi limit."""
    base = 2 * np.pi * np.arange(modes_per_axis) / modes_per_axis
    extras = np.array([np.pi, 2 * np.pi * (1 - 1e-9)])
    return np.unique(np.concatenate([base, extras]))


@dataclass
class ScanRecord:
    a: float
    b: dict
    c: tuple
    h: float
    lam: float
    k: float
    max_violation: float
    argmax_z: tuple


@dataclass
class StabilityReport:
    records: list[ScanRecord] = field(default_factory=list)

    @property
    def max_violation(self) -> float:
        return max((r.max_violation for r in self.records), default=float("-inf"))

    @property
    def argmax(self) -> ScanRecord | None:
        return max(self.records, key=lambda r: r.max_violation, default=None)


def scan_stability(
    dim: int,
    a_range=(-2.0, -0.01),
    c_range=(-3.0, 3.0),
    h_range=(0.01, 0.5),
    lambdas=(0.1, 0.4, 1.0, 10.0),
    rho_range=None,
    modes_per_axis: int = 64,
    samples: int = 200,
) -> StabilityReport:
    """Deterministic parameter sweep of max(|G|^2 - 1) over the mode grid.

    Parameters are drawn from an unscrambled Halton sequence over
    (a, c_1..c_n, h) and, when ``rho_range`` is given, one correlation-like
    value per axis pair with b_ij = 2 a rho_ij (so |b_ij| <= 2|a| |rho|).
    With ``rho_range=None`` all mixed coefficients are zero, the regime the
    stability theorems cover.  Each sample is swept over every lambda in
    ``lambdas`` with time step k = lambda h^2.
    """
    if not (a_range[1] < 0):
        raise ValueError("a_range must be negative throughout")
    n_pairs = dim * (dim - 1) // 2
    d = 1 + dim + 1 + (n_pairs if rho_range is not None else 0)
    halton = qmc.Halton(d=d, scramble=False)
    halton.fast_forward(1)  # skip the all-zeros point
    pts = halton.random(samples)
    z_axes = [mode_axis(modes_per_axis)] * dim
    report = StabilityReport()
    pairs = [(i, j) for i in range(dim) for j in range(i + 1, dim)]
    for row in pts:
        a = a_range[0] + row[0] * (a_range[1] - a_range[0])
        c = tuple(c_range[0] + row[1 + m] * (c_range[1] - c_range[0]) for m in range(dim))
        h = h_range[0] + row[1 + dim] * (h_range[1] - h_range[0])
        b = {}
        if rho_range is not None:
            for m, pair in enumerate(pairs):
                rho = rho_range[0] + row[2 + dim + m] * (rho_range[1] - rho_range[0])
                b[pair] = 2.0 * a * rho
        kz = mz = scale = None
        for lam in lambdas:
            k = lam * h * h
            s = FrozenSample(dim=dim, a=a, b=b, c=c, h=h, k=k)
            if kz is None:
                kz, mz, scale = _km_symbols(s, z_axes)
            g = _grid_from_symbols(kz, mz, scale, k)
            viol = np.abs(g) ** 2 - 1.0
            viol = np.where(np.isnan(viol), np.inf, viol)
            flat = int(np.argmax(viol))
            idx = np.unravel_index(flat, viol.shape)
            report.records.append(
                ScanRecord(
                    a=a, b=dict(b), c=c, h=h, lam=lam, k=k,
                    max_violation=float(viol[idx]),
                    argmax_z=tuple(float(z_axes[m][idx[m]]) for m in range(dim)),
                )
            )
    return report
