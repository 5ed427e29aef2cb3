"""Compact-stencil weight sets: fourth-order scheme and second-order baseline.

The semi-discrete scheme at an interior node reads

    sum_offsets [ M(offset) dU/dtau + K(offset) U ] = g_tilde,

with all 3^n weights supported on the compact neighbor cube.  The
fourth-order K and M entries below are literal transcriptions of the
closed-form coefficient tables for n = 2 and n = 3 (one function per table
entry; combined +/- entries are expanded through the sign argument ``s``).
They are pinned by three independent cross-checks in the test suite: the
algebraic sum rules (sum K = 0, sum M = 1), entrywise agreement with a
from-scratch re-derivation of the elimination procedure, and entrywise
agreement with the separately printed Black-Scholes specialization.

The n = 1 weights serve the dimension-reduced boundary problems; they follow
from the same elimination applied in one dimension.

All entry functions operate elementwise: the value bag ``v`` may hold floats
(single-node evaluation) or ndarrays (vectorized assembly over many nodes).
"""

from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

import numpy as np

from .pde_model import CoefficientSample


class StencilError(ValueError):
    """Invalid inputs for stencil-weight evaluation."""


@dataclass
class StencilWeights:
    """Weight sets K, M and right-hand-side value at one node (or node batch).

    ``k_weights`` and ``m_weights`` map each offset in {-1,0,1}^dim to the
    coefficient of U and of dU/dtau at that neighbor; ``g_tilde`` is the
    discrete source value.
    """

    dim: int
    k_weights: dict
    m_weights: dict
    g_tilde: object

    def k_sum(self):
        return sum(self.k_weights.values())

    def m_sum(self):
        return sum(self.m_weights.values())


def _check_inputs(s: CoefficientSample, h: float, dim: int):
    if h <= 0:
        raise StencilError(f"step size must be positive, got {h}")
    if s.dim != dim:
        raise StencilError(f"sample dim {s.dim} != expected {dim}")
    for ai in s.a:
        if not np.all(np.asarray(ai) < 0):
            raise StencilError("diffusion coefficient must be negative")


def _require_shared_a(s: CoefficientSample):
    a0 = np.asarray(s.a[0], dtype=float)
    scale = max(1.0, float(np.max(np.abs(a0))))
    for ai in s.a[1:]:
        if float(np.max(np.abs(np.asarray(ai) - a0))) > 1e-12 * scale:
            raise StencilError("fourth-order weights require a single shared a_i")


def _zero_entry(values) -> bool:
    return all(np.isscalar(val) and val == 0.0 for val in values)



def _values_1d(s: CoefficientSample) -> SimpleNamespace:
    return SimpleNamespace(
        a=s.a[0], a_1=s.da[0][0], a_11=s.d2a[0][0][0],
        c1=s.c[0], c1_1=s.dc[0][0], c1_11=s.d2c[0][0][0],
        g=s.g, g_1=s.dg[0], g_11=s.d2g[0][0],
    )


def _values_2d(s: CoefficientSample) -> SimpleNamespace:
    b = s.b[(0, 1)]
    db = s.db[(0, 1)]
    d2b = s.d2b[(0, 1)]
    return SimpleNamespace(
        a=s.a[0], a_1=s.da[0][0], a_2=s.da[0][1],
        a_11=s.d2a[0][0][0], a_12=s.d2a[0][0][1], a_22=s.d2a[0][1][1],
        b12=b, b12_1=db[0], b12_2=db[1],
        b12_11=d2b[0][0], b12_12=d2b[0][1], b12_22=d2b[1][1],
        c1=s.c[0], c1_1=s.dc[0][0], c1_2=s.dc[0][1],
        c1_11=s.d2c[0][0][0], c1_12=s.d2c[0][0][1], c1_22=s.d2c[0][1][1],
        c2=s.c[1], c2_1=s.dc[1][0], c2_2=s.dc[1][1],
        c2_11=s.d2c[1][0][0], c2_12=s.d2c[1][0][1], c2_22=s.d2c[1][1][1],
        g=s.g, g_1=s.dg[0], g_2=s.dg[1],
        g_11=s.d2g[0][0], g_12=s.d2g[0][1], g_22=s.d2g[1][1],
    )


def _values_3d(s: CoefficientSample) -> SimpleNamespace:
    v = SimpleNamespace(
        a=s.a[0], a_1=s.da[0][0], a_2=s.da[0][1], a_3=s.da[0][2],
        a_11=s.d2a[0][0][0], a_12=s.d2a[0][0][1], a_13=s.d2a[0][0][2],
        a_22=s.d2a[0][1][1], a_23=s.d2a[0][1][2], a_33=s.d2a[0][2][2],
        g=s.g, g_1=s.dg[0], g_2=s.dg[1], g_3=s.dg[2],
        g_11=s.d2g[0][0], g_12=s.d2g[0][1], g_13=s.d2g[0][2],
        g_22=s.d2g[1][1], g_23=s.d2g[1][2], g_33=s.d2g[2][2],
    )
    for (i, j), label in (((0, 1), "12"), ((0, 2), "13"), ((1, 2), "23")):
        setattr(v, f"b{label}", s.b[(i, j)])
        for k in range(3):
            setattr(v, f"b{label}_{k + 1}", s.db[(i, j)][k])
            for p in range(k, 3):
                setattr(v, f"b{label}_{k + 1}{p + 1}", s.d2b[(i, j)][k][p])
    for i in range(3):
        setattr(v, f"c{i + 1}", s.c[i])
        for k in range(3):
            setattr(v, f"c{i + 1}_{k + 1}", s.dc[i][k])
            for p in range(k, 3):
                setattr(v, f"c{i + 1}_{k + 1}{p + 1}", s.d2c[i][k][p])
    return v


# ----------------------------------------------------------------------
# one-dimensional fourth-order weights (reduced boundary problems)
# ----------------------------------------------------------------------

def _q1(v):
    return v.a_11 + 2 * v.c1_1 - (2 * v.a_1 - v.c1) * (v.a_1 + v.c1) / v.a


def _r1(v):
    return v.c1_11 - (2 * v.a_1 - v.c1) * v.c1_1 / v.a


def _k1_center(v, h):
    return -2 * v.a / h**2 - _q1(v) / 6


def _k1_edge(v, h, s):
    return v.a / h**2 + s * v.c1 / (2 * h) + _q1(v) / 12 + s * h * _r1(v) / 24


def _m1_edge(v, h, s):
    return 1 / 12 - s * h * v.a_1 / (12 * v.a) + s * h * v.c1 / (24 * v.a)


def _g1_tilde(v, h):
    return v.g + h**2 * v.g_11 / 12 - h**2 * (2 * v.a_1 - v.c1) * v.g_1 / (12 * v.a)


# ----------------------------------------------------------------------
# two-dimensional fourth-order entries
# ----------------------------------------------------------------------

def _k2_center(v, h):
    return (
        -v.b12*v.a_12/(3*v.a)
        -v.b12*v.c2_1/(6*v.a)
        +v.b12*v.a_2*v.c1/(6*v.a**2)
        +2*v.b12*v.a_1*v.a_2/(3*v.a**2)
        -v.a_22/(3)
        -v.c1**2/(6*v.a)
        +2*v.a_1**2/(3*v.a)
        -v.a_11/(3)
        -10*v.a/(3*h**2)
        -v.c2_2/(3)
        -v.c1_1/(3)
        -v.b12*v.c1_2/(6*v.a)
        +2*v.a_2**2/(3*v.a)
        -v.c2**2/(6*v.a)
        +v.b12**2/(3*v.a*h**2)
        +v.b12*v.a_1*v.c2/(6*v.a**2)
    )


def _k2_edge1(v, h, s):
    return (
        +v.c2*v.a_2/(12*v.a)
        -v.b12**2/(6*v.a*h**2)
        +v.b12*v.a_12/(12*v.a)
        -v.c1*v.a_1/(12*v.a)
        -s*h*v.b12*v.a_2*v.c1_1/(24*v.a**2)
        -s*h*v.b12*v.a_1*v.c1_2/(24*v.a**2)
        +s*h*v.c1_11/(24)
        +s*h*v.c1_22/(24)
        +v.c1**2/(12*v.a)
        +s*h*v.c1*v.c1_1/(24*v.a)
        -s*h*v.a_1*v.c1_1/(12*v.a)
        +s*h*v.b12*v.c1_12/(24*v.a)
        -v.b12*v.a_2*v.c1/(12*v.a**2)
        +s*h*v.c2*v.c1_2/(24*v.a)
        -s*h*v.a_2*v.c1_2/(12*v.a)
        +v.c1_1/(6)
        -v.a_1**2/(6*v.a)
        -v.a_2**2/(6*v.a)
        +v.a_22/(12)
        +v.a_11/(12)
        -s*v.c2*v.b12/(6*v.a*h)
        -s*v.b12*v.b12_1/(12*v.a*h)
        +v.b12*v.c1_2/(12*v.a)
        +2*v.a/(3*h**2)
        -v.b12*v.a_1*v.a_2/(6*v.a**2)
        +s*v.b12*v.a_2/(6*v.a*h)
        -s*v.b12_2/(6*h)
        +s*v.b12**2*v.a_1/(12*v.a**2*h)
        +s*v.c1/(3*h)
    )


def _k2_edge2(v, h, s):
    return (
        -v.c2*v.a_2/(12*v.a)
        -v.b12**2/(6*v.a*h**2)
        +v.b12*v.c2_1/(12*v.a)
        +v.b12*v.a_12/(12*v.a)
        +v.c1*v.a_1/(12*v.a)
        -s*h*v.b12*v.a_2*v.c2_1/(24*v.a**2)
        +v.c2_2/(6)
        -s*h*v.b12*v.a_1*v.c2_2/(24*v.a**2)
        -v.a_1**2/(6*v.a)
        -v.a_2**2/(6*v.a)
        +v.c2**2/(12*v.a)
        +v.a_22/(12)
        +v.a_11/(12)
        -s*v.b12*v.b12_2/(12*v.a*h)
        +s*h*v.c2_22/(24)
        +s*h*v.c2_11/(24)
        +2*v.a/(3*h**2)
        +s*h*v.c1*v.c2_1/(24*v.a)
        -s*h*v.a_1*v.c2_1/(12*v.a)
        -v.b12*v.a_1*v.a_2/(6*v.a**2)
        +s*h*v.b12*v.c2_12/(24*v.a)
        +s*v.c2/(3*h)
        -v.b12*v.a_1*v.c2/(12*v.a**2)
        -s*h*v.a_2*v.c2_2/(12*v.a)
        +s*h*v.c2*v.c2_2/(24*v.a)
        +s*v.b12**2*v.a_2/(12*v.a**2*h)
        +s*v.b12*v.a_1/(6*v.a*h)
        -s*v.c1*v.b12/(6*v.a*h)
        -s*v.b12_1/(6*h)
    )


def _k2_corner_lo(v, h, s):
    return (
        +v.b12**2/(12*v.a*h**2)
        -s*v.c1*v.c2/(24*v.a)
        +s*v.a_2*v.c1/(24*v.a)
        -s*v.b12*v.c2_2/(48*v.a)
        +s*v.a_2*v.b12_2/(24*v.a)
        +s*v.a_1*v.c2/(24*v.a)
        +s*v.a_1*v.b12_1/(24*v.a)
        -s*v.c1*v.b12_1/(48*v.a)
        -s*v.b12*v.c1_1/(48*v.a)
        -s*v.c2*v.b12_2/(48*v.a)
        -s*v.b12*v.b12_12/(48*v.a)
        -s*v.c1_2/(24)
        -s*v.c2_1/(24)
        -s*v.b12_11/(48)
        -s*v.b12_22/(48)
        -v.b12*v.b12_2/(24*v.a*h)
        +s*v.c2*v.b12/(12*v.a*h)
        +s*v.b12*v.b12_1/(24*v.a*h)
        +s*v.b12*v.a_2*v.b12_1/(48*v.a**2)
        +s*v.b12*v.a_1*v.c1/(48*v.a**2)
        +v.a/(6*h**2)
        +v.b12**2*v.a_2/(24*v.a**2*h)
        +s*v.b12*v.a_2*v.c2/(48*v.a**2)
        +v.b12*v.a_1/(12*v.a*h)
        -s*v.b12*v.a_2/(12*v.a*h)
        -v.c1*v.b12/(12*v.a*h)
        +s*v.b12*v.a_1*v.b12_2/(48*v.a**2)
        -v.b12_1/(12*h)
        +s*v.b12_2/(12*h)
        -s*v.b12**2*v.a_1/(24*v.a**2*h)
        -s*v.b12/(4*h**2)
        -v.c2/(12*h)
        +s*v.c1/(12*h)
    )


def _k2_corner_hi(v, h, s):
    return (
        +v.b12**2/(12*v.a*h**2)
        +s*v.c1*v.c2/(24*v.a)
        -s*v.a_2*v.c1/(24*v.a)
        +s*v.b12*v.c2_2/(48*v.a)
        -s*v.a_2*v.b12_2/(24*v.a)
        -s*v.a_1*v.c2/(24*v.a)
        -s*v.a_1*v.b12_1/(24*v.a)
        +s*v.c1*v.b12_1/(48*v.a)
        +s*v.b12*v.c1_1/(48*v.a)
        +s*v.c2*v.b12_2/(48*v.a)
        +s*v.b12*v.b12_12/(48*v.a)
        +s*v.c1_2/(24)
        +s*v.c2_1/(24)
        +s*v.b12_11/(48)
        +s*v.b12_22/(48)
        +v.b12*v.b12_2/(24*v.a*h)
        +s*v.c2*v.b12/(12*v.a*h)
        +s*v.b12*v.b12_1/(24*v.a*h)
        -s*v.b12*v.a_2*v.b12_1/(48*v.a**2)
        -s*v.b12*v.a_1*v.c1/(48*v.a**2)
        +v.a/(6*h**2)
        -v.b12**2*v.a_2/(24*v.a**2*h)
        -s*v.b12*v.a_2*v.c2/(48*v.a**2)
        -v.b12*v.a_1/(12*v.a*h)
        -s*v.b12*v.a_2/(12*v.a*h)
        +v.c1*v.b12/(12*v.a*h)
        -s*v.b12*v.a_1*v.b12_2/(48*v.a**2)
        +v.b12_1/(12*h)
        +s*v.b12_2/(12*h)
        -s*v.b12**2*v.a_1/(24*v.a**2*h)
        +s*v.b12/(4*h**2)
        +v.c2/(12*h)
        +s*v.c1/(12*h)
    )


def _m2_edge1(v, h, s):
    return 1 / 12 - s * v.b12 * h * v.a_2 / (24 * v.a**2) + s * h * v.c1 / (24 * v.a) - s * h * v.a_1 / (12 * v.a)


def _m2_edge2(v, h, s):
    return 1 / 12 - s * h * v.a_2 / (12 * v.a) - s * v.b12 * h * v.a_1 / (24 * v.a**2) + s * h * v.c2 / (24 * v.a)


def _m2_corner(v, s1, s2):
    return s1 * s2 * v.b12 / (48 * v.a)


def _g2_tilde(v, h):
    return (
        (h**2 * v.a**2 * v.c1 - 2 * h**2 * v.a**2 * v.a_1 - v.b12 * h**2 * v.a_2 * v.a) * v.g_1 / (12 * v.a**3)
        + h**2 * v.g_11 / 12
        + v.b12 * h**2 * v.g_12 / (12 * v.a)
        + (h**2 * v.a**2 * v.c2 - v.b12 * h**2 * v.a_1 * v.a - 2 * h**2 * v.a**2 * v.a_2) * v.g_2 / (12 * v.a**3)
        + h**2 * v.g_22 / 12
        + v.g
    )


# ----------------------------------------------------------------------
# three-dimensional fourth-order entries
# ----------------------------------------------------------------------

def _k3_center(v, h):
    return (
        +v.b23*v.a_2*v.c3/(6*v.a**2)
        +v.b13*v.a_1*v.c3/(6*v.a**2)
        -v.c3_3/(3)
        -v.c1**2/(6*v.a)
        -v.c3**2/(6*v.a)
        -v.a_11/(2)
        -v.a_22/(2)
        -v.a_33/(2)
        +v.b13*v.a_3*v.c1/(6*v.a**2)
        +v.b12*v.a_2*v.c1/(6*v.a**2)
        -4*v.a/(h**2)
        +v.b13*v.a_3*v.a_1/(v.a**2)
        +v.b23*v.a_3*v.a_2/(v.a**2)
        +v.b23*v.a_3*v.c2/(6*v.a**2)
        +v.b12*v.a_1*v.a_2/(v.a**2)
        +v.b12*v.a_1*v.c2/(6*v.a**2)
        -v.b13*v.c3_1/(6*v.a)
        -v.c1*v.a_1/(6*v.a)
        +v.b23**2/(3*v.a*h**2)
        -v.b12*v.a_12/(2*v.a)
        -v.c2*v.a_2/(6*v.a)
        +v.b13**2/(3*v.a*h**2)
        +v.b12**2/(3*v.a*h**2)
        -v.c3*v.a_3/(6*v.a)
        -v.b13*v.a_13/(2*v.a)
        -v.b23*v.c2_3/(6*v.a)
        -v.b12*v.c2_1/(6*v.a)
        -v.b23*v.a_23/(2*v.a)
        -v.b13*v.c1_3/(6*v.a)
        -v.b23*v.c3_2/(6*v.a)
        -v.b12*v.c1_2/(6*v.a)
        -v.c2**2/(6*v.a)
        +v.a_1**2/(v.a)
        +v.a_3**2/(v.a)
        +v.a_2**2/(v.a)
        -v.c2_2/(3)
        -v.c1_1/(3)
    )


def _k3_edge1(v, h, s):
    return (
        +s*v.b23*v.a_3*v.b12/(12*v.a**2*h)
        +s*v.b23*v.a_2*v.b13/(12*v.a**2*h)
        -s*h*v.b12*v.a_1*v.c1_2/(24*v.a**2)
        -s*h*v.b23*v.a_2*v.c1_3/(24*v.a**2)
        -s*h*v.b13*v.a_1*v.c1_3/(24*v.a**2)
        +v.c1**2/(12*v.a)
        -s*h*v.b13*v.a_3*v.c1_1/(24*v.a**2)
        -s*h*v.b23*v.a_3*v.c1_2/(24*v.a**2)
        +s*h*v.c1_33/(24)
        +s*h*v.c1_22/(24)
        +s*h*v.c1_11/(24)
        +v.a_11/(12)
        +v.a_22/(12)
        +v.a_33/(12)
        -v.b13*v.a_3*v.c1/(12*v.a**2)
        -s*v.b13*v.b13_1/(12*v.a*h)
        +s*h*v.c1*v.c1_1/(24*v.a)
        +s*h*v.c2*v.c1_2/(24*v.a)
        -s*h*v.b12*v.a_2*v.c1_1/(24*v.a**2)
        -s*v.b23*v.b13_2/(12*v.a*h)
        +s*v.b13**2*v.a_1/(12*v.a**2*h)
        -s*v.c3*v.b13/(6*v.a*h)
        +s*h*v.b23*v.c1_23/(24*v.a)
        +s*h*v.b13*v.c1_13/(24*v.a)
        +s*h*v.b12*v.c1_12/(24*v.a)
        +s*v.b13*v.a_3/(6*v.a*h)
        -v.b12*v.a_2*v.c1/(12*v.a**2)
        +s*h*v.c3*v.c1_3/(24*v.a)
        -s*h*v.a_1*v.c1_1/(12*v.a)
        -s*h*v.a_3*v.c1_3/(12*v.a)
        -s*v.b12*v.c2/(6*v.a*h)
        +s*v.b12**2*v.a_1/(12*v.a**2*h)
        +s*v.b12*v.a_2/(6*v.a*h)
        -s*v.b12*v.b12_1/(12*v.a*h)
        -s*v.b23*v.b12_3/(12*v.a*h)
        +s*v.c1/(6*h)
        +v.a/(3*h**2)
        -s*v.b12_2/(6*h)
        -v.b13*v.a_3*v.a_1/(6*v.a**2)
        -v.b23*v.a_3*v.a_2/(6*v.a**2)
        -s*v.b13_3/(6*h)
        -v.b12*v.a_1*v.a_2/(6*v.a**2)
        -v.c1*v.a_1/(12*v.a)
        +v.b12*v.a_12/(12*v.a)
        +v.c2*v.a_2/(12*v.a)
        -v.b13**2/(6*v.a*h**2)
        -v.b12**2/(6*v.a*h**2)
        +v.c3*v.a_3/(12*v.a)
        +v.b13*v.a_13/(12*v.a)
        +v.b23*v.a_23/(12*v.a)
        +v.b13*v.c1_3/(12*v.a)
        +v.b12*v.c1_2/(12*v.a)
        -v.a_1**2/(6*v.a)
        -v.a_3**2/(6*v.a)
        -v.a_2**2/(6*v.a)
        +v.c1_1/(6)
        -s*h*v.a_2*v.c1_2/(12*v.a)
    )


def _k3_edge2(v, h, s):
    return (
        +s*v.b13*v.a_3*v.b12/(12*v.a**2*h)
        -s*h*v.b13*v.a_1*v.c2_3/(24*v.a**2)
        -s*h*v.b12*v.a_1*v.c2_2/(24*v.a**2)
        +s*v.b13*v.a_1*v.b23/(12*v.a**2*h)
        -s*h*v.b13*v.a_3*v.c2_1/(24*v.a**2)
        +s*v.c2/(6*h)
        -s*h*v.b23*v.a_3*v.c2_2/(24*v.a**2)
        -s*h*v.b12*v.a_2*v.c2_1/(24*v.a**2)
        -s*h*v.b23*v.a_2*v.c2_3/(24*v.a**2)
        +v.a_11/(12)
        +v.a_22/(12)
        +v.a_33/(12)
        +s*v.b12*v.a_1/(6*v.a*h)
        -s*v.b12*v.c1/(6*v.a*h)
        -s*v.b12*v.b12_2/(12*v.a*h)
        -s*v.b13*v.b12_3/(12*v.a*h)
        +s*v.a_2*v.b12**2/(12*v.a**2*h)
        +v.a/(3*h**2)
        -s*v.b12_1/(6*h)
        -s*v.b23*v.c3/(6*v.a*h)
        +s*h*v.b12*v.c2_12/(24*v.a)
        +s*h*v.b23*v.c2_23/(24*v.a)
        +s*h*v.b13*v.c2_13/(24*v.a)
        -v.b13*v.a_3*v.a_1/(6*v.a**2)
        +s*h*v.c2*v.c2_2/(24*v.a)
        +s*v.b23*v.a_3/(6*v.a*h)
        -v.b23*v.a_3*v.c2/(12*v.a**2)
        -s*v.b13*v.b23_1/(12*v.a*h)
        -s*v.b23*v.b23_2/(12*v.a*h)
        -s*h*v.a_2*v.c2_2/(12*v.a)
        +s*h*v.c3*v.c2_3/(24*v.a)
        -s*h*v.a_1*v.c2_1/(12*v.a)
        -s*h*v.a_3*v.c2_3/(12*v.a)
        +s*h*v.c1*v.c2_1/(24*v.a)
        +s*v.a_2*v.b23**2/(12*v.a**2*h)
        -v.b12*v.a_1*v.a_2/(6*v.a**2)
        -v.b12*v.a_1*v.c2/(12*v.a**2)
        +v.c1*v.a_1/(12*v.a)
        -v.b23**2/(6*v.a*h**2)
        +v.b12*v.a_12/(12*v.a)
        -v.c2*v.a_2/(12*v.a)
        -v.b12**2/(6*v.a*h**2)
        +v.c3*v.a_3/(12*v.a)
        +v.b13*v.a_13/(12*v.a)
        +v.b23*v.c2_3/(12*v.a)
        +v.b12*v.c2_1/(12*v.a)
        +v.b23*v.a_23/(12*v.a)
        +s*h*v.c2_22/(24)
        +s*h*v.c2_33/(24)
        +s*h*v.c2_11/(24)
        +v.c2**2/(12*v.a)
        -v.a_1**2/(6*v.a)
        -v.a_3**2/(6*v.a)
        -s*v.b23_3/(6*h)
        -v.a_2**2/(6*v.a)
        -v.b23*v.a_3*v.a_2/(6*v.a**2)
        +v.c2_2/(6)
    )


def _k3_edge3(v, h, s):
    return (
        -v.b23*v.a_2*v.c3/(12*v.a**2)
        -v.b13*v.a_1*v.c3/(12*v.a**2)
        +v.c3_3/(6)
        -s*v.b23_2/(6*h)
        +s*v.c3/(6*h)
        -s*v.b13_1/(6*h)
        +s*h*v.c3_11/(24)
        +s*h*v.c3_33/(24)
        +s*h*v.c3_22/(24)
        +v.c3**2/(12*v.a)
        +v.a_11/(12)
        +v.a_22/(12)
        +v.a_33/(12)
        +s*v.b12*v.a_1*v.b23/(12*v.a**2*h)
        +s*v.b12*v.a_2*v.b13/(12*v.a**2*h)
        -s*h*v.b13*v.a_1*v.c3_3/(24*v.a**2)
        -s*h*v.b12*v.a_1*v.c3_2/(24*v.a**2)
        -s*h*v.b23*v.a_2*v.c3_3/(24*v.a**2)
        -s*h*v.b23*v.a_3*v.c3_2/(24*v.a**2)
        -v.b13*v.a_3*v.a_1/(6*v.a**2)
        -s*h*v.b13*v.a_3*v.c3_1/(24*v.a**2)
        -s*h*v.b12*v.a_2*v.c3_1/(24*v.a**2)
        +v.a/(3*h**2)
        -v.b23*v.a_3*v.a_2/(6*v.a**2)
        -v.b12*v.a_1*v.a_2/(6*v.a**2)
        +v.b13*v.c3_1/(12*v.a)
        +v.c1*v.a_1/(12*v.a)
        -v.b23**2/(6*v.a*h**2)
        +v.b12*v.a_12/(12*v.a)
        +v.c2*v.a_2/(12*v.a)
        -v.b13**2/(6*v.a*h**2)
        -v.c3*v.a_3/(12*v.a)
        +v.b13*v.a_13/(12*v.a)
        +s*h*v.c2*v.c3_2/(24*v.a)
        +v.b23*v.a_23/(12*v.a)
        +v.b23*v.c3_2/(12*v.a)
        -s*v.c2*v.b23/(6*v.a*h)
        +s*v.b23*v.a_2/(6*v.a*h)
        -s*v.b23*v.b23_3/(12*v.a*h)
        -s*v.b12*v.b23_1/(12*v.a*h)
        +s*v.b23**2*v.a_3/(12*v.a**2*h)
        +s*v.a_3*v.b13**2/(12*v.a**2*h)
        +s*v.b13*v.a_1/(6*v.a*h)
        -s*v.b13*v.b13_3/(12*v.a*h)
        -s*v.b12*v.b13_2/(12*v.a*h)
        -s*v.c1*v.b13/(6*v.a*h)
        +s*h*v.b13*v.c3_13/(24*v.a)
        +s*h*v.c1*v.c3_1/(24*v.a)
        +s*h*v.b12*v.c3_12/(24*v.a)
        +s*h*v.b23*v.c3_23/(24*v.a)
        -s*h*v.a_1*v.c3_1/(12*v.a)
        -s*h*v.a_2*v.c3_2/(12*v.a)
        -s*h*v.a_3*v.c3_3/(12*v.a)
        +s*h*v.c3*v.c3_3/(24*v.a)
        -v.a_1**2/(6*v.a)
        -v.a_3**2/(6*v.a)
        -v.a_2**2/(6*v.a)
    )


def _k3_face12_lo(v, h, s):
    return (
        +v.b13*v.a_3*v.b12/(24*v.a**2*h)
        -s*v.b23*v.a_3*v.b12/(24*v.a**2*h)
        -s*v.b12_11/(48)
        -s*v.b12_22/(48)
        -s*v.b12_33/(48)
        +v.b12*v.a_1/(12*v.a*h)
        -v.b12*v.c1/(12*v.a*h)
        +s*v.b12*v.c2/(12*v.a*h)
        +s*v.b12*v.a_1*v.c1/(48*v.a**2)
        +s*v.b12*v.a_1*v.b12_2/(48*v.a**2)
        -s*v.b12**2*v.a_1/(24*v.a**2*h)
        -s*v.b12*v.a_2/(12*v.a*h)
        +s*v.b23*v.a_2*v.b12_3/(48*v.a**2)
        +s*v.b13*v.a_1*v.b12_3/(48*v.a**2)
        +s*v.b12*v.a_2*v.b12_1/(48*v.a**2)
        +s*v.b12*v.a_2*v.c2/(48*v.a**2)
        +s*v.b23*v.a_3*v.c1/(48*v.a**2)
        +s*v.b23*v.a_3*v.b12_2/(48*v.a**2)
        -v.b12*v.b12_2/(24*v.a*h)
        +s*v.b13*v.a_3*v.b12_1/(48*v.a**2)
        +s*v.b13*v.a_3*v.c2/(48*v.a**2)
        +s*v.b12*v.b12_1/(24*v.a*h)
        +s*v.b23*v.b12_3/(24*v.a*h)
        -v.b13*v.b12_3/(24*v.a*h)
        +s*v.b13*v.b23/(12*v.a*h**2)
        +v.a_2*v.b12**2/(24*v.a**2*h)
        -v.c2/(12*h)
        -s*v.b12/(6*h**2)
        +s*v.c1/(12*h)
        +v.a/(6*h**2)
        -v.b12_1/(12*h)
        +s*v.b12_2/(12*h)
        -s*v.b23*v.b12_23/(48*v.a)
        -s*v.b13*v.c2_3/(48*v.a)
        -s*v.b12*v.b12_12/(48*v.a)
        -s*v.b23*v.c1_3/(48*v.a)
        -s*v.b12*v.c1_1/(48*v.a)
        +s*v.a_1*v.c2/(24*v.a)
        -s*v.c2*v.b12_2/(48*v.a)
        +v.b12**2/(12*v.a*h**2)
        -s*v.b13*v.b12_13/(48*v.a)
        -s*v.c1*v.b12_1/(48*v.a)
        +s*v.a_3*v.b12_3/(24*v.a)
        -s*v.c3*v.b12_3/(48*v.a)
        +s*v.a_2*v.c1/(24*v.a)
        -s*v.b12*v.c2_2/(48*v.a)
        +s*v.a_1*v.b12_1/(24*v.a)
        +s*v.a_2*v.b12_2/(24*v.a)
        -s*v.c1*v.c2/(24*v.a)
        -s*v.c1_2/(24)
        -s*v.c2_1/(24)
    )


def _k3_face12_hi(v, h, s):
    return (
        -v.b13*v.a_3*v.b12/(24*v.a**2*h)
        -s*v.b23*v.a_3*v.b12/(24*v.a**2*h)
        +s*v.b12_11/(48)
        +s*v.b12_22/(48)
        +s*v.b12_33/(48)
        -v.b12*v.a_1/(12*v.a*h)
        +v.b12*v.c1/(12*v.a*h)
        +s*v.b12*v.c2/(12*v.a*h)
        -s*v.b12*v.a_1*v.c1/(48*v.a**2)
        -s*v.b12*v.a_1*v.b12_2/(48*v.a**2)
        -s*v.b12**2*v.a_1/(24*v.a**2*h)
        -s*v.b12*v.a_2/(12*v.a*h)
        -s*v.b23*v.a_2*v.b12_3/(48*v.a**2)
        -s*v.b13*v.a_1*v.b12_3/(48*v.a**2)
        -s*v.b12*v.a_2*v.b12_1/(48*v.a**2)
        -s*v.b12*v.a_2*v.c2/(48*v.a**2)
        -s*v.b23*v.a_3*v.c1/(48*v.a**2)
        -s*v.b23*v.a_3*v.b12_2/(48*v.a**2)
        +v.b12*v.b12_2/(24*v.a*h)
        -s*v.b13*v.a_3*v.b12_1/(48*v.a**2)
        -s*v.b13*v.a_3*v.c2/(48*v.a**2)
        +s*v.b12*v.b12_1/(24*v.a*h)
        +s*v.b23*v.b12_3/(24*v.a*h)
        +v.b13*v.b12_3/(24*v.a*h)
        -s*v.b13*v.b23/(12*v.a*h**2)
        -v.a_2*v.b12**2/(24*v.a**2*h)
        +v.c2/(12*h)
        +s*v.b12/(6*h**2)
        +s*v.c1/(12*h)
        +v.a/(6*h**2)
        +v.b12_1/(12*h)
        +s*v.b12_2/(12*h)
        +s*v.b23*v.b12_23/(48*v.a)
        +s*v.b13*v.c2_3/(48*v.a)
        +s*v.b12*v.b12_12/(48*v.a)
        +s*v.b23*v.c1_3/(48*v.a)
        +s*v.b12*v.c1_1/(48*v.a)
        -s*v.a_1*v.c2/(24*v.a)
        +s*v.c2*v.b12_2/(48*v.a)
        +v.b12**2/(12*v.a*h**2)
        +s*v.b13*v.b12_13/(48*v.a)
        +s*v.c1*v.b12_1/(48*v.a)
        -s*v.a_3*v.b12_3/(24*v.a)
        +s*v.c3*v.b12_3/(48*v.a)
        -s*v.a_2*v.c1/(24*v.a)
        +s*v.b12*v.c2_2/(48*v.a)
        -s*v.a_1*v.b12_1/(24*v.a)
        -s*v.a_2*v.b12_2/(24*v.a)
        +s*v.c1*v.c2/(24*v.a)
        +s*v.c1_2/(24)
        +s*v.c2_1/(24)
    )


def _k3_face13_lo(v, h, s):
    return (
        -s*v.c3_1/(24)
        -s*v.b13/(6*h**2)
        -v.c3/(12*h)
        -v.b13_1/(12*h)
        -s*v.b23*v.a_2*v.b13/(24*v.a**2*h)
        -s*v.b13_11/(48)
        -s*v.b13_22/(48)
        -s*v.b13_33/(48)
        +s*v.b13_3/(12*h)
        +s*v.a_3*v.b13_3/(24*v.a)
        -s*v.b12*v.c3_2/(48*v.a)
        -s*v.b13*v.c3_3/(48*v.a)
        +s*v.a_1*v.b13_1/(24*v.a)
        -s*v.c2*v.b13_2/(48*v.a)
        +v.a/(6*h**2)
        +s*v.a_3*v.c1/(24*v.a)
        -s*v.b13*v.c1_1/(48*v.a)
        -s*v.c1*v.b13_1/(48*v.a)
        -s*v.b23*v.b13_23/(48*v.a)
        +s*v.a_1*v.c3/(24*v.a)
        -s*v.c1*v.c3/(24*v.a)
        +s*v.a_2*v.b13_2/(24*v.a)
        -s*v.c3*v.b13_3/(48*v.a)
        -s*v.b12*v.b13_12/(48*v.a)
        +s*v.b13*v.b13_1/(24*v.a*h)
        +s*v.b23*v.b13_2/(24*v.a*h)
        -s*v.b13**2*v.a_1/(24*v.a**2*h)
        +s*v.c3*v.b13/(12*v.a*h)
        -s*v.b13*v.a_3/(12*v.a*h)
        +v.b12*v.a_2*v.b13/(24*v.a**2*h)
        +s*v.c1/(12*h)
        +v.b13**2/(12*v.a*h**2)
        -s*v.b13*v.b13_13/(48*v.a)
        -s*v.b23*v.c1_2/(48*v.a)
        +s*v.b23*v.b12/(12*v.a*h**2)
        +v.a_3*v.b13**2/(24*v.a**2*h)
        +s*v.b13*v.a_1*v.c1/(48*v.a**2)
        +s*v.b12*v.a_1*v.b13_2/(48*v.a**2)
        +s*v.b23*v.a_2*v.c1/(48*v.a**2)
        +s*v.b13*v.a_1*v.b13_3/(48*v.a**2)
        +s*v.b23*v.a_3*v.b13_2/(48*v.a**2)
        +s*v.b13*v.a_3*v.b13_1/(48*v.a**2)
        +s*v.b23*v.a_2*v.b13_3/(48*v.a**2)
        -s*v.c1_3/(24)
        +s*v.b12*v.a_2*v.b13_1/(48*v.a**2)
        +v.b13*v.a_1/(12*v.a*h)
        -v.c1*v.b13/(12*v.a*h)
        +s*v.b12*v.a_2*v.c3/(48*v.a**2)
        -v.b13*v.b13_3/(24*v.a*h)
        +s*v.b13*v.a_3*v.c3/(48*v.a**2)
        -v.b12*v.b13_2/(24*v.a*h)
    )


def _k3_face13_hi(v, h, s):
    return (
        +s*v.c3_1/(24)
        +s*v.b13/(6*h**2)
        +v.c3/(12*h)
        +v.b13_1/(12*h)
        -s*v.b23*v.a_2*v.b13/(24*v.a**2*h)
        +s*v.b13_11/(48)
        +s*v.b13_22/(48)
        +s*v.b13_33/(48)
        +s*v.b13_3/(12*h)
        -s*v.a_3*v.b13_3/(24*v.a)
        +s*v.b12*v.c3_2/(48*v.a)
        +s*v.b13*v.c3_3/(48*v.a)
        -s*v.a_1*v.b13_1/(24*v.a)
        +s*v.c2*v.b13_2/(48*v.a)
        +v.a/(6*h**2)
        -s*v.a_3*v.c1/(24*v.a)
        +s*v.b13*v.c1_1/(48*v.a)
        +s*v.c1*v.b13_1/(48*v.a)
        +s*v.b23*v.b13_23/(48*v.a)
        -s*v.a_1*v.c3/(24*v.a)
        +s*v.c1*v.c3/(24*v.a)
        -s*v.a_2*v.b13_2/(24*v.a)
        +s*v.c3*v.b13_3/(48*v.a)
        +s*v.b12*v.b13_12/(48*v.a)
        +s*v.b13*v.b13_1/(24*v.a*h)
        +s*v.b23*v.b13_2/(24*v.a*h)
        -s*v.b13**2*v.a_1/(24*v.a**2*h)
        +s*v.c3*v.b13/(12*v.a*h)
        -s*v.b13*v.a_3/(12*v.a*h)
        -v.b12*v.a_2*v.b13/(24*v.a**2*h)
        +s*v.c1/(12*h)
        +v.b13**2/(12*v.a*h**2)
        +s*v.b13*v.b13_13/(48*v.a)
        +s*v.b23*v.c1_2/(48*v.a)
        -s*v.b23*v.b12/(12*v.a*h**2)
        -v.a_3*v.b13**2/(24*v.a**2*h)
        -s*v.b13*v.a_1*v.c1/(48*v.a**2)
        -s*v.b12*v.a_1*v.b13_2/(48*v.a**2)
        -s*v.b23*v.a_2*v.c1/(48*v.a**2)
        -s*v.b13*v.a_1*v.b13_3/(48*v.a**2)
        -s*v.b23*v.a_3*v.b13_2/(48*v.a**2)
        +s*v.c1_3/(24)
        -s*v.b13*v.a_3*v.b13_1/(48*v.a**2)
        -s*v.b23*v.a_2*v.b13_3/(48*v.a**2)
        -s*v.b12*v.a_2*v.b13_1/(48*v.a**2)
        -v.b13*v.a_1/(12*v.a*h)
        -s*v.b12*v.a_2*v.c3/(48*v.a**2)
        +v.b13*v.b13_3/(24*v.a*h)
        -s*v.b13*v.a_3*v.c3/(48*v.a**2)
        +v.b12*v.b13_2/(24*v.a*h)
        +v.c1*v.b13/(12*v.a*h)
    )


def _k3_face23_lo(v, h, s):
    return (
        -s*v.c3_2/(24)
        -s*v.b23/(6*h**2)
        -v.b23_2/(12*h)
        -v.c3/(12*h)
        -s*v.b13*v.a_1*v.b23/(24*v.a**2*h)
        -s*v.b23_11/(48)
        -s*v.b23_22/(48)
        -s*v.b23_33/(48)
        -s*v.b12*v.c3_1/(48*v.a)
        +s*v.a_3*v.b23_3/(24*v.a)
        -s*v.b23*v.c2_2/(48*v.a)
        -s*v.b23*v.c3_3/(48*v.a)
        +s*v.a_2*v.c3/(24*v.a)
        +s*v.a_1*v.b23_1/(24*v.a)
        -s*v.c2*v.c3/(24*v.a)
        -s*v.c3*v.b23_3/(48*v.a)
        -s*v.b12*v.b23_12/(48*v.a)
        -s*v.b13*v.c2_1/(48*v.a)
        -s*v.b13*v.b23_13/(48*v.a)
        +s*v.a_2*v.b23_2/(24*v.a)
        +s*v.a_3*v.c2/(24*v.a)
        +v.b12*v.a_1*v.b23/(24*v.a**2*h)
        +s*v.c2/(12*h)
        +v.a/(6*h**2)
        +s*v.b23*v.c3/(12*v.a*h)
        -s*v.b23*v.a_3/(12*v.a*h)
        +s*v.b13*v.b23_1/(24*v.a*h)
        +s*v.b23*v.b23_2/(24*v.a*h)
        +v.b23**2/(12*v.a*h**2)
        -s*v.a_2*v.b23**2/(24*v.a**2*h)
        -s*v.b23*v.b23_23/(48*v.a)
        -s*v.c2*v.b23_2/(48*v.a)
        -s*v.c1*v.b23_1/(48*v.a)
        +s*v.b12*v.b13/(12*v.a*h**2)
        -v.c2*v.b23/(12*v.a*h)
        +s*v.b23*v.a_3*v.c3/(48*v.a**2)
        +s*v.b23*v.a_3*v.b23_2/(48*v.a**2)
        +v.b23*v.a_2/(12*v.a*h)
        +s*v.b12*v.a_1*v.c3/(48*v.a**2)
        +s*v.b13*v.a_1*v.b23_3/(48*v.a**2)
        +s*v.b23*v.a_2*v.b23_3/(48*v.a**2)
        +s*v.b23*v.a_2*v.c2/(48*v.a**2)
        +s*v.b12*v.a_1*v.b23_2/(48*v.a**2)
        +s*v.b13*v.a_1*v.c2/(48*v.a**2)
        +s*v.b13*v.a_3*v.b23_1/(48*v.a**2)
        +s*v.b12*v.a_2*v.b23_1/(48*v.a**2)
        -v.b23*v.b23_3/(24*v.a*h)
        -v.b12*v.b23_1/(24*v.a*h)
        +v.b23**2*v.a_3/(24*v.a**2*h)
        +s*v.b23_3/(12*h)
        -s*v.c2_3/(24)
    )


def _k3_face23_hi(v, h, s):
    return (
        +s*v.c3_2/(24)
        +s*v.b23/(6*h**2)
        +v.b23_2/(12*h)
        +v.c3/(12*h)
        -s*v.b13*v.a_1*v.b23/(24*v.a**2*h)
        +s*v.b23_11/(48)
        +s*v.b23_22/(48)
        +s*v.b23_33/(48)
        +s*v.b12*v.c3_1/(48*v.a)
        -s*v.a_3*v.b23_3/(24*v.a)
        +s*v.b23*v.c2_2/(48*v.a)
        +s*v.b23*v.c3_3/(48*v.a)
        -s*v.a_2*v.c3/(24*v.a)
        -s*v.a_1*v.b23_1/(24*v.a)
        +s*v.c2*v.c3/(24*v.a)
        +s*v.c3*v.b23_3/(48*v.a)
        +s*v.b12*v.b23_12/(48*v.a)
        +s*v.b13*v.c2_1/(48*v.a)
        +s*v.b13*v.b23_13/(48*v.a)
        -s*v.a_2*v.b23_2/(24*v.a)
        -s*v.a_3*v.c2/(24*v.a)
        -v.b12*v.a_1*v.b23/(24*v.a**2*h)
        +s*v.c2/(12*h)
        +v.a/(6*h**2)
        +s*v.b23*v.c3/(12*v.a*h)
        -s*v.b23*v.a_3/(12*v.a*h)
        +s*v.b13*v.b23_1/(24*v.a*h)
        +s*v.b23*v.b23_2/(24*v.a*h)
        +v.c2*v.b23/(12*v.a*h)
        -s*v.a_2*v.b23**2/(24*v.a**2*h)
        +v.b23**2/(12*v.a*h**2)
        +s*v.b23*v.b23_23/(48*v.a)
        +s*v.c2*v.b23_2/(48*v.a)
        +s*v.c1*v.b23_1/(48*v.a)
        -s*v.b12*v.b13/(12*v.a*h**2)
        -v.b23*v.a_2/(12*v.a*h)
        -s*v.b23*v.a_3*v.b23_2/(48*v.a**2)
        -s*v.b23*v.a_3*v.c3/(48*v.a**2)
        -s*v.b12*v.a_1*v.c3/(48*v.a**2)
        -s*v.b13*v.a_1*v.b23_3/(48*v.a**2)
        -s*v.b23*v.a_2*v.b23_3/(48*v.a**2)
        -s*v.b23*v.a_2*v.c2/(48*v.a**2)
        -s*v.b12*v.a_1*v.b23_2/(48*v.a**2)
        -s*v.b13*v.a_1*v.c2/(48*v.a**2)
        -s*v.b13*v.a_3*v.b23_1/(48*v.a**2)
        -s*v.b12*v.a_2*v.b23_1/(48*v.a**2)
        +v.b23*v.b23_3/(24*v.a*h)
        +v.b12*v.b23_1/(24*v.a*h)
        -v.b23**2*v.a_3/(24*v.a**2*h)
        +s*v.b23_3/(12*h)
        +s*v.c2_3/(24)
    )


def _k3_corner_mm(v, h, s):
    return (
        +s*v.b13_2/(48*h)
        -s*v.b13/(24*h**2)
        +s*v.b12_3/(48*h)
        +s*v.b23_1/(48*h)
        +s*v.b12*v.b13_1/(96*v.a*h)
        +s*v.b13*v.b12_1/(96*v.a*h)
        +s*v.b23*v.b13_3/(96*v.a*h)
        -s*v.b23*v.b12/(24*v.a*h**2)
        -s*v.b13*v.a_3*v.b23/(48*v.a**2*h)
        -s*v.b12*v.a_2*v.b23/(48*v.a**2*h)
        +v.b23/(24*h**2)
        +s*v.b13*v.b23_3/(96*v.a*h)
        +s*v.b23*v.c1/(48*v.a*h)
        +v.b12*v.b13/(24*v.a*h**2)
        -s*v.b12/(24*h**2)
        -s*v.a_2*v.b13/(48*v.a*h)
        -s*v.a_3*v.b12/(48*v.a*h)
        -s*v.b13*v.a_1*v.b12/(48*v.a**2*h)
        -s*v.a_1*v.b23/(48*v.a*h)
        +s*v.b12*v.b23_2/(96*v.a*h)
        +s*v.b23*v.b12_2/(96*v.a*h)
        +s*v.c3*v.b12/(48*v.a*h)
        +s*v.b13*v.c2/(48*v.a*h)
        -s*v.b13*v.b23/(24*v.a*h**2)
    )


def _k3_corner_pp(v, h, s):
    return (
        +s*v.b13_2/(48*h)
        +s*v.b13/(24*h**2)
        +s*v.b12_3/(48*h)
        +s*v.b23_1/(48*h)
        +s*v.b12*v.b13_1/(96*v.a*h)
        +s*v.b13*v.b12_1/(96*v.a*h)
        +s*v.b23*v.b13_3/(96*v.a*h)
        +s*v.b23*v.b12/(24*v.a*h**2)
        -s*v.b13*v.a_3*v.b23/(48*v.a**2*h)
        -s*v.b12*v.a_2*v.b23/(48*v.a**2*h)
        +v.b23/(24*h**2)
        +s*v.b13*v.b23_3/(96*v.a*h)
        +s*v.b23*v.c1/(48*v.a*h)
        +v.b12*v.b13/(24*v.a*h**2)
        +s*v.b12/(24*h**2)
        -s*v.a_2*v.b13/(48*v.a*h)
        -s*v.a_3*v.b12/(48*v.a*h)
        -s*v.b13*v.a_1*v.b12/(48*v.a**2*h)
        -s*v.a_1*v.b23/(48*v.a*h)
        +s*v.b12*v.b23_2/(96*v.a*h)
        +s*v.b23*v.b12_2/(96*v.a*h)
        +s*v.c3*v.b12/(48*v.a*h)
        +s*v.b13*v.c2/(48*v.a*h)
        +s*v.b13*v.b23/(24*v.a*h**2)
    )


def _k3_corner_pm(v, h, s):
    return (
        -s*v.b13_2/(48*h)
        -s*v.b13/(24*h**2)
        -s*v.b12_3/(48*h)
        -s*v.b23_1/(48*h)
        -s*v.b12*v.b13_1/(96*v.a*h)
        -s*v.b13*v.b12_1/(96*v.a*h)
        -s*v.b23*v.b13_3/(96*v.a*h)
        -s*v.b23*v.b12/(24*v.a*h**2)
        +s*v.b13*v.a_3*v.b23/(48*v.a**2*h)
        +s*v.b12*v.a_2*v.b23/(48*v.a**2*h)
        -v.b23/(24*h**2)
        -s*v.b13*v.b23_3/(96*v.a*h)
        -s*v.b23*v.c1/(48*v.a*h)
        -v.b12*v.b13/(24*v.a*h**2)
        +s*v.b12/(24*h**2)
        +s*v.a_2*v.b13/(48*v.a*h)
        +s*v.a_3*v.b12/(48*v.a*h)
        +s*v.b13*v.a_1*v.b12/(48*v.a**2*h)
        +s*v.a_1*v.b23/(48*v.a*h)
        -s*v.b12*v.b23_2/(96*v.a*h)
        -s*v.b23*v.b12_2/(96*v.a*h)
        -s*v.c3*v.b12/(48*v.a*h)
        -s*v.b13*v.c2/(48*v.a*h)
        +s*v.b13*v.b23/(24*v.a*h**2)
    )


def _k3_corner_mp(v, h, s):
    return (
        -s*v.b13_2/(48*h)
        +s*v.b13/(24*h**2)
        -s*v.b12_3/(48*h)
        -s*v.b23_1/(48*h)
        -s*v.b12*v.b13_1/(96*v.a*h)
        -s*v.b13*v.b12_1/(96*v.a*h)
        -s*v.b23*v.b13_3/(96*v.a*h)
        +s*v.b23*v.b12/(24*v.a*h**2)
        +s*v.b13*v.a_3*v.b23/(48*v.a**2*h)
        +s*v.b12*v.a_2*v.b23/(48*v.a**2*h)
        -v.b23/(24*h**2)
        -s*v.b13*v.b23_3/(96*v.a*h)
        -s*v.b23*v.c1/(48*v.a*h)
        -v.b12*v.b13/(24*v.a*h**2)
        -s*v.b12/(24*h**2)
        +s*v.a_2*v.b13/(48*v.a*h)
        +s*v.a_3*v.b12/(48*v.a*h)
        +s*v.b13*v.a_1*v.b12/(48*v.a**2*h)
        +s*v.a_1*v.b23/(48*v.a*h)
        -s*v.b12*v.b23_2/(96*v.a*h)
        -s*v.b23*v.b12_2/(96*v.a*h)
        -s*v.c3*v.b12/(48*v.a*h)
        -s*v.b13*v.c2/(48*v.a*h)
        -s*v.b13*v.b23/(24*v.a*h**2)
    )


def _m3_edge1(v, h, s):
    return (1 / 12 - s * h * v.b12 * v.a_2 / (24 * v.a**2) - s * h * v.b13 * v.a_3 / (24 * v.a**2)
            + s * h * v.c1 / (24 * v.a) - s * h * v.a_1 / (12 * v.a))


def _m3_edge2(v, h, s):
    return (1 / 12 - s * h * v.b12 * v.a_1 / (24 * v.a**2) - s * h * v.b23 * v.a_3 / (24 * v.a**2)
            + s * h * v.c2 / (24 * v.a) - s * h * v.a_2 / (12 * v.a))


def _m3_edge3(v, h, s):
    return (1 / 12 - s * h * v.b23 * v.a_2 / (24 * v.a**2) - s * h * v.b13 * v.a_1 / (24 * v.a**2)
            + s * h * v.c3 / (24 * v.a) - s * h * v.a_3 / (12 * v.a))


def _m3_pair(v, bpair, si, sj):
    return si * sj * bpair / (48 * v.a)


def _g3_tilde(v, h):
    return (
        (v.c1 * h**2 * v.a - 2 * h**2 * v.a_1 * v.a - v.b12 * h**2 * v.a_2 - v.b13 * h**2 * v.a_3) * v.g_1 / (12 * v.a**2)
        + v.b13 * h**2 * v.g_13 / (12 * v.a)
        + (v.c2 * h**2 * v.a - 2 * h**2 * v.a_2 * v.a - v.b12 * h**2 * v.a_1 - v.b23 * h**2 * v.a_3) * v.g_2 / (12 * v.a**2)
        + v.b23 * h**2 * v.g_23 / (12 * v.a)
        + (v.c3 * h**2 * v.a - 2 * h**2 * v.a_3 * v.a - v.b13 * h**2 * v.a_1 - v.b23 * h**2 * v.a_2) * v.g_3 / (12 * v.a**2)
        + h**2 * v.g_11 / 12
        + v.b12 * h**2 * v.g_12 / (12 * v.a)
        + h**2 * v.g_33 / 12
        + h**2 * v.g_22 / 12
        + v.g
    )


# ----------------------------------------------------------------------
# public constructors
# ----------------------------------------------------------------------

def hoc_weights_1d(s: CoefficientSample, h: float) -> StencilWeights:
    """Fourth-order weights for the one-dimensional reduced problem."""
    _check_inputs(s, h, 1)
    v = _values_1d(s)
    k = {(-1,): _k1_edge(v, h, -1), (0,): _k1_center(v, h), (1,): _k1_edge(v, h, +1)}
    m = {(-1,): _m1_edge(v, h, -1), (0,): _along(v, 5 / 6), (1,): _m1_edge(v, h, +1)}
    gt = 0.0 if _zero_entry((v.g, v.g_1, v.g_11)) else _g1_tilde(v, h)
    return StencilWeights(1, k, m, gt)


def hoc_weights_2d(s: CoefficientSample, h: float) -> StencilWeights:
    """Fourth-order 9-point weights (requires a shared diffusion coefficient)."""
    _check_inputs(s, h, 2)
    _require_shared_a(s)
    v = _values_2d(s)
    k = {
        (0, 0): _k2_center(v, h),
        (1, 0): _k2_edge1(v, h, +1), (-1, 0): _k2_edge1(v, h, -1),
        (0, 1): _k2_edge2(v, h, +1), (0, -1): _k2_edge2(v, h, -1),
        (1, -1): _k2_corner_lo(v, h, +1), (-1, -1): _k2_corner_lo(v, h, -1),
        (1, 1): _k2_corner_hi(v, h, +1), (-1, 1): _k2_corner_hi(v, h, -1),
    }
    m = {
        (0, 0): _along(v, 2 / 3),
        (1, 0): _m2_edge1(v, h, +1), (-1, 0): _m2_edge1(v, h, -1),
        (0, 1): _m2_edge2(v, h, +1), (0, -1): _m2_edge2(v, h, -1),
    }
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            m[(s1, s2)] = _m2_corner(v, s1, s2)
    gt = 0.0 if _zero_entry((v.g, v.g_1, v.g_2, v.g_11, v.g_12, v.g_22)) else _g2_tilde(v, h)
    return StencilWeights(2, k, m, gt)


def hoc_weights_3d(s: CoefficientSample, h: float) -> StencilWeights:
    """Fourth-order 27-point weights (requires a shared diffusion coefficient)."""
    _check_inputs(s, h, 3)
    _require_shared_a(s)
    v = _values_3d(s)
    k = {(0, 0, 0): _k3_center(v, h)}
    for sgn in (-1, 1):
        k[(sgn, 0, 0)] = _k3_edge1(v, h, sgn)
        k[(0, sgn, 0)] = _k3_edge2(v, h, sgn)
        k[(0, 0, sgn)] = _k3_edge3(v, h, sgn)
        k[(sgn, -1, 0)] = _k3_face12_lo(v, h, sgn)
        k[(sgn, 1, 0)] = _k3_face12_hi(v, h, sgn)
        k[(sgn, 0, -1)] = _k3_face13_lo(v, h, sgn)
        k[(sgn, 0, 1)] = _k3_face13_hi(v, h, sgn)
        k[(0, sgn, -1)] = _k3_face23_lo(v, h, sgn)
        k[(0, sgn, 1)] = _k3_face23_hi(v, h, sgn)
        k[(sgn, -1, -1)] = _k3_corner_mm(v, h, sgn)
        k[(sgn, 1, 1)] = _k3_corner_pp(v, h, sgn)
        k[(sgn, 1, -1)] = _k3_corner_pm(v, h, sgn)
        k[(sgn, -1, 1)] = _k3_corner_mp(v, h, sgn)
    m = {(0, 0, 0): _along(v, 1 / 2)}
    for sgn in (-1, 1):
        m[(sgn, 0, 0)] = _m3_edge1(v, h, sgn)
        m[(0, sgn, 0)] = _m3_edge2(v, h, sgn)
        m[(0, 0, sgn)] = _m3_edge3(v, h, sgn)
    for si in (-1, 1):
        for sj in (-1, 1):
            m[(si, sj, 0)] = _m3_pair(v, v.b12, si, sj)
            m[(si, 0, sj)] = _m3_pair(v, v.b13, si, sj)
            m[(0, si, sj)] = _m3_pair(v, v.b23, si, sj)
            for sk in (-1, 1):
                m[(si, sj, sk)] = 0.0
    g_vals = (v.g, v.g_1, v.g_2, v.g_3, v.g_11, v.g_12, v.g_13, v.g_22, v.g_23, v.g_33)
    gt = 0.0 if _zero_entry(g_vals) else _g3_tilde(v, h)
    return StencilWeights(3, k, m, gt)


_HOC_BY_DIM = {1: hoc_weights_1d, 2: hoc_weights_2d, 3: hoc_weights_3d}


def hoc_weights(s: CoefficientSample, h: float) -> StencilWeights:
    """Dispatch on sample dimension (1, 2 or 3)."""
    try:
        fn = _HOC_BY_DIM[s.dim]
    except KeyError:
        raise StencilError(f"no fourth-order weights for dim {s.dim}") from None
    return fn(s, h)


def _along(v, const):
    """Broadcast a constant entry to the shape of the evaluated sample."""
    return const + 0.0 * v.a


def baseline_weights(s: CoefficientSample, h: float, dim: int | None = None) -> StencilWeights:
    """Plain second-order central weights: a_i D2_i + b_ij Dc_i Dc_j + c_i Dc_i.

    M is the identity (center 1) and g_tilde is g itself.  Unlike the
    fourth-order weights this works with per-axis a_i.
    """
    n = s.dim if dim is None else dim
    _check_inputs(s, h, n)
    import itertools

    k = {}
    for off in itertools.product((-1, 0, 1), repeat=n):
        nonzero = [i for i, o in enumerate(off) if o != 0]
        if len(nonzero) == 0:
            k[off] = sum(-2 * s.a[i] / h**2 for i in range(n)) + 0.0 * np.asarray(s.a[0])
        elif len(nonzero) == 1:
            i = nonzero[0]
            k[off] = s.a[i] / h**2 + off[i] * s.c[i] / (2 * h)
        elif len(nonzero) == 2:
            i, j = nonzero
            k[off] = off[i] * off[j] * s.b[(i, j)] / (4 * h**2)
        else:
            k[off] = 0.0
    m = {off: (1.0 + 0.0 * np.asarray(s.a[0]) if all(o == 0 for o in off) else 0.0)
         for off in itertools.product((-1, 0, 1), repeat=n)}
    return StencilWeights(n, k, m, s.g)


def hoc_g_tilde(s: CoefficientSample, h: float):
    """Just the discrete source value (skips the K and M entries)."""
    if s.dim == 1:
        v = _values_1d(s)
        return 0.0 if _zero_entry((v.g, v.g_1, v.g_11)) else _g1_tilde(v, h)
    if s.dim == 2:
        v = _values_2d(s)
        vals = (v.g, v.g_1, v.g_2, v.g_11, v.g_12, v.g_22)
        return 0.0 if _zero_entry(vals) else _g2_tilde(v, h)
    if s.dim == 3:
        v = _values_3d(s)
        vals = (v.g, v.g_1, v.g_2, v.g_3, v.g_11, v.g_12, v.g_13, v.g_22, v.g_23, v.g_33)
        return 0.0 if _zero_entry(vals) else _g3_tilde(v, h)
    raise StencilError(f"no fourth-order source for dim {s.dim}")
