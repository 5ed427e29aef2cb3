"""Independent re-derivation of the compact-stencil weights, used as a test oracle.

The production weights are literal transcriptions of closed-form coefficient
tables.  This module rebuilds them from first principles instead: starting
from the second-order central-difference form of the PDE, the leading
truncation terms (third and fourth derivatives of u) are eliminated through
the auxiliary relations obtained by differentiating the PDE itself, and every
remaining u-derivative is replaced by its central-difference stencil on the
3^n-point cube.  Occurrences of f = -u_tau + g and its partials turn into the
time-derivative weights and the source weights.  No closed-form coefficient
expression appears here, so agreement with the transcription is a genuine
cross-check.

Everything is linear, so expressions are carried as numeric coefficient
vectors over three bases: U at each stencil offset, dU/dtau at each offset,
and the partials of g.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


def offsets(n):
    return list(itertools.product((-1, 0, 1), repeat=n))


def g_slots(n):
    slots = [()]
    slots += [(k,) for k in range(n)]
    slots += [(k, p) for k in range(n) for p in range(k, n)]
    return slots


# per-axis stencil weights for derivative orders 0, 1, 2 at offsets -1, 0, +1
def _axis_weights(order, h):
    if order == 0:
        return np.array([0.0, 1.0, 0.0])
    if order == 1:
        return np.array([-1.0 / (2 * h), 0.0, 1.0 / (2 * h)])
    if order == 2:
        return np.array([1.0, -2.0, 1.0]) / h**2
    raise ValueError(order)


@dataclass
class Expr:
    """Linear expression in (U offsets, dU/dtau offsets, g partial slots)."""

    n: int
    u: np.ndarray
    ut: np.ndarray
    g: np.ndarray

    @classmethod
    def zero(cls, n):
        m = 3**n
        return cls(n, np.zeros(m), np.zeros(m), np.zeros(len(g_slots(n))))

    def __iadd__(self, other):
        self.u += other.u
        self.ut += other.ut
        self.g += other.g
        return self

    def scaled(self, c):
        return Expr(self.n, c * self.u, c * self.ut, c * self.g)


class SchemeDeriver:
    """Derives K-hat, M-hat and the g-tilde coefficients for one frozen point.

    ``coef`` supplies numeric values: 'a' (shared diffusion), 'da' (n,),
    'dda' (n, n), 'b'/'db'/'ddb' keyed by pair (i, j) with i < j, 'c' (n,),
    'dc' (n, n) with dc[i][k] the x_k-partial of c_i, 'ddc' (n, n, n).
    """

    def __init__(self, n, h, coef):
        self.n = n
        self.h = h
        self.c_ = coef
        self.offs = offsets(n)
        self.slots = g_slots(n)
        self._a_cache = {}

    # -- coefficient accessors -------------------------------------------
    def a(self):
        return self.c_["a"]

    def da(self, k):
        return self.c_["da"][k]

    def dda(self, k, p):
        kk, pp = min(k, p), max(k, p)
        return self.c_["dda"][kk][pp]

    def b(self, i, j):
        return self.c_["b"].get((min(i, j), max(i, j)), 0.0)

    def db(self, i, j, k):
        return self.c_["db"].get((min(i, j), max(i, j)), np.zeros(self.n))[k]

    def ddb(self, i, j, k, p):
        kk, pp = min(k, p), max(k, p)
        return self.c_["ddb"].get((min(i, j), max(i, j)), np.zeros((self.n, self.n)))[kk][pp]

    def c(self, i):
        return self.c_["c"][i]

    def dc(self, i, k):
        return self.c_["dc"][i][k]

    def ddc(self, i, k, p):
        kk, pp = min(k, p), max(k, p)
        return self.c_["ddc"][i][kk][pp]

    # -- discrete operators ----------------------------------------------
    def op(self, orders) -> Expr:
        """Central-difference stencil for the u-derivative with the given
        per-axis orders (each 0, 1 or 2)."""
        e = Expr.zero(self.n)
        per_axis = [_axis_weights(o, self.h) for o in orders]
        for idx, off in enumerate(self.offs):
            w = 1.0
            for k, s in enumerate(off):
                w *= per_axis[k][s + 1]
            e.u[idx] = w
        return e

    def u_deriv(self, axes) -> Expr:
        """Stencil for d^len(axes) u / prod dx_axes, substituting the
        auxiliary relation when a pure third derivative appears."""
        orders = [0] * self.n
        for ax in axes:
            orders[ax] += 1
        if max(orders) <= 2:
            return self.op(orders)
        if sorted(orders)[-1] == 3 and sum(orders) == 3:
            k = orders.index(3)
            return self.A(k)
        raise ValueError(f"non-compact derivative {axes}")

    def f_deriv(self, axes) -> Expr:
        """f = -u_tau + g, discretized: partials of f move u_tau onto the
        stencil and g into the source slots."""
        e = Expr.zero(self.n)
        orders = [0] * self.n
        for ax in axes:
            orders[ax] += 1
        e.ut -= self.op(orders).u
        key = tuple(sorted(axes))
        e.g[self.slots.index(key)] += 1.0
        return e

    # -- auxiliary relations ----------------------------------------------
    def A(self, k) -> Expr:
        """Relation for d^3 u / dx_k^3 from the once-differentiated PDE."""
        if k in self._a_cache:
            return self._a_cache[k]
        n, a = self.n, self.a()
        e = Expr.zero(n)
        for i in range(n):
            if i != k:
                e += self.u_deriv((i, i, k)).scaled(-a / a)
                e += self.u_deriv((i, i)).scaled(-self.da(k) / a)
        e += self.u_deriv((k, k)).scaled(-self.da(k) / a)
        for i in range(n):
            for j in range(i + 1, n):
                e += self.u_deriv((i, j, k)).scaled(-self.b(i, j) / a)
                e += self.u_deriv((i, j)).scaled(-self.db(i, j, k) / a)
        for i in range(n):
            e += self.u_deriv((i, k)).scaled(-self.c(i) / a)
            e += self.u_deriv((i,)).scaled(-self.dc(i, k) / a)
        e += self.f_deriv((k,)).scaled(1.0 / a)
        self._a_cache[k] = e
        return e

    def B(self, k) -> Expr:
        """Relation for d^4 u / dx_k^4 (with the mixed b_ik u_ikkk terms
        excluded; those are routed through the C relations)."""
        n, a = self.n, self.a()
        e = Expr.zero(n)
        for i in range(n):
            if i == k:
                continue
            e += self.u_deriv((i, i, k, k)).scaled(-a / a)
            e += self.u_deriv((i, i, k)).scaled(-2 * self.da(k) / a)
            e += self.u_deriv((i, i)).scaled(-self.dda(k, k) / a)
        e += self.A(k).scaled(-2 * self.da(k) / a)
        e += self.u_deriv((k, k)).scaled(-self.dda(k, k) / a)
        for i in range(n):
            for j in range(i + 1, n):
                if i != k and j != k:
                    e += self.u_deriv((i, j, k, k)).scaled(-self.b(i, j) / a)
                    e += self.u_deriv((i, j, k)).scaled(-2 * self.db(i, j, k) / a)
                    e += self.u_deriv((i, j)).scaled(-self.ddb(i, j, k, k) / a)
        for i in range(k):
            e += self.u_deriv((i, k, k)).scaled(-2 * self.db(i, k, k) / a)
            e += self.u_deriv((i, k)).scaled(-self.ddb(i, k, k, k) / a)
        for j in range(k + 1, n):
            e += self.u_deriv((j, k, k)).scaled(-2 * self.db(k, j, k) / a)
            e += self.u_deriv((j, k)).scaled(-self.ddb(k, j, k, k) / a)
        for i in range(n):
            e += self.u_deriv((i, k, k)).scaled(-self.c(i) / a)
            e += self.u_deriv((i, k)).scaled(-2 * self.dc(i, k) / a)
            e += self.u_deriv((i,)).scaled(-self.ddc(i, k, k) / a)
        e += self.f_deriv((k, k)).scaled(1.0 / a)
        return e

    def C(self, k, p) -> Expr:
        """Relation for a_k u_kkkp + a_p u_kppp from cross-differentiation."""
        n, a = self.n, self.a()
        e = Expr.zero(n)
        for i in range(n):
            if i in (k, p):
                continue
            e += self.u_deriv((i, i, k, p)).scaled(-a)
            e += self.u_deriv((i, i, p)).scaled(-self.da(k))
            e += self.u_deriv((i, i, k)).scaled(-self.da(p))
            e += self.u_deriv((i, i)).scaled(-self.dda(k, p))
        e += self.A(p).scaled(-self.da(k))
        e += self.u_deriv((p, p, k)).scaled(-self.da(p))
        e += self.u_deriv((p, p)).scaled(-self.dda(k, p))
        e += self.u_deriv((k, k, p)).scaled(-self.da(k))
        e += self.A(k).scaled(-self.da(p))
        e += self.u_deriv((k, k)).scaled(-self.dda(k, p))
        for i in range(n):
            for j in range(i + 1, n):
                e += self.u_deriv((i, j, k, p)).scaled(-self.b(i, j))
                e += self.u_deriv((i, j, p)).scaled(-self.db(i, j, k))
                e += self.u_deriv((i, j, k)).scaled(-self.db(i, j, p))
                e += self.u_deriv((i, j)).scaled(-self.ddb(i, j, k, p))
        for i in range(n):
            e += self.u_deriv((i, k, p)).scaled(-self.c(i))
            e += self.u_deriv((i, p)).scaled(-self.dc(i, k))
            e += self.u_deriv((i, k)).scaled(-self.dc(i, p))
            e += self.u_deriv((i,)).scaled(-self.ddc(i, k, p))
        e += self.f_deriv((k, p))
        return e

    # -- the scheme --------------------------------------------------------
    def derive(self):
        """Return (k_hat, m_hat, g_tilde_coeffs).

        k_hat and m_hat map stencil offsets to weights; g_tilde_coeffs maps
        g-partial slots to the coefficients that assemble the right-hand
        side value from g and its partials.
        """
        n, a, h = self.n, self.a(), self.h
        e = Expr.zero(n)
        for i in range(n):
            e += self.u_deriv((i, i)).scaled(a)
        for i in range(n):
            for j in range(i + 1, n):
                e += self.u_deriv((i, j)).scaled(self.b(i, j))
        for i in range(n):
            e += self.u_deriv((i,)).scaled(self.c(i))
        for i in range(n):
            e += self.B(i).scaled(-a * h**2 / 12)
        for i in range(n):
            for j in range(i + 1, n):
                e += self.C(i, j).scaled(-self.b(i, j) * h**2 / (12 * a))
        for i in range(n):
            e += self.A(i).scaled(-self.c(i) * h**2 / 6)

        # e approximates f = -u_tau + g at the center node, so the scheme
        # M dU/dtau + K U = g_tilde reads off as below.
        center = self.offs.index((0,) * n)
        m = e.ut.copy()
        m[center] += 1.0
        gt = -e.g
        gt[self.slots.index(())] += 1.0
        k_hat = {off: e.u[i] for i, off in enumerate(self.offs)}
        m_hat = {off: m[i] for i, off in enumerate(self.offs)}
        g_tilde = {slot: gt[i] for i, slot in enumerate(self.slots)}
        return k_hat, m_hat, g_tilde


def random_coef(n, rng, zero_b=False, zero_derivs=False):
    """Random frozen coefficient data with a < 0, for oracle comparisons."""
    coef = {
        "a": -float(rng.uniform(0.2, 2.0)),
        "da": rng.uniform(-1, 1, n) * (0 if zero_derivs else 1),
        "dda": rng.uniform(-1, 1, (n, n)),
        "b": {}, "db": {}, "ddb": {},
        "c": rng.uniform(-2, 2, n),
        "dc": rng.uniform(-1, 1, (n, n)) * (0 if zero_derivs else 1),
        "ddc": rng.uniform(-1, 1, (n, n, n)),
    }
    coef["dda"] = np.triu(coef["dda"]) * (0 if zero_derivs else 1)
    coef["ddc"] = np.array([np.triu(m) for m in coef["ddc"]]) * (0 if zero_derivs else 1)
    for i in range(n):
        for j in range(i + 1, n):
            if zero_b:
                continue
            coef["b"][(i, j)] = float(rng.uniform(-1.5, 1.5))
            coef["db"][(i, j)] = rng.uniform(-1, 1, n) * (0 if zero_derivs else 1)
            coef["ddb"][(i, j)] = np.triu(rng.uniform(-1, 1, (n, n))) * (0 if zero_derivs else 1)
    return coef
