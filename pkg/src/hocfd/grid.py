"""Uniform tensor-product grids with linear indexing and compact-stencil neighborhoods.

A grid in n dimensions is the tensor product of n uniform 1-D node sets.  Axis k
has ``counts[k]`` cells, hence ``counts[k] + 1`` nodes, and step
``steps[k] = (x_max - x_min) / counts[k]``.  Linearization is row-major with
axis 0 slowest, so sweeps along the last axis are contiguous.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    """Invalid grid construction or indexing."""


@dataclass(frozen=True)
class Grid:
    """Immutable uniform tensor-product grid.

    Attributes:
        dim: number of spatial dimensions, >= 1.
        bounds: per-axis (min, max) pairs.
        counts: per-axis cell counts N_k (node count per axis is N_k + 1).
        steps: per-axis step sizes (max - min) / N_k.
    """

    dim: int
    bounds: tuple[tuple[float, float], ...]
    counts: tuple[int, ...]
    steps: tuple[float, ...] = field(init=False)

    def __post_init__(self):
        if self.dim < 1 or len(self.bounds) != self.dim or len(self.counts) != self.dim:
            raise GridError("bounds/counts length must equal dim >= 1")
        for k, ((lo, hi), n) in enumerate(zip(self.bounds, self.counts)):
            if n < 2:
                raise GridError(f"axis {k}: need at least 2 cells, got {n}")
            if not lo < hi:
                raise GridError(f"axis {k}: inverted bounds ({lo}, {hi})")
        object.__setattr__(
            self,
            "steps",
            tuple((hi - lo) / n for (lo, hi), n in zip(self.bounds, self.counts)),
        )

    @property
    def shape(self) -> tuple[int, ...]:
        """Node count per axis."""
        return tuple(n + 1 for n in self.counts)

    @property
    def n_nodes(self) -> int:
        return int(np.prod(self.shape))

    def is_uniform(self, rel_tol: float = 1e-12) -> bool:
        """True when every axis shares a common step h (HOC precondition)."""
        h = self.steps[0]
        return all(abs(s - h) <= rel_tol * abs(h) for s in self.steps)

    def axis_nodes(self, k: int) -> np.ndarray:
        lo, _ = self.bounds[k]
        return lo + self.steps[k] * np.arange(self.counts[k] + 1)

    def node_coords(self, idx: tuple[int, ...]) -> tuple[float, ...]:
        self._check_index(idx)
        return tuple(lo + i * s for (lo, _), s, i in zip(self.bounds, self.steps, idx))

    def linearize(self, idx: tuple[int, ...]) -> int:
        self._check_index(idx)
        return int(np.ravel_multi_index(idx, self.shape))

    def delinearize(self, lin: int) -> tuple[int, ...]:
        if not 0 <= lin < self.n_nodes:
            raise GridError(f"linear index {lin} out of range")
        return tuple(int(i) for i in np.unravel_index(lin, self.shape))

    def iter_indices(self):
        """All multi-indices in linearization order."""
        return itertools.product(*(range(n + 1) for n in self.counts))

    def _check_index(self, idx: tuple[int, ...]) -> None:
        if len(idx) != self.dim:
            raise GridError(f"index arity {len(idx)} != dim {self.dim}")
        for k, i in enumerate(idx):
            if not 0 <= i <= self.counts[k]:
                raise GridError(f"index {idx} out of range on axis {k}")


@dataclass(frozen=True)
class NodeClass:
    """Boundary classification of one node.

    tag is 'interior', 'face' or 'corner'.  For faces, ``fixed`` maps each
    bound axis to 'min' or 'max'; edges in 3-D are faces with two bound axes.
    Corners have every axis bound.
    """

    tag: str
    fixed: tuple[tuple[int, str], ...] = ()

    @property
    def fixed_axes(self) -> dict[int, str]:
        return dict(self.fixed)


def build_grid(bounds, counts) -> Grid:
    """Construct a grid from per-axis (min, max) bounds and cell counts.

    Rejects counts below 2 and inverted bounds.
    """
    bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
    counts = tuple(int(n) for n in counts)
    return Grid(dim=len(bounds), bounds=bounds, counts=counts)


def offsets(dim: int) -> list[tuple[int, ...]]:
    """The 3^dim compact-stencil offsets in lexicographic order."""
    return list(itertools.product((-1, 0, 1), repeat=dim))


def compact_stencil(g: Grid, idx: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Neighbors of an interior node over the {-1,0,1}^n offset cube.

    Returns (offset, neighbor multi-index) pairs in lexicographic offset
    order; raises GridError when idx is not interior.
    """
    cls = classify_node(g, idx)
    if cls.tag != "interior":
        raise GridError(f"compact stencil requires an interior node, got {idx}")
    return [(off, tuple(i + o for i, o in zip(idx, off))) for off in offsets(g.dim)]


def classify_node(g: Grid, idx: tuple[int, ...]) -> NodeClass:
    """Classify a node as interior, face (with bound axes/sides) or corner."""
    g._check_index(idx)
    fixed = []
    for k, i in enumerate(idx):
        if i == 0:
            fixed.append((k, "min"))
        elif i == g.counts[k]:
            fixed.append((k, "max"))
    if not fixed:
        return NodeClass("interior")
    if len(fixed) == g.dim:
        return NodeClass("corner", tuple(fixed))
    return NodeClass("face", tuple(fixed))
