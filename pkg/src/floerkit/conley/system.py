"""Cell-level outer approximations of a sampled flow."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .flows import FlowSpec


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    """Directed graph on the full cubes of a grid.

    ``adjacency[c, d] = 1`` for a non-loop edge ``c -> d``; self-loops live in
    ``self_loops``.  Cells are numbered in row-major order of their integer
    coordinates.  ``cell_lower``/``cell_upper`` (shape ``(cells, n)``) hold the
    per-cell field enclosures; ``spec`` is kept so fixed subgrids can be resampled.
    """

    shape: tuple[int, ...]
    adjacency: sparse.csr_matrix
    self_loops: np.ndarray
    slack: tuple[float, ...]
    spec: FlowSpec | None = None
    cell_lower: np.ndarray | None = None
    cell_upper: np.ndarray | None = None

    @property
    def size(self) -> int:
        return int(np.prod(self.shape)) if self.shape else 1

    @property
    def dimension(self) -> int:
        return len(self.shape)

    def coords(self, cell: int) -> tuple[int, ...]:
        return tuple(int(x) for x in np.unravel_index(cell, self.shape)) if self.shape else ()

    def index(self, coords: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(coords), self.shape)) if self.shape else 0

    def edges(self) -> list[tuple[int, int]]:
        """All edges including self-loops, sorted."""
        coo = self.adjacency.tocoo()
        out = list(zip(coo.row.tolist(), coo.col.tolist()))
        out += [(int(c), int(c)) for c in np.flatnonzero(self.self_loops)]
        return sorted(out)

    def successors(self, cell: int) -> list[int]:
        a = self.adjacency
        out = a.indices[a.indptr[cell]:a.indptr[cell + 1]].tolist()
        if self.self_loops[cell]:
            out.append(cell)
        return sorted(out)

    def boundary_mask(self) -> np.ndarray:
        """Cells touching the outer box boundary."""
        if not self.shape:
            return np.zeros(1, dtype=bool)
        grid = np.zeros(self.shape, dtype=bool)
        for axis, r in enumerate(self.shape):
            idx = [slice(None)] * len(self.shape)
            idx[axis] = 0
            grid[tuple(idx)] = True
            idx[axis] = r - 1
            grid[tuple(idx)] = True
        return grid.ravel()

    def neighbor_mask(self, mask: np.ndarray) -> np.ndarray:
        """Cells face-adjacent to some cell of ``mask`` (not including ``mask`` itself unless adjacent)."""
        if not self.shape:
            return np.zeros(1, dtype=bool)
        grid = mask.reshape(self.shape)
        out = np.zeros(self.shape, dtype=bool)
        for axis in range(len(self.shape)):
            lo = [slice(None)] * len(self.shape)
            hi = [slice(None)] * len(self.shape)
            lo[axis] = slice(0, -1)
            hi[axis] = slice(1, None)
            out[tuple(lo)] |= grid[tuple(hi)]
            out[tuple(hi)] |= grid[tuple(lo)]
        return out.ravel()

    def cell_bounds(self, cell: int) -> tuple[np.ndarray, np.ndarray]:
        """Real coordinates of the lower and upper corner of a cell."""
        if self.spec is None:
            raise ValueError("system carries no geometry")
        k = np.array(self.coords(cell))
        lo = np.array([self.spec.vertex_coordinates(i)[k[i]] for i in range(self.dimension)])
        hi = np.array([self.spec.vertex_coordinates(i)[k[i] + 1] for i in range(self.dimension)])
        return lo, hi

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TransitionSystem)
            and self.shape == other.shape
            and np.array_equal(self.self_loops, other.self_loops)
            and (self.adjacency != other.adjacency).nnz == 0
        )


@dataclass(frozen=True, eq=False)
class CellSet:
    """A subset of the cells of a transition system, stored as a flat mask."""

    mask: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mask, dtype=bool).copy()
        m.setflags(write=False)
        object.__setattr__(self, "mask", m)

    @classmethod
    def empty(cls, t: TransitionSystem) -> "CellSet":
        return cls(np.zeros(t.size, dtype=bool))

    @classmethod
    def full(cls, t: TransitionSystem) -> "CellSet":
        return cls(np.ones(t.size, dtype=bool))

    @classmethod
    def from_indices(cls, t: TransitionSystem, cells: Iterable[int]) -> "CellSet":
        m = np.zeros(t.size, dtype=bool)
        cells = list(cells)
        if cells:
            m[np.asarray(cells, dtype=int)] = True
        return cls(m)

    @classmethod
    def from_region(cls, t: TransitionSystem, lower: Sequence[float], upper: Sequence[float]) -> "CellSet":
        """Cells whose closed cube lies inside the box ``[lower, upper]``."""
        if t.spec is None:
            raise ValueError("system carries no geometry")
        grids = []
        for i in range(t.dimension):
            v = t.spec.vertex_coordinates(i)
            tol = 1e-9 * (v[-1] - v[0])
            grids.append((v[:-1] >= lower[i] - tol) & (v[1:] <= upper[i] + tol))
        m = grids[0]
        for g in grids[1:]:
            m = np.logical_and.outer(m, g)
        return cls(np.asarray(m).ravel())

    def indices(self) -> list[int]:
        return np.flatnonzero(self.mask).tolist()

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, cell: int) -> bool:
        return bool(self.mask[cell])

    def __iter__(self):
        return iter(self.indices())

    def __or__(self, other: "CellSet") -> "CellSet":
        return CellSet(self.mask | other.mask)

    def __and__(self, other: "CellSet") -> "CellSet":
        return CellSet(self.mask & other.mask)

    def __sub__(self, other: "CellSet") -> "CellSet":
        return CellSet(self.mask & ~other.mask)

    def __eq__(self, other) -> bool:
        return isinstance(other, CellSet) and np.array_equal(self.mask, other.mask)

    def issubset(self, other: "CellSet") -> bool:
        return not np.any(self.mask & ~other.mask)

    def coordinates(self, t: TransitionSystem) -> list[list[float]]:
        """Cell centers, for plot dumps."""
        out = []
        for c in self.indices():
            lo, hi = t.cell_bounds(c)
            out.append([float(x) for x in (lo + hi) / 2])
        return out


def discretize_flow(spec: FlowSpec) -> TransitionSystem:
    """Outer approximation of the flow of ``spec`` by face transitions.

    At each interior face orthogonal to axis ``i`` the normal component is
    enclosed in ``[min - s_i, max + s_i]`` over the face corners with
    ``s_i = L_i * h_i / 2``; ``c -> d`` is an edge iff the enclosure allows
    positive flow from ``c`` to ``d``.  A cell gets a self-loop iff every
    component's enclosure over the cell corners contains zero.
    """
    n = spec.dimension
    shape = spec.resolution
    h = spec.widths
    slack = tuple(float(spec.lipschitz[i] * h[i] / 2.0) for i in range(n))
    samples = spec.samples
    cell_idx = np.arange(int(np.prod(shape))).reshape(shape)

    rows, cols = [], []
    for i in range(n):
        comp = samples[..., i]
        # min/max over face corners: reduce over the 2 corners of every axis except i
        fmin, fmax = comp, comp
        for j in range(n):
            if j == i:
                continue
            fmin = _pair_reduce(fmin, j, np.minimum)
            fmax = _pair_reduce(fmax, j, np.maximum)
        # faces are indexed by the vertex coordinate along i; interior ones are 1..r-1
        inner = [slice(None)] * n
        inner[i] = slice(1, -1)
        lo_face = fmin[tuple(inner)] - slack[i]
        hi_face = fmax[tuple(inner)] + slack[i]
        left = [slice(None)] * n
        right = [slice(None)] * n
        left[i] = slice(0, -1)
        right[i] = slice(1, None)
        a = cell_idx[tuple(left)]
        b = cell_idx[tuple(right)]
        fwd = hi_face > 0
        bwd = lo_face < 0
        rows += [a[fwd], b[bwd]]
        cols += [b[fwd], a[bwd]]

    size = int(np.prod(shape))
    if rows:
        r = np.concatenate([x.ravel() for x in rows])
        c = np.concatenate([x.ravel() for x in cols])
    else:
        r = c = np.zeros(0, dtype=int)
    adj = sparse.csr_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(size, size))
    adj.sum_duplicates()
    adj.sort_indices()

    lower = np.empty((size, n))
    upper = np.empty((size, n))
    for i in range(n):
        comp = samples[..., i]
        cmin, cmax = comp, comp
        for j in range(n):
            cmin = _pair_reduce(cmin, j, np.minimum)
            cmax = _pair_reduce(cmax, j, np.maximum)
        lower[:, i] = (cmin - slack[i]).ravel()
        upper[:, i] = (cmax + slack[i]).ravel()
    loops = np.all((lower <= 0) & (upper >= 0), axis=1)
    return TransitionSystem(tuple(shape), adj, loops, slack, spec, lower, upper)


def _pair_reduce(a: np.ndarray, axis: int, op) -> np.ndarray:
    lo = [slice(None)] * a.ndim
    hi = [slice(None)] * a.ndim
    lo[axis] = slice(0, -1)
    hi[axis] = slice(1, None)
    return op(a[tuple(lo)], a[tuple(hi)])


def point_system(self_loop: bool = True) -> TransitionSystem:
    """The zero-dimensional system: one cell, optionally with a self-loop."""
    return TransitionSystem((), sparse.csr_matrix((1, 1), dtype=np.int8), np.array([self_loop]), ())


def reverse_system(t: TransitionSystem) -> TransitionSystem:
    """The system of the reversed flow: every edge transposed, self-loops kept."""
    adj = t.adjacency.T.tocsr()
    adj.sort_indices()
    lower = None if t.cell_upper is None else -t.cell_upper
    upper = None if t.cell_lower is None else -t.cell_lower
    return TransitionSystem(t.shape, adj, t.self_loops.copy(), t.slack, t.spec, lower, upper)


def _closure(adj: sparse.csr_matrix, seeds: np.ndarray, allowed: np.ndarray) -> np.ndarray:
    """Cells reachable from ``seeds`` along edges inside ``allowed`` (seeds included)."""
    cur = seeds & allowed
    step = adj.T.tocsr()
    while True:
        nxt = cur | ((step @ cur.astype(np.int8)) > 0) & allowed
        if np.array_equal(nxt, cur):
            return cur
        cur = nxt


def effective(t: TransitionSystem, n: CellSet) -> np.ndarray:
    """``n`` with box-boundary cells removed (the flow is unknown beyond the box)."""
    return n.mask & ~t.boundary_mask()


def cycle_cells(t: TransitionSystem, allowed: np.ndarray) -> np.ndarray:
    """Cells of ``allowed`` lying on a directed cycle (self-loops count) of the restriction.

    A strongly connected component on which some field component has a
    strict constant sign over every cell cannot carry a true recurrent orbit
    (that coordinate would be strictly monotone), so it is discarded.  This
    removes the two-cell cycles across faces that lie on a nullcline.
    """
    idx = np.flatnonzero(allowed)
    if idx.size == 0:
        return np.zeros(t.size, dtype=bool)
    sub = t.adjacency[idx][:, idx]
    k, labels = connected_components(sub, directed=True, connection="strong")
    counts = np.bincount(labels, minlength=k)
    on_cycle = (counts[labels] > 1) | t.self_loops[idx]
    if t.cell_lower is not None and t.cell_lower.shape[1]:
        lo = np.full((k, t.cell_lower.shape[1]), np.inf)
        hi = np.full((k, t.cell_lower.shape[1]), -np.inf)
        np.minimum.at(lo, labels, t.cell_lower[idx])
        np.maximum.at(hi, labels, t.cell_upper[idx])
        signed = np.any((lo > 0) | (hi < 0), axis=1)
        on_cycle &= ~signed[labels]
    out = np.zeros(t.size, dtype=bool)
    out[idx[on_cycle]] = True
    return out


def invariant_part(t: TransitionSystem, n: CellSet) -> CellSet:
    """Cells of ``n`` on a bi-infinite path inside ``n``.

    These are the cells reachable from a cycle and reaching a cycle, with all
    paths restricted to ``n`` minus the box-boundary cells.
    """
    allowed = effective(t, n)
    cyc = cycle_cells(t, allowed)
    if not cyc.any():
        return CellSet.empty(t)
    fwd = _closure(t.adjacency, cyc, allowed)
    bwd = _closure(t.adjacency.T.tocsr(), cyc, allowed)
    return CellSet(fwd & bwd)


def forward_closure(t: TransitionSystem, seeds: CellSet, n: CellSet) -> CellSet:
    return CellSet(_closure(t.adjacency, seeds.mask, effective(t, n)))


def is_isolating(t: TransitionSystem, n: CellSet) -> bool:
    """True iff the invariant part keeps a one-cell collar inside ``n`` and off the box boundary."""
    return not isolation_witnesses(t, n)


def isolation_witnesses(t: TransitionSystem, n: CellSet) -> list[int]:
    inv = invariant_part(t, n).mask
    outside = ~effective(t, n)
    bad = inv & (t.neighbor_mask(outside) | t.boundary_mask())
    return np.flatnonzero(bad).tolist()
