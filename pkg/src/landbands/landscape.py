"""Multiparameter persistence landscapes on grids, via diagonal slices.

The landscape λ(k, x) is the largest ε such that at least k homology
features of the given degree survive from x − ε·1 to x + ε·1.  Rank
monotonicity makes the diagonal direction binding, so λ restricted to a
diagonal line equals the single-parameter landscape of that slice; one
boundary-matrix reduction per distinct grid diagonal therefore covers the
whole grid.  The module is truncated to the box [0, T]^2 (ranks involving
points outside count as 0), which caps every value at T/2.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bifiltration import Bigrade, build_rips_codensity, normalize
from .persistence import DiagonalLine, SegmentLine, reduce, slice_bifiltration

__all__ = [
    "Grid",
    "LandscapeGrid",
    "compute_landscape",
    "compute_landscape_1p",
    "rank_invariant",
    "mean_landscape",
    "sup_abs_diff",
    "save_landscape_grid",
    "load_landscape_grid",
    "export_landscape_csv",
]


@dataclass(frozen=True)
class Grid:
    """Regular evaluation grid: nodes { iT/(m−1) } per axis, d = 1 or 2."""

    T: float
    m: int
    d: int = 2

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("T must be positive")
        if self.m < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if self.d not in (1, 2):
            raise ValueError("grid dimension must be 1 or 2")
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "d", int(self.d))

    @property
    def nodes(self):
        return np.linspace(0.0, self.T, self.m)

    @property
    def spacing(self):
        return self.T / (self.m - 1)

    @property
    def shape(self):
        return (self.m,) * self.d


@dataclass(frozen=True)
class LandscapeGrid:
    """Values of λ(k, ·) for one homology degree sampled on a grid."""

    grid: Grid
    k: int
    degree: int
    values: np.ndarray

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("landscape level k must be at least 1")
        if self.degree < 0:
            raise ValueError("homology degree must be non-negative")
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if vals.shape != self.grid.shape:
            raise ValueError(f"values shape {vals.shape} != grid shape {self.grid.shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("landscape values must be finite")
        if vals.size and vals.min() < 0:
            raise ValueError("landscape values must be non-negative")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "degree", int(self.degree))


def _check_compatible(a, b):
    if a.grid != b.grid or a.k != b.k or a.degree != b.degree:
        raise ValueError("landscape grids are not compatible (grid, k, degree)")


# ---------------------------------------------------------------------------
# slice engine


class _SliceEngine:
    """Reusable per-bifiltration state for repeated diagonal-slice reductions.

    Keeps simplices of dimension ≤ degree + 1 (higher ones cannot affect
    bars of that degree), in canonical (dimension, vertex tuple) order, with
    precomputed facet index matrices.  ``barcode(c)`` then needs only an
    argsort of entry times and one kernel call per offset.
    """

    def __init__(self, bif, degree):
        keep = bif.dims <= degree + 1
        dims = bif.dims[keep]
        verts = bif.verts[keep]
        grades = bif.grades[keep]
        n = dims.shape[0]
        if n:
            keys = tuple(verts[:, c] for c in reversed(range(verts.shape[1])))
            order = np.lexsort(keys + (dims,))
            dims, verts, grades = dims[order], verts[order], grades[order]
        self.n = n
        self.dims = np.ascontiguousarray(dims, dtype=np.int8)
        self.grades = grades
        self.degree = int(degree)
        self.max_dim = int(dims.max()) if n else 0

        index = {}
        for i in range(n):
            d = int(dims[i])
            index[tuple(int(v) for v in verts[i, :d + 1])] = i
        if len(index) != n:
            raise ValueError("bifiltration contains duplicate simplices")
        self.facet_rows = {}
        for d in range(1, self.max_dim + 1):
            rows = np.flatnonzero(self.dims == d)
            if rows.size == 0:
                continue
            fmat = np.empty((rows.size, d + 1), dtype=np.int64)
            for out_i, i in enumerate(rows):
                vs = tuple(int(v) for v in verts[i, :d + 1])
                for drop in range(d + 1):
                    face = vs[:drop] + vs[drop + 1:]
                    fi = index.get(face)
                    if fi is None:
                        raise ValueError(f"face {face} of {vs} missing from bifiltration")
                    fmat[out_i, drop] = fi
            self.facet_rows[d] = (rows, fmat)

    def barcode(self, offset):
        """(births, deaths) of ``self.degree`` bars on DiagonalLine(offset).

        Deaths are raw (``inf`` for essential bars); zero-length bars are
        dropped.  Ties in entry time break by (dimension, vertex tuple).
        """
        n = self.n
        empty = np.empty(0)
        if n == 0:
            return empty, empty
        entry = np.maximum(self.grades[:, 0], self.grades[:, 1] - offset)
        order = np.argsort(entry, kind="stable")
        pos = np.empty(n, dtype=np.int64)
        pos[order] = np.arange(n)
        dims_sorted = self.dims[order]
        entry_sorted = entry[order]

        counts = np.where(dims_sorted > 0, dims_sorted.astype(np.int64) + 1, 0)
        offsets = np.concatenate([np.zeros(1, dtype=np.int64), np.cumsum(counts)])
        facets = np.empty(int(offsets[-1]), dtype=np.int64)
        for d, (rows, fmat) in self.facet_rows.items():
            fp = np.sort(pos[fmat], axis=1)
            starts = offsets[pos[rows]]
            facets[starts[:, None] + np.arange(d + 1)] = fp

        kill, killer = kernels.reduce_columns(offsets, facets, dims_sorted, self.max_dim)

        killers = np.flatnonzero(kill >= 0)
        rows = kill[killers]
        mask = dims_sorted[rows] == self.degree
        births = entry_sorted[rows[mask]]
        deaths = entry_sorted[killers[mask]]
        finite = births < deaths
        births, deaths = births[finite], deaths[finite]
        ess = np.flatnonzero((kill < 0) & (killer < 0) & (dims_sorted == self.degree))
        if ess.size:
            births = np.concatenate([births, entry_sorted[ess]])
            deaths = np.concatenate([deaths, np.full(ess.size, np.inf)])
        return births, deaths


def _kth_tent(births, deaths, t, k, chunk=8192):
    """k-th largest of max(0, min(t − b, d − t)) per node t, vectorized."""
    nb = births.size
    if nb < k:
        return np.zeros(t.size)
    best = np.zeros((k, t.size))
    for lo in range(0, nb, chunk):
        b = births[lo:lo + chunk, None]
        d = deaths[lo:lo + chunk, None]
        tent = np.minimum(t[None, :] - b, d - t[None, :])
        np.maximum(tent, 0.0, out=tent)
        stack = np.vstack([best, tent])
        if stack.shape[0] > k:
            cut = stack.shape[0] - k
            stack = np.partition(stack, cut, axis=0)[cut:]
        best = stack
    return best.min(axis=0)


# ---------------------------------------------------------------------------
# landscape computation


def compute_landscape(bif, degree, k, grid, threads=1):
    """Evaluate λ(k, ·) of the bifiltration's degree-`degree` homology on a 2-D grid.

    One slice reduction is performed per distinct grid diagonal (offsets
    c = jT/(m−1), j = −(m−1) … m−1) and reused for every node on that
    diagonal.  Infinite deaths are clamped to the line's exit parameter from
    the box, and values are cut off at the ℓ∞ distance to the box boundary;
    together these implement the [0, T]² truncation.
    """
    if grid.d != 2:
        raise ValueError("compute_landscape needs a 2-d grid")
    if k < 1:
        raise ValueError("landscape level k must be at least 1")
    if degree < 0:
        raise ValueError("homology degree must be non-negative")
    T, m = grid.T, grid.m
    values = np.zeros((m, m))
    if len(bif) == 0:
        return LandscapeGrid(grid=grid, k=k, degree=degree, values=values)
    if bif.grades.min() < -1e-9 or bif.grades.max() > T + 1e-9:
        raise ValueError("bifiltration grades must lie in [0, T]^2 (normalize first)")

    engine = _SliceEngine(bif, degree)
    nodes = grid.nodes
    h = grid.spacing

    def diagonal(j):
        c = j * h
        i0 = max(0, -j)
        i1 = min(m - 1, m - 1 - j)
        idx = np.arange(i0, i1 + 1)
        x1 = nodes[idx]
        x2 = nodes[idx + j]
        births, deaths = engine.barcode(c)
        if births.size:
            clamped = np.minimum(deaths, T - max(c, 0.0))
            lam = _kth_tent(births, clamped, x1, k)
        else:
            lam = np.zeros(idx.size)
        border = np.minimum.reduce([x1, x2, T - x1, T - x2])
        return idx, np.minimum(lam, np.maximum(border, 0.0))

    js = list(range(-(m - 1), m))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            per_diag = list(pool.map(diagonal, js))
    else:
        per_diag = [diagonal(j) for j in js]
    for j, (idx, vals) in zip(js, per_diag):
        values[idx, idx + j] = vals
    return LandscapeGrid(grid=grid, k=k, degree=degree, values=values)


def compute_landscape_1p(cloud, degree, k, grid, max_scale=None, threads=1):
    """Single-parameter Rips landscape of a cloud on a 1-D grid.

    The scale axis is normalized onto [0, T] and the same box truncation is
    applied: infinite deaths clamp to T and values are cut at min(t, T − t).
    """
    if grid.d != 1:
        raise ValueError("compute_landscape_1p needs a 1-d grid")
    if k < 1:
        raise ValueError("landscape level k must be at least 1")
    if degree < 0:
        raise ValueError("homology degree must be non-negative")
    density = np.ones(len(cloud))
    bif = build_rips_codensity(cloud, density, max_scale=max_scale,
                               max_dim=max(1, degree + 1))
    bif = normalize(bif, grid.T)
    engine = _SliceEngine(bif, degree)
    births, deaths = engine.barcode(0.0)
    t = grid.nodes
    T = grid.T
    if births.size:
        lam = _kth_tent(births, np.minimum(deaths, T), t, k)
    else:
        lam = np.zeros(t.size)
    border = np.minimum(t, T - t)
    values = np.minimum(lam, np.maximum(border, 0.0))
    return LandscapeGrid(grid=grid, k=k, degree=degree, values=values)


def rank_invariant(bif, degree, x, y):
    """dim of the transition map between grades x and y (0 when x ≰ y).

    For x ≤ y the bifiltration is sliced along the segment through x and y
    (the diagonal line through x when x = y) and bars of the degree that
    are born by x's parameter and still alive strictly after y's parameter
    are counted.  No box truncation applies here.
    """
    x = Bigrade(float(x[0]), float(x[1]))
    y = Bigrade(float(y[0]), float(y[1]))
    if not (x.scale <= y.scale and x.codensity <= y.codensity):
        return 0
    if x == y:
        line = DiagonalLine(x.codensity - x.scale)
        tx = ty = x.scale
    else:
        line = SegmentLine(x, y)
        tx, ty = 0.0, 1.0
    bc = reduce(slice_bifiltration(bif, line))
    return sum(1 for birth, death in bc.bars(degree) if birth <= tx and death > ty)


# ---------------------------------------------------------------------------
# grid arithmetic


def mean_landscape(landscapes):
    """Pointwise mean of compatible landscape grids."""
    landscapes = list(landscapes)
    if not landscapes:
        raise ValueError("mean_landscape needs at least one landscape")
    first = landscapes[0]
    for other in landscapes[1:]:
        _check_compatible(first, other)
    values = np.mean([l.values for l in landscapes], axis=0)
    return LandscapeGrid(grid=first.grid, k=first.k, degree=first.degree, values=values)


def sup_abs_diff(a, b):
    """Max over grid nodes of |a − b|."""
    _check_compatible(a, b)
    return float(np.max(np.abs(a.values - b.values)))


# ---------------------------------------------------------------------------
# file I/O


def save_landscape_grid(path, lg):
    """Write the grid document: one header line, then the value rows."""
    g = lg.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"T={g.T:.17g} m={g.m} d={g.d} k={lg.k} degree={lg.degree}\n")
        rows = lg.values.reshape(-1, g.m)
        for row in rows:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_landscape_grid(path):
    """Read a grid document written by :func:`save_landscape_grid`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        try:
            fields = dict(tok.split("=", 1) for tok in header)
            grid = Grid(T=float(fields["T"]), m=int(fields["m"]), d=int(fields["d"]))
            k = int(fields["k"])
            degree = int(fields["degree"])
        except (ValueError, KeyError):
            raise ValueError("bad landscape-grid header") from None
        rows = []
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(tok) for tok in line.split()])
    values = np.asarray(rows, dtype=np.float64)
    expect_rows = grid.m if grid.d == 2 else 1
    if values.shape != (expect_rows, grid.m):
        raise ValueError("landscape-grid value block has wrong shape")
    return LandscapeGrid(grid=grid, k=k, degree=degree,
                         values=values.reshape(grid.shape))


def export_landscape_csv(path, lg):
    """CSV export for plotting: ``x1,x2,value`` (2-d) or ``x1,value`` (1-d)."""
    g = lg.grid
    nodes = g.nodes
    with open(path, "w", encoding="utf-8") as fh:
        if g.d == 2:
            fh.write("x1,x2,value\n")
            for i in range(g.m):
                for j in range(g.m):
                    fh.write(f"{nodes[i]:.17g},{nodes[j]:.17g},{lg.values[i, j]:.17g}\n")
        else:
            fh.write("x1,value\n")
            for i in range(g.m):
                fh.write(f"{nodes[i]:.17g},{lg.values[i]:.17g}\n")
