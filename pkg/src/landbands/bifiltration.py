"""Rips-codensity bifiltrations of point clouds.

A bifiltration here is one-critical: each simplex enters at a single bigrade
``(scale, codensity)`` and stays.  Scale is the simplex diameter (Vietoris-
Rips); codensity is ``max(density) - density`` maximized over vertices, so
both coordinates grow monotonically along faces.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .pointcloud import DensityEstimate

__all__ = [
    "Bigrade",
    "Bifiltration",
    "build_rips_codensity",
    "normalize",
    "validate",
    "save_bifiltration",
    "load_bifiltration",
]


class Bigrade(NamedTuple):
    """Entry grade of a simplex: (scale, codensity)."""

    scale: float
    codensity: float


@dataclass(frozen=True)
class Bifiltration:
    """One-critical bifiltration stored as flat arrays.

    ``verts`` is (n, max_dim + 1) int32 with ascending vertex ids per row and
    -1 padding; ``dims`` is the simplex dimension per row; ``grades`` holds
    the (scale, codensity) entry grade per row.  Rows are sorted by
    (dimension, vertex tuple).  ``T`` is the grading box edge: grades of a
    normalized bifiltration live in [0, T]^2.
    """

    verts: np.ndarray
    dims: np.ndarray
    grades: np.ndarray
    T: float
    max_dim: int

    def __post_init__(self):
        verts = np.ascontiguousarray(np.asarray(self.verts, dtype=np.int32))
        dims = np.ascontiguousarray(np.asarray(self.dims, dtype=np.int8))
        grades = np.ascontiguousarray(np.asarray(self.grades, dtype=np.float64))
        n = verts.shape[0]
        if verts.ndim != 2 or verts.shape[1] != self.max_dim + 1:
            raise ValueError("verts must be (n, max_dim + 1)")
        if dims.shape != (n,) or grades.shape != (n, 2):
            raise ValueError("dims/grades shapes inconsistent with verts")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if not np.all(np.isfinite(grades)):
            raise ValueError("grades must be finite")
        object.__setattr__(self, "verts", verts)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "grades", grades)
        object.__setattr__(self, "T", float(self.T))
        object.__setattr__(self, "max_dim", int(self.max_dim))

    def __len__(self):
        return int(self.verts.shape[0])

    @property
    def n_simplices(self):
        return len(self)

    def simplex(self, i):
        """Return (vertex tuple, dim, Bigrade) of the i-th simplex."""
        d = int(self.dims[i])
        vs = tuple(int(v) for v in self.verts[i, :d + 1])
        return vs, d, Bigrade(float(self.grades[i, 0]), float(self.grades[i, 1]))

    def iter_simplices(self):
        for i in range(len(self)):
            yield self.simplex(i)


# ---------------------------------------------------------------------------
# construction


def build_rips_codensity(cloud, density, max_scale=None, max_dim=2):
    """Build the Rips-codensity bifiltration of a cloud.

    Simplices are the cliques of the distance graph at ``max_scale``
    (inclusive), up to dimension ``max_dim``.  A simplex enters at
    ``(diameter, max over vertices of codensity)`` where codensity is
    ``density.values.max() - density.values``.

    ``max_scale=None`` uses the diameter of the cloud, which keeps every
    pair connected at the top of the scale axis.
    """
    if max_dim < 1:
        raise ValueError("max_dim must be at least 1")
    n = len(cloud)
    values = np.asarray(density.values if isinstance(density, DensityEstimate)
                        else density, dtype=np.float64)
    if values.shape != (n,):
        raise ValueError("density length must match the number of points")
    if n == 0:
        raise ValueError("cloud must be non-empty")

    codensity = values.max() - values
    if n == 1:
        dist = np.zeros((1, 1))
    else:
        dist = squareform(pdist(cloud.points))
    if max_scale is None:
        max_scale = float(dist.max())
    elif not max_scale >= 0:
        raise ValueError("max_scale must be non-negative")
    max_scale = float(max_scale)

    # sorted upper-neighbor lists of the distance graph
    adj = dist <= max_scale
    np.fill_diagonal(adj, False)
    up = [np.flatnonzero(adj[v] & (np.arange(n) > v)).astype(np.int64) for v in range(n)]

    verts_by_dim = [np.arange(n, dtype=np.int64)[:, None]]
    ii, jj = np.nonzero(np.triu(adj, 1))
    edges = np.column_stack([ii, jj]).astype(np.int64)
    if edges.shape[0]:
        verts_by_dim.append(edges)

    # incremental clique expansion: extend each (d-1)-simplex by common
    # upper neighbors of its vertices, which preserves lexicographic order
    for d in range(2, max_dim + 1):
        if len(verts_by_dim) < d or verts_by_dim[d - 1].shape[0] == 0:
            break
        blocks = []
        for row in verts_by_dim[d - 1]:
            cand = up[int(row[0])]
            for v in row[1:]:
                cand = _intersect_sorted(cand, up[int(v)])
                if cand.size == 0:
                    break
            if cand.size:
                block = np.empty((cand.size, d + 1), dtype=np.int64)
                block[:, :d] = row
                block[:, d] = cand
                blocks.append(block)
        if not blocks:
            break
        verts_by_dim.append(np.vstack(blocks))

    # assemble flat arrays with grades
    total = sum(v.shape[0] for v in verts_by_dim)
    verts = np.full((total, max_dim + 1), -1, dtype=np.int32)
    dims = np.empty(total, dtype=np.int8)
    grades = np.empty((total, 2), dtype=np.float64)
    pos = 0
    for d, block in enumerate(verts_by_dim):
        cnt = block.shape[0]
        verts[pos:pos + cnt, :d + 1] = block
        dims[pos:pos + cnt] = d
        if d == 0:
            grades[pos:pos + cnt, 0] = 0.0
        else:
            diam = np.zeros(cnt)
            for a in range(d + 1):
                for b in range(a + 1, d + 1):
                    np.maximum(diam, dist[block[:, a], block[:, b]], out=diam)
            grades[pos:pos + cnt, 0] = diam
        grades[pos:pos + cnt, 1] = codensity[block].max(axis=1) if d else codensity
        pos += cnt

    T = float(grades.max())
    if T <= 0:
        T = 1.0  # degenerate cloud: all grades at the origin
    return Bifiltration(verts=verts, dims=dims, grades=grades, T=T, max_dim=max_dim)


def _intersect_sorted(a, b):
    """Intersection of two sorted unique int arrays."""
    return a[np.isin(a, b, assume_unique=True)]


# ---------------------------------------------------------------------------
# normalization and validation


def normalize(bif, T):
    """Affinely rescale each grade axis onto [0, T].

    Each axis maps its observed [min, max] to [0, T]; a constant axis
    collapses to 0.  Returns a new bifiltration with the given ``T``.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if len(bif) == 0:
        raise ValueError("cannot normalize an empty bifiltration")
    grades = bif.grades.copy()
    for axis in range(2):
        lo = grades[:, axis].min()
        hi = grades[:, axis].max()
        if hi > lo:
            grades[:, axis] = (grades[:, axis] - lo) * (T / (hi - lo))
        else:
            grades[:, axis] = 0.0
    np.clip(grades, 0.0, T, out=grades)
    return Bifiltration(verts=bif.verts, dims=bif.dims, grades=grades,
                        T=float(T), max_dim=bif.max_dim)


def validate(bif):
    """Return a list of violation messages (empty when the bifiltration is valid).

    Checks: ascending distinct vertices per simplex, no duplicate simplices,
    closure under faces, and componentwise grade monotonicity along faces.
    """
    problems = []
    index = {}
    for i in range(len(bif)):
        vs, d, grade = bif.simplex(i)
        if any(vs[a] >= vs[a + 1] for a in range(len(vs) - 1)):
            problems.append(f"simplex {vs} has non-ascending vertices")
        if vs in index:
            problems.append(f"simplex {vs} appears more than once")
        index[vs] = grade
    for vs, grade in index.items():
        if len(vs) == 1:
            continue
        for drop in range(len(vs)):
            face = vs[:drop] + vs[drop + 1:]
            fg = index.get(face)
            if fg is None:
                problems.append(f"face {face} of {vs} is missing")
            elif fg.scale > grade.scale or fg.codensity > grade.codensity:
                problems.append(
                    f"grade of face {face} exceeds grade of {vs}")
    return problems


# ---------------------------------------------------------------------------
# file I/O


def save_bifiltration(path, bif):
    """Write the text format: a ``T=... max_dim=...`` header, then one
    ``dim v0 ... vk scale codensity`` line per simplex."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"T={bif.T:.17g} max_dim={bif.max_dim}\n")
        for vs, d, grade in bif.iter_simplices():
            vtxt = " ".join(str(v) for v in vs)
            fh.write(f"{d} {vtxt} {grade.scale:.17g} {grade.codensity:.17g}\n")


def load_bifiltration(path):
    """Read the text format written by :func:`save_bifiltration`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        parts = header.split()
        try:
            if len(parts) != 2:
                raise ValueError
            T = float(_expect_key(parts[0], "T"))
            max_dim = int(_expect_key(parts[1], "max_dim"))
        except ValueError:
            raise ValueError(f"bad bifiltration header: {header!r}") from None
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            tok = line.split()
            try:
                d = int(tok[0])
                if len(tok) != d + 4:
                    raise ValueError
                vs = [int(t) for t in tok[1:d + 2]]
                scale, codensity = float(tok[d + 2]), float(tok[d + 3])
            except (ValueError, IndexError):
                raise ValueError(f"line {lineno}: malformed simplex line") from None
            rows.append((d, vs, scale, codensity))
    if not rows:
        raise ValueError("bifiltration file has no simplices")
    if max(d for d, *_ in rows) > max_dim:
        raise ValueError("simplex dimension exceeds declared max_dim")
    rows.sort(key=lambda r: (r[0], r[1]))
    n = len(rows)
    verts = np.full((n, max_dim + 1), -1, dtype=np.int32)
    dims = np.empty(n, dtype=np.int8)
    grades = np.empty((n, 2), dtype=np.float64)
    for i, (d, vs, scale, codensity) in enumerate(rows):
        dims[i] = d
        verts[i, :d + 1] = vs
        grades[i] = (scale, codensity)
    return Bifiltration(verts=verts, dims=dims, grades=grades, T=T, max_dim=max_dim)


def _expect_key(token, key):
    k, _, v = token.partition("=")
    if k != key or not v:
        raise ValueError
    return v
