"""Single-parameter persistent homology over F2 on slices of a bifiltration.

A bifiltration restricted to a monotone line becomes an ordinary filtered
complex; its barcode is computed by boundary-matrix column reduction (with
the clearing optimization) in the selected kernel backend.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .bifiltration import Bigrade

__all__ = [
    "FilteredSimplex",
    "FilteredComplex",
    "Barcode",
    "DiagonalLine",
    "SegmentLine",
    "slice_bifiltration",
    "slice",
    "reduce",
    "landscape_1d",
    "save_barcode_csv",
    "load_barcode_csv",
]


class FilteredSimplex(NamedTuple):
    verts: tuple
    dim: int
    time: float


@dataclass(frozen=True)
class FilteredComplex:
    """Simplices sorted by (entry time, dimension, vertex tuple).

    The constructor canonicalizes the order; ``reduce`` checks that the
    order is a genuine filtration (faces present and never later).
    """

    simplices: tuple

    def __post_init__(self):
        sims = []
        for verts, dim, time in self.simplices:
            verts = tuple(int(v) for v in verts)
            if len(verts) != dim + 1:
                raise ValueError(f"simplex {verts} inconsistent with dim {dim}")
            if not math.isfinite(time):
                raise ValueError("entry times must be finite")
            sims.append(FilteredSimplex(verts, int(dim), float(time)))
        sims.sort(key=lambda s: (s.time, s.dim, s.verts))
        object.__setattr__(self, "simplices", tuple(sims))

    def __len__(self):
        return len(self.simplices)


@dataclass(frozen=True)
class Barcode:
    """Bars per homology degree; deaths may be ``math.inf``.

    Zero-length bars are dropped at construction time.
    """

    bars_by_degree: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for degree, bars in self.bars_by_degree.items():
            kept = []
            for birth, death in bars:
                if death < birth:
                    raise ValueError("bar death precedes birth")
                if birth < death:
                    kept.append((float(birth), float(death)))
            if kept:
                kept.sort()
                clean[int(degree)] = tuple(kept)
        object.__setattr__(self, "bars_by_degree", clean)

    def bars(self, degree):
        """Bars of one homology degree as a list of (birth, death)."""
        return list(self.bars_by_degree.get(int(degree), ()))

    def degrees(self):
        return sorted(self.bars_by_degree)

    def total(self):
        return sum(len(v) for v in self.bars_by_degree.values())


# ---------------------------------------------------------------------------
# slice lines


@dataclass(frozen=True)
class DiagonalLine:
    """The line {(t, t + offset) : t in R}, direction (1, 1)."""

    offset: float

    def __post_init__(self):
        if not math.isfinite(self.offset):
            raise ValueError("offset must be finite")
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True)
class SegmentLine:
    """The line through bigrades x ≤ y (x ≠ y), parametrized p(t) = x + t(y−x)."""

    x: Bigrade
    y: Bigrade

    def __post_init__(self):
        x = Bigrade(float(self.x[0]), float(self.x[1]))
        y = Bigrade(float(self.y[0]), float(self.y[1]))
        if not (x.scale <= y.scale and x.codensity <= y.codensity):
            raise ValueError("segment endpoints must satisfy x ≤ y componentwise")
        if x == y:
            raise ValueError("segment endpoints must differ")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)


def _entry_times(grades, line):
    """Entry parameter of each grade on the line; +inf when never dominated."""
    a = grades[:, 0]
    b = grades[:, 1]
    if isinstance(line, DiagonalLine):
        return np.maximum(a, b - line.offset)
    if isinstance(line, SegmentLine):
        t = np.full(a.shape[0], -np.inf)
        for axis, g in ((0, a), (1, b)):
            x0 = line.x[axis]
            y0 = line.y[axis]
            if y0 > x0:
                t = np.maximum(t, (g - x0) / (y0 - x0))
            else:  # constant axis: dominated iff x0 >= g, from t = -inf on
                t = np.where(g <= x0, t, np.inf)
        return t
    raise ValueError(f"unsupported slice line: {line!r}")


def slice_bifiltration(bif, line):
    """Restrict a bifiltration to a monotone line.

    Every simplex receives the least parameter t at which the line dominates
    its bigrade; simplices the line never dominates are excluded.
    """
    times = _entry_times(bif.grades, line)
    keep = np.flatnonzero(np.isfinite(times))
    sims = []
    for i in keep:
        vs, d, _ = bif.simplex(int(i))
        sims.append((vs, d, float(times[i])))
    return FilteredComplex(tuple(sims))


# `slice` shadows the builtin only inside this module's namespace; it is the
# operation's natural name and is exported for API symmetry.
slice = slice_bifiltration


def reduce(fc):
    """Barcode of a filtered complex by F2 column reduction.

    Raises ValueError when a face is missing or enters after its coface.
    """
    sims = fc.simplices
    n = len(sims)
    position = {s.verts: i for i, s in enumerate(sims)}
    if len(position) != n:
        raise ValueError("duplicate simplex in filtered complex")

    dims = np.fromiter((s.dim for s in sims), dtype=np.int8, count=n)
    max_dim = int(dims.max()) if n else 0
    counts = np.where(dims > 0, dims + 1, 0).astype(np.int64)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    facets = np.empty(int(offsets[-1]), dtype=np.int64)
    for j, s in enumerate(sims):
        if s.dim == 0:
            continue
        row = []
        for drop in range(s.dim + 1):
            face = s.verts[:drop] + s.verts[drop + 1:]
            fi = position.get(face)
            if fi is None:
                raise ValueError(f"face {face} of {s.verts} missing from complex")
            if fi >= j:
                raise ValueError(f"face {face} does not precede {s.verts}")
            row.append(fi)
        row.sort()
        facets[offsets[j]:offsets[j + 1]] = row

    kill, killer = kernels.reduce_columns(offsets, facets, dims, max_dim)

    bars = {}
    for j in range(n):
        low = int(kill[j])
        if low >= 0:
            bars.setdefault(sims[low].dim, []).append((sims[low].time, sims[j].time))
        elif killer[j] < 0:
            bars.setdefault(sims[j].dim, []).append((sims[j].time, math.inf))
    return Barcode(bars)


def landscape_1d(bc, degree, k, t, inf_clamp=math.inf):
    """k-th largest tent value max(0, min(t − b, d − t)) over bars of a degree.

    Returns 0 when fewer than k bars exist.  Infinite deaths are replaced by
    ``inf_clamp`` first (the landscape module passes the box-exit parameter
    of the slice line).
    """
    if k < 1:
        raise ValueError("landscape level k must be at least 1")
    heights = []
    for birth, death in bc.bars(degree):
        if math.isinf(death):
            death = inf_clamp
        heights.append(max(0.0, min(t - birth, death - t)))
    if len(heights) < k:
        return 0.0
    heights.sort(reverse=True)
    return heights[k - 1]


# ---------------------------------------------------------------------------
# file I/O


def save_barcode_csv(path, bc):
    """Write bars as CSV ``degree,birth,death`` (``inf`` for infinite deaths)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("degree,birth,death\n")
        for degree in bc.degrees():
            for birth, death in bc.bars(degree):
                dtxt = "inf" if math.isinf(death) else f"{death:.17g}"
                fh.write(f"{degree},{birth:.17g},{dtxt}\n")


def load_barcode_csv(path):
    """Read a barcode CSV written by :func:`save_barcode_csv`."""
    bars = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "degree,birth,death":
            raise ValueError(f"unrecognized barcode header: {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 3 fields")
            try:
                degree = int(parts[0])
                birth = float(parts[1])
                death = math.inf if parts[2] == "inf" else float(parts[2])
            except ValueError:
                raise ValueError(f"line {lineno}: malformed bar") from None
            bars.setdefault(degree, []).append((birth, death))
    return Barcode(bars)
