"""Bootstrap confidence bands for mean landscapes, plus CLT diagnostics.

Two bootstrap variants estimate the sup-norm deviation quantile Z̃(α) of the
empirical process √n(λ̄_n − μ):

* standard — resample ⌊n/2⌋ landscapes with replacement and take
  θ* = sup |√n (λ̄*_{⌊n/2⌋} − λ̄_n)| (the √n factor is deliberate; pass
  ``scale_half=True`` for the √⌊n/2⌋ alternative);
* multiplier — perturb the centered sample with i.i.d. standard normal
  weights: θ* = sup (1/√n) |Σ ξᵢ (λᵢ − λ̄_n)|.

Bands are λ̄_n ± Z̃(α)/√n, exactly symmetric; the lower band is not clamped
at zero unless requested.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._seeding import derive_rng
from .landscape import LandscapeGrid, _check_compatible, mean_landscape

__all__ = [
    "ConfidenceBand",
    "bootstrap_band",
    "bootstrap_thetas",
    "empirical_quantile",
    "empirical_process",
    "empirical_covariance",
    "save_band",
    "load_band",
    "export_band_csv",
]

_METHODS = ("standard", "multiplier")


@dataclass(frozen=True)
class ConfidenceBand:
    """Mean landscape with symmetric lower/upper envelopes λ̄ ± Z̃/√n."""

    mean: LandscapeGrid
    lower: np.ndarray
    upper: np.ndarray
    z_tilde: float
    alpha: float
    B: int
    method: str
    seed: int
    n: int

    def __post_init__(self):
        lower = np.ascontiguousarray(np.asarray(self.lower, dtype=np.float64))
        upper = np.ascontiguousarray(np.asarray(self.upper, dtype=np.float64))
        shape = self.mean.grid.shape
        if lower.shape != shape or upper.shape != shape:
            raise ValueError("band envelopes must match the grid shape")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.B < 1 or self.n < 1:
            raise ValueError("B and n must be positive")
        if self.z_tilde < 0:
            raise ValueError("z_tilde must be non-negative")
        if np.any(lower > self.mean.values) or np.any(upper < self.mean.values):
            raise ValueError("band must contain its mean")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "z_tilde", float(self.z_tilde))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "B", int(self.B))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "n", int(self.n))


def _stack(landscapes):
    landscapes = list(landscapes)
    if not landscapes:
        raise ValueError("need at least one landscape")
    first = landscapes[0]
    for other in landscapes[1:]:
        _check_compatible(first, other)
    flat = np.stack([l.values.ravel() for l in landscapes])
    return first, flat


def _draw_multipliers(rng, n):
    """Multiplier weights for one replicate; patched to constants in tests."""
    return rng.standard_normal(n)


def bootstrap_thetas(landscapes, method, B, seed, scale_half=False):
    """The B bootstrap sup-deviation statistics θ̂*_b for a sample of landscapes.

    Replicate b draws from the derived stream (seed, "bootstrap-<method>", b),
    so results are independent of evaluation order.
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    if B < 1:
        raise ValueError("B must be at least 1")
    first, flat = _stack(landscapes)
    n = flat.shape[0]
    if n < 2:
        raise ValueError("need at least 2 landscapes")
    mean = flat.mean(axis=0)
    thetas = np.empty(B)
    if method == "standard":
        half = n // 2
        factor = math.sqrt(half) if scale_half else math.sqrt(n)
        for b in range(B):
            rng = derive_rng(seed, "bootstrap-standard", b)
            idx = rng.integers(0, n, size=half)
            resample_mean = flat[idx].mean(axis=0)
            thetas[b] = factor * np.max(np.abs(resample_mean - mean))
    else:
        centered = flat - mean
        root_n = math.sqrt(n)
        for b in range(B):
            rng = derive_rng(seed, "bootstrap-multiplier", b)
            xi = _draw_multipliers(rng, n)
            thetas[b] = np.max(np.abs(xi @ centered)) / root_n
    return thetas


def empirical_quantile(theta, alpha):
    """Smallest listed value exceeded by at most ⌊αB⌋ of the B values.

    Sorts descending and returns the element at 0-based index ⌊αB⌋ (clipped
    to the last element).  A small fuzz guards ⌊·⌋ against binary float
    artifacts like 0.3 · 10 = 2.999…
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.ndim != 1 or theta.size < 1:
        raise ValueError("theta must be a non-empty 1-d sequence")
    B = theta.size
    cut = int(math.floor(alpha * B + 1e-9))
    cut = min(max(cut, 0), B - 1)
    return float(np.sort(theta)[::-1][cut])


def bootstrap_band(landscapes, method, B, alpha, seed,
                   scale_half=False, clamp_zero=False):
    """Confidence band λ̄_n ± Z̃(α)/√n from one of the two bootstrap variants.

    ``scale_half`` switches the standard variant's factor from √n to
    √⌊n/2⌋; ``clamp_zero`` cuts the lower envelope at 0 (landscapes are
    nonnegative, but the plain band is symmetric by construction).
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    landscapes = list(landscapes)
    n = len(landscapes)
    if n < 2:
        raise ValueError("need at least 2 landscapes")
    thetas = bootstrap_thetas(landscapes, method, B, seed, scale_half=scale_half)
    z_tilde = empirical_quantile(thetas, alpha)
    mean = mean_landscape(landscapes)
    halfwidth = z_tilde / math.sqrt(n)
    lower = mean.values - halfwidth
    if clamp_zero:
        lower = np.maximum(lower, 0.0)
    upper = mean.values + halfwidth
    return ConfidenceBand(mean=mean, lower=lower, upper=upper, z_tilde=z_tilde,
                          alpha=alpha, B=B, method=method, seed=seed, n=n)


# ---------------------------------------------------------------------------
# CLT diagnostics


def empirical_process(landscapes, mu):
    """Pointwise √n (λ̄_n − μ) as a grid-shaped array."""
    first, flat = _stack(landscapes)
    _check_compatible(first, mu)
    n = flat.shape[0]
    return (math.sqrt(n) * (flat.mean(axis=0) - mu.values.ravel())).reshape(mu.grid.shape)


def empirical_covariance(landscapes, x, y):
    """Sample covariance (1/n)Σ λᵢ(x)λᵢ(y) − λ̄(x)λ̄(y) at two grid nodes.

    ``x`` and ``y`` are node indices: an int for 1-d grids, an (i, j) pair
    for 2-d grids.
    """
    landscapes = list(landscapes)
    if len(landscapes) < 2:
        raise ValueError("need at least 2 landscapes")
    first, flat = _stack(landscapes)
    ix = _node_index(first.grid, x)
    iy = _node_index(first.grid, y)
    vx = flat[:, ix]
    vy = flat[:, iy]
    return float(np.mean(vx * vy) - np.mean(vx) * np.mean(vy))


def _node_index(grid, node):
    if grid.d == 1:
        i = int(node if np.isscalar(node) else node[0])
        if not 0 <= i < grid.m:
            raise ValueError("node index out of range")
        return i
    i, j = (int(node[0]), int(node[1]))
    if not (0 <= i < grid.m and 0 <= j < grid.m):
        raise ValueError("node index out of range")
    return i * grid.m + j


# ---------------------------------------------------------------------------
# file I/O


def save_band(path, band):
    """Write the band document: header, grid line, then mean/lower/upper blocks."""
    g = band.mean.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"method={band.method} alpha={band.alpha:.17g} B={band.B} "
                 f"n={band.n} z_tilde={band.z_tilde:.17g} seed={band.seed}\n")
        fh.write(f"T={g.T:.17g} m={g.m} d={g.d} k={band.mean.k} "
                 f"degree={band.mean.degree}\n")
        for name, arr in (("mean", band.mean.values), ("lower", band.lower),
                          ("upper", band.upper)):
            fh.write(name + "\n")
            for row in arr.reshape(-1, g.m):
                fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def load_band(path):
    """Read a band document written by :func:`save_band`."""
    from .landscape import Grid

    with open(path, "r", encoding="utf-8") as fh:
        try:
            head = dict(tok.split("=", 1) for tok in fh.readline().split())
            gh = dict(tok.split("=", 1) for tok in fh.readline().split())
            grid = Grid(T=float(gh["T"]), m=int(gh["m"]), d=int(gh["d"]))
            k, degree = int(gh["k"]), int(gh["degree"])
            z_tilde, alpha = float(head["z_tilde"]), float(head["alpha"])
            B, n, seed = int(head["B"]), int(head["n"]), int(head["seed"])
            method = head["method"]
        except (ValueError, KeyError):
            raise ValueError("bad band-document header") from None
        blocks = {}
        current = None
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line in ("mean", "lower", "upper"):
                current = blocks.setdefault(line, [])
            elif current is None:
                raise ValueError("band document values precede a block name")
            else:
                current.append([float(tok) for tok in line.split()])
    expect_rows = grid.m if grid.d == 2 else 1
    arrays = {}
    for name in ("mean", "lower", "upper"):
        if name not in blocks:
            raise ValueError(f"band document missing {name} block")
        arr = np.asarray(blocks[name], dtype=np.float64)
        if arr.shape != (expect_rows, grid.m):
            raise ValueError(f"band block {name} has wrong shape")
        arrays[name] = arr.reshape(grid.shape)
    mean = LandscapeGrid(grid=grid, k=k, degree=degree, values=arrays["mean"])
    return ConfidenceBand(mean=mean, lower=arrays["lower"], upper=arrays["upper"],
                          z_tilde=z_tilde, alpha=alpha, B=B, method=method,
                          seed=seed, n=n)


def export_band_csv(path, band):
    """CSV export ``x1[,x2],mean,lower,upper`` for plotting."""
    g = band.mean.grid
    nodes = g.nodes
    mean = band.mean.values
    with open(path, "w", encoding="utf-8") as fh:
        if g.d == 2:
            fh.write("x1,x2,mean,lower,upper\n")
            for i in range(g.m):
                for j in range(g.m):
                    fh.write(f"{nodes[i]:.17g},{nodes[j]:.17g},{mean[i, j]:.17g},"
                             f"{band.lower[i, j]:.17g},{band.upper[i, j]:.17g}\n")
        else:
            fh.write("x1,mean,lower,upper\n")
            for i in range(g.m):
                fh.write(f"{nodes[i]:.17g},{mean[i]:.17g},"
                         f"{band.lower[i]:.17g},{band.upper[i]:.17g}\n")
