"""Synthetic shape samplers, point-cloud noise models, and Gaussian KDE.

All sampling is seeded through :mod:`landbands._seeding`, so a given master
seed reproduces the same cloud regardless of what else has been sampled.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._seeding import derive_rng

__all__ = [
    "PointCloud",
    "DensityEstimate",
    "sample_sphere",
    "sample_torus",
    "sample_klein_bottle",
    "torus_points",
    "klein_points",
    "add_gaussian_noise",
    "add_salt_pepper_noise",
    "gaussian_kde",
    "scott_bandwidth",
    "write_pointcloud_csv",
    "read_pointcloud_csv",
    "KLEIN_A",
]

#: Aperture constant of the figure-eight Klein bottle immersion.
KLEIN_A = 2.0


@dataclass(frozen=True)
class PointCloud:
    """Finite set of points in 3-space, tagged with its generating seed."""

    points: np.ndarray
    seed: int = 0

    def __post_init__(self):
        pts = np.ascontiguousarray(np.asarray(self.points, dtype=np.float64))
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must be an (n, 3) array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return int(self.points.shape[0])


@dataclass(frozen=True)
class DensityEstimate:
    """Per-point density values produced by :func:`gaussian_kde`."""

    values: np.ndarray
    bandwidth: float

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        if vals.ndim != 1:
            raise ValueError("values must be a 1-d array")
        if not np.all(np.isfinite(vals)):
            raise ValueError("density values must be finite")
        if not self.bandwidth > 0:
            raise ValueError("bandwidth must be positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))

    def __len__(self):
        return int(self.values.shape[0])


# ---------------------------------------------------------------------------
# samplers


def sample_sphere(n, radius, seed):
    """Sample ``n`` points uniformly from the sphere of the given radius.

    Draws isotropic Gaussian vectors and projects them onto the sphere,
    which is uniform by rotational symmetry.
    """
    _check_count(n)
    if not radius > 0:
        raise ValueError("radius must be positive")
    rng = derive_rng(seed, "sample-sphere")
    g = rng.standard_normal((n, 3))
    norms = np.linalg.norm(g, axis=1)
    while np.any(norms == 0.0):  # measure-zero, but never divide by zero
        bad = norms == 0.0
        g[bad] = rng.standard_normal((int(bad.sum()), 3))
        norms = np.linalg.norm(g, axis=1)
    return PointCloud(radius * g / norms[:, None], seed=seed)


def torus_points(theta, phi, R, r):
    """Map angle arrays to the torus with tube radius ``r`` about radius ``R``.

    ``theta`` runs around the tube, ``phi`` around the central axis.
    """
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    w = R + r * np.cos(theta)
    return np.column_stack([w * np.cos(phi), w * np.sin(phi), r * np.sin(theta)])


def sample_torus(n, R, r, seed):
    """Sample ``n`` points from the torus with radii ``R`` (central) and ``r`` (tube).

    Angles are drawn uniformly; the induced distribution over-weights the
    inner rim slightly, which is intended (it matches the generator used for
    the classification experiments).
    """
    _check_count(n)
    if not (0 < r < R):
        raise ValueError("torus radii must satisfy 0 < r < R")
    rng = derive_rng(seed, "sample-torus")
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    return PointCloud(torus_points(theta, phi, R, r), seed=seed)


def klein_points(u, v, a=KLEIN_A):
    """Figure-eight immersion of the Klein bottle in 3-space.

    With ``w = a + cos(u/2) sin(v) - sin(u/2) sin(2v)`` the point is
    ``(w cos u, w sin u, sin(u/2) sin(v) + cos(u/2) sin(2v))``.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    cu2, su2 = np.cos(u / 2.0), np.sin(u / 2.0)
    sv, s2v = np.sin(v), np.sin(2.0 * v)
    w = a + cu2 * sv - su2 * s2v
    return np.column_stack([w * np.cos(u), w * np.sin(u), su2 * sv + cu2 * s2v])


def sample_klein_bottle(n, seed):
    """Sample ``n`` points from the figure-eight Klein bottle immersion."""
    _check_count(n)
    rng = derive_rng(seed, "sample-klein")
    u = rng.uniform(0.0, 2.0 * np.pi, n)
    v = rng.uniform(0.0, 2.0 * np.pi, n)
    return PointCloud(klein_points(u, v), seed=seed)


def _check_count(n):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("number of points must be a positive integer")


# ---------------------------------------------------------------------------
# noise


def add_gaussian_noise(cloud, sigma, seed):
    """Add centered isotropic Gaussian noise of scale ``sigma`` to every point."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    if sigma == 0:
        return PointCloud(cloud.points.copy(), seed=cloud.seed)
    rng = derive_rng(seed, "gaussian-noise")
    return PointCloud(cloud.points + rng.normal(0.0, sigma, cloud.points.shape),
                      seed=cloud.seed)


def add_salt_pepper_noise(cloud, fraction, max_displacement, seed):
    """Displace a random ``fraction`` of the points by up to ``max_displacement``.

    Exactly ``round(fraction * n)`` points (round half away from zero) are
    chosen without replacement and moved by independent vectors uniform in
    the closed Euclidean ball of radius ``max_displacement``.
    """
    if not (0.0 <= fraction <= 1.0):
        raise ValueError("fraction must lie in [0, 1]")
    if max_displacement < 0:
        raise ValueError("max_displacement must be non-negative")
    n = len(cloud)
    m = int(math.floor(fraction * n + 0.5))
    pts = cloud.points.copy()
    if m == 0:
        return PointCloud(pts, seed=cloud.seed)
    rng = derive_rng(seed, "salt-pepper")
    idx = rng.choice(n, size=m, replace=False)
    pts[idx] += _uniform_ball(rng, m, max_displacement)
    return PointCloud(pts, seed=cloud.seed)


def _uniform_ball(rng, m, radius):
    """m vectors uniform in the closed ball of the given radius (rejection)."""
    out = np.empty((m, 3))
    filled = 0
    while filled < m:
        cand = rng.uniform(-1.0, 1.0, (2 * (m - filled) + 8, 3))
        keep = cand[(cand * cand).sum(axis=1) <= 1.0]
        take = min(keep.shape[0], m - filled)
        out[filled:filled + take] = keep[:take]
        filled += take
    return radius * out


# ---------------------------------------------------------------------------
# density estimation


def gaussian_kde(cloud, bandwidth):
    """Gaussian kernel density estimate of the cloud, evaluated at its own points.

    ``values[i] = (1/n) * sum_j (2 pi h^2)^(-3/2) exp(-|p_i - p_j|^2 / (2 h^2))``
    with ``h = bandwidth``.  The diagonal term ``j = i`` is included.
    """
    if not bandwidth > 0:
        raise ValueError("bandwidth must be positive")
    n = len(cloud)
    if n == 0:
        raise ValueError("cloud must be non-empty")
    pts = cloud.points
    h = float(bandwidth)
    # |p_i - p_j|^2 expanded per coordinate keeps the double loop vectorized.
    d2 = np.zeros((n, n))
    for axis in range(3):
        diff = pts[:, axis, None] - pts[None, :, axis]
        d2 += diff * diff
    kernel = np.exp(d2 / (-2.0 * h * h))
    norm = n * (2.0 * np.pi * h * h) ** 1.5
    return DensityEstimate(kernel.sum(axis=1) / norm, bandwidth=h)


def scott_bandwidth(cloud):
    """Scott's-rule bandwidth ``n**(-1/(d+4)) * sigma_hat`` for d = 3.

    ``sigma_hat`` is the root mean of the per-axis sample variances.
    """
    n = len(cloud)
    if n < 2:
        raise ValueError("bandwidth rule needs at least 2 points")
    sigma = math.sqrt(float(np.mean(np.var(cloud.points, axis=0, ddof=1))))
    if sigma == 0:
        raise ValueError("cannot infer a bandwidth from coincident points")
    return float(n ** (-1.0 / 7.0) * sigma)


# ---------------------------------------------------------------------------
# file I/O


def write_pointcloud_csv(path, cloud, density=None):
    """Write a cloud as CSV with header ``x,y,z`` (plus ``density`` if given).

    Coordinates are printed with ``%.17g`` so a read back is bit-exact.
    """
    pts = cloud.points
    if density is not None:
        values = np.asarray(density.values if isinstance(density, DensityEstimate)
                            else density, dtype=np.float64)
        if values.shape != (pts.shape[0],):
            raise ValueError("density length must match the number of points")
    with open(path, "w", encoding="utf-8") as fh:
        if density is None:
            fh.write("x,y,z\n")
            for x, y, z in pts:
                fh.write(f"{x:.17g},{y:.17g},{z:.17g}\n")
        else:
            fh.write("x,y,z,density\n")
            for (x, y, z), v in zip(pts, values):
                fh.write(f"{x:.17g},{y:.17g},{z:.17g},{v:.17g}\n")


def read_pointcloud_csv(path):
    """Read a CSV written by :func:`write_pointcloud_csv`.

    Returns ``(cloud, density_values)`` where ``density_values`` is ``None``
    when the file has no density column.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        cols = header.split(",")
        if cols not in (["x", "y", "z"], ["x", "y", "z", "density"]):
            raise ValueError(f"unrecognized point-cloud header: {header!r}")
        want = len(cols)
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != want:
                raise ValueError(f"line {lineno}: expected {want} fields")
            try:
                rows.append([float(p) for p in parts])
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric field") from None
    if not rows:
        raise ValueError("point-cloud file has no data rows")
    data = np.asarray(rows, dtype=np.float64)
    cloud = PointCloud(data[:, :3])
    density = data[:, 3].copy() if want == 4 else None
    return cloud, density
