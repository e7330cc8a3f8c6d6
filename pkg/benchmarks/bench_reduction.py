"""Benchmark the F2 column-reduction kernel: compiled backend vs pure Python.

Two workload families are timed on identical CSR boundary data:

* ``rips``  — diagonal slices of a Rips-codensity bifiltration built from a
  noisy torus sample (the shape of work `compute_landscape` feeds the kernel);
* ``dense`` — the complete 2-skeleton on ``v`` vertices with random entry
  times (many long reduction chains).

Both backends must return identical pairings; the script asserts this before
reporting times.

Usage::

    python benchmarks/bench_reduction.py [--n 120] [--v 28] [--repeats 5]
"""
import argparse
import sys
import time

import numpy as np

from landbands.kernels import BACKEND, available_backends
from landbands.bifiltration import build_rips_codensity
from landbands.persistence import DiagonalLine, slice_bifiltration
from landbands.pointcloud import (add_gaussian_noise, gaussian_kde,
                                  sample_torus, scott_bandwidth)


def csr_from_filtration(simplices):
    """CSR facet table for simplices already sorted by entry time.

    `simplices` is a sequence of (verts tuple, dim) in filtration order.
    """
    n = len(simplices)
    position = {verts: i for i, (verts, _) in enumerate(simplices)}
    dims = np.fromiter((d for _, d in simplices), dtype=np.int8, count=n)
    counts = np.where(dims > 0, dims + 1, 0).astype(np.int64)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    facets = np.empty(int(offsets[-1]), dtype=np.int64)
    for j, (verts, d) in enumerate(simplices):
        if d == 0:
            continue
        row = sorted(position[verts[:k] + verts[k + 1:]] for k in range(d + 1))
        facets[offsets[j]:offsets[j + 1]] = row
    return offsets, facets, dims, int(dims.max()) if n else 0


def rips_workload(n_points, max_scale, seed=7):
    cloud = add_gaussian_noise(sample_torus(n_points, 3.0, 0.7, seed), 0.1, seed)
    density = gaussian_kde(cloud, scott_bandwidth(cloud))
    bif = build_rips_codensity(cloud, density, max_scale=max_scale, max_dim=2)
    fc = slice_bifiltration(bif, DiagonalLine(0.0))
    return csr_from_filtration([(s.verts, s.dim) for s in fc.simplices])


def dense_workload(v, seed=13):
    rng = np.random.default_rng(seed)
    simplices = [((i,), 0.0) for i in range(v)]
    simplices += [((i, j), float(rng.uniform(1, 2)))
                  for i in range(v) for j in range(i + 1, v)]
    times = {s: t for s, t in simplices}
    for i in range(v):
        for j in range(i + 1, v):
            for k in range(j + 1, v):
                t = max(times[(i, j)], times[(i, k)], times[(j, k)])
                simplices.append(((i, j, k), t + float(rng.uniform(0, 0.5))))
    simplices.sort(key=lambda st: (st[1], len(st[0]), st[0]))
    return csr_from_filtration([(s, len(s) - 1) for s, _ in simplices])


def best_time(fn, args, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=120, help="torus sample size")
    ap.add_argument("--max-scale", type=float, default=2.0)
    ap.add_argument("--v", type=int, default=28, help="dense workload vertices")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args(argv)

    backends = available_backends()
    print(f"active backend: {BACKEND}; available: {', '.join(sorted(backends))}")
    if "compiled" not in backends:
        print("compiled extension not built — timing the python backend only")

    workloads = [
        ("rips", rips_workload(args.n, args.max_scale)),
        ("dense", dense_workload(args.v)),
    ]
    for name, (offsets, facets, dims, max_dim) in workloads:
        n_cols = len(dims)
        line = f"{name:>6}  {n_cols:>7} columns"
        results = {}
        for backend_name in sorted(backends):
            secs, out = best_time(backends[backend_name],
                                  (offsets, facets, dims, max_dim),
                                  args.repeats)
            results[backend_name] = (secs, out)
            line += f"  {backend_name}: {secs * 1e3:9.2f} ms"
        if len(results) == 2:
            py = results["python"]
            cc = results["compiled"]
            assert np.array_equal(py[1][0], cc[1][0]), "kill arrays differ"
            assert np.array_equal(py[1][1], cc[1][1]), "killer arrays differ"
            line += f"  speedup: {py[0] / cc[0]:6.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
