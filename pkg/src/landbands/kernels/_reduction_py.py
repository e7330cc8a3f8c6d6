"""Pure-Python boundary-matrix reduction over F2 (fallback backend).

Implements the same ``reduce_columns`` contract as the compiled kernel in
``_reduction.pyx``; both backends must produce identical pairings.
"""

import numpy as np

__all__ = ["reduce_columns"]


def reduce_columns(offsets, facets, dims, max_dim):
    """Column-reduce an F2 boundary matrix given in filtration order.

    The matrix is passed column-compressed: column ``j`` has nonzero rows
    ``facets[offsets[j]:offsets[j + 1]]``, sorted ascending, each a position
    earlier in the filtration order.  ``dims[j]`` is the dimension of the
    j-th cell.

    Columns are processed by decreasing dimension so that rows already paired
    by a higher-dimensional pass are cleared (their columns are known to
    reduce to zero and are skipped).

    Returns
    -------
    kill, killer : ndarray of int64, shape (n,)
        ``kill[j]`` is the row whose pairing column ``j`` settles (-1 if the
        column reduces to zero), and ``killer[r]`` is the column that pairs
        with row ``r`` (-1 if none does).
    """
    offsets = np.asarray(offsets, dtype=np.int64)
    facets = np.asarray(facets, dtype=np.int64)
    dims = np.asarray(dims, dtype=np.int8)
    n = dims.shape[0]
    if offsets.shape[0] != n + 1:
        raise ValueError("offsets must have length n + 1")
    kill = np.full(n, -1, dtype=np.int64)
    killer = np.full(n, -1, dtype=np.int64)
    cleared = np.zeros(n, dtype=bool)
    store = {}
    for d in range(int(max_dim), 0, -1):
        for j in np.flatnonzero(dims == d):
            j = int(j)
            if cleared[j]:
                continue
            col = set(facets[offsets[j]:offsets[j + 1]].tolist())
            while col:
                low = max(col)
                pivot = int(killer[low])
                if pivot < 0:
                    break
                col ^= store[pivot]
            if col:
                low = max(col)
                kill[j] = low
                killer[low] = j
                cleared[low] = True
                store[j] = col
    return kill, killer
