# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled boundary-matrix reduction over F2.

Same contract as ``_reduction_py.reduce_columns``: CSR-style facet lists in
filtration order, clearing by decreasing dimension, returns the (kill,
killer) pairing arrays.  Columns are kept as sorted vectors of row indices
and added with a merge-style symmetric difference.
"""

from libc.stdint cimport int64_t, int8_t
from libcpp.vector cimport vector

import numpy as np


cdef void _symdiff(vector[int64_t]& a, const vector[int64_t]& b,
                   vector[int64_t]& tmp) noexcept nogil:
    """a := a XOR b over F2, both sorted ascending; tmp is scratch."""
    cdef size_t i = 0, j = 0
    tmp.clear()
    while i < a.size() and j < b.size():
        if a[i] < b[j]:
            tmp.push_back(a[i])
            i += 1
        elif b[j] < a[i]:
            tmp.push_back(b[j])
            j += 1
        else:
            i += 1
            j += 1
    while i < a.size():
        tmp.push_back(a[i])
        i += 1
    while j < b.size():
        tmp.push_back(b[j])
        j += 1
    a.swap(tmp)


def reduce_columns(offsets_arr, facets_arr, dims_arr, max_dim):
    """Column-reduce an F2 boundary matrix given in filtration order.

    See ``landbands.kernels._reduction_py.reduce_columns`` for the contract;
    the two backends are interchangeable.
    """
    offsets_arr = np.ascontiguousarray(offsets_arr, dtype=np.int64)
    facets_arr = np.ascontiguousarray(facets_arr, dtype=np.int64)
    dims_arr = np.ascontiguousarray(dims_arr, dtype=np.int8)
    cdef Py_ssize_t n = dims_arr.shape[0]
    if offsets_arr.shape[0] != n + 1:
        raise ValueError("offsets must have length n + 1")

    kill_np = np.full(n, -1, dtype=np.int64)
    killer_np = np.full(n, -1, dtype=np.int64)
    if n == 0:
        return kill_np, killer_np

    cdef const int64_t[::1] offsets = offsets_arr
    cdef const int64_t[::1] facets = facets_arr if facets_arr.shape[0] else np.zeros(1, dtype=np.int64)
    cdef const int8_t[::1] dims = dims_arr
    cdef int64_t[::1] kill = kill_np
    cdef int64_t[::1] killer = killer_np

    cdef vector[vector[int64_t]] store
    cdef vector[int8_t] cleared
    cdef vector[int64_t] cur, tmp
    cdef Py_ssize_t j
    cdef int64_t low, pivot, p
    cdef int d, md = int(max_dim)

    with nogil:
        store.resize(n)
        cleared.resize(n)
        for d in range(md, 0, -1):
            for j in range(n):
                if dims[j] != d or cleared[j] != 0:
                    continue
                cur.clear()
                for p in range(offsets[j], offsets[j + 1]):
                    cur.push_back(facets[p])
                while cur.size() > 0:
                    low = cur.back()
                    pivot = killer[low]
                    if pivot < 0:
                        break
                    _symdiff(cur, store[pivot], tmp)
                if cur.size() > 0:
                    low = cur.back()
                    kill[j] = low
                    killer[low] = j
                    cleared[low] = 1
                    store[j].swap(cur)
    return kill_np, killer_np
