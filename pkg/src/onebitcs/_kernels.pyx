# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled selection kernels.

Same contract as ``_select_py``: the selected set is ranked by a strict
total order (magnitude resp. value descending, index ascending), so both
lanes return identical indices for any input.  Strategy: quickselect a copy
of the keys for the boundary value (no index juggling), then one ordered
sweep collects everything strictly above it and fills the tie group
lowest-index-first, which leaves the output already sorted.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


cdef double _kth_smallest(double* a, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    """In-place quickselect: value of rank k (0-based) in ascending order."""
    cdef Py_ssize_t lo = 0, hi = n - 1
    cdef Py_ssize_t i, j, mid
    cdef double pivot, tmp
    while lo < hi:
        mid = lo + (hi - lo) // 2
        # median-of-three, pivot parked at hi
        if a[mid] < a[lo]:
            tmp = a[lo]; a[lo] = a[mid]; a[mid] = tmp
        if a[hi] < a[lo]:
            tmp = a[lo]; a[lo] = a[hi]; a[hi] = tmp
        if a[hi] < a[mid]:
            tmp = a[mid]; a[mid] = a[hi]; a[hi] = tmp
        pivot = a[hi]
        i = lo
        for j in range(lo, hi):
            if a[j] < pivot:
                tmp = a[i]; a[i] = a[j]; a[j] = tmp
                i += 1
        tmp = a[i]; a[i] = a[hi]; a[hi] = tmp
        if i == k:
            return a[k]
        if i > k:
            hi = i - 1
        else:
            lo = i + 1
    return a[k]


def top_abs_indices(double[::1] x, Py_ssize_t s):
    """Sorted indices of the s largest-magnitude entries (ties: lowest index)."""
    cdef Py_ssize_t n = x.shape[0]
    if s <= 0:
        return np.empty(0, dtype=np.int64)
    if s >= n:
        return np.arange(n, dtype=np.int64)
    scratch_arr = np.empty(n, dtype=np.float64)
    out_arr = np.empty(s, dtype=np.int64)
    cdef double[::1] scratch = scratch_arr
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t i, greater, need, w
    cdef double mag, thresh
    with nogil:
        for i in range(n):
            scratch[i] = x[i] if x[i] >= 0 else -x[i]
        thresh = _kth_smallest(&scratch[0], n, n - s)
        greater = 0
        for i in range(n):
            mag = x[i] if x[i] >= 0 else -x[i]
            if mag > thresh:
                greater += 1
        need = s - greater
        w = 0
        for i in range(n):
            mag = x[i] if x[i] >= 0 else -x[i]
            if mag > thresh:
                out[w] = i
                w += 1
            elif mag == thresh and need > 0:
                out[w] = i
                w += 1
                need -= 1
    return out_arr  # single ascending sweep: already sorted


def theta_indices(double[::1] y, Py_ssize_t k):
    """Sorted indices of all negatives plus the min(k, #positives) largest
    positives (ties: lowest index)."""
    cdef Py_ssize_t m = y.shape[0]
    cdef Py_ssize_t npos = 0, nneg = 0
    cdef Py_ssize_t i
    for i in range(m):
        if y[i] > 0:
            npos += 1
        elif y[i] < 0:
            nneg += 1
    cdef Py_ssize_t take = k if k < npos else npos
    out_arr = np.empty(nneg + take, dtype=np.int64)
    cdef cnp.int64_t[::1] out = out_arr
    cdef Py_ssize_t w = 0, need, greater
    cdef double thresh
    if take == 0:
        with nogil:
            for i in range(m):
                if y[i] < 0:
                    out[w] = i
                    w += 1
        return out_arr
    if take == npos:
        # keep every nonzero entry; order falls out of the sweep
        with nogil:
            for i in range(m):
                if y[i] != 0:
                    out[w] = i
                    w += 1
        return out_arr
    scratch_arr = np.empty(npos, dtype=np.float64)
    cdef double[::1] scratch = scratch_arr
    cdef Py_ssize_t p = 0
    with nogil:
        for i in range(m):
            if y[i] > 0:
                scratch[p] = y[i]
                p += 1
        thresh = _kth_smallest(&scratch[0], npos, npos - take)
        greater = 0
        for i in range(m):
            if y[i] > thresh:
                greater += 1
        need = take - greater
        for i in range(m):
            if y[i] < 0:
                out[w] = i
                w += 1
            elif y[i] > thresh:
                out[w] = i
                w += 1
            elif y[i] == thresh and need > 0:
                out[w] = i
                w += 1
                need -= 1
    return out_arr  # single ascending sweep: already sorted