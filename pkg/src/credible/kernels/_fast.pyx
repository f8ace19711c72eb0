# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels over int64 integer-scaled payoffs.

Same contracts as ``_pure``; callers guarantee no intermediate overflows.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


cdef void _strides(const int64_t[:] shape, int64_t[:] strides) noexcept:
    cdef Py_ssize_t i, n = shape.shape[0]
    strides[n - 1] = 1
    for i in range(n - 2, -1, -1):
        strides[i] = strides[i + 1] * shape[i + 1]


def pure_nash(const int64_t[:, :] payoffs, shape):
    cdef const int64_t[:] shp = np.asarray(shape, dtype=np.int64)
    cdef Py_ssize_t n = shp.shape[0]
    cdef int64_t[:] strides = np.empty(n, dtype=np.int64)
    _strides(shp, strides)
    cdef Py_ssize_t total = payoffs.shape[0]
    cdef cnp.uint8_t[:] ok = np.ones(total, dtype=np.uint8)
    cdef Py_ssize_t i, hi, lo, j, base, f, st, k, block
    cdef int64_t best, v
    for i in range(n):
        st = strides[i]
        k = shp[i]
        block = st * k
        for hi in range(0, total, block):
            for lo in range(st):
                base = hi + lo
                best = payoffs[base, i]
                for j in range(1, k):
                    v = payoffs[base + j * st, i]
                    if v > best:
                        best = v
                for j in range(k):
                    f = base + j * st
                    if payoffs[f, i] < best:
                        ok[f] = 0
    return [f for f in range(total) if ok[f]]


cdef Py_ssize_t _bisect_right(const int64_t[:] xs, int64_t x) noexcept:
    cdef Py_ssize_t lo = 0, hi = xs.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if x < xs[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def deviation_counts(const int64_t[:, :] stage, const int64_t[:, :] cont,
                     int64_t dnum, int64_t dden, shape,
                     const int64_t[:, :] sorted_scaled):
    cdef const int64_t[:] shp = np.asarray(shape, dtype=np.int64)
    cdef Py_ssize_t n = shp.shape[0]
    cdef int64_t[:] strides = np.empty(n, dtype=np.int64)
    _strides(shp, strides)
    cdef Py_ssize_t P = stage.shape[0], m = cont.shape[0]
    cdef Py_ssize_t D = 0, i
    for i in range(n):
        D += shp[i] - 1
    out_arr = np.zeros((P, m, D), dtype=np.int64)
    cdef int64_t[:, :, :] out = out_arr
    cdef int64_t[:] dev_player = np.empty(D, dtype=np.int64)
    cdef int64_t[:] dev_profile = np.empty(D, dtype=np.int64)
    cdef Py_ssize_t a, o, j, k, ai
    cdef int64_t thr
    for a in range(P):
        j = 0
        for i in range(n):
            ai = (a // strides[i]) % shp[i]
            for k in range(shp[i]):
                if k != ai:
                    dev_player[j] = i
                    dev_profile[j] = a + (k - ai) * strides[i]
                    j += 1
        for o in range(m):
            for j in range(D):
                i = dev_player[j]
                thr = dden * (stage[a, i] - stage[dev_profile[j], i]) + dnum * cont[o, i]
                out[a, o, j] = _bisect_right(sorted_scaled[i], thr)
    return out_arr
