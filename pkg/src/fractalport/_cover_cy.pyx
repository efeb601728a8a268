# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_cover_py.cover_amplitudes``.

Single C loop over windows; semantics match the numpy fallback (summation
order may differ in the last ulp).
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def cover_amplitudes(x, window_sizes):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] dv = np.ascontiguousarray(window_sizes, dtype=np.int64)
    cdef Py_ssize_t n_incr = xv.shape[0] - 1
    cdef Py_ssize_t m = dv.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] sums = np.zeros(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(m, dtype=np.int64)
    cdef Py_ssize_t k, j, nf, base
    cdef cnp.int64_t d
    cdef double a, b, c, hi, lo, total
    for k in range(m):
        d = dv[k]
        nf = n_incr // d
        counts[k] = nf
        total = 0.0
        for j in range(nf):
            base = j * d
            a = xv[base]
            b = xv[base + d // 2]
            c = xv[base + d]
            hi = a
            if b > hi:
                hi = b
            if c > hi:
                hi = c
            lo = a
            if b < lo:
                lo = b
            if c < lo:
                lo = c
            total += hi - lo
        sums[k] = total
    return sums, counts
