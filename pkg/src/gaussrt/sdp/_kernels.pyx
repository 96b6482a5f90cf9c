# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the Schur-complement system of the NT interior point method.

Coefficient matrices are passed in a CSR-like layout: the nonzeros of matrix
``i`` are ``vals[ptr[i]:ptr[i+1]]`` at ``(rows[k], cols[k])``.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def schur_accumulate(const double[:, ::1] winv,
                     const cnp.int64_t[::1] ptr,
                     const cnp.int64_t[::1] rows,
                     const cnp.int64_t[::1] cols,
                     const double[::1] vals,
                     double[:, ::1] out):
    """out[i, j] += tr(F_i W^{-1} F_j W^{-1}) for one constraint block."""
    cdef Py_ssize_t d = winv.shape[0]
    cdef Py_ssize_t m = ptr.shape[0] - 1
    cdef double[:, ::1] G = np.empty((d, d), dtype=np.float64)
    cdef Py_ssize_t i, j, k, a, b, r, c
    cdef double v, wb, s
    for j in range(m):
        if ptr[j + 1] == ptr[j]:
            continue
        for b in range(d):
            for a in range(d):
                G[b, a] = 0.0
        # G = W^{-1} F_j W^{-1}
        for k in range(ptr[j], ptr[j + 1]):
            r = rows[k]
            c = cols[k]
            v = vals[k]
            for b in range(d):
                wb = v * winv[b, r]
                if wb == 0.0:
                    continue
                for a in range(d):
                    G[b, a] += wb * winv[c, a]
        for i in range(j + 1):
            s = 0.0
            for k in range(ptr[i], ptr[i + 1]):
                s += vals[k] * G[cols[k], rows[k]]
            out[i, j] += s
            if i != j:
                out[j, i] += s


def inner_products(const double[:, ::1] X,
                   const cnp.int64_t[::1] ptr,
                   const cnp.int64_t[::1] rows,
                   const cnp.int64_t[::1] cols,
                   const double[::1] vals,
                   double[::1] out):
    """out[i] += <F_i, X> for one constraint block."""
    cdef Py_ssize_t m = ptr.shape[0] - 1
    cdef Py_ssize_t i, k
    cdef double s
    for i in range(m):
        s = 0.0
        for k in range(ptr[i], ptr[i + 1]):
            s += vals[k] * X[cols[k], rows[k]]
        out[i] += s
