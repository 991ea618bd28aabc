# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled distance-scan kernels; semantics mirror _distpy exactly."""

import numpy as np


def sq_euclidean_scan(const double[:, ::1] rows, const double[::1] q):
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t n = rows.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double acc, d
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                d = rows[i, j] - q[j]
                acc += d * d
            o[i] = acc
    return out


def inner_product_scan(const double[:, ::1] rows, const double[::1] q):
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t n = rows.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    cdef double self_dot, cross
    with nogil:
        for i in range(m):
            self_dot = 0.0
            cross = 0.0
            for j in range(n):
                self_dot += rows[i, j] * rows[i, j]
                cross += rows[i, j] * q[j]
            o[i] = self_dot - 2.0 * cross
    return out


def mahalanobis_sq_scan(const double[:, ::1] rows, const double[::1] q,
                        const double[:, ::1] chol_lower):
    cdef Py_ssize_t m = rows.shape[0]
    cdef Py_ssize_t n = rows.shape[1]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    work = np.empty(n, dtype=np.float64)
    cdef double[::1] y = work
    cdef Py_ssize_t i, j, k
    cdef double acc, total
    with nogil:
        for i in range(m):
            # forward substitution: L y = (q - a_i)
            total = 0.0
            for j in range(n):
                acc = q[j] - rows[i, j]
                for k in range(j):
                    acc -= chol_lower[j, k] * y[k]
                y[j] = acc / chol_lower[j, j]
                total += y[j] * y[j]
            o[i] = total
    return out
