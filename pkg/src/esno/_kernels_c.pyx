# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reconstruction kernels; same contract as ``esno._kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef enum:
    MAXK = 3
    MAXW = 5
    MAXD = 3


def weno_rows(rows, C, gamma, A, G, double eps, bint zmode):
    cdef const double[:, ::1] R = np.ascontiguousarray(rows, dtype=np.float64)
    cdef const double[:, ::1] Cv = np.ascontiguousarray(C, dtype=np.float64)
    cdef const double[::1] gv = np.ascontiguousarray(gamma, dtype=np.float64)
    cdef const double[:, :, ::1] Av = np.ascontiguousarray(A, dtype=np.float64)
    cdef const double[:, ::1] Gv = np.ascontiguousarray(G, dtype=np.float64)
    cdef Py_ssize_t n = R.shape[0], W = R.shape[1], k = Cv.shape[0], nd = Gv.shape[0]
    if W > MAXW or k > MAXK or nd > MAXD:
        raise ValueError("stencil too wide for compiled kernel")
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, r, j, b1, b2
    cdef double p[MAXK]
    cdef double beta[MAXK]
    cdef double alpha[MAXK]
    cdef double d[MAXD]
    cdef double acc, c, g, tau, num, den
    with nogil:
        for i in range(n):
            for r in range(k):
                acc = 0.0
                for j in range(W):
                    c = Cv[r, j]
                    if c != 0.0:
                        acc = acc + c * R[i, j]
                p[r] = acc
                for b1 in range(nd):
                    acc = 0.0
                    for j in range(W):
                        c = Av[r, b1, j]
                        if c != 0.0:
                            acc = acc + c * R[i, j]
                    d[b1] = acc
                acc = 0.0
                for b1 in range(nd):
                    for b2 in range(nd):
                        g = Gv[b1, b2]
                        if g != 0.0:
                            acc = acc + g * d[b1] * d[b2]
                beta[r] = acc
            if zmode:
                tau = fabs(beta[0] - beta[k - 1])
                for r in range(k):
                    alpha[r] = gv[r] * (1.0 + tau / (beta[r] + eps))
            else:
                for r in range(k):
                    alpha[r] = gv[r] / ((eps + beta[r]) * (eps + beta[r]))
            num = alpha[0] * p[0]
            den = alpha[0]
            for r in range(1, k):
                num = num + alpha[r] * p[r]
                den = den + alpha[r]
            o[i] = num / den
    return out


def eno_rows(rows, C, int k):
    cdef const double[:, ::1] R = np.ascontiguousarray(rows, dtype=np.float64)
    cdef const double[:, ::1] Cv = np.ascontiguousarray(C, dtype=np.float64)
    cdef Py_ssize_t n = R.shape[0], W = R.shape[1]
    if W > MAXW or k > MAXK:
        raise ValueError("stencil too wide for compiled kernel")
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double diff[MAXW]
    cdef Py_ssize_t i, j, l, s
    cdef double acc, left, right
    with nogil:
        for i in range(n):
            for j in range(W):
                diff[j] = R[i, j]
            s = k - 1
            for l in range(1, k):
                for j in range(W - l):
                    diff[j] = diff[j + 1] - diff[j]
                left = fabs(diff[s - 1])
                right = fabs(diff[s])
                if left <= right:
                    s = s - 1
            acc = Cv[s, 0] * R[i, 0]
            for j in range(1, W):
                acc = acc + Cv[s, j] * R[i, j]
            o[i] = acc
    return out
