# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernels: batched potential and mass-metric gradient.

Same contract as _kernels_py; see that module for the shapes.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, INFINITY

cnp.import_array()


def potential_batch(cnp.ndarray[cnp.float64_t, ndim=3] samples,
                    cnp.ndarray[cnp.float64_t, ndim=1] masses,
                    double alpha):
    cdef Py_ssize_t m = samples.shape[0]
    cdef Py_ssize_t n = samples.shape[1]
    cdef Py_ssize_t d = samples.shape[2]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] U = np.zeros(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mindist = np.full(m, INFINITY)
    cdef Py_ssize_t k, i, j, c
    cdef double r2, r, diff, u, md
    for k in range(m):
        u = 0.0
        md = INFINITY
        for i in range(n):
            for j in range(i + 1, n):
                r2 = 0.0
                for c in range(d):
                    diff = samples[k, i, c] - samples[k, j, c]
                    r2 += diff * diff
                r = sqrt(r2)
                if r < md:
                    md = r
                if r > 0.0:
                    u += masses[i] * masses[j] * pow(r, -alpha)
                else:
                    u = INFINITY
        U[k] = u
        mindist[k] = md
    return U, mindist


def potential_grad_batch(cnp.ndarray[cnp.float64_t, ndim=3] samples,
                         cnp.ndarray[cnp.float64_t, ndim=1] masses,
                         double alpha):
    cdef Py_ssize_t m = samples.shape[0]
    cdef Py_ssize_t n = samples.shape[1]
    cdef Py_ssize_t d = samples.shape[2]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] U = np.zeros(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=3] G = np.zeros((m, n, d))
    cdef cnp.ndarray[cnp.float64_t, ndim=1] mindist = np.full(m, INFINITY)
    cdef Py_ssize_t k, i, j, c
    cdef double r2, r, u, md, coef, f
    cdef double[8] dbuf  # enough for d <= 8; larger d falls back below
    if d > 8:
        import varorbit._kernels_py as ref
        return ref.potential_grad_batch(np.asarray(samples), np.asarray(masses), alpha)
    for k in range(m):
        u = 0.0
        md = INFINITY
        for i in range(n):
            for j in range(i + 1, n):
                r2 = 0.0
                for c in range(d):
                    dbuf[c] = samples[k, i, c] - samples[k, j, c]
                    r2 += dbuf[c] * dbuf[c]
                r = sqrt(r2)
                if r < md:
                    md = r
                if r > 0.0:
                    u += masses[i] * masses[j] * pow(r, -alpha)
                    coef = -alpha * masses[i] * masses[j] * pow(r, -(alpha + 2.0))
                    for c in range(d):
                        f = coef * dbuf[c]
                        G[k, i, c] += f
                        G[k, j, c] -= f
                else:
                    u = INFINITY
        U[k] = u
        mindist[k] = md
    for k in range(m):
        for i in range(n):
            for c in range(d):
                G[k, i, c] /= masses[i]
    return U, G, mindist
