# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for the exhaustive permutation searches.

Mirrors the contracts of `_pure`; scores are computed in two passes (find
the extremum, then collect ties) with compensated summation in the
distortion loop.
"""

import numpy as np

from libc.stdlib cimport free, malloc


def pair_search(double[::1] r, double[::1] s, double[:, ::1] C,
                Py_ssize_t[:, ::1] perms, Py_ssize_t start, Py_ssize_t stop,
                double tie_tol):
    cdef Py_ssize_t M = C.shape[0]
    cdef Py_ssize_t nperm = perms.shape[0]
    cdef Py_ssize_t nout = stop - start
    cdef Py_ssize_t a, b, i, j
    cdef double acc, best, tol
    cdef double* u = <double*> malloc(M * sizeof(double))
    cdef double* bvals = <double*> malloc(nperm * M * sizeof(double))
    scores_arr = np.empty(nout * nperm, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    if u == NULL or bvals == NULL:
        free(u); free(bvals)
        raise MemoryError()
    try:
        for b in range(nperm):
            for j in range(M):
                bvals[b * M + j] = s[perms[b, j]]
        best = -np.inf
        for a in range(nout):
            for j in range(M):
                acc = 0.0
                for i in range(M):
                    acc += r[perms[start + a, i]] * C[i, j]
                u[j] = acc
            for b in range(nperm):
                acc = 0.0
                for j in range(M):
                    acc += u[j] * bvals[b * M + j]
                scores[a * nperm + b] = acc
                if acc > best:
                    best = acc
    finally:
        free(u)
        free(bvals)
    tol = tie_tol * abs(best)
    ties = np.flatnonzero(scores_arr >= best - tol)
    return best, [(int(k) // nperm + start, int(k) % nperm) for k in ties]


def equal_pair_search(double[::1] r, double[::1] s, double[:, ::1] C,
                      Py_ssize_t[:, ::1] perms, Py_ssize_t start,
                      Py_ssize_t stop, double tie_tol):
    cdef Py_ssize_t M = C.shape[0]
    cdef Py_ssize_t nout = stop - start
    cdef Py_ssize_t a, i, j
    cdef double acc, row, best, tol
    scores_arr = np.empty(nout, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    best = -np.inf
    for a in range(nout):
        acc = 0.0
        for i in range(M):
            row = 0.0
            for j in range(M):
                row += C[i, j] * s[perms[start + a, j]]
            acc += r[perms[start + a, i]] * row
        scores[a] = acc
        if acc > best:
            best = acc
    tol = tie_tol * abs(best)
    return best, [int(k) + start for k in np.flatnonzero(scores_arr >= best - tol)]


cdef inline double _kahan_add(double total, double term, double* comp) nogil:
    cdef double y = term - comp[0]
    cdef double t = total + y
    comp[0] = (t - total) - y
    return t


def assignment_search(double[::1] q, double[:, ::1] P,
                      Py_ssize_t[:, ::1] perms, bint mmse,
                      Py_ssize_t start, Py_ssize_t stop, double tie_tol):
    cdef Py_ssize_t M = P.shape[0]
    cdef Py_ssize_t nout = stop - start
    cdef Py_ssize_t a, i, j, k
    cdef double total, comp, diff, best, tol, scale, den
    cdef double* qa = <double*> malloc(M * sizeof(double))
    cdef double* y = <double*> malloc(M * sizeof(double))
    cdef double* col = <double*> malloc(M * sizeof(double))
    scores_arr = np.empty(nout, dtype=np.float64)
    cdef double[::1] scores = scores_arr
    if qa == NULL or y == NULL or col == NULL:
        free(qa); free(y); free(col)
        raise MemoryError()
    try:
        for j in range(M):
            den = 0.0
            for i in range(M):
                den += P[i, j]
            col[j] = den
        best = np.inf
        for a in range(nout):
            for i in range(M):
                qa[i] = q[perms[start + a, i]]
            if mmse:
                for j in range(M):
                    total = 0.0
                    for k in range(M):
                        total += qa[k] * P[k, j]
                    y[j] = total / col[j]
            total = 0.0
            comp = 0.0
            for i in range(M):
                for j in range(M):
                    diff = qa[i] - (y[j] if mmse else qa[j])
                    total = _kahan_add(total, P[i, j] * diff * diff, &comp)
            scores[a] = total / M
            if scores[a] < best:
                best = scores[a]
    finally:
        free(qa)
        free(y)
        free(col)
    scale = 0.0
    for i in range(M):
        scale += q[i] * q[i]
    scale /= M
    tol = tie_tol * max(abs(best), scale)
    return best, [int(k) + start for k in np.flatnonzero(scores_arr <= best + tol)]
