# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the ``_pykernels`` routines (int64 inputs)."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def distance_matrix(rows):
    cdef cnp.int64_t[:, ::1] r = np.ascontiguousarray(rows, dtype=np.int64).reshape(len(rows), -1)
    cdef Py_ssize_t n = r.shape[0]
    cdef Py_ssize_t k = r.shape[1]
    out_arr = np.zeros((n, n), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, t
    cdef cnp.int64_t d, x
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                d = 0
                for t in range(k):
                    x = r[i, t] - r[j, t]
                    if x < 0:
                        x = -x
                    if x > d:
                        d = x
                out[i, j] = d
                out[j, i] = d
    return out_arr.tolist()


def first_distortion(da, db):
    cdef cnp.int64_t[:, ::1] a = np.ascontiguousarray(da, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] b = np.ascontiguousarray(db, dtype=np.int64)
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    for i in range(n):
        for j in range(i + 1, n):
            if a[i, j] != b[i, j]:
                return (i, j)
    return None


cdef void _extend(Py_ssize_t i, Py_ssize_t n, cnp.int64_t[:, ::1] dist,
                  cnp.int64_t[:, ::1] profile, Py_ssize_t[::1] perm,
                  signed char[::1] used, Py_ssize_t first, list found):
    cdef Py_ssize_t c, k
    cdef bint ok
    if i == n:
        found.append(tuple([perm[k] for k in range(n)]))
        return
    for c in range(n):
        if used[c]:
            continue
        if i == 0 and first >= 0 and c != first:
            continue
        ok = True
        for k in range(n):
            if profile[c, k] != profile[i, k]:
                ok = False
                break
        if not ok:
            continue
        for k in range(i):
            if dist[c, perm[k]] != dist[i, k]:
                ok = False
                break
        if not ok:
            continue
        perm[i] = c
        used[c] = 1
        _extend(i + 1, n, dist, profile, perm, used, first, found)
        used[c] = 0
    perm[i] = -1


def isometry_search(dist, Py_ssize_t first=-1):
    n = len(dist)
    if n == 0:
        return [()]
    d_arr = np.ascontiguousarray(dist, dtype=np.int64)
    p_arr = np.ascontiguousarray(np.sort(d_arr, axis=1))
    perm = np.full(n, -1, dtype=np.intp)
    used = np.zeros(n, dtype=np.int8)
    cdef list found = []
    _extend(0, n, d_arr, p_arr, perm, used, first, found)
    return found
