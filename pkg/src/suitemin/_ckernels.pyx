# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Semantics must match ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY

cnp.import_array()


def discontinuity(const double[::1] sig, double step):
    cdef Py_ssize_t k = sig.shape[0] - 1
    cdef Py_ssize_t dt, i
    cdef double best = 0.0, lc, rc, m
    for dt in range(1, 4):
        for i in range(dt, k - dt + 1):
            lc = fabs(sig[i] - sig[i - dt]) / step
            rc = fabs(sig[i + dt] - sig[i]) / step
            m = lc if lc < rc else rc
            if m > best:
                best = m
    return best


def cdom_win_counts(const double[:, ::1] cp, const double[:, ::1] cm,
                    const double[:, ::1] op, const double[:, ::1] om):
    """Number of opponents each candidate is cdom-preferred over.

    Inputs are the factored exponentials exp(+-w*v/g) of candidates (cp, cm)
    and opponents (op, om); term i of s1 is cp[c,i]*om[o,i], of s2 cm[c,i]*op[o,i].
    """
    cdef Py_ssize_t nc = cp.shape[0], no = op.shape[0], g = cp.shape[1]
    cdef Py_ssize_t c, o, i
    cdef double s1, s2
    out = np.zeros(nc, dtype=np.int64)
    cdef long long[::1] wins = out
    for c in range(nc):
        for o in range(no):
            s1 = 0.0
            s2 = 0.0
            for i in range(g):
                s1 -= cp[c, i] * om[o, i]
                s2 -= cm[c, i] * op[o, i]
            if s1 < s2:
                wins[c] += 1
    return out


cdef inline bint _dominates(const double[:, ::1] f, Py_ssize_t a, Py_ssize_t b,
                            Py_ssize_t m) nogil:
    cdef Py_ssize_t j
    cdef bint strict = False
    for j in range(m):
        if f[a, j] > f[b, j]:
            return False
        if f[a, j] < f[b, j]:
            strict = True
    return strict


def nondominated_ranks(const double[:, ::1] f):
    """Front index per row of a minimisation objective matrix (0 = first front)."""
    cdef Py_ssize_t n = f.shape[0], m = f.shape[1]
    cdef Py_ssize_t p, q, idx, head, tail
    dominated_by = np.zeros(n, dtype=np.int64)
    rank_arr = np.full(n, -1, dtype=np.int64)
    # dominance lists as a dense boolean matrix; n is a population size
    dom_arr = np.zeros((n, n), dtype=np.uint8)
    queue_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] cnt = dominated_by
    cdef long long[::1] rank = rank_arr
    cdef unsigned char[:, ::1] dom = dom_arr
    cdef long long[::1] queue = queue_arr
    for p in range(n):
        for q in range(p + 1, n):
            if _dominates(f, p, q, m):
                dom[p, q] = 1
                cnt[q] += 1
            elif _dominates(f, q, p, m):
                dom[q, p] = 1
                cnt[p] += 1
    tail = 0
    for p in range(n):
        if cnt[p] == 0:
            rank[p] = 0
            queue[tail] = p
            tail += 1
    head = 0
    while head < tail:
        p = queue[head]
        head += 1
        for q in range(n):
            if dom[p, q]:
                cnt[q] -= 1
                if cnt[q] == 0:
                    rank[q] = rank[p] + 1
                    queue[tail] = q
                    tail += 1
    return rank_arr


def crowding_distance(const double[:, ::1] f):
    cdef Py_ssize_t n = f.shape[0], m = f.shape[1]
    cdef Py_ssize_t j, k
    cdef double lo, hi, span
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] dist = out
    cdef long long[::1] order
    if n <= 2:
        out[:] = np.inf
        return out
    arr = np.asarray(f)
    for j in range(m):
        order = np.argsort(arr[:, j], kind="stable").astype(np.int64)
        lo = f[order[0], j]
        hi = f[order[n - 1], j]
        dist[order[0]] = INFINITY
        dist[order[n - 1]] = INFINITY
        span = hi - lo
        if span <= 0.0:
            continue
        for k in range(1, n - 1):
            dist[order[k]] += (f[order[k + 1], j] - f[order[k - 1], j]) / span
    return out
