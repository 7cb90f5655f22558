# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled bitmask kernels for masks that fit in 64 bits."""

from libc.stdlib cimport malloc, free

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil

ctypedef unsigned long long u64


def popcount(x):
    return __builtin_popcountll(<u64>x)


cdef list _maximal(u64* m, Py_ssize_t n):
    cdef Py_ssize_t i, j, t, nk = 0
    cdef int* pc = <int*>malloc(n * sizeof(int))
    cdef Py_ssize_t* kept = <Py_ssize_t*>malloc(n * sizeof(Py_ssize_t))
    cdef bint covered
    try:
        for i in range(n):
            pc[i] = __builtin_popcountll(m[i])
        order = sorted([(-pc[i], i) for i in range(n)])
        for t in range(n):
            i = order[t][1]
            covered = False
            for j in range(nk):
                if m[i] & ~m[kept[j]] == 0:
                    covered = True
                    break
            if not covered:
                kept[nk] = i
                nk += 1
        out = [kept[j] for j in range(nk)]
    finally:
        free(pc)
        free(kept)
    out.sort()
    return out


def maximal_indices(masks):
    cdef Py_ssize_t n = len(masks), i
    if n == 0:
        return []
    cdef u64* m = <u64*>malloc(n * sizeof(u64))
    try:
        for i in range(n):
            m[i] = <u64>masks[i]
        return _maximal(m, n)
    finally:
        free(m)


def intersect_maximal(a, b):
    cdef Py_ssize_t na = len(a), nb = len(b), i, j
    cdef u64 x
    first = {}
    cdef u64* ua = <u64*>malloc((na + 1) * sizeof(u64))
    cdef u64* ub = <u64*>malloc((nb + 1) * sizeof(u64))
    try:
        for i in range(na):
            ua[i] = <u64>a[i]
        for j in range(nb):
            ub[j] = <u64>b[j]
        for i in range(na):
            for j in range(nb):
                x = ua[i] & ub[j]
                if x not in first:
                    first[x] = (i, j)
    finally:
        free(ua)
        free(ub)
    masks = list(first)
    return [(masks[t], *first[masks[t]]) for t in maximal_indices(masks)]


def ledger_accept(gimel, inside, share_num, share_den, lam_num, lam_den):
    cdef Py_ssize_t nv = len(gimel), nh = len(inside), i, j
    cdef u64 v
    cdef long long fl, sc
    cdef u64* uh
    scale = share_den * lam_den
    bound = max(abs(share_num * lam_den), abs(lam_num * share_den), abs(scale)) * 64
    if bound >= (1 << 62):
        import robust_tverberg._kernels_py as py
        return py.ledger_accept(gimel, inside, share_num, share_den, lam_num, lam_den)
    sc = scale
    uh = <u64*>malloc((nh + 1) * sizeof(u64))
    try:
        for j in range(nh):
            uh[j] = <u64>inside[j]
        for i in range(nv):
            v = <u64>gimel[i]
            fl = __builtin_popcountll(v) * <long long>(share_num * lam_den) - <long long>(lam_num * share_den)
            for j in range(nh):
                if __builtin_popcountll(v & uh[j]) * sc < fl:
                    return False
        return True
    finally:
        free(uh)
