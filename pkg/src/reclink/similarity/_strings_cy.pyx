# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled string similarity kernels (see _strings_py for the reference)."""

from libc.stdlib cimport malloc, free

import numpy as np

cimport numpy as cnp


cdef double _jaro_winkler(str s, str t, double prefix_scale) except -2.0:
    cdef Py_ssize_t ls = len(s)
    cdef Py_ssize_t lt = len(t)
    cdef Py_ssize_t window, i, j, lo, hi, k, prefix, cap
    cdef Py_ssize_t m = 0
    cdef Py_ssize_t half_trans = 0
    cdef Py_UCS4 c
    cdef char *flags_s
    cdef char *flags_t
    cdef double jaro

    if ls == 0 or lt == 0:
        raise ValueError("jaro_winkler requires non-empty strings")
    if prefix_scale < 0.0 or prefix_scale > 0.25:
        raise ValueError("prefix_scale must lie in [0, 0.25]")
    if s == t:
        return 1.0

    window = (ls if ls > lt else lt) // 2 - 1
    if window < 0:
        window = 0
    flags_s = <char *>malloc(ls + lt)
    if flags_s == NULL:
        raise MemoryError()
    flags_t = flags_s + ls
    for i in range(ls + lt):
        flags_s[i] = 0
    try:
        for i in range(ls):
            c = s[i]
            lo = i - window if i > window else 0
            hi = i + window + 1
            if hi > lt:
                hi = lt
            for j in range(lo, hi):
                if flags_t[j] == 0 and <Py_UCS4>t[j] == c:
                    flags_s[i] = 1
                    flags_t[j] = 1
                    m += 1
                    break
        if m == 0:
            return 0.0
        k = 0
        for i in range(ls):
            if flags_s[i] != 0:
                while flags_t[k] == 0:
                    k += 1
                if <Py_UCS4>s[i] != <Py_UCS4>t[k]:
                    half_trans += 1
                k += 1
    finally:
        free(flags_s)

    jaro = ((<double>m) / ls + (<double>m) / lt
            + (<double>(m - half_trans // 2)) / m) / 3.0
    prefix = 0
    cap = ls if ls < lt else lt
    if cap > 4:
        cap = 4
    for i in range(cap):
        if <Py_UCS4>s[i] != <Py_UCS4>t[i]:
            break
        prefix += 1
    return jaro + prefix * prefix_scale * (1.0 - jaro)


cdef double _padded_lev(str s, str t) except -2.0:
    cdef Py_ssize_t ls = len(s)
    cdef Py_ssize_t lt = len(t)
    cdef Py_ssize_t length, i, j, pad_s, pad_t
    cdef Py_ssize_t cost, best, cand
    cdef Py_ssize_t *prev
    cdef Py_ssize_t *cur
    cdef Py_ssize_t *tmp
    cdef Py_UCS4 ci, cj

    if ls == 0 or lt == 0:
        raise ValueError("padded_levenshtein_sim requires non-empty strings")
    length = ls if ls > lt else lt
    pad_s = length - ls
    pad_t = length - lt
    prev = <Py_ssize_t *>malloc(2 * (length + 1) * sizeof(Py_ssize_t))
    if prev == NULL:
        raise MemoryError()
    cur = prev + (length + 1)
    try:
        for j in range(length + 1):
            prev[j] = j
        for i in range(1, length + 1):
            cur[0] = i
            ci = u'0' if i <= pad_s else <Py_UCS4>s[i - 1 - pad_s]
            for j in range(1, length + 1):
                cj = u'0' if j <= pad_t else <Py_UCS4>t[j - 1 - pad_t]
                cost = 0 if ci == cj else 1
                best = prev[j] + 1
                cand = cur[j - 1] + 1
                if cand < best:
                    best = cand
                cand = prev[j - 1] + cost
                if cand < best:
                    best = cand
                cur[j] = best
            tmp = prev
            prev = cur
            cur = tmp
        return 1.0 - (<double>prev[length]) / length
    finally:
        free(prev if prev < cur else cur)


def jaro_winkler(s, t, double prefix_scale=0.1):
    return _jaro_winkler(s, t, prefix_scale)


def padded_levenshtein_sim(s, t):
    return _padded_lev(s, t)


def jaro_winkler_pairs(xs, ys, double prefix_scale=0.1):
    cdef Py_ssize_t n = len(xs)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _jaro_winkler(xs[i], ys[i], prefix_scale)
    return out


def padded_levenshtein_pairs(xs, ys):
    cdef Py_ssize_t n = len(xs)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = _padded_lev(xs[i], ys[i])
    return out
