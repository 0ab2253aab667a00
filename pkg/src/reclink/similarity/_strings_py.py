"""Pure-Python string similarity kernels.

Reference implementations; the Cython module `_strings_cy` mirrors these
exactly and is preferred at import time when available.
"""

import numpy as np


def jaro_winkler(s: str, t: str, prefix_scale: float = 0.1) -> float:
    """Jaro similarity with the Winkler common-prefix boost.

    The boost uses the shared prefix capped at 4 characters. Returns 1.0
    iff the strings are equal; symmetric in its arguments.
    """
    if not s or not t:
        raise ValueError("jaro_winkler requires non-empty strings")
    if not 0.0 <= prefix_scale <= 0.25:
        raise ValueError("prefix_scale must lie in [0, 0.25]")
    if s == t:
        return 1.0
    ls, lt = len(s), len(t)
    window = max(ls, lt) // 2 - 1
    if window < 0:
        window = 0
    flags_s = [False] * ls
    flags_t = [False] * lt
    m = 0
    for i in range(ls):
        c = s[i]
        lo = i - window if i > window else 0
        hi = i + window + 1
        if hi > lt:
            hi = lt
        for j in range(lo, hi):
            if not flags_t[j] and t[j] == c:
                flags_s[i] = True
                flags_t[j] = True
                m += 1
                break
    if m == 0:
        return 0.0
    half_transpositions = 0
    k = 0
    for i in range(ls):
        if flags_s[i]:
            while not flags_t[k]:
                k += 1
            if s[i] != t[k]:
                half_transpositions += 1
            k += 1
    transpositions = half_transpositions // 2
    jaro = (m / ls + m / lt + (m - transpositions) / m) / 3.0
    prefix = 0
    for i in range(min(4, ls, lt)):
        if s[i] != t[i]:
            break
        prefix += 1
    return jaro + prefix * prefix_scale * (1.0 - jaro)


def padded_levenshtein_sim(s: str, t: str) -> float:
    """Levenshtein similarity after left-padding with '0' to equal length.

    Returns 1 - dist/L where L = max(len(s), len(t)). Intended for digit
    strings such as street numbers.
    """
    if not s or not t:
        raise ValueError("padded_levenshtein_sim requires non-empty strings")
    length = max(len(s), len(t))
    s = s.rjust(length, "0")
    t = t.rjust(length, "0")
    if s == t:
        return 1.0
    prev = list(range(length + 1))
    cur = [0] * (length + 1)
    for i in range(1, length + 1):
        cur[0] = i
        ci = s[i - 1]
        for j in range(1, length + 1):
            cost = 0 if ci == t[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev, cur = cur, prev
    return 1.0 - prev[length] / length


def jaro_winkler_pairs(xs, ys, prefix_scale: float = 0.1) -> np.ndarray:
    """Jaro-Winkler over parallel sequences of strings."""
    n = len(xs)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = jaro_winkler(xs[i], ys[i], prefix_scale)
    return out


def padded_levenshtein_pairs(xs, ys) -> np.ndarray:
    """Padded Levenshtein similarity over parallel sequences of strings."""
    n = len(xs)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = padded_levenshtein_sim(xs[i], ys[i])
    return out
