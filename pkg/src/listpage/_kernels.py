"""Hot numeric kernels: Levenshtein distance over encoded tag sequences.

Candidate generation compares many adjacent sibling fragments per page, so
the edit-distance inner loop dominates segmentation runtime. The default
path is numba-compiled; set LISTPAGE_NUMBA=0 to force the pure-numpy
fallback (used by the benchmark and as a safety hatch).
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("LISTPAGE_NUMBA", "1") != "0"


def _levenshtein_py(a: np.ndarray, b: np.ndarray) -> int:
    n, m = a.shape[0], b.shape[0]
    if n == 0:
        return m
    if m == 0:
        return n
    prev = np.arange(m + 1, dtype=np.int64)
    cur = np.empty(m + 1, dtype=np.int64)
    for i in range(n):
        cur[0] = i + 1
        # substitution / deletion costs vectorized over row i
        sub = prev[:-1] + (b != a[i])
        np.minimum(sub, prev[1:] + 1, out=cur[1:])
        for j in range(1, m + 1):
            if cur[j - 1] + 1 < cur[j]:
                cur[j] = cur[j - 1] + 1
        prev, cur = cur, prev
    return int(prev[m])


if USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _levenshtein_nb(a, b):  # pragma: no cover - compiled
        n, m = a.shape[0], b.shape[0]
        if n == 0:
            return m
        if m == 0:
            return n
        prev = np.arange(m + 1, dtype=np.int64)
        cur = np.empty(m + 1, dtype=np.int64)
        for i in range(n):
            cur[0] = i + 1
            for j in range(1, m + 1):
                cost = prev[j - 1] + (0 if a[i] == b[j - 1] else 1)
                if prev[j] + 1 < cost:
                    cost = prev[j] + 1
                if cur[j - 1] + 1 < cost:
                    cost = cur[j - 1] + 1
                cur[j] = cost
            prev, cur = cur, prev
        return prev[m]

    def levenshtein(a: np.ndarray, b: np.ndarray) -> int:
        return int(_levenshtein_nb(a, b))

else:
    levenshtein = _levenshtein_py
