"""Hot loop of the versioned-knapsack DP.

``suffix_table`` fills ``g[i, c]``: the best value reachable from items
``i..M-1`` using total weight exactly ``c`` (``-inf`` when unreachable).
The numba kernel is used unless ``PROCALLOC_DISABLE_NUMBA`` is set or numba
fails to import; the numpy path performs the same float operations in the
same order, so both produce bit-identical tables.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_DISABLED = os.environ.get("PROCALLOC_DISABLE_NUMBA", "").lower() not in ("", "0", "false", "no")
USE_NUMBA = numba is not None and not _DISABLED


def suffix_table_numpy(offsets, weights, values, capacity):
    m = len(offsets) - 1
    g = np.full((m + 1, capacity + 1), -np.inf)
    g[m, 0] = 0.0
    for i in range(m - 1, -1, -1):
        nxt = g[i + 1]
        cur = nxt.copy()
        for j in range(offsets[i], offsets[i + 1]):
            w = weights[j]
            if w > capacity:
                continue
            cand = np.full(capacity + 1, -np.inf)
            cand[w:] = values[j] + nxt[: capacity + 1 - w]
            np.maximum(cur, cand, out=cur)
        g[i] = cur
    return g


def _suffix_table_loops(offsets, weights, values, capacity):
    m = len(offsets) - 1
    g = np.full((m + 1, capacity + 1), -np.inf)
    g[m, 0] = 0.0
    for i in range(m - 1, -1, -1):
        for c in range(capacity + 1):
            g[i, c] = g[i + 1, c]
        for j in range(offsets[i], offsets[i + 1]):
            w = weights[j]
            v = values[j]
            for c in range(w, capacity + 1):
                cand = v + g[i + 1, c - w]
                if cand > g[i, c]:
                    g[i, c] = cand
    return g


if numba is not None:
    suffix_table_numba = numba.njit(cache=True)(_suffix_table_loops)
else:  # pragma: no cover
    suffix_table_numba = None


def suffix_table(offsets, weights, values, capacity):
    offsets = np.asarray(offsets, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.int64)
    values = np.asarray(values, dtype=np.float64)
    if USE_NUMBA:
        return suffix_table_numba(offsets, weights, values, int(capacity))
    return suffix_table_numpy(offsets, weights, values, int(capacity))
