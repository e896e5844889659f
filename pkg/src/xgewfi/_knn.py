"""Compiled brute-force neighbour searches for imputation and SMOTE.

Candidates are scanned in row order and only displace a kept neighbour
when strictly closer, so equal distances always favour the lower row.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _insert(bd, bi, size, k, d, i):
    if size == k and d >= bd[k - 1]:
        return size
    pos = size if size < k else k - 1
    while pos > 0 and bd[pos - 1] > d:
        if pos < k:
            bd[pos] = bd[pos - 1]
            bi[pos] = bi[pos - 1]
        pos -= 1
    bd[pos] = d
    bi[pos] = i
    return size + 1 if size < k else size


@njit(cache=True)
def knn_impute(values, observed, k, col_means, out, fallbacks):
    n, p = values.shape
    obs = observed.astype(np.int64)
    bd = np.empty((p, k))
    bi = np.empty((p, k), dtype=np.int64)
    sizes = np.zeros(p, dtype=np.int64)
    todo = np.empty(p, dtype=np.int64)
    for r in range(n):
        nt = 0
        for f in range(p):
            if not observed[r, f]:
                todo[nt] = f
                nt += 1
        if nt == 0:
            continue
        for t in range(nt):
            sizes[todo[t]] = 0
        for c in range(n):
            ssum = 0.0
            cnt = 0
            for j in range(p):
                w = obs[r, j] * obs[c, j]
                d = values[r, j] - values[c, j]
                ssum += w * (d * d)
                cnt += w
            if cnt == 0:
                continue
            dist = np.sqrt((p / cnt) * ssum)
            for t in range(nt):
                f = todo[t]
                if observed[c, f]:
                    sizes[f] = _insert(bd[f], bi[f], sizes[f], k, dist, c)
        for t in range(nt):
            f = todo[t]
            m = sizes[f]
            if m == 0:
                out[r, f] = col_means[f]
                fallbacks[f] += 1
                continue
            s = 0.0
            lo = np.inf
            hi = -np.inf
            for q in range(m):
                v = values[bi[f, q], f]
                s += v
                lo = min(lo, v)
                hi = max(hi, v)
            out[r, f] = min(max(s / m, lo), hi)


@njit(cache=True)
def k_nearest(pool, rows, k):
    n, p = pool.shape
    out = np.empty((rows.shape[0], k), dtype=np.int64)
    bd = np.empty(k)
    bi = np.empty(k, dtype=np.int64)
    for q in range(rows.shape[0]):
        r = rows[q]
        size = 0
        for c in range(n):
            if c == r:
                continue
            ssum = 0.0
            for j in range(p):
                d = pool[r, j] - pool[c, j]
                ssum += d * d
            size = _insert(bd, bi, size, k, np.sqrt(ssum), c)
        out[q, :] = bi
    return out
