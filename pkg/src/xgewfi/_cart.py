"""Compiled CART kernels used by :mod:`xgewfi.forest`.

Trees are stored as flat arrays indexed by node id; ``left[i] == -1``
marks a leaf. All randomness is supplied by the caller through
``feat_keys`` (one row of uniform keys per node id), which keeps the
kernels deterministic and independent of numba's own RNG.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _node_stats(y, idx, start, end, n_classes, counts):
    n = end - start
    if n_classes == 0:
        mean = 0.0
        for i in range(start, end):
            mean += y[idx[i]]
        mean /= n
        sse = 0.0
        lo = y[idx[start]]
        hi = lo
        for i in range(start, end):
            d = y[idx[i]] - mean
            sse += d * d
            v = y[idx[i]]
            if v < lo:
                lo = v
            if v > hi:
                hi = v
        pure = lo == hi
        imp = 0.0 if pure else sse / n
        return imp, mean, pure
    counts[:] = 0
    for i in range(start, end):
        counts[int(y[idx[i]])] += 1
    best = 0
    ss = 0.0
    for c in range(n_classes):
        if counts[c] > counts[best]:
            best = c
        ss += (counts[c] / n) ** 2
    imp = 1.0 - ss
    pure = counts[best] == n
    if pure:
        imp = 0.0
    return imp, float(best), pure


@njit(cache=True)
def _best_split(X, y, idx, start, end, candidates, n_classes, mean,
                vals, order, ysorted, cl, cr):
    """Scan every threshold of every candidate feature.

    Returns (feature, threshold) of the split with the lowest weighted
    child impurity; ties keep the earliest feature, then threshold.
    """
    n = end - start
    best_f = -1
    best_t = 0.0
    best_crit = np.inf
    for fi in range(candidates.shape[0]):
        f = candidates[fi]
        for i in range(n):
            vals[i] = X[idx[start + i], f]
        o = np.argsort(vals[:n], kind="mergesort")
        for i in range(n):
            order[i] = o[i]
        if vals[order[0]] == vals[order[n - 1]]:
            continue
        if n_classes == 0:
            # centred targets keep the running sums well conditioned
            tot = 0.0
            tot2 = 0.0
            for i in range(n):
                v = y[idx[start + order[i]]] - mean
                ysorted[i] = v
                tot += v
                tot2 += v * v
            s = 0.0
            s2 = 0.0
            for i in range(n - 1):
                v = ysorted[i]
                s += v
                s2 += v * v
                a = vals[order[i]]
                b = vals[order[i + 1]]
                if a == b:
                    continue
                nl = i + 1
                nr = n - nl
                sl = s2 - s * s / nl
                rs = tot - s
                sr = (tot2 - s2) - rs * rs / nr
                crit = sl + sr
                if crit < best_crit:
                    best_crit = crit
                    best_f = f
                    t = 0.5 * (a + b)
                    if t >= b:
                        t = a
                    best_t = t
        else:
            cl[:] = 0
            cr[:] = 0
            for i in range(n):
                cr[int(y[idx[start + order[i]]])] += 1
            sql = 0.0
            sqr = 0.0
            for c in range(n_classes):
                sqr += cr[c] * cr[c]
            for i in range(n - 1):
                c = int(y[idx[start + order[i]]])
                sql += 2 * cl[c] + 1
                sqr -= 2 * cr[c] - 1
                cl[c] += 1
                cr[c] -= 1
                a = vals[order[i]]
                b = vals[order[i + 1]]
                if a == b:
                    continue
                nl = i + 1
                nr = n - nl
                crit = (nl - sql / nl) + (nr - sqr / nr)
                if crit < best_crit:
                    best_crit = crit
                    best_f = f
                    t = 0.5 * (a + b)
                    if t >= b:
                        t = a
                    best_t = t
    return best_f, best_t


@njit(cache=True)
def build_tree(X, y, sample_idx, n_classes, max_depth, min_samples_split,
               n_candidates, feat_keys):
    n = sample_idx.shape[0]
    p = X.shape[1]
    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros(cap)
    n_node = np.zeros(cap, dtype=np.int64)
    impurity = np.zeros(cap)
    depth = np.zeros(cap, dtype=np.int64)
    lo = np.zeros(cap, dtype=np.int64)
    hi = np.zeros(cap, dtype=np.int64)

    idx = sample_idx.copy()
    tmp = np.empty(n, dtype=np.int64)
    vals = np.empty(n)
    order = np.empty(n, dtype=np.int64)
    ysorted = np.empty(n)
    nc = max(n_classes, 1)
    counts = np.zeros(nc, dtype=np.int64)
    cl = np.zeros(nc, dtype=np.int64)
    cr = np.zeros(nc, dtype=np.int64)

    stack = np.empty(cap, dtype=np.int64)
    top = 0
    stack[top] = 0
    top += 1
    lo[0] = 0
    hi[0] = n
    n_nodes = 1
    while top > 0:
        top -= 1
        node = stack[top]
        start = lo[node]
        end = hi[node]
        size = end - start
        imp, val, pure = _node_stats(y, idx, start, end, n_classes, counts)
        impurity[node] = imp
        value[node] = val
        n_node[node] = size
        if pure or size < min_samples_split or (max_depth >= 0 and depth[node] >= max_depth):
            continue
        keys = feat_keys[node]
        cand = np.sort(np.argsort(keys, kind="mergesort")[:n_candidates])
        f, t = _best_split(X, y, idx, start, end, cand, n_classes, val,
                           vals, order, ysorted, cl, cr)
        if f < 0:
            continue
        # stable partition of idx[start:end] around the threshold
        nl = 0
        for i in range(start, end):
            if X[idx[i], f] <= t:
                tmp[nl] = idx[i]
                nl += 1
        k = nl
        for i in range(start, end):
            if X[idx[i], f] > t:
                tmp[k] = idx[i]
                k += 1
        for i in range(size):
            idx[start + i] = tmp[i]
        feature[node] = f
        threshold[node] = t
        lnode = n_nodes
        rnode = n_nodes + 1
        n_nodes += 2
        left[node] = lnode
        right[node] = rnode
        depth[lnode] = depth[node] + 1
        depth[rnode] = depth[node] + 1
        lo[lnode] = start
        hi[lnode] = start + nl
        lo[rnode] = start + nl
        hi[rnode] = end
        stack[top] = rnode
        top += 1
        stack[top] = lnode
        top += 1
    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), value[:n_nodes].copy(), n_node[:n_nodes].copy(),
            impurity[:n_nodes].copy())


@njit(cache=True)
def predict_tree(X, feature, threshold, left, right, value):
    out = np.empty(X.shape[0])
    for r in range(X.shape[0]):
        node = 0
        while left[node] >= 0:
            if X[r, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[r] = value[node]
    return out
