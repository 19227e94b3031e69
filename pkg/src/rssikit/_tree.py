"""Regression-tree kernels: growing and batch prediction.

Trees live in flat parallel arrays (feature, threshold, left, right, value,
count); feature == -1 marks a leaf.  Split quality is the drop in target
standard deviation: sd(parent) - (nL*sd(L) + nR*sd(R)) / n, population sd,
and candidate thresholds are midpoints between consecutive distinct sorted
feature values.  Ties break toward the lower feature index, then the lower
threshold, so growing is deterministic.

Each kernel has a numba twin and a numpy twin.  Both process nodes in the
same stack order, use stable sorts and stable partitions, and accumulate
sums in the same sequence, so the two paths build identical trees up to
floating-point ties.  Per-split feature subsets come from a caller-supplied
pool (row k = sorted candidate features of the k-th split attempt), which
keeps all randomness outside the kernels.
"""

from __future__ import annotations

import numpy as np

from ._accel import USING_NUMBA, njit

LEAF = -1


@njit(cache=True, nogil=True)
def _grow_jit(X, y, max_depth, min_split, min_leaf, feat_pool, m_features):
    n = X.shape[0]
    max_nodes = 2 * n + 1

    feature = np.full(max_nodes, -1, np.int32)
    threshold = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int32)
    right = np.full(max_nodes, -1, np.int32)
    value = np.zeros(max_nodes, np.float64)
    count = np.zeros(max_nodes, np.int32)

    idx = np.arange(n)
    buf = np.empty(n, np.int64)
    vals = np.empty(n, np.float64)
    vsort = np.empty(n, np.float64)
    ysort = np.empty(n, np.float64)

    stack_node = np.empty(max_nodes, np.int64)
    stack_start = np.empty(max_nodes, np.int64)
    stack_end = np.empty(max_nodes, np.int64)
    stack_depth = np.empty(max_nodes, np.int64)
    stack_node[0] = 0
    stack_start[0] = 0
    stack_end[0] = n
    stack_depth[0] = 0
    sp = 1
    node_count = 1
    pool_row = 0

    while sp > 0:
        sp -= 1
        node = stack_node[sp]
        start = stack_start[sp]
        end = stack_end[sp]
        depth = stack_depth[sp]
        size = end - start

        s1 = 0.0
        s2 = 0.0
        for k in range(start, end):
            t = y[idx[k]]
            s1 += t
            s2 += t * t
        mean = s1 / size
        value[node] = mean
        count[node] = size

        if depth >= max_depth or size < min_split or size < 2:
            continue

        var_p = s2 / size - mean * mean
        if var_p < 0.0:
            var_p = 0.0
        sd_p = np.sqrt(var_p)

        row = pool_row
        pool_row += 1

        best_red = 0.0
        best_feat = -1
        best_thr = 0.0
        for fi in range(m_features):
            f = feat_pool[row, fi]
            m = size
            for k in range(m):
                vals[k] = X[idx[start + k], f]
            order = np.argsort(vals[:m], kind="mergesort")
            for k in range(m):
                vsort[k] = vals[order[k]]
                ysort[k] = y[idx[start + order[k]]]
            c1 = 0.0
            c2 = 0.0
            for k in range(m - 1):
                t = ysort[k]
                c1 += t
                c2 += t * t
                if vsort[k] == vsort[k + 1]:
                    continue
                nl = k + 1
                nr = m - nl
                if nl < min_leaf or nr < min_leaf:
                    continue
                ml = c1 / nl
                vl = c2 / nl - ml * ml
                if vl < 0.0:
                    vl = 0.0
                mr = (s1 - c1) / nr
                vr = (s2 - c2) / nr - mr * mr
                if vr < 0.0:
                    vr = 0.0
                red = sd_p - (nl * np.sqrt(vl) + nr * np.sqrt(vr)) / m
                if red > best_red:
                    best_red = red
                    best_feat = f
                    thr = 0.5 * (vsort[k] + vsort[k + 1])
                    # midpoints of near-equal values can round up to the
                    # right value, which would empty the right child
                    if thr == vsort[k + 1]:
                        thr = vsort[k]
                    best_thr = thr

        if best_feat < 0:
            continue

        # stable partition of idx[start:end] around the chosen threshold
        p = start
        q = 0
        for k in range(start, end):
            j = idx[k]
            if X[j, best_feat] <= best_thr:
                idx[p] = j
                p += 1
            else:
                buf[q] = j
                q += 1
        for k in range(q):
            idx[p + k] = buf[k]

        feature[node] = best_feat
        threshold[node] = best_thr
        lid = node_count
        rid = node_count + 1
        node_count += 2
        left[node] = lid
        right[node] = rid

        stack_node[sp] = rid
        stack_start[sp] = p
        stack_end[sp] = end
        stack_depth[sp] = depth + 1
        sp += 1
        stack_node[sp] = lid
        stack_start[sp] = start
        stack_end[sp] = p
        stack_depth[sp] = depth + 1
        sp += 1

    return (
        feature[:node_count].copy(),
        threshold[:node_count].copy(),
        left[:node_count].copy(),
        right[:node_count].copy(),
        value[:node_count].copy(),
        count[:node_count].copy(),
    )


def _grow_np(X, y, max_depth, min_split, min_leaf, feat_pool, m_features):
    n = X.shape[0]
    max_nodes = 2 * n + 1

    feature = np.full(max_nodes, -1, np.int32)
    threshold = np.zeros(max_nodes, np.float64)
    left = np.full(max_nodes, -1, np.int32)
    right = np.full(max_nodes, -1, np.int32)
    value = np.zeros(max_nodes, np.float64)
    count = np.zeros(max_nodes, np.int32)

    idx = np.arange(n)
    stack = [(0, 0, n, 0)]
    node_count = 1
    pool_row = 0

    while stack:
        node, start, end, depth = stack.pop()
        size = end - start
        sub = idx[start:end]
        y_node = y[sub]
        # cumsum keeps the accumulation order identical to the loop twin
        s1 = float(np.cumsum(y_node)[-1])
        s2 = float(np.cumsum(y_node * y_node)[-1])
        mean = s1 / size
        value[node] = mean
        count[node] = size

        if depth >= max_depth or size < min_split or size < 2:
            continue

        sd_p = np.sqrt(max(s2 / size - mean * mean, 0.0))

        row = pool_row
        pool_row += 1

        best_red = 0.0
        best_feat = -1
        best_thr = 0.0
        ks = np.arange(1, size)
        for fi in range(m_features):
            f = feat_pool[row, fi]
            v = X[sub, f]
            order = np.argsort(v, kind="stable")
            vs = v[order]
            yo = y_node[order]
            ok = (vs[1:] != vs[:-1]) & (ks >= min_leaf) & ((size - ks) >= min_leaf)
            if not ok.any():
                continue
            c1 = np.cumsum(yo)[:-1]
            c2 = np.cumsum(yo * yo)[:-1]
            ml = c1 / ks
            vl = np.maximum(c2 / ks - ml * ml, 0.0)
            mr = (s1 - c1) / (size - ks)
            vr = np.maximum((s2 - c2) / (size - ks) - mr * mr, 0.0)
            red = sd_p - (ks * np.sqrt(vl) + (size - ks) * np.sqrt(vr)) / size
            red[~ok] = -np.inf
            pos = int(np.argmax(red))
            if red[pos] > best_red:
                best_red = float(red[pos])
                best_feat = int(f)
                thr = 0.5 * (vs[pos] + vs[pos + 1])
                if thr == vs[pos + 1]:
                    thr = vs[pos]
                best_thr = thr

        if best_feat < 0:
            continue

        mask = X[sub, best_feat] <= best_thr
        idx[start:end] = np.concatenate([sub[mask], sub[~mask]])
        p = start + int(mask.sum())

        feature[node] = best_feat
        threshold[node] = best_thr
        lid = node_count
        rid = node_count + 1
        node_count += 2
        left[node] = lid
        right[node] = rid
        stack.append((rid, p, end, depth + 1))
        stack.append((lid, start, p, depth + 1))

    return (
        feature[:node_count].copy(),
        threshold[:node_count].copy(),
        left[:node_count].copy(),
        right[:node_count].copy(),
        value[:node_count].copy(),
        count[:node_count].copy(),
    )


@njit(cache=True, nogil=True)
def _predict_jit(feature, threshold, left, right, value, X):
    n = X.shape[0]
    out = np.empty(n, np.float64)
    for i in range(n):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = value[node]
    return out


def _predict_np(feature, threshold, left, right, value, X):
    n = X.shape[0]
    node = np.zeros(n, np.int64)
    active = np.flatnonzero(feature[node] >= 0)
    while active.size:
        cur = node[active]
        go_left = X[active, feature[cur]] <= threshold[cur]
        node[active] = np.where(go_left, left[cur], right[cur])
        active = active[feature[node[active]] >= 0]
    return value[node]


def _default_pool(shape):
    """All features at every split attempt."""
    n, d = shape
    return np.ascontiguousarray(
        np.broadcast_to(np.arange(d, dtype=np.int64), (2 * n + 1, d))
    )


def grow(X, y, max_depth, min_split, min_leaf, feat_pool=None, m_features=None):
    """Grow a tree; returns (feature, threshold, left, right, value, count).

    feat_pool rows are the sorted candidate-feature subsets consumed one per
    split attempt; None means every feature at every split.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if feat_pool is None:
        feat_pool = _default_pool(X.shape)
    if m_features is None:
        m_features = feat_pool.shape[1]
    feat_pool = np.ascontiguousarray(feat_pool, dtype=np.int64)
    if USING_NUMBA:
        return _grow_jit(
            X, y, int(max_depth), int(min_split), int(min_leaf), feat_pool, int(m_features)
        )
    return _grow_np(
        X, y, int(max_depth), int(min_split), int(min_leaf), feat_pool, int(m_features)
    )


def predict(nodes, X):
    """Route every row of X through the tree arrays and return leaf values."""
    feature, threshold, left, right, value, _ = nodes
    X = np.ascontiguousarray(X, dtype=np.float64)
    if USING_NUMBA:
        return _predict_jit(feature, threshold, left, right, value, X)
    return _predict_np(feature, threshold, left, right, value, X)
