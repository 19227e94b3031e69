"""Pairwise coordinate solver for the tube-loss SVR dual.

With beta_i = alpha_i - alpha_i* the dual reduces to

    minimize  W(beta) = 1/2 beta'K beta - y'beta + eps * sum |beta_i|
    subject   sum beta_i = 0,   -C <= beta_i <= C.

Every iteration moves mass between one pair (i, j), which preserves the
equality constraint exactly.  The one-dimensional subproblem is piecewise
quadratic and convex, so it is minimized exactly by evaluating the boundary
points, the kinks at beta_i = 0 and beta_j = 0, and the per-piece
stationary points.  Optimality is tracked through the admissible range
[b_low, b_up] of the bias: the fit has converged when b_low - b_up < tol.
The violator i is drawn seeded-randomly (uniforms are pre-generated by the
caller, keeping both kernel paths on one stream) and paired with the
extreme partner, which guarantees strict descent.

Numba twin and numpy twin below; same update sequence on both paths.
"""

from __future__ import annotations

import numpy as np

from ._accel import USING_NUMBA, njit

BIG = 1e300


@njit(cache=True)
def _solve_jit(K, y, C, eps, tol, max_updates, pick):
    n = y.shape[0]
    beta = np.zeros(n, np.float64)
    g = -y.copy()  # gradient of the smooth part: K beta - y
    lo = np.empty(n, np.float64)
    hi = np.empty(n, np.float64)
    viol = np.empty(n, np.int64)
    bnd = 1e-9 * max(1.0, C)

    updates = 0
    converged = False
    b_low = 0.0
    b_up = 0.0

    while True:
        i_lo = 0
        i_up = 0
        for k in range(n):
            u = -g[k] - eps
            w = -g[k] + eps
            bk = beta[k]
            if bk >= C - bnd:
                lo[k] = -BIG
                hi[k] = u
            elif bk > bnd:
                lo[k] = u
                hi[k] = u
            elif bk >= -bnd:
                lo[k] = u
                hi[k] = w
            elif bk > -C + bnd:
                lo[k] = w
                hi[k] = w
            else:
                lo[k] = w
                hi[k] = BIG
        b_low = lo[0]
        b_up = hi[0]
        for k in range(1, n):
            if lo[k] > b_low:
                b_low = lo[k]
                i_lo = k
            if hi[k] < b_up:
                b_up = hi[k]
                i_up = k
        if b_low - b_up < tol:
            converged = True
            break
        if updates >= max_updates:
            break

        # threshold at tol/2 so the arg-extreme indices always qualify
        # whenever the loop has not converged
        nv = 0
        for k in range(n):
            if lo[k] - b_up > 0.5 * tol or b_low - hi[k] > 0.5 * tol:
                viol[nv] = k
                nv += 1
        i = viol[int(pick[updates] * nv)]
        j = i_up if lo[i] - b_up > 0.5 * tol else i_lo

        bi = beta[i]
        bj = beta[j]
        lo_d = max(-C - bi, bj - C)
        up_d = min(C - bi, bj + C)
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        s0 = g[i] - g[j]

        best_h = 0.0
        best_d = 0.0
        # candidates: interval ends, the two kinks, per-piece stationary points
        for c in range(8):
            if c == 0:
                d = lo_d
            elif c == 1:
                d = up_d
            elif c == 2:
                d = -bi
            elif c == 3:
                d = bj
            elif eta > 0.0:
                si = 1.0 if c == 4 or c == 5 else -1.0
                sj = 1.0 if c == 4 or c == 6 else -1.0
                d = -(s0 + eps * si - eps * sj) / eta
            else:
                continue
            if d < lo_d:
                d = lo_d
            elif d > up_d:
                d = up_d
            h = (
                0.5 * eta * d * d
                + s0 * d
                + eps * (abs(bi + d) + abs(bj - d) - abs(bi) - abs(bj))
            )
            if h < best_h:
                best_h = h
                best_d = d
        updates += 1
        if best_h < 0.0:
            d = best_d
            beta[i] = bi + d
            beta[j] = bj - d
            for k in range(n):
                g[k] += d * (K[k, i] - K[k, j])

    bias = 0.5 * (b_low + b_up)
    return beta, bias, converged, updates


def _solve_np(K, y, C, eps, tol, max_updates, pick):
    n = y.shape[0]
    beta = np.zeros(n, np.float64)
    g = -y.copy()
    bnd = 1e-9 * max(1.0, C)

    updates = 0
    converged = False
    b_low = 0.0
    b_up = 0.0

    while True:
        u = -g - eps
        w = -g + eps
        at_hi = beta >= C - bnd
        pos = (beta > bnd) & ~at_hi
        zero = (beta >= -bnd) & (beta <= bnd)
        at_lo = beta <= -C + bnd
        neg = (beta < -bnd) & ~at_lo
        lo = np.where(at_hi, -BIG, np.where(pos | zero, u, w))
        hi = np.where(at_lo, BIG, np.where(neg | zero, w, u))
        i_lo = int(np.argmax(lo))
        i_up = int(np.argmin(hi))
        b_low = float(lo[i_lo])
        b_up = float(hi[i_up])
        if b_low - b_up < tol:
            converged = True
            break
        if updates >= max_updates:
            break

        viol = np.flatnonzero((lo - b_up > 0.5 * tol) | (b_low - hi > 0.5 * tol))
        i = int(viol[int(pick[updates] * viol.size)])
        j = i_up if lo[i] - b_up > 0.5 * tol else i_lo

        bi = float(beta[i])
        bj = float(beta[j])
        lo_d = max(-C - bi, bj - C)
        up_d = min(C - bi, bj + C)
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        s0 = float(g[i] - g[j])

        cands = [lo_d, up_d, -bi, bj]
        if eta > 0.0:
            for si in (1.0, -1.0):
                for sj in (1.0, -1.0):
                    cands.append(-(s0 + eps * si - eps * sj) / eta)
        best_h = 0.0
        best_d = 0.0
        for d in cands:
            d = min(max(d, lo_d), up_d)
            h = (
                0.5 * eta * d * d
                + s0 * d
                + eps * (abs(bi + d) + abs(bj - d) - abs(bi) - abs(bj))
            )
            if h < best_h:
                best_h = h
                best_d = d
        updates += 1
        if best_h < 0.0:
            d = best_d
            beta[i] = bi + d
            beta[j] = bj - d
            g += d * (K[:, i] - K[:, j])

    bias = 0.5 * (b_low + b_up)
    return beta, bias, converged, updates


def solve(K, y, C, eps, tol, max_updates, pick):
    """Run the pair solver; returns (beta, bias, converged, n_updates)."""
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    pick = np.ascontiguousarray(pick, dtype=np.float64)
    if USING_NUMBA:
        return _solve_jit(K, y, float(C), float(eps), float(tol), int(max_updates), pick)
    return _solve_np(K, y, float(C), float(eps), float(tol), int(max_updates), pick)
