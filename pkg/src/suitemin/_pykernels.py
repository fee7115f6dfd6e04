"""Pure numpy versions of the hot loops in ``_ckernels.pyx``."""

from __future__ import annotations

import numpy as np


def discontinuity(sig: np.ndarray, step: float) -> float:
    k = sig.shape[0] - 1
    best = 0.0
    for dt in range(1, 4):
        if k - dt < dt:
            continue
        mid = sig[dt : k - dt + 1]
        lc = np.abs(mid - sig[: k - 2 * dt + 1]) / step
        rc = np.abs(sig[2 * dt :] - mid) / step
        best = max(best, float(np.minimum(lc, rc).max()))
    return best


def cdom_win_counts(cp: np.ndarray, cm: np.ndarray, op: np.ndarray, om: np.ndarray) -> np.ndarray:
    out = np.zeros(cp.shape[0], dtype=np.int64)
    # chunked so the (chunk, n_opp, g) temporaries stay small
    chunk = max(1, 200_000 // max(1, op.shape[0] * cp.shape[1]))
    for start in range(0, cp.shape[0], chunk):
        s1 = -(cp[start : start + chunk, None, :] * om[None, :, :]).sum(axis=2)
        s2 = -(cm[start : start + chunk, None, :] * op[None, :, :]).sum(axis=2)
        out[start : start + chunk] = (s1 < s2).sum(axis=1)
    return out


def nondominated_ranks(f: np.ndarray) -> np.ndarray:
    n = f.shape[0]
    le = (f[:, None, :] <= f[None, :, :]).all(axis=2)
    lt = (f[:, None, :] < f[None, :, :]).any(axis=2)
    dom = le & lt  # dom[p, q]: p dominates q
    count = dom.sum(axis=0)
    rank = np.full(n, -1, dtype=np.int64)
    current = np.flatnonzero(count == 0)
    level = 0
    while current.size:
        rank[current] = level
        count = count - dom[current].sum(axis=0)
        count[rank >= 0] = -1
        current = np.flatnonzero(count == 0)
        level += 1
    return rank


def crowding_distance(f: np.ndarray) -> np.ndarray:
    n, m = f.shape
    if n <= 2:
        return np.full(n, np.inf)
    dist = np.zeros(n)
    for j in range(m):
        order = np.argsort(f[:, j], kind="stable")
        col = f[order, j]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        span = col[-1] - col[0]
        if span <= 0.0:
            continue
        dist[order[1:-1]] += (col[2:] - col[:-2]) / span
    return dist
