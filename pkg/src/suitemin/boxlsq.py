"""Box-constrained Tikhonov least squares for short, wide systems.

Solves ``min ||A x - b||^2 + reg * ||x||^2`` subject to ``0 <= x <= 1``.

With the identity regulariser the minimiser has the closed form
``x = clip(A^T y / reg, 0, 1)`` where ``y = b - A x`` is the residual, so
the problem collapses to finding the residual ``y`` (one entry per row of
``A``). ``y`` minimises the convex piecewise-quadratic

    phi(y) = 1/2 ||y||^2 - b.y + reg * sum_i H(a_i.y / reg)

with ``H' = clip(., 0, 1)``. We run a semismooth Newton method on ``phi``
with an exact line search over its breakpoints; with few rows this costs
``O(m^2 n)`` per iteration and terminates once the set of free variables
settles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SolverError(RuntimeError):
    """The solver did not reach the requested accuracy."""


@dataclass(frozen=True)
class BoxLsqResult:
    x: np.ndarray
    objective: float
    pg_norm: float
    iterations: int


def objective(a: np.ndarray, b: np.ndarray, x: np.ndarray, reg: float = 1.0) -> float:
    r = a @ x - b
    return float(r @ r + reg * (x @ x))


def projected_gradient(a: np.ndarray, b: np.ndarray, x: np.ndarray, reg: float = 1.0) -> np.ndarray:
    """Projected gradient of the objective on the unit box."""
    g = 2.0 * (a.T @ (a @ x - b) + reg * x)
    pg = g.copy()
    lower = x <= 0.0
    upper = x >= 1.0
    pg[lower] = np.minimum(g[lower], 0.0)
    pg[upper] = np.maximum(g[upper], 0.0)
    return pg


def _line_search(b, y, d, u, v, reg) -> np.ndarray:
    """Exact minimiser of phi(y + t d) over t >= 0, row by row.

    phi' along each ray is piecewise linear and non-decreasing with kinks
    where some a_i.(y + t d) crosses 0 or reg. Bisect over the sorted kinks,
    then solve the bracketing linear piece.
    """
    k = y.shape[0]
    rows = np.arange(k)
    y_d = np.einsum("ij,ij->i", y, d)
    d_d = np.einsum("ij,ij->i", d, d)
    b_d = np.einsum("ij,ij->i", b, d)

    def dphi(t: np.ndarray) -> np.ndarray:
        x = np.clip((u + t[:, None] * v) / reg, 0.0, 1.0)
        return y_d + t * d_d - b_d + np.einsum("ij,ij->i", x, v)

    with np.errstate(divide="ignore", invalid="ignore"):
        kinks = np.concatenate([-u / v, (reg - u) / v], axis=1)
    kinks[~(kinks > 0) | ~np.isfinite(kinks)] = np.inf
    kinks.sort(axis=1)
    count = np.isfinite(kinks).sum(axis=1)
    f0 = dphi(np.zeros(k))
    # invariant: dphi(kinks[lo]) < 0 <= dphi(kinks[hi]); lo = -1 stands for t = 0
    lo = np.full(k, -1)
    hi = count.copy()
    while True:
        open_ = hi - lo > 1
        if not open_.any():
            break
        mid = np.where(open_, (lo + hi) // 2, 0)
        t_mid = np.where(open_, kinks[rows, np.minimum(mid, kinks.shape[1] - 1)], 0.0)
        ok = dphi(t_mid) >= 0
        hi = np.where(open_ & ok, mid, hi)
        lo = np.where(open_ & ~ok, mid, lo)
    safe = np.minimum(np.maximum(lo, 0), kinks.shape[1] - 1)
    t_lo = np.where(lo < 0, 0.0, kinks[rows, safe])
    f_lo = np.where(lo < 0, f0, dphi(np.where(lo < 0, 0.0, t_lo)))
    past = hi >= count
    # past the last kink dphi is affine with positive slope
    t_hi = np.where(past, t_lo + 1.0, kinks[rows, np.minimum(hi, kinks.shape[1] - 1)])
    f_hi = dphi(t_hi)
    slope = f_hi - f_lo
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(slope > 0, t_lo - f_lo * (t_hi - t_lo) / slope, t_hi)
    return np.where(f0 >= 0, 0.0, t)


def solve_box_tikhonov_many(
    a,
    goals,
    reg: float = 1.0,
    *,
    max_iter: int = 200,
    tol: float = 1e-14,
    accept: float = 1e-9,
) -> list[BoxLsqResult]:
    """Solve one box least-squares problem per row of ``goals`` (shared ``A``).

    Iteration stops for a row when its dual stationarity residual drops
    below ``tol`` (relative to the goal) or stops improving while the free
    set is unchanged, which is the round-off floor ``eps * |A| |y| / reg``.
    Raises :class:`SolverError` if a residual is still above ``accept`` at
    that point or after ``max_iter`` Newton steps.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.atleast_2d(np.asarray(goals, dtype=np.float64))
    if a.ndim != 2 or b.ndim != 2 or b.shape[1] != a.shape[0]:
        raise ValueError(f"shape mismatch: A {a.shape}, goals {np.shape(goals)}")
    if not reg > 0:
        raise ValueError("regularisation weight must be positive")
    k, m = b.shape
    scale = 1.0 + np.abs(b).max(axis=1, initial=0.0)
    y = b.copy()
    iters = np.zeros(k, dtype=np.int64)
    active = np.ones(k, dtype=bool)
    prev_free = np.zeros((k, a.shape[1]), dtype=bool)
    prev_res = np.full(k, np.inf)
    res = np.full(k, np.inf)
    eye = np.eye(m)
    for it in range(max_iter + 1):
        idx = np.flatnonzero(active)
        ya, ba = y[idx], b[idx]
        z = ya @ a
        grad = ya + np.clip(z / reg, 0.0, 1.0) @ a.T - ba
        r = np.abs(grad).max(axis=1)
        res[idx] = r
        free = (z > 0) & (z < reg)
        floor = (r <= accept * scale[idx]) & (r >= 0.5 * prev_res[idx])
        floor &= (free == prev_free[idx]).all(axis=1)
        done = (r <= tol * scale[idx]) | floor
        active[idx[done]] = False
        keep = ~done
        if not keep.any():
            break
        if it == max_iter:
            raise SolverError(
                f"box least squares did not converge in {max_iter} iterations "
                f"(residual {r[keep].max():.3e})"
            )
        idx, ya, ba, z, grad, free = idx[keep], ya[keep], ba[keep], z[keep], grad[keep], free[keep]
        hess = eye + np.einsum("in,kn,jn->kij", a, free.astype(np.float64), a) / reg
        d = -np.linalg.solve(hess, grad[:, :, None])[:, :, 0]
        t = _line_search(ba, ya, d, z, d @ a, reg)
        y[idx] = ya + t[:, None] * d
        iters[idx] += 1
        prev_free[idx] = free
        prev_res[idx] = r[keep]
    bad = res > accept * scale
    if bad.any():
        raise SolverError(f"box least squares stalled with residual {res[bad].max():.3e}")
    x = np.clip((y @ a) / reg, 0.0, 1.0)
    out = []
    for i in range(k):
        pg = projected_gradient(a, b[i], x[i], reg)
        out.append(BoxLsqResult(x[i], objective(a, b[i], x[i], reg), float(np.linalg.norm(pg)), int(iters[i])))
    return out


def solve_box_tikhonov(a, b, reg: float = 1.0, **kwargs) -> BoxLsqResult:
    """Minimise ``||A x - b||^2 + reg ||x||^2`` over the unit box ``[0, 1]^n``."""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 1:
        raise ValueError(f"goal must be a vector, got shape {b.shape}")
    return solve_box_tikhonov_many(a, b[None, :], reg, **kwargs)[0]
