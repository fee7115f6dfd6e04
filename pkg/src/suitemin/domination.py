"""Binary and continuous domination, and the best/rest split of goal vectors."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from suitemin import kernels

DEFAULT_OPPONENTS = 100


def _pair(a, b, w) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if not (a.shape == b.shape == w.shape) or a.ndim != 1:
        raise ValueError(f"length mismatch: {a.shape}, {b.shape}, weights {w.shape}")
    return a, b, w


def check_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size == 0 or np.any(np.abs(w) != 1):
        raise ValueError("domination weights must be a non-empty vector of -1/+1")
    return w


def binary_dominates(a, b, w) -> bool:
    """True when ``a`` is no worse than ``b`` on every goal and better on one.

    ``w[i]`` is +1 for goals to maximise and -1 for goals to minimise.
    """
    a, b, w = _pair(a, b, w)
    wa, wb = w * a, w * b
    return bool(np.all(wa >= wb) and np.any(wa > wb))


def cdom_losses(a, b, w) -> tuple[float, float]:
    """Loss of jumping from b to a (s1) and from a to b (s2)."""
    a, b, w = _pair(a, b, w)
    n = a.size
    s1 = -sum(math.exp(w[i] * (a[i] - b[i]) / n) for i in range(n))
    s2 = -sum(math.exp(w[i] * (b[i] - a[i]) / n) for i in range(n))
    return s1, s2


def cdom_prefers(a, b, w) -> bool:
    """Continuous domination: prefer ``a`` when the jump to it loses less."""
    s1, s2 = cdom_losses(a, b, w)
    return s1 < s2


def domination_score(candidate, opponents, w) -> float:
    """Fraction of ``opponents`` that ``candidate`` is cdom-preferred over."""
    opponents = np.atleast_2d(np.asarray(opponents, dtype=np.float64))
    if opponents.shape[0] == 0 or opponents.size == 0:
        raise ValueError("need at least one opponent")
    return sum(cdom_prefers(candidate, o, w) for o in opponents) / opponents.shape[0]


def domination_scores(population: np.ndarray, opponents: np.ndarray, w) -> np.ndarray:
    """Vectorised :func:`domination_score` for every row of ``population``."""
    population = np.asarray(population, dtype=np.float64)
    opponents = np.asarray(opponents, dtype=np.float64)
    if opponents.ndim != 2 or opponents.shape[0] == 0:
        raise ValueError("need at least one opponent")
    w = check_weights(w)
    if population.shape[1] != w.size or opponents.shape[1] != w.size:
        raise ValueError("goal vectors and weights differ in length")
    return kernels.cdom_win_counts(population, opponents, w) / opponents.shape[0]


def select_best(
    population: Sequence[Sequence[float]] | np.ndarray,
    w,
    count: int | None = None,
    seed: int | np.random.Generator | None = 0,
    n_opponents: int = DEFAULT_OPPONENTS,
) -> tuple[np.ndarray, np.ndarray]:
    """Split ``population`` into the ``count`` best goal vectors and the rest.

    Every candidate is scored against one shared sample of ``n_opponents``
    population members (drawn without replacement) and the population is
    sorted by descending score; equal scores keep their original order.
    ``count`` defaults to floor(sqrt(len(population))).
    """
    pop = np.asarray(population, dtype=np.float64)
    if pop.ndim != 2 or pop.shape[0] == 0:
        raise ValueError("population must be a non-empty (size, goals) array")
    size = pop.shape[0]
    if count is None:
        count = math.isqrt(size)
    if not 1 <= count <= size:
        raise ValueError(f"count must be in [1, {size}], got {count}")
    rng = np.random.default_rng(seed)
    m = min(n_opponents, size)
    opponents = pop[rng.choice(size, size=m, replace=False)]
    scores = domination_scores(pop, opponents, w)
    order = np.argsort(-scores, kind="stable")
    return pop[order[:count]], pop[order[count:]]
