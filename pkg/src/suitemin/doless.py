"""Goal sampling + least-squares inversion selector (DoLesS).

The pipeline samples many random goal vectors, keeps the ones continuous
domination rates highest, inverts each kept goal into a relaxed test
selection by box-constrained regularised least squares, rounds at 0.5 and
returns the Pareto front of the distinct, non-empty selections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from suitemin.boxlsq import BoxLsqResult, solve_box_tikhonov, solve_box_tikhonov_many
from suitemin.domination import DEFAULT_OPPONENTS, binary_dominates, select_best
from suitemin.objectives import EffectivenessMatrix, Selection, objectives_many

DEFAULT_POPULATION = 10_000
THRESHOLD = 0.5


class EmptySelectionError(RuntimeError):
    """Every inverted goal rounded to the empty test suite."""


@dataclass(frozen=True)
class DolessConfig:
    pop_size: int = DEFAULT_POPULATION
    best_count: int | None = None  # floor(sqrt(pop_size)) when None
    n_opponents: int = DEFAULT_OPPONENTS
    # None scales the weight to 1 / n_tests**2; see default_regularization
    regularization: float | None = None
    seed: int = 0


def default_regularization(n_tests: int) -> float:
    """Ridge weight matched to suite-share units.

    Shares are ~1/n each, so with a unit weight the ridge term swamps the
    fit and every relaxed entry stays far below 0.5. Measuring shares
    relative to their mean (multiplying A and b by n) and applying unit
    weight there is the same as weight 1/n^2 in share units.
    """
    return 1.0 / n_tests**2


def sample_goal_population(size: int, seed=0, n_goals: int = 5) -> np.ndarray:
    """``size`` goal vectors drawn uniformly from the unit cube."""
    if size < 1:
        raise ValueError("goal population size must be at least 1")
    return np.random.default_rng(seed).random((size, n_goals))


def solve_selection(m: EffectivenessMatrix, goal, regularization: float | None = None) -> BoxLsqResult:
    """Relaxed selection x in [0,1]^n minimising ||Ax - goal||^2 + reg ||x||^2.

    ``regularization`` defaults to :func:`default_regularization`.
    """
    goal = np.asarray(goal, dtype=np.float64)
    if goal.shape != (m.n_goals,):
        raise ValueError(f"goal must have {m.n_goals} entries, got shape {goal.shape}")
    if m.n_tests <= m.n_goals:
        raise ValueError(f"need more tests than goals, got {m.n_tests} tests")
    if regularization is None:
        regularization = default_regularization(m.n_tests)
    return solve_box_tikhonov(m.a, goal, regularization)


def threshold(x) -> np.ndarray:
    """Round a relaxed selection: keep test i iff x_i > 0.5."""
    return np.asarray(x, dtype=np.float64) > THRESHOLD


def pareto_front(selections: list[Selection], w) -> list[Selection]:
    """Selections not binary-dominated by any other.

    Entries with identical objective vectors collapse to the first one.
    """
    if not selections:
        raise ValueError("pareto_front needs at least one selection")
    seen: set[bytes] = set()
    unique = []
    for s in selections:
        key = np.asarray(s.objectives, dtype=np.float64).tobytes()
        if key not in seen:
            seen.add(key)
            unique.append(s)
    w = np.asarray(w, dtype=np.float64)
    objs = np.array([s.objectives for s in unique]) * w  # larger is better everywhere
    ge = (objs[:, None, :] >= objs[None, :, :]).all(axis=2)
    gt = (objs[:, None, :] > objs[None, :, :]).any(axis=2)
    dominated = (ge & gt).any(axis=0)
    return [s for s, d in zip(unique, dominated) if not d]


def pareto_front_bruteforce(selections: list[Selection], w) -> list[Selection]:
    """Quadratic reference filter using :func:`binary_dominates` pairwise."""
    out = []
    for i, s in enumerate(selections):
        if any(binary_dominates(o.objectives, s.objectives, w) for j, o in enumerate(selections) if j != i):
            continue
        if any(np.array_equal(s.objectives, o.objectives) for o in out):
            continue
        out.append(s)
    return out


@dataclass
class DolessResult:
    front: list[Selection]
    goals: np.ndarray  # the kept "best" goal vectors, in rank order
    relaxed: np.ndarray  # relaxed x per kept goal
    candidates: list[Selection] = field(default_factory=list)


def doless_run(m: EffectivenessMatrix, config: DolessConfig | None = None) -> DolessResult:
    config = config or DolessConfig()
    if m.n_tests <= m.n_goals:
        raise ValueError(f"need more tests than goals, got {m.n_tests} tests")
    rng = np.random.default_rng(config.seed)
    goals = sample_goal_population(config.pop_size, rng, m.n_goals)
    # a degenerate (all-zero) row cannot be moved; hold its goal at 0
    goals[:, m.degenerate] = 0.0
    count = config.best_count if config.best_count is not None else math.isqrt(config.pop_size)
    best, _rest = select_best(goals, m.weights, count=count, seed=rng, n_opponents=config.n_opponents)
    reg = config.regularization
    if reg is None:
        reg = default_regularization(m.n_tests)
    solved = solve_box_tikhonov_many(m.a, best, reg)
    relaxed = np.array([r.x for r in solved])
    chosen = threshold(relaxed)

    candidates: list[Selection] = []
    seen: set[bytes] = set()
    objs = objectives_many(m, chosen)
    for include, obj in zip(chosen, objs):
        key = np.packbits(include).tobytes()
        if not include.any() or key in seen:
            continue
        seen.add(key)
        candidates.append(Selection(include, obj))
    if not candidates:
        raise EmptySelectionError(
            f"all {len(chosen)} inverted goals rounded to the empty suite "
            f"(max relaxed value {relaxed.max():.3g}, regularization {reg:.3g})"
        )
    return DolessResult(pareto_front(candidates, m.weights), best, relaxed, candidates)
