"""NSGA-II over binary test-inclusion chromosomes, and the pairwise baseline.

The pairwise baseline runs NSGA-II once for every 2- or 3-goal subset that
contains execution time and reports the run whose front scores best.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from suitemin import kernels
from suitemin.objectives import EffectivenessMatrix, Selection, objectives_many
from suitemin.stats import mutation_score

TIME_GOAL = 0


def goal_subsets(n_goals: int = 5, time_index: int = TIME_GOAL) -> list[tuple[int, ...]]:
    """All 2- and 3-goal subsets containing ``time_index``: pairs first."""
    others = [g for g in range(n_goals) if g != time_index]
    pairs = [(time_index, o) for o in others]
    triples = [(time_index, *c) for c in combinations(others, 2)]
    return pairs + triples


def _to_min(values: np.ndarray, w) -> np.ndarray:
    return np.asarray(values, dtype=np.float64) * -np.asarray(w, dtype=np.float64)


def nondominated_sort(values, w) -> list[np.ndarray]:
    """Partition rows of ``values`` into fronts F1, F2, ... (index arrays).

    ``w`` gives +1 for maximised and -1 for minimised columns.
    """
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    if values.shape[0] == 0:
        raise ValueError("cannot sort an empty population")
    ranks = kernels.nondominated_ranks(_to_min(values, w))
    return [np.flatnonzero(ranks == r) for r in range(int(ranks.max()) + 1)]


def crowding_distance(values) -> np.ndarray:
    """Standard NSGA-II crowding distance of each row of one front."""
    values = np.atleast_2d(np.asarray(values, dtype=np.float64))
    if values.shape[0] == 0:
        raise ValueError("cannot compute crowding of an empty front")
    return kernels.crowding_distance(values)


@dataclass(frozen=True)
class NSGA2Config:
    pop_size: int = 100
    generations: int = 250
    crossover_prob: float = 0.8
    mutation_prob: float | None = None  # 1 / n_tests when None
    seed: int | np.random.SeedSequence = 0


@dataclass
class NSGA2Result:
    subset: tuple[int, ...]
    front: list[Selection]
    # best value reached on each active goal after every generation (row 0: initial)
    history: np.ndarray = field(repr=False)


def _rank_and_crowd(f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = kernels.nondominated_ranks(f)
    crowd = np.empty(f.shape[0])
    for r in range(int(ranks.max()) + 1):
        idx = np.flatnonzero(ranks == r)
        crowd[idx] = kernels.crowding_distance(f[idx])
    return ranks, crowd


def _environmental_selection(f: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    ranks = kernels.nondominated_ranks(f)
    chosen, crowd_out, rank_out = [], [], []
    filled = 0
    for r in range(int(ranks.max()) + 1):
        idx = np.flatnonzero(ranks == r)
        cd = kernels.crowding_distance(f[idx])
        if filled + idx.size > size:
            keep = np.argsort(-cd, kind="stable")[: size - filled]
            idx, cd = idx[keep], cd[keep]
        chosen.append(idx)
        crowd_out.append(cd)
        rank_out.append(np.full(idx.size, r))
        filled += idx.size
        if filled == size:
            break
    return np.concatenate(chosen), np.concatenate(rank_out), np.concatenate(crowd_out)


def _tournament(rank, crowd, rng, count) -> np.ndarray:
    a = rng.integers(0, rank.size, count)
    b = rng.integers(0, rank.size, count)
    b_wins = (rank[b] < rank[a]) | ((rank[b] == rank[a]) & (crowd[b] > crowd[a]))
    return np.where(b_wins, b, a)


def single_point_crossover(p1: np.ndarray, p2: np.ndarray, prob: float, rng) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise one-point crossover of two (k, n) parent stacks."""
    k, n = p1.shape
    cross = rng.random(k) < prob
    cut = rng.integers(1, n, k) if n > 1 else np.ones(k, dtype=np.int64)
    head = (np.arange(n)[None, :] < cut[:, None]) | ~cross[:, None]
    return np.where(head, p1, p2), np.where(head, p2, p1)


def bitflip_mutation(genes: np.ndarray, prob: float, rng) -> np.ndarray:
    return genes ^ (rng.random(genes.shape) < prob)


def nsga2(m: EffectivenessMatrix, subset: Sequence[int], config: NSGA2Config | None = None) -> NSGA2Result:
    """Run NSGA-II on the goals in ``subset`` and return the final first front.

    The empty selection never appears in the returned front. Every member
    carries all five objective values, not only the active ones.
    """
    config = config or NSGA2Config()
    subset = tuple(int(g) for g in subset)
    n = m.n_tests
    if n < 2:
        raise ValueError("NSGA-II needs at least two tests")
    if not subset or any(g < 0 or g >= m.n_goals for g in subset):
        raise ValueError(f"invalid goal subset {subset}")
    pop_size = config.pop_size
    pm = config.mutation_prob if config.mutation_prob is not None else 1.0 / n
    rng = np.random.default_rng(config.seed)
    a_sub = m.a[list(subset)]
    sign = -m.weights[list(subset)]  # minimisation form

    def evaluate(genes: np.ndarray) -> np.ndarray:
        return (genes.astype(np.float64) @ a_sub.T) * sign

    pop = rng.random((pop_size, n)) < 0.5
    f = evaluate(pop)
    rank, crowd = _rank_and_crowd(f)
    history = [f.min(axis=0) * sign]
    half = (pop_size + 1) // 2
    for _ in range(config.generations):
        parents = _tournament(rank, crowd, rng, 2 * half)
        c1, c2 = single_point_crossover(pop[parents[:half]], pop[parents[half:]], config.crossover_prob, rng)
        children = bitflip_mutation(np.vstack([c1, c2])[:pop_size], pm, rng)
        merged = np.vstack([pop, children])
        merged_f = np.vstack([f, evaluate(children)])
        keep, rank, crowd = _environmental_selection(merged_f, pop_size)
        pop, f = merged[keep], merged_f[keep]
        history.append(f.min(axis=0) * sign)

    first = pop[rank == 0]
    front: list[Selection] = []
    seen: set[bytes] = set()
    for genes, obj in zip(first, objectives_many(m, first)):
        key = np.packbits(genes).tobytes()
        if genes.any() and key not in seen:
            seen.add(key)
            front.append(Selection(genes.copy(), obj))
    return NSGA2Result(subset, front, np.array(history))


def front_score(front: Sequence[Selection], kills=None) -> float:
    """Median over the front of MS - TET, or of mean(maximised goals) - time without kills."""
    if not front:
        return -np.inf
    if kills is not None:
        vals = [mutation_score(kills, s.include) - s.objectives[TIME_GOAL] for s in front]
    else:
        vals = [np.delete(s.objectives, TIME_GOAL).mean() - s.objectives[TIME_GOAL] for s in front]
    return float(np.median(vals))


@dataclass
class PairwiseResult:
    best_subset: tuple[int, ...]
    front: list[Selection]
    runs: list[NSGA2Result]
    scores: list[float]


def pairwise_nsga2(m: EffectivenessMatrix, config: NSGA2Config | None = None, kills=None) -> PairwiseResult:
    """NSGA-II on every time-containing 2/3-goal subset; keep the best-scoring run.

    Each subset gets its own stream spawned from ``config.seed``. Ties in
    score go to the earlier subset in enumeration order.
    """
    config = config or NSGA2Config()
    subsets = goal_subsets(m.n_goals)
    seq = config.seed if isinstance(config.seed, np.random.SeedSequence) else np.random.SeedSequence(config.seed)
    runs, scores = [], []
    for subset, child in zip(subsets, seq.spawn(len(subsets))):
        run = nsga2(m, subset, NSGA2Config(config.pop_size, config.generations, config.crossover_prob, config.mutation_prob, child))
        runs.append(run)
        scores.append(front_score(run.front, kills))
    best = 0
    for i, s in enumerate(scores):
        if s > scores[best]:
            best = i
    return PairwiseResult(runs[best].subset, runs[best].front, runs, scores)
