"""Selection evaluation (TET-, MS+) and Scott-Knott ranking with Cliff's delta."""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

SMALL_EFFECT = 0.147


def check_kill_matrix(kills) -> np.ndarray:
    """Validate a (mutant, test) 0/1 matrix; odd mutant rows only warn."""
    k = np.asarray(kills)
    if k.ndim != 2:
        raise ValueError("kill matrix must be 2-d (mutants x tests)")
    if k.size and not np.isin(k, (0, 1)).all():
        raise ValueError("kill matrix entries must be 0 or 1")
    k = k.astype(bool)
    per_mutant = k.sum(axis=1)
    if np.any(per_mutant == 0):
        warnings.warn(f"{int((per_mutant == 0).sum())} mutant(s) are killed by no test", stacklevel=2)
    if k.shape[1] and np.any(per_mutant == k.shape[1]):
        warnings.warn(f"{int((per_mutant == k.shape[1]).sum())} mutant(s) are killed by every test", stacklevel=2)
    return k


def _selection(selection, n: int) -> np.ndarray:
    x = np.asarray(selection)
    if x.shape != (n,):
        raise ValueError(f"selection must have length {n}, got shape {x.shape}")
    return x.astype(bool)


def mutation_score(kills, selection) -> float:
    """Mutants killed by the selection over mutants killed by the full suite.

    Returns 0.0 when the full suite kills nothing.
    """
    k = np.asarray(kills, dtype=bool)
    sel = _selection(selection, k.shape[1])
    killable = k.any(axis=1)
    total = int(killable.sum())
    if total == 0:
        return 0.0
    return int((k[:, sel].any(axis=1) & killable).sum()) / total


def normalized_tet(times, selection) -> float:
    times = np.asarray(times, dtype=np.float64)
    sel = _selection(selection, times.shape[0])
    return float(times[sel].sum() / times.sum())


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> float:
    """P(x > y) - P(x < y) for x drawn from ``a`` and y from ``b``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.size == 0 or b.size == 0:
        raise ValueError("Cliff's delta needs two non-empty samples")
    return float(np.sign(a[:, None] - b[None, :]).sum() / (a.size * b.size))


def expected_delta(left: Sequence[float], right: Sequence[float]) -> float:
    """Size-weighted squared shift of each part's mean from the pooled mean."""
    left = np.asarray(left, dtype=np.float64)
    right = np.asarray(right, dtype=np.float64)
    pooled = np.concatenate([left, right])
    mu = pooled.mean()
    n = pooled.size
    return left.size / n * abs(left.mean() - mu) ** 2 + right.size / n * abs(right.mean() - mu) ** 2


def best_split(lists: Sequence[Sequence[float]]) -> int:
    """Cut point (1..len-1) maximising the expected delta; first wins ties."""
    best, best_cut = -1.0, 1
    for cut in range(1, len(lists)):
        left = np.concatenate([np.asarray(x, dtype=np.float64) for x in lists[:cut]])
        right = np.concatenate([np.asarray(x, dtype=np.float64) for x in lists[cut:]])
        score = expected_delta(left, right)
        if score > best:
            best, best_cut = score, cut
    return best_cut


@dataclass(frozen=True)
class RankedGroups:
    order: list[str]  # best first
    ranks: dict[str, int]
    medians: dict[str, float]

    def winners(self) -> list[str]:
        return [name for name in self.order if self.ranks[name] == 1]


def scott_knott(
    groups: Mapping[str, Sequence[float]],
    small_effect: float = SMALL_EFFECT,
    higher_is_better: bool = True,
) -> RankedGroups:
    """Rank groups of observations; rank 1 is best.

    Groups are sorted by median (best first). A list is split where the
    expected delta is largest, and the split is kept only when Cliff's
    delta between the pooled halves is at least ``small_effect``; kept
    halves are split again recursively.
    """
    if not groups:
        raise ValueError("scott_knott needs at least one group")
    data = {}
    for name, obs in groups.items():
        arr = np.asarray(obs, dtype=np.float64)
        if arr.size == 0:
            raise ValueError(f"group {name!r} is empty")
        data[name] = arr
    medians = {name: float(np.median(v)) for name, v in data.items()}
    sign = -1.0 if higher_is_better else 1.0
    order = sorted(data, key=lambda name: sign * medians[name])
    ranks: dict[str, int] = {}

    def recurse(names: list[str], rank: int) -> int:
        if len(names) > 1:
            lists = [data[n] for n in names]
            cut = best_split(lists)
            left, right = np.concatenate(lists[:cut]), np.concatenate(lists[cut:])
            if abs(cliffs_delta(left, right)) >= small_effect:
                return recurse(names[cut:], recurse(names[:cut], rank))
        for n in names:
            ranks[n] = rank
        return rank + 1

    recurse(order, 1)
    return RankedGroups(order, ranks, medians)


@dataclass(frozen=True)
class FrontSummary:
    tet: list[float]
    ms: list[float]
    median_tet: float
    median_ms: float


def evaluate_front(front, kills, times) -> FrontSummary:
    """Fill ``tet``/``ms`` on each selection and summarise by medians."""
    if not front:
        raise ValueError("cannot evaluate an empty front")
    tets, mss = [], []
    for sel in front:
        sel.tet = normalized_tet(times, sel.include)
        sel.ms = mutation_score(kills, sel.include)
        tets.append(sel.tet)
        mss.append(sel.ms)
    return FrontSummary(tets, mss, float(np.median(tets)), float(np.median(mss)))


# measure name -> higher_is_better
MEASURES = {"tet": False, "ms": True}


def rank_table(results: Mapping[str, Mapping[str, Sequence[float]]]) -> list[dict]:
    """Rows (measure, algorithm, rank, median) from per-measure observation groups."""
    rows = []
    for measure, groups in results.items():
        ranked = scott_knott(groups, higher_is_better=MEASURES.get(measure, True))
        for name in ranked.order:
            rows.append(
                {"measure": measure, "algorithm": name, "rank": ranked.ranks[name], "median": ranked.medians[name]}
            )
    return rows


def write_rank_csv(rows: Iterable[dict], stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=["measure", "algorithm", "rank", "median"], lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "median": f"{row['median']:.6g}"})
