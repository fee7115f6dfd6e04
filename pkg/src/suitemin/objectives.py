"""The 5 x n effectiveness matrix and suite-level objectives.

Row ``j`` holds each test's share of the suite total for goal ``j``, so the
objective vector of a 0/1 selection ``x`` is just ``A @ x`` and the full
suite scores exactly 1 on every non-degenerate row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

GOALS = ("time", "discontinuity", "infinity", "instability", "minmax")
MINIMIZE, MAXIMIZE = -1, 1
# -1 minimise, +1 maximise; only execution time is minimised
GOAL_WEIGHTS = np.array([MINIMIZE, MAXIMIZE, MAXIMIZE, MAXIMIZE, MAXIMIZE], dtype=np.float64)


@dataclass(frozen=True)
class EffectivenessMatrix:
    a: np.ndarray
    weights: np.ndarray = field(default_factory=lambda: GOAL_WEIGHTS.copy())
    labels: tuple[str, ...] = GOALS
    degenerate: np.ndarray | None = None

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != len(self.labels):
            raise ValueError(f"matrix must have {len(self.labels)} rows, got shape {a.shape}")
        if np.any(a < 0):
            raise ValueError("effectiveness shares must be non-negative")
        a.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=np.float64))
        deg = self.degenerate
        if deg is None:
            deg = a.sum(axis=1) == 0
        object.__setattr__(self, "degenerate", np.asarray(deg, dtype=bool))

    @property
    def n_goals(self) -> int:
        return self.a.shape[0]

    @property
    def n_tests(self) -> int:
        return self.a.shape[1]


def build_matrix(
    scores: Mapping[str, Sequence[float]] | Sequence[Sequence[float]],
    execution_times: Sequence[float],
) -> EffectivenessMatrix:
    """Stack the time row and the four metric rows as suite shares.

    ``scores`` is either a mapping keyed by metric name or a sequence in
    the order discontinuity, infinity, instability, minmax. A metric whose
    scores are all zero becomes a zero row and is flagged degenerate.
    """
    if isinstance(scores, Mapping):
        rows = [np.asarray(scores[name], dtype=np.float64) for name in GOALS[1:]]
    else:
        rows = [np.asarray(s, dtype=np.float64) for s in scores]
    if len(rows) != len(GOALS) - 1:
        raise ValueError(f"expected {len(GOALS) - 1} score vectors, got {len(rows)}")
    times = np.asarray(execution_times, dtype=np.float64)
    n = times.shape[0]
    if n < 1:
        raise ValueError("need at least one test case")
    if any(r.shape != (n,) for r in rows):
        raise ValueError("score vectors and execution times must have the same length")
    if np.any(~np.isfinite(times)) or np.any(times <= 0):
        raise ValueError("execution times must be positive")

    a = np.empty((len(GOALS), n))
    degenerate = np.zeros(len(GOALS), dtype=bool)
    a[0] = times / times.sum()
    for j, row in enumerate(rows, start=1):
        if np.any(row < 0):
            raise ValueError(f"{GOALS[j]} scores must be non-negative")
        total = row.sum()
        if total == 0:
            a[j] = 0.0
            degenerate[j] = True
        else:
            a[j] = row / total
    return EffectivenessMatrix(a, degenerate=degenerate)


def _check_selection(m: EffectivenessMatrix, selection) -> np.ndarray:
    x = np.asarray(selection)
    if x.shape != (m.n_tests,):
        raise ValueError(f"selection must have length {m.n_tests}, got shape {x.shape}")
    return x.astype(np.float64)


def suite_objectives(m: EffectivenessMatrix, selection) -> np.ndarray:
    """Objective vector (time, disc, inf, inst, minmax) of one selection."""
    return m.a @ _check_selection(m, selection)


def objectives_many(m: EffectivenessMatrix, selections: np.ndarray) -> np.ndarray:
    """Row-wise objectives for a (k, n) stack of selections.

    Each row goes through the same matrix-vector product as
    :func:`suite_objectives`, so the two agree bit for bit.
    """
    x = np.asarray(selections, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != m.n_tests:
        raise ValueError(f"selections must be (k, {m.n_tests})")
    out = np.empty((x.shape[0], m.n_goals))
    for i, row in enumerate(x):
        out[i] = m.a @ row
    return out


@dataclass
class Selection:
    """A 0/1 test selection with its objective vector and evaluation scores."""

    include: np.ndarray
    objectives: np.ndarray
    tet: float | None = None
    ms: float | None = None

    @property
    def size(self) -> int:
        return int(self.include.sum())

    def bits(self) -> str:
        return "".join("1" if v else "0" for v in self.include)


def make_selection(m: EffectivenessMatrix, include) -> Selection:
    include = np.asarray(include, dtype=bool)
    return Selection(include, suite_objectives(m, include))
