"""Signal-shape effectiveness scores for simulation output traces.

Each score looks at one uniformly sampled output signal and measures how
strongly it shows a feedback-loop anti-pattern: short pulses
(discontinuity), oscillation (instability), unbounded drift (infinity) and
the overall output range (minmax).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from suitemin import kernels

METRIC_KINDS = ("discontinuity", "infinity", "instability", "minmax")


@dataclass(frozen=True)
class SignalTrace:
    """One output signal of one test case, sampled every ``dt`` seconds."""

    samples: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise ValueError("trace needs a non-empty 1-d sample vector")
        if not np.all(np.isfinite(samples)):
            raise ValueError("trace samples must be finite")
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "dt", float(self.dt))


def _as_trace(trace: SignalTrace | Sequence[float], dt: float = 1.0) -> SignalTrace:
    return trace if isinstance(trace, SignalTrace) else SignalTrace(np.asarray(trace), dt)


def discontinuity_score(trace: SignalTrace) -> float:
    """Largest two-sided change rate around any interior sample.

    For each lag ``d`` in 1..3 and interior index ``i``, the smaller of the
    left and right absolute changes, divided by the time step (not by
    ``d * dt``). Traces too short to have an interior give 0.
    """
    trace = _as_trace(trace)
    return kernels.discontinuity(trace.samples, trace.dt)


def instability_score(trace: SignalTrace) -> float:
    """Total variation of the trace."""
    trace = _as_trace(trace)
    return float(np.abs(np.diff(trace.samples)).sum())


def infinity_score(trace: SignalTrace) -> float:
    trace = _as_trace(trace)
    return float(np.abs(trace.samples).max())


def minmax_score(trace: SignalTrace) -> float:
    trace = _as_trace(trace)
    return float(abs(trace.samples.max() - trace.samples.min()))


SCORE_FUNCTIONS = {
    "discontinuity": discontinuity_score,
    "infinity": infinity_score,
    "instability": instability_score,
    "minmax": minmax_score,
}


@dataclass(frozen=True)
class RawScoreTable:
    """Raw scores of one metric kind, shaped (test case, output signal)."""

    values: np.ndarray
    metric_kind: str

    def __post_init__(self) -> None:
        if self.metric_kind not in METRIC_KINDS:
            raise ValueError(f"unknown metric kind {self.metric_kind!r}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] == 0 or values.shape[1] == 0:
            raise ValueError("raw score table must be a non-empty (tests, signals) matrix")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValueError("raw scores must be finite and non-negative")
        object.__setattr__(self, "values", values)


def raw_scores(outputs: Sequence[Sequence[SignalTrace]], kind: str) -> RawScoreTable:
    """Score every signal of every test. ``outputs[k]`` holds test k's signals."""
    fn = SCORE_FUNCTIONS[kind]
    widths = {len(sigs) for sigs in outputs}
    if len(widths) != 1:
        raise ValueError("every test case needs the same number of output signals")
    return RawScoreTable(np.array([[fn(s) for s in sigs] for sigs in outputs]), kind)


def normalize_per_test(raw: RawScoreTable) -> np.ndarray:
    """Per-test score: sum over signals / (global max * number of signals).

    The max is taken over every signal of every test in the suite so the
    scores share one scale and stay within [0, 1]. An all-zero table gives
    all-zero scores.
    """
    values = raw.values
    peak = values.max()
    if peak == 0:
        return np.zeros(values.shape[0])
    return values.sum(axis=1) / (peak * values.shape[1])


def per_test_scores(outputs: Sequence[Sequence[SignalTrace]]) -> dict[str, np.ndarray]:
    """Normalised per-test score vector for each of the four metric kinds."""
    return {kind: normalize_per_test(raw_scores(outputs, kind)) for kind in METRIC_KINDS}
