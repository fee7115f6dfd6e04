"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise the numpy
versions are used. Setting ``SUITEMIN_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

from suitemin import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("SUITEMIN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from suitemin import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError as exc:  # pragma: no cover - depends on build
        warnings.warn(f"suitemin: compiled kernels unavailable ({exc}); using numpy fallback")
        _impl = _pykernels


def discontinuity(sig: np.ndarray, step: float) -> float:
    return float(_impl.discontinuity(np.ascontiguousarray(sig, dtype=np.float64), float(step)))


def cdom_win_counts(cands: np.ndarray, opps: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Per candidate, how many opponents it is cdom-preferred over.

    exp(w (a - b) / g) is evaluated as exp(w a / g) * exp(-w b / g), so the
    inner loop only multiplies. Identical vectors still give bit-equal
    losses (the products commute), hence no preference.
    """
    g = cands.shape[1]
    w = np.asarray(w, dtype=np.float64)
    cands = np.asarray(cands, dtype=np.float64)
    opps = np.asarray(opps, dtype=np.float64)
    return _impl.cdom_win_counts(
        np.exp(w * cands / g),
        np.exp(-w * cands / g),
        np.exp(w * opps / g),
        np.exp(-w * opps / g),
    )


def nondominated_ranks(f: np.ndarray) -> np.ndarray:
    """Front index of each row of ``f`` under minimisation."""
    return np.asarray(_impl.nondominated_ranks(np.ascontiguousarray(f, dtype=np.float64)))


def crowding_distance(f: np.ndarray) -> np.ndarray:
    return np.asarray(_impl.crowding_distance(np.ascontiguousarray(f, dtype=np.float64)))
