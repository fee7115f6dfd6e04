"""Compare the compiled kernels with the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Both backends are imported side by side, fed identical inputs, checked for
identical results, and timed with ``timeit``. Prints one line per kernel.
"""

from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from suitemin import _pykernels

try:
    from suitemin import _ckernels
except ImportError:  # pragma: no cover - depends on build
    _ckernels = None


def _cases(rng: np.random.Generator) -> dict[str, tuple]:
    g = 5
    w = np.array([-1.0, 1.0, 1.0, 1.0, 1.0])
    cands = rng.random((10000, g))
    opps = rng.random((100, g))
    cdom_args = (np.exp(w * cands / g), np.exp(-w * cands / g), np.exp(w * opps / g), np.exp(-w * opps / g))
    points = np.ascontiguousarray(rng.random((200, 2)))
    front = np.ascontiguousarray(rng.random((100, 2)))
    signal = np.cumsum(rng.normal(size=2001))
    return {
        "cdom_win_counts (10000 x 100 x 5)": ("cdom_win_counts", cdom_args),
        "nondominated_ranks (200 x 2)": ("nondominated_ranks", (points,)),
        "crowding_distance (100 x 2)": ("crowding_distance", (front,)),
        "discontinuity (2001 samples)": ("discontinuity", (signal, 0.01)),
    }


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'cython_s':>10s} {'numpy_s':>10s} {'speedup':>8s}")
    for label, (name, call_args) in _cases(rng).items():
        fast, slow = getattr(_ckernels, name), getattr(_pykernels, name)
        np.testing.assert_allclose(np.asarray(fast(*call_args)), np.asarray(slow(*call_args)), rtol=1e-12)
        times = []
        for fn in (fast, slow):
            timer = timeit.Timer(lambda fn=fn: fn(*call_args))
            number, _ = timer.autorange()
            times.append(min(timer.repeat(args.repeats, number)) / number)
        print(f"{label:38s} {times[0]:10.2e} {times[1]:10.2e} {times[1] / times[0]:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
