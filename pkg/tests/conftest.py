from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from suitemin.data_io import SynthConfig, effectiveness_matrix, synth_dataset  # noqa: E402
from suitemin.objectives import build_matrix  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def default_data():
    """A default-sized synthetic dataset (150 tests, 7 signals, 6 mutants)."""
    return synth_dataset(SynthConfig(seed=1))


@pytest.fixture(scope="session")
def default_matrix(default_data):
    return effectiveness_matrix(default_data)


@pytest.fixture(scope="session")
def small():
    return synth_dataset(SynthConfig(n_tests=12, seed=3))


@pytest.fixture(scope="session")
def small_matrix(small):
    return effectiveness_matrix(small)


def random_matrix(rng, n: int):
    scores = {k: rng.random(n) for k in ("discontinuity", "infinity", "instability", "minmax")}
    return build_matrix(scores, rng.uniform(0.5, 10.0, n))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
