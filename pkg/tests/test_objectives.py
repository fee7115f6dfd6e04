import numpy as np
import pytest

import oracles
from conftest import random_matrix
from suitemin.objectives import (
    GOAL_WEIGHTS,
    GOALS,
    EffectivenessMatrix,
    build_matrix,
    make_selection,
    objectives_many,
    suite_objectives,
)


def _scores(n, value=1.0):
    return {k: np.full(n, value) for k in GOALS[1:]}


class TestBuildMatrix:
    def test_time_row_ratio(self):
        m = build_matrix(_scores(2), [1.0, 3.0])
        np.testing.assert_allclose(m.a[0], [0.25, 0.75])

    def test_rows_sum_to_one(self):
        m = random_matrix(np.random.default_rng(0), 40)
        np.testing.assert_allclose(m.a.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(m.a >= 0)

    def test_degenerate_row(self):
        scores = _scores(3)
        scores["discontinuity"] = np.zeros(3)
        m = build_matrix(scores, [1.0, 1.0, 1.0])
        np.testing.assert_array_equal(m.a[1], 0.0)
        np.testing.assert_array_equal(m.degenerate, [False, True, False, False, False])

    def test_sequence_form_matches_mapping(self):
        rng = np.random.default_rng(1)
        scores = {k: rng.random(5) for k in GOALS[1:]}
        times = rng.random(5) + 0.1
        a = build_matrix(scores, times).a
        b = build_matrix([scores[k] for k in GOALS[1:]], times).a
        np.testing.assert_array_equal(a, b)

    def test_directions(self):
        m = build_matrix(_scores(2), [1.0, 1.0])
        np.testing.assert_array_equal(m.weights, GOAL_WEIGHTS)
        assert m.weights[0] == -1 and np.all(m.weights[1:] == 1)
        assert m.labels == GOALS

    @pytest.mark.parametrize(
        "times, n_scores",
        [([1.0, 0.0], 2), ([1.0, -1.0], 2), ([1.0, 2.0], 3), ([], 0)],
    )
    def test_rejects_bad_input(self, times, n_scores):
        with pytest.raises(ValueError):
            build_matrix(_scores(n_scores), times)

    def test_rejects_negative_scores(self):
        scores = _scores(2)
        scores["minmax"] = np.array([1.0, -1.0])
        with pytest.raises(ValueError):
            build_matrix(scores, [1.0, 1.0])

    def test_matrix_validation(self):
        with pytest.raises(ValueError):
            EffectivenessMatrix(np.ones((4, 3)))
        with pytest.raises(ValueError):
            EffectivenessMatrix(-np.ones((5, 3)))


class TestSuiteObjectives:
    def test_all_and_none(self):
        m = random_matrix(np.random.default_rng(3), 9)
        np.testing.assert_allclose(suite_objectives(m, np.ones(9)), 1.0, atol=1e-12)
        np.testing.assert_array_equal(suite_objectives(m, np.zeros(9)), 0.0)

    def test_equal_tests_half(self):
        m = build_matrix(_scores(2), [2.0, 2.0])
        np.testing.assert_allclose(suite_objectives(m, [1, 0]), 0.5)

    def test_length_mismatch(self):
        m = build_matrix(_scores(2), [2.0, 2.0])
        with pytest.raises(ValueError):
            suite_objectives(m, [1, 0, 1])

    def test_matches_ratio_oracle(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(1, 30))
            scores = {k: rng.random(n) for k in GOALS[1:]}
            times = rng.uniform(0.5, 10, n)
            m = build_matrix(scores, times)
            sel = rng.random(n) < 0.5
            want = oracles.suite_ratio_objectives(list(times), [list(scores[k]) for k in GOALS[1:]], list(sel))
            np.testing.assert_allclose(suite_objectives(m, sel), want, rtol=1e-12, atol=1e-15)

    def test_monotone_and_linear(self):
        rng = np.random.default_rng(5)
        m = random_matrix(rng, 25)
        for _ in range(50):
            x = rng.random(25) < 0.4
            y = (rng.random(25) < 0.4) & ~x
            fx, fy, fxy = (suite_objectives(m, v) for v in (x, y, x | y))
            assert np.all(fxy >= fx - 1e-15)
            np.testing.assert_allclose(fx + fy, fxy, atol=1e-12)

    def test_many_matches_single(self):
        rng = np.random.default_rng(6)
        m = random_matrix(rng, 10)
        xs = rng.random((7, 10)) < 0.5
        many = objectives_many(m, xs)
        for x, row in zip(xs, many):
            np.testing.assert_array_equal(row, suite_objectives(m, x))

    def test_make_selection(self):
        m = random_matrix(np.random.default_rng(7), 4)
        s = make_selection(m, [1, 0, 0, 1])
        assert s.size == 2 and s.bits() == "1001"
        assert s.tet is None and s.ms is None
        np.testing.assert_array_equal(s.objectives, suite_objectives(m, s.include))
