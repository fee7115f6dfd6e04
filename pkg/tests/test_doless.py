import numpy as np
import pytest

import oracles
from conftest import random_matrix
from suitemin.doless import (
    DolessConfig,
    EmptySelectionError,
    default_regularization,
    doless_run,
    pareto_front,
    pareto_front_bruteforce,
    sample_goal_population,
    solve_selection,
    threshold,
)
from suitemin.domination import binary_dominates
from suitemin.objectives import GOAL_WEIGHTS, Selection, build_matrix, make_selection, suite_objectives


class TestGoalPopulation:
    def test_default_size_in_unit_cube(self):
        pop = sample_goal_population(10_000, seed=0)
        assert pop.shape == (10_000, 5)
        assert pop.min() >= 0 and pop.max() <= 1

    def test_seeded(self):
        np.testing.assert_array_equal(sample_goal_population(50, 3), sample_goal_population(50, 3))
        assert not np.array_equal(sample_goal_population(50, 3), sample_goal_population(50, 4))

    def test_single(self):
        assert sample_goal_population(1).shape == (1, 5)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            sample_goal_population(0)


class TestSolveSelection:
    def test_zero_goal(self):
        m = random_matrix(np.random.default_rng(0), 8)
        np.testing.assert_array_equal(solve_selection(m, np.zeros(5)).x, 0.0)

    def test_needs_more_tests_than_goals(self):
        m = random_matrix(np.random.default_rng(0), 5)
        with pytest.raises(ValueError):
            solve_selection(m, np.full(5, 0.5))

    def test_goal_shape(self):
        m = random_matrix(np.random.default_rng(0), 8)
        with pytest.raises(ValueError):
            solve_selection(m, np.full(4, 0.5))

    def test_unit_weight_probe_optimal(self):
        rng = np.random.default_rng(1)
        m = random_matrix(rng, 6)
        goal = rng.random(5)
        res = solve_selection(m, goal, regularization=1.0)
        probes = rng.random((1000, 6))
        r = probes @ m.a.T - goal
        assert res.objective <= ((r * r).sum(axis=1) + (probes * probes).sum(axis=1)).min()
        assert res.pg_norm <= 1e-8

    def test_default_weight(self):
        assert default_regularization(150) == pytest.approx(1 / 22500)


class TestThreshold:
    @pytest.mark.parametrize(
        "x, expected",
        [
            ([0.9, 0.1, 0.51], [1, 0, 1]),
            ([0.5, 0.5, 0.5], [0, 0, 0]),
            ([0.0, 0.0], [0, 0]),
            ([1.0, 0.5000001], [1, 1]),
        ],
    )
    def test_rule(self, x, expected):
        np.testing.assert_array_equal(threshold(x), np.array(expected, dtype=bool))


def _sel(obj):
    return Selection(np.zeros(1, dtype=bool), np.asarray(obj, dtype=float))


class TestParetoFront:
    def test_single(self):
        s = _sel([0.1, 0.2, 0.3, 0.4, 0.5])
        assert pareto_front([s], GOAL_WEIGHTS) == [s]

    def test_dominator_only(self):
        good, bad = _sel([0.1, 0.9, 0.9, 0.9, 0.9]), _sel([0.2, 0.8, 0.9, 0.9, 0.9])
        assert pareto_front([bad, good], GOAL_WEIGHTS) == [good]

    def test_duplicates_collapse(self):
        a, b = _sel([0.1] * 5), _sel([0.1] * 5)
        assert pareto_front([a, b], GOAL_WEIGHTS) == [a]

    def test_empty(self):
        with pytest.raises(ValueError):
            pareto_front([], GOAL_WEIGHTS)

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_bruteforce(self, seed):
        rng = np.random.default_rng(seed)
        objs = rng.integers(0, 4, (20, 5)) / 3.0  # coarse values give ties and duplicates
        sels = [_sel(o) for o in objs]
        fast = pareto_front(sels, GOAL_WEIGHTS)
        slow = pareto_front_bruteforce(sels, GOAL_WEIGHTS)
        assert [id(s) for s in fast] == [id(s) for s in slow]
        idx = set(oracles.front_indices(objs.tolist(), list(GOAL_WEIGHTS)))
        assert {tuple(s.objectives) for s in fast} == {tuple(objs[i]) for i in idx}


class TestPipeline:
    def test_front_properties(self, default_matrix):
        res = doless_run(default_matrix, DolessConfig(seed=0))
        assert res.goals.shape == (100, 5)
        assert res.relaxed.shape == (100, 150)
        assert np.all((res.relaxed >= 0) & (res.relaxed <= 1))
        assert res.front
        for s in res.front:
            assert s.include.any()
            np.testing.assert_array_equal(s.objectives, suite_objectives(default_matrix, s.include))
        for s in res.front:
            for t in res.front:
                assert not binary_dominates(t.objectives, s.objectives, GOAL_WEIGHTS)
        bits = [s.bits() for s in res.candidates]
        assert len(bits) == len(set(bits))

    def test_deterministic(self, small_matrix):
        a = doless_run(small_matrix, DolessConfig(seed=4))
        b = doless_run(small_matrix, DolessConfig(seed=4))
        assert [s.bits() for s in a.front] == [s.bits() for s in b.front]

    def test_candidates_match_thresholded_relaxed(self, small_matrix):
        res = doless_run(small_matrix, DolessConfig(pop_size=400, seed=2))
        expected = {threshold(x).tobytes() for x in res.relaxed if threshold(x).any()}
        assert {s.include.tobytes() for s in res.candidates} == expected

    def test_all_empty_is_reported(self, default_matrix):
        # with a unit ridge weight on suite shares nothing clears 0.5
        with pytest.raises(EmptySelectionError):
            doless_run(default_matrix, DolessConfig(pop_size=400, regularization=1.0))

    def test_degenerate_goal_held_at_zero(self):
        rng = np.random.default_rng(5)
        scores = {k: rng.random(12) for k in ("discontinuity", "infinity", "instability", "minmax")}
        scores["instability"] = np.zeros(12)
        m = build_matrix(scores, rng.uniform(1, 2, 12))
        res = doless_run(m, DolessConfig(pop_size=900, seed=1))
        np.testing.assert_array_equal(res.goals[:, 3], 0.0)
        assert all(s.objectives[3] == 0.0 for s in res.front)

    def test_small_front_near_true_front(self, small_matrix):
        res = doless_run(small_matrix, DolessConfig(seed=0))
        true = oracles.exhaustive_front(small_matrix.a, small_matrix.weights)
        close = [(np.abs(true - s.objectives).max(axis=1) <= 0.02).any() for s in res.front]
        assert np.mean(close) >= 0.8

    def test_make_selection_roundtrip(self, small_matrix):
        s = make_selection(small_matrix, np.ones(12))
        np.testing.assert_allclose(s.objectives, 1.0)
