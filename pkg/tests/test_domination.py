import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from suitemin.domination import (
    binary_dominates,
    cdom_losses,
    cdom_prefers,
    check_weights,
    domination_score,
    domination_scores,
    select_best,
)

W5 = np.array([-1.0, 1.0, 1.0, 1.0, 1.0])
MAX5 = np.ones(5)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
goal = st.lists(unit, min_size=5, max_size=5)


class TestBinary:
    def test_equal_is_not_dominating(self):
        assert not binary_dominates([0.3] * 5, [0.3] * 5, W5)

    def test_all_better(self):
        assert binary_dominates([1] * 5, [0] * 5, MAX5)

    def test_incomparable(self):
        a, b = [1, 0, 0, 0, 0], [0, 1, 0, 0, 0]
        assert not binary_dominates(a, b, MAX5)
        assert not binary_dominates(b, a, MAX5)

    def test_minimised_goal(self):
        assert binary_dominates([0.1, 0.5], [0.2, 0.5], [-1, 1])
        assert not binary_dominates([0.2, 0.5], [0.1, 0.5], [-1, 1])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            binary_dominates([1, 2], [1, 2, 3], [1, 1])

    @pytest.mark.parametrize("w", [[], [0, 1], [2.0]])
    def test_weight_validation(self, w):
        with pytest.raises(ValueError):
            check_weights(w)


class TestCdom:
    def test_single_goal_losses(self):
        s1, s2 = cdom_losses([1.0], [0.0], [1.0])
        assert s1 == pytest.approx(-math.e, rel=1e-15)
        assert s2 == pytest.approx(-1 / math.e, rel=1e-15)
        assert cdom_prefers([1.0], [0.0], [1.0])

    def test_equal_prefers_neither(self):
        a = [0.2, 0.4, 0.6, 0.8, 1.0]
        assert not cdom_prefers(a, a, W5)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            cdom_prefers([1.0], [1.0, 2.0], [1.0])

    @settings(max_examples=200, deadline=None)
    @given(goal, goal)
    def test_antisymmetric(self, a, b):
        assert not (cdom_prefers(a, b, W5) and cdom_prefers(b, a, W5))

    @settings(max_examples=200, deadline=None)
    @given(goal, goal, st.lists(st.floats(-1, 1), min_size=5, max_size=5))
    def test_translation_invariant(self, a, b, c):
        a, b, c = map(np.asarray, (a, b, c))
        # a shift changes rounding of the differences, so only compare clear cases
        s1, s2 = cdom_losses(a, b, W5)
        if abs(s1 - s2) > 1e-9:
            assert cdom_prefers(a + c, b + c, W5) == cdom_prefers(a, b, W5)

    @pytest.mark.parametrize("direction", [1.0, -1.0])
    def test_single_goal_is_scalar_order(self, direction):
        rng = np.random.default_rng(0)
        for a, b in rng.random((200, 2)):
            assert cdom_prefers([a], [b], [direction]) == (direction * a > direction * b)

    def test_agrees_with_binary_domination(self):
        rng = np.random.default_rng(1)
        a = rng.random((10_000, 5))
        b = rng.random((10_000, 5))
        # force a good share of dominated pairs
        b[::2] = np.where(W5 > 0, a[::2] * rng.random((5000, 5)), a[::2] + (1 - a[::2]) * rng.random((5000, 5)))
        checked = 0
        for x, y in zip(a, b):
            if binary_dominates(x, y, W5):
                checked += 1
                assert cdom_prefers(x, y, W5)
        assert checked > 4000

    def test_matches_oracle(self):
        rng = np.random.default_rng(2)
        for a, b in zip(rng.random((500, 5)), rng.random((500, 5))):
            assert cdom_prefers(a, b, W5) == oracles.cdom(list(a), list(b), list(W5))


class TestScores:
    def test_beats_everyone(self):
        assert domination_score([0, 1, 1, 1, 1], np.random.default_rng(0).random((100, 5)) * 0.9 + [0.1, 0, 0, 0, 0], W5) == 1.0

    def test_identical_opponents(self):
        assert domination_score([0.5] * 5, np.full((100, 5), 0.5), W5) == 0.0

    def test_half(self):
        assert domination_score([0.5], [[0.0], [1.0]], [1.0]) == 0.5

    def test_empty_opponents(self):
        with pytest.raises(ValueError):
            domination_score([0.5], np.empty((0, 1)), [1.0])
        with pytest.raises(ValueError):
            domination_scores(np.ones((2, 1)), np.empty((0, 1)), [1.0])

    def test_bulk_matches_predicate(self):
        rng = np.random.default_rng(3)
        pop, opp = rng.random((300, 5)), rng.random((50, 5))
        bulk = domination_scores(pop, opp, W5)
        for p, score in zip(pop, bulk):
            assert score == domination_score(p, opp, W5)

    def test_bulk_differs_only_on_rounding_ties(self):
        # on a coarse grid many pairs tie exactly in real arithmetic; the
        # bulk kernel may round those either way, but nothing else
        rng = np.random.default_rng(4)
        pop = rng.integers(0, 5, (200, 5)) / 4.0
        bulk = domination_scores(pop, pop[:40], W5) * 40
        for p, wins in zip(pop, bulk):
            clear = [(o, cdom_losses(p, o, W5)) for o in pop[:40]]
            lo = sum(s1 < s2 and s2 - s1 > 1e-12 for _, (s1, s2) in clear)
            hi = sum(s1 < s2 or abs(s2 - s1) <= 1e-12 for _, (s1, s2) in clear)
            assert lo <= wins <= hi


class TestSelectBest:
    def test_default_count(self):
        pop = np.random.default_rng(0).random((10_000, 5))
        best, rest = select_best(pop, W5, seed=0)
        assert best.shape == (100, 5) and rest.shape == (9900, 5)

    def test_whole_population(self):
        pop = np.random.default_rng(1).random((30, 5))
        best, rest = select_best(pop, W5, count=30)
        assert best.shape == (30, 5) and rest.shape[0] == 0
        # a permutation of the input
        assert sorted(map(tuple, best)) == sorted(map(tuple, pop))

    def test_count_too_large(self):
        with pytest.raises(ValueError):
            select_best(np.zeros((3, 5)), W5, count=4)

    def test_dominator_ranks_first(self):
        rng = np.random.default_rng(2)
        pop = rng.random((50, 5)) * 0.9
        pop[17] = 1.0
        best, _ = select_best(pop, MAX5, count=1, n_opponents=50)
        np.testing.assert_array_equal(best[0], np.ones(5))
        # brute-force round robin agrees on the winner
        wins = [sum(oracles.cdom(list(p), list(q), [1] * 5) for q in pop) for p in pop]
        assert int(np.argmax(wins)) == 17

    def test_deterministic(self):
        pop = np.random.default_rng(3).random((500, 5))
        a, _ = select_best(pop, W5, seed=9)
        b, _ = select_best(pop, W5, seed=9)
        np.testing.assert_array_equal(a, b)

    def test_stable_order_from_shared_sample(self):
        rng = np.random.default_rng(4)
        pop = rng.integers(0, 3, (60, 5)) / 2.0  # coarse grid: many exact ties
        best, rest = select_best(pop, W5, count=10, seed=5, n_opponents=25)
        opp = pop[np.random.default_rng(5).choice(60, size=25, replace=False)]
        scores = domination_scores(pop, opp, W5)
        order = sorted(range(60), key=lambda i: (-scores[i], i))
        np.testing.assert_array_equal(np.vstack([best, rest]), pop[order])
