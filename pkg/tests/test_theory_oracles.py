import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmaslinear.pheromone import PheromoneState, sample_solution
from mmaslinear.rng import make_rng
from mmaslinear.theory.oracles import (
    MAX_EXACT_N,
    enumerate_ones_distribution,
    exact_ones_distribution,
    gleser_premise,
    gleser_threshold,
    gleser_verify,
    random_premise_pair,
)


class TestDistribution:
    def test_two_uniform(self):
        np.testing.assert_allclose(exact_ones_distribution([0.5, 0.5]), [0.25, 0.5, 0.25])

    def test_asymmetric_pair(self):
        assert exact_ones_distribution([0.9, 0.1])[1] == pytest.approx(0.82, abs=1e-15)

    def test_upper_border_all_ones(self):
        d = exact_ones_distribution(np.full(10, 0.9))
        assert d[10] == pytest.approx(0.9**10, rel=1e-13)
        assert d[10] == pytest.approx(0.34868, abs=5e-6)

    def test_accepts_state(self):
        s = PheromoneState(4, 0.1, [0.25, 0.5, 0.5, 0.75])
        np.testing.assert_allclose(exact_ones_distribution(s), enumerate_ones_distribution(s.tau), atol=1e-15)

    def test_guards(self):
        with pytest.raises(ValueError):
            exact_ones_distribution(np.full(MAX_EXACT_N + 1, 0.5))
        with pytest.raises(ValueError):
            enumerate_ones_distribution(np.full(21, 0.5))

    @pytest.mark.parametrize("n", range(1, 13))
    def test_matches_enumeration(self, n):
        gen = make_rng(n)
        for _ in range(10):
            tau = gen.random(n)
            d = exact_ones_distribution(tau)
            np.testing.assert_allclose(d, enumerate_ones_distribution(tau), rtol=0, atol=1e-12)
            assert abs(d.sum() - 1) <= 1e-12

    def test_monte_carlo(self):
        n = 10
        s = PheromoneState(n, 0.1, np.linspace(0.1, 0.9, n))
        gen = make_rng(2024)
        m = 1_000_000
        counts = np.bincount([int(sample_solution(s, gen).sum()) for _ in range(m)], minlength=n + 1)
        p = exact_ones_distribution(s)
        se = np.sqrt(p * (1 - p) / m)
        assert np.all(np.abs(counts / m - p) <= 3 * se + 1e-12)


class TestPremise:
    def test_reflexive(self):
        tau = np.array([0.3, 0.6, 0.2])
        assert gleser_premise(tau, tau)
        assert gleser_verify(tau, tau)

    def test_spread_pair(self):
        tau, tp = [0.5, 0.5], [0.2, 0.8]
        assert gleser_premise(tau, tp)
        assert not gleser_premise(tp, tau)
        assert gleser_threshold(tp) == 2
        d1, d2 = exact_ones_distribution(tau), exact_ones_distribution(tp)
        assert d1[2] == pytest.approx(0.25) and d2[2] == pytest.approx(0.16)
        assert gleser_verify(tau, tp)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            gleser_premise([0.5], [0.5, 0.5])
        with pytest.raises(ValueError):
            gleser_verify([0.5], [0.5, 0.5])

    def test_generator_satisfies_premise(self):
        gen = make_rng(3)
        for n in (2, 5, 12):
            for _ in range(50):
                tau, tp = random_premise_pair(n, gen)
                assert gleser_premise(tau, tp)
                assert np.all((tau >= 0) & (tau <= 1))


class TestDominanceThreshold:
    """Where the dominance at floor(lambda + 1) holds and where it does not."""

    def test_counterexample_at_non_integer_mean(self):
        tau, tp = np.array([0.4, 0.4]), np.array([0.0, 0.8])
        assert gleser_premise(tau, tp)
        assert gleser_threshold(tp) == 1
        lhs = exact_ones_distribution(tau)[1:].sum()
        rhs = exact_ones_distribution(tp)[1:].sum()
        assert lhs == pytest.approx(0.64) and rhs == pytest.approx(0.8)
        assert not gleser_verify(tau, tp)

    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(2, 12), seed=st.integers(0, 2**32))
    def test_integer_mean_holds(self, n, seed):
        # Robin-Hood transfers of a vector with an integer sum
        gen = make_rng(seed)
        k = int(gen.integers(1, n))
        tp = np.zeros(n)
        tp[:k] = 1.0
        gen.shuffle(tp)
        tau = tp.copy()
        for _ in range(n):
            a, b = gen.choice(n, size=2, replace=False)
            lo, hi = (a, b) if tau[a] <= tau[b] else (b, a)
            d = gen.random() * (tau[hi] - tau[lo]) / 2
            tau[lo] += d
            tau[hi] -= d
        if gleser_premise(tau, tp) and math.isclose(tp.sum(), k):
            assert gleser_verify(tau, tp)

    @pytest.mark.parametrize("n", [5, 10, 20])
    def test_holds_two_above_mean(self, n):
        gen = make_rng(100 + n)
        for _ in range(1000):
            tau, tp = random_premise_pair(n, gen)
            k = math.floor(float(np.sum(tp))) + 3
            assert gleser_verify(tau, tp, k=k)
