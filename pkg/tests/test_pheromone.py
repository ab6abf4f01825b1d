import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmaslinear.pheromone import (
    PheromoneState,
    as_bits,
    borders,
    init_state,
    sample_solution,
    update,
)
from mmaslinear.rng import make_rng
from mmaslinear.theory.oracles import enumerate_ones_distribution


class TestInitState:
    def test_all_half(self):
        s = init_state(5, 0.1)
        np.testing.assert_array_equal(s.tau, np.full(5, 0.5))
        assert s.rho == 0.1

    def test_degenerate_two_bits(self):
        s = init_state(2, 1.0)
        assert s.lo == s.hi == 0.5
        for best in ("00", "01", "10", "11"):
            np.testing.assert_array_equal(update(s, best).tau, [0.5, 0.5])

    @pytest.mark.parametrize("n, rho", [(1, 0.5), (0, 0.5), (5, 0.0), (5, 1.5), (5, -0.1)])
    def test_rejects_bad_parameters(self, n, rho):
        with pytest.raises(ValueError):
            init_state(n, rho)

    def test_rejects_tau_outside_borders(self):
        with pytest.raises(ValueError):
            PheromoneState(5, 0.5, [0.1, 0.5, 0.5, 0.5, 0.5])
        with pytest.raises(ValueError):
            PheromoneState(5, 0.5, [0.5] * 4)


class TestUpdate:
    def test_interior_reward(self):
        s = PheromoneState(5, 0.5, [0.5] * 5)
        assert update(s, "11111").tau[0] == 0.75

    def test_upper_clamp(self, kernels):
        # a state cannot hold 0.9 at n = 5, so drive the kernel directly
        tau = np.array([0.9, 0.5])
        kernels.update_inplace(tau, np.array([1, 1], dtype=np.uint8), 0.5, 0.2, 0.8)
        assert tau[0] == 0.8
        assert tau[1] == 0.75

    def test_lower_clamp_kernel(self, kernels):
        tau = np.array([0.3, 0.5])
        kernels.update_inplace(tau, np.array([0, 0], dtype=np.uint8), 0.5, 0.2, 0.8)
        np.testing.assert_array_equal(tau, [0.2, 0.25])

    def test_lower_clamp(self):
        s = PheromoneState(5, 0.5, [0.3, 0.5, 0.5, 0.5, 0.5])
        t = update(s, "01111").tau
        assert t[0] == 0.2 == s.lo

    def test_returns_new_state(self):
        s = init_state(4, 0.3)
        new = update(s, "1010")
        np.testing.assert_array_equal(s.tau, 0.5)
        assert new is not s

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            update(init_state(4, 0.3), "101")

    def test_rho_one_jumps_to_borders(self):
        s = update(init_state(8, 1.0), "10110010")
        lo, hi = borders(8)
        np.testing.assert_array_equal(s.tau, np.where(as_bits("10110010") == 1, hi, lo))


EPS = np.finfo(np.float64).eps


def _independent_pair(tau, bit, rho, lo, hi):
    """Both edges of one bit updated separately, straight from the update rule."""
    if bit:
        return min((1 - rho) * tau + rho, hi), max((1 - rho) * (1 - tau), lo)
    return max((1 - rho) * tau, lo), min((1 - rho) * (1 - tau) + rho, hi)


class TestPairConsistency:
    def test_pair_sums_to_one(self, rng):
        s = init_state(30, 0.13)
        for _ in range(200):
            s = update(s, (rng.random(30) < 0.5).astype(np.uint8))
            np.testing.assert_array_equal(s.tau + s.zero_edges, 1.0)

    @pytest.mark.parametrize("n", [2, 4, 8, 64, 1024])
    def test_exact_at_dyadic_borders(self, n):
        lo, hi = borders(n)
        for rho in (0.5, 0.25, 1.0):
            for tau in (lo, hi):
                for bit in (0, 1):
                    one, zero = _independent_pair(tau, bit, rho, lo, hi)
                    assert zero == 1.0 - one

    def test_exact_on_dyadic_interior(self):
        for tau in (0.25, 0.5, 0.75):
            for rho in (0.5, 0.25):
                for bit in (0, 1):
                    one, zero = _independent_pair(tau, bit, rho, 0.125, 0.875)
                    assert zero == 1.0 - one

    def test_border_constants_not_complementary_in_floats(self):
        # why the general bound below is absolute rather than exact
        assert 1.0 - (1.0 - 1.0 / 3) != 1.0 / 3
        assert abs((1.0 - (1.0 - 1.0 / 3)) - 1.0 / 3) <= EPS

    @pytest.mark.parametrize("n", [3, 5, 10, 100, 1000])
    def test_borders_within_eps(self, n):
        lo, hi = borders(n)
        for rho in (0.5, 0.1, 0.01, 1.0):
            for tau in (lo, hi):
                for bit in (0, 1):
                    one, zero = _independent_pair(tau, bit, rho, lo, hi)
                    assert abs(zero - (1.0 - one)) <= 2 * EPS

    @settings(max_examples=500, deadline=None)
    @given(n=st.integers(3, 1000), rho=st.floats(1e-4, 1.0), u=st.floats(0.0, 1.0), bit=st.booleans())
    def test_interior_within_eps(self, n, rho, u, bit):
        lo, hi = borders(n)
        s = PheromoneState(n, rho, np.full(n, min(max(lo + u * (hi - lo), lo), hi)))
        one = update(s, np.full(n, int(bit), dtype=np.uint8)).tau[0]
        ref_one, zero = _independent_pair(s.tau[0], bit, rho, lo, hi)
        assert one == ref_one
        assert abs(zero - (1.0 - one)) <= 2 * EPS


class TestBorderContainment:
    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(2, 60), rho=st.floats(1e-3, 1.0), seed=st.integers(0, 2**32), steps=st.integers(1, 300))
    def test_random_updates_stay_in_borders(self, n, rho, seed, steps):
        gen = make_rng(seed)
        s = init_state(n, rho)
        for _ in range(steps):
            s = update(s, (gen.random(n) < 0.5).astype(np.uint8))
            assert np.all(s.tau >= s.lo) and np.all(s.tau <= s.hi)

    def test_clamped_values_are_the_border_constants(self):
        s = init_state(7, 0.9)
        for _ in range(5):
            s = update(s, "1100110")
        np.testing.assert_array_equal(s.tau, np.where(as_bits("1100110") == 1, 1 - 1 / 7, 1 / 7))


class TestMonotoneReinforcement:
    @settings(max_examples=100, deadline=None)
    @given(n=st.integers(3, 40), rho=st.floats(1e-3, 1.0), seed=st.integers(0, 2**32))
    def test_strictly_towards_border(self, n, rho, seed):
        gen = make_rng(seed)
        best = (gen.random(n) < 0.5).astype(np.uint8)
        s = init_state(n, rho)
        target = np.where(best == 1, s.hi, s.lo)
        for _ in range(math.ceil(math.log(n) / rho) + 2):
            new = update(s, best)
            moving = s.tau != target
            up = best == 1
            assert np.all(new.tau[moving & up] > s.tau[moving & up])
            assert np.all(new.tau[moving & ~up] < s.tau[moving & ~up])
            np.testing.assert_array_equal(new.tau[~moving], s.tau[~moving])
            s = new
        np.testing.assert_array_equal(s.tau, target)


class TestSampling:
    def test_mean_ones_at_lower_border(self):
        n = 100
        s = PheromoneState(n, 0.1, np.full(n, 1 / n))
        gen = make_rng(11)
        counts = [int(sample_solution(s, gen).sum()) for _ in range(100_000)]
        assert abs(np.mean(counts) - 1.0) <= 0.05

    def test_uniform_two_bits(self):
        s = init_state(2, 0.5)
        gen = make_rng(5)
        seen = np.zeros(4)
        for _ in range(40_000):
            x = sample_solution(s, gen)
            seen[2 * x[0] + x[1]] += 1
        np.testing.assert_allclose(seen / seen.sum(), 0.25, atol=0.01)
        np.testing.assert_allclose(enumerate_ones_distribution(s.tau), [0.25, 0.5, 0.25])

    def test_all_ones_probability_at_upper_border(self):
        n = 10
        s = PheromoneState(n, 0.1, np.full(n, 1 - 1 / n))
        gen = make_rng(3)
        hits = sum(bool(sample_solution(s, gen).all()) for _ in range(50_000))
        expected = (1 - 1 / n) ** n
        se = math.sqrt(expected * (1 - expected) / 50_000)
        assert abs(hits / 50_000 - expected) <= 4 * se

    def test_consumes_n_draws_in_bit_order(self):
        tau = np.linspace(0.1, 0.9, 9)
        s = PheromoneState(10, 0.1, np.append(tau, 0.1))
        a, b = make_rng(99), make_rng(99)
        x = sample_solution(s, a)
        u = b.random(10)
        np.testing.assert_array_equal(x, (u < s.tau).astype(np.uint8))
        assert a.random() == b.random()

    def test_border_bits_still_consume_draws(self):
        s = PheromoneState(4, 0.1, [0.25, 0.75, 0.25, 0.75])
        a, b = make_rng(1), make_rng(1)
        sample_solution(s, a)
        b.random(4)
        assert a.random() == b.random()

    def test_determinism(self):
        s = PheromoneState(20, 0.2, np.linspace(0.05, 0.95, 20))
        x1 = [sample_solution(s, make_rng(8)) for _ in range(3)]
        x2 = [sample_solution(s, make_rng(8)) for _ in range(3)]
        np.testing.assert_array_equal(x1, x2)


class TestBits:
    def test_as_bits_from_string(self):
        np.testing.assert_array_equal(as_bits("1011"), [1, 0, 1, 1])

    @pytest.mark.parametrize("bad", ["1021", [0, 2], [[0, 1]]])
    def test_as_bits_rejects(self, bad):
        with pytest.raises(ValueError):
            as_bits(bad)
