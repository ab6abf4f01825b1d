import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mmaslinear.fitness import (
    BinVal,
    CallableFitness,
    LinearFunction,
    OneMax,
    load_weights,
    make_binval,
    make_function,
    make_leadingones,
    make_onemax,
    make_random_linear,
)
from mmaslinear.rng import make_rng


class TestEvaluate:
    def test_onemax(self):
        assert make_onemax(5).evaluate("11111") == 5

    def test_binval_small(self):
        assert make_binval(3).evaluate("101") == 5

    def test_explicit_weights(self):
        assert LinearFunction([3, 2, 1]).evaluate("011") == 3

    def test_leadingones(self):
        assert make_leadingones(5).evaluate("11010") == 2
        assert make_leadingones(5).evaluate("01111") == 0
        assert make_leadingones(5).evaluate("11111") == 5

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            make_onemax(4).evaluate("101")

    def test_binval_value_is_exact_int(self):
        f = BinVal(200)
        x = np.ones(200, dtype=np.uint8)
        assert f.evaluate(x) == 2**200 - 1

    def test_index_order_sum(self):
        w = np.array([0.1, 0.2, 0.3, 1e-17])
        acc = 0.0
        for wi in w:
            acc += wi
        assert LinearFunction(w).evaluate("1111") == acc


class TestCompare:
    def test_binval_large_n(self):
        f = BinVal(1000)
        x = np.zeros(1000, dtype=np.uint8)
        x[0] = 1
        y = np.ones(1000, dtype=np.uint8)
        y[0] = 0
        assert f.compare(x, y) == 1
        assert f.compare(y, x) == -1
        assert f.compare(x, x) == 0

    def test_onemax_equal(self):
        assert make_onemax(4).compare("0101", "1010") == 0

    def test_weights_greater(self):
        assert LinearFunction([0.7, 0.3]).compare("10", "01") == 1

    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(2, 50), seed=st.integers(0, 2**32))
    def test_binval_lex_matches_float_sum(self, n, seed):
        gen = make_rng(seed)
        f = BinVal(n)
        for _ in range(50):
            x = (gen.random(n) < 0.5).astype(np.uint8)
            y = (gen.random(n) < 0.5).astype(np.uint8)
            fx, fy = float(np.dot(f.weights, x)), float(np.dot(f.weights, y))
            assert f.compare(x, y) == (fx > fy) - (fx < fy)


class TestConstruction:
    def test_onemax_weights(self):
        np.testing.assert_array_equal(make_onemax(4).weights, [1, 1, 1, 1])

    def test_binval_weights(self):
        np.testing.assert_array_equal(BinVal(4).weights, [8, 4, 2, 1])

    @pytest.mark.parametrize("w", [[1, 0, 2], [1, -1, 2], [1, np.inf, 2], [1, np.nan, 2]])
    def test_rejects_non_positive_or_non_finite(self, w):
        with pytest.raises(ValueError):
            LinearFunction(w)

    @pytest.mark.parametrize("maker", [make_onemax, make_binval, make_leadingones])
    def test_rejects_n_below_two(self, maker):
        with pytest.raises(ValueError):
            maker(1)

    def test_weights_are_read_only(self):
        f = LinearFunction([1.0, 2.0])
        with pytest.raises(ValueError):
            f.weights[0] = 5.0

    def test_random_linear_determinism(self):
        a = make_random_linear(3, make_rng(17)).weights
        b = make_random_linear(3, make_rng(17)).weights
        np.testing.assert_array_equal(a, b)

    def test_random_linear_range(self):
        w = make_random_linear(10_000, make_rng(2)).weights
        assert np.all(w > 0) and np.all(w <= 1)
        assert abs(w.mean() - 0.5) < 0.01

    def test_leadingones_not_linear(self):
        assert not make_leadingones(5).linear
        assert make_onemax(5).linear

    def test_callable_needs_target(self):
        f = CallableFitness(lambda x: int(x.sum()), 4)
        assert f.evaluate("1100") == 2
        with pytest.raises(ValueError):
            f.is_optimal("1111")
        assert CallableFitness(lambda x: int(x.sum()), 4, target=4).is_optimal("1111")


class TestProperties:
    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(2, 40), seed=st.integers(0, 2**32))
    def test_flip_zero_to_one_increases(self, n, seed):
        gen = make_rng(seed)
        f = make_random_linear(n, gen)
        x = (gen.random(n) < 0.5).astype(np.uint8)
        for i in np.flatnonzero(x == 0):
            y = x.copy()
            y[i] = 1
            assert f.evaluate(y) > f.evaluate(x)
            assert f.compare(y, x) == 1

    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(2, 40), seed=st.integers(0, 2**32))
    def test_canonical_permutation(self, n, seed):
        gen = make_rng(seed)
        f = make_random_linear(n, gen)
        g = f.canonical()
        assert np.all(np.diff(g.weights) <= 0)
        np.testing.assert_array_equal(g.weights, f.weights[f.order])
        x = (gen.random(n) < 0.5).astype(np.uint8)
        assert g.evaluate(f.canonical_bits(x)) == pytest.approx(f.evaluate(x), rel=1e-12)

    def test_canonical_ties_are_stable(self):
        f = LinearFunction([1.0, 2.0, 1.0, 2.0])
        np.testing.assert_array_equal(f.order, [1, 3, 0, 2])


class TestWeightFiles:
    def test_load(self, tmp_path):
        p = tmp_path / "w.txt"
        p.write_text("# weights\n3\n\n2.5\n1e-3\n")
        f = load_weights(p)
        np.testing.assert_array_equal(f.weights, [3, 2.5, 1e-3])
        assert f.name == f"file:{p}"

    def test_bad_line_reports_location(self, tmp_path):
        p = tmp_path / "w.txt"
        p.write_text("1\nabc\n")
        with pytest.raises(ValueError, match=r"w\.txt:2"):
            load_weights(p)

    def test_non_positive_rejected(self, tmp_path):
        p = tmp_path / "w.txt"
        p.write_text("1\n0\n")
        with pytest.raises(ValueError, match=r":2"):
            load_weights(p)

    def test_make_function_file_checks_n(self, tmp_path):
        p = tmp_path / "w.txt"
        p.write_text("1\n2\n3\n")
        assert make_function(f"file:{p}", 3).n == 3
        with pytest.raises(ValueError):
            make_function(f"file:{p}", 4)


class TestMakeFunction:
    def test_names(self):
        assert isinstance(make_function("onemax", 5), OneMax)
        assert isinstance(make_function("binval", 5), BinVal)
        assert make_function("leadingones", 5).evaluate("11011") == 2
        assert make_function("random_linear", 5, make_rng(0)).n == 5

    def test_random_needs_rng(self):
        with pytest.raises(ValueError):
            make_function("random_linear", 5)

    def test_unknown(self):
        with pytest.raises(ValueError):
            make_function("zeromax", 5)

    def test_all_functions_optimal_at_all_ones(self):
        for spec in ("onemax", "binval", "leadingones", "random_linear"):
            f = make_function(spec, 6, make_rng(1))
            best = max(itertools.product((0, 1), repeat=6), key=lambda x: f.evaluate(np.array(x)))
            assert all(best)
            assert f.is_optimal(np.ones(6, dtype=np.uint8))
