"""Fitness levels of search points and pheromone levels of pheromone vectors.

For a linear function with weights sorted descending, ``a_i`` is the string
of ``i`` ones followed by zeros. A search point is on fitness level ``i`` when
``f(a_i) <= f(x) < f(a_{i+1})``; a pheromone vector is on pheromone level
``i`` when ``v(a_i) <= f(tau) < v(a_{i+1})``, where ``v(x)`` is the pheromone
sum obtained with every bit of ``x`` on its favourable border. ``v(a_{-1})``
is taken to be 0, so pheromone levels run from -1 to n.

Sums that are compared against level thresholds are accumulated in the
canonical (descending-weight) order; this makes ``f(a_i)`` and ``v(a_i)``
bit-identical to the thresholds they are compared with.
"""

from bisect import bisect_right

import numpy as np

from mmaslinear import _pykernels
from mmaslinear.fitness import BinVal
from mmaslinear.pheromone import PheromoneState, as_bits, borders


def _require_linear(f):
    if not getattr(f, "linear", False):
        raise TypeError(f"{f!r} is not a linear function")


def _tau(state_or_tau):
    if isinstance(state_or_tau, PheromoneState):
        return state_or_tau.tau
    return np.asarray(state_or_tau, dtype=np.float64)


def _seq_sum(values):
    return float(np.add.accumulate(values)[-1])


def wps(f, state):
    """Weighted pheromone sum f(tau), accumulated in index order."""
    _require_linear(f)
    tau = _tau(state)
    if tau.shape != (f.n,):
        raise ValueError(f"pheromone vector has shape {tau.shape}, expected ({f.n},)")
    return _seq_sum(f.weights * tau)


def v_of(f, x):
    """Pheromone sum with bit i at 1 - 1/n if x_i = 1 and at 1/n otherwise."""
    _require_linear(f)
    x = as_bits(x, f.n)
    lo, hi = borders(f.n)
    return _seq_sum(f.weights * np.where(x != 0, hi, lo))


def prefix_point(n, i):
    """The string a_i: i ones followed by n - i zeros."""
    if not 0 <= i <= n:
        raise ValueError(f"prefix length {i} outside [0, {n}]")
    x = np.zeros(n, dtype=np.uint8)
    x[:i] = 1
    return x


def alpha(n, i):
    """Border mass i(1 - 1/n) of i saturated one-bits."""
    return i * (1.0 - 1.0 / n)


def leftmost_zero_flip(x):
    """Copy of ``x`` with its leftmost zero set to one."""
    x = as_bits(x).copy()
    zeros = np.flatnonzero(x == 0)
    if not zeros.size:
        raise ValueError("the all-ones string has no zero to flip")
    x[zeros[0]] = 1
    return x


class LevelClassifier:
    """Precomputed level thresholds for one linear function.

    ``prefix_sums[i]`` is f(a_i) and ``v_thresholds[i]`` is v(a_i), both for
    the canonical ordering and for i = 0..n.
    """

    def __init__(self, f):
        _require_linear(f)
        self.f = f
        self.n = n = f.n
        self.order = f.order
        w = f.sorted_weights
        self.sorted_weights = w
        self.exact_lex = isinstance(f, BinVal)
        acc = np.add.accumulate(w)
        self.prefix_sums = np.concatenate(([0.0], acc))
        lo, hi = borders(n)
        v = np.empty(n + 1)
        for i in range(n + 1):
            v[i] = _seq_sum(w * np.where(np.arange(n) < i, hi, lo))
        self.v_thresholds = v
        self._v_list = v.tolist()
        self._p_list = self.prefix_sums.tolist()

    def v(self, i):
        """v(a_i) with v(a_{-1}) = 0."""
        return 0.0 if i < 0 else self._v_list[i]

    def canonical_value(self, x):
        return _seq_sum(self.sorted_weights * x[self.order])

    def canonical_wps(self, tau):
        return _seq_sum(self.sorted_weights * tau[self.order])

    def fitness_level(self, x):
        if self.exact_lex:
            # f(x) >= f(a_i) for BinVal iff x starts with i ones
            return _pykernels.leading_ones(x)
        if np.all(x):
            return self.n
        i = bisect_right(self._p_list, self.canonical_value(x)) - 1
        # a tiny weight can be absorbed by rounding; only the optimum is level n
        return min(i, self.n - 1)

    def level_of_sum(self, s):
        return bisect_right(self._v_list, s) - 1

    def pheromone_level(self, tau):
        return self.level_of_sum(self.canonical_wps(tau))


def fitness_level(f, x):
    """The i with f(a_i) <= f(x) < f(a_{i+1}); n for the optimum."""
    return LevelClassifier(f).fitness_level(as_bits(x, f.n))


def pheromone_level(f, state):
    """The i in [-1, n] with v(a_i) <= f(tau) < v(a_{i+1})."""
    return LevelClassifier(f).pheromone_level(_tau(state))
