"""Objective functions: positive-weight linear functions and LeadingOnes.

All functions are maximised and have the all-ones string as their unique
optimum, except user callables which must bring their own target value.
``compare`` returns -1, 0 or 1 like a classic ``cmp``.
"""

import math

import numpy as np

from mmaslinear import _pykernels
from mmaslinear.pheromone import as_bits

KIND_ONEMAX = _pykernels.KIND_ONEMAX
KIND_BINVAL = _pykernels.KIND_BINVAL
KIND_LEADINGONES = _pykernels.KIND_LEADINGONES
KIND_LINEAR = _pykernels.KIND_LINEAR
KIND_CALLABLE = -1

_NO_WEIGHTS = np.empty(0)


def _sign(a, b):
    return (a > b) - (a < b)


def _check_n(n):
    n = int(n)
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    return n


class FitnessFunction:
    """Base class; subclasses set ``name``, ``n`` and ``kind``."""

    name = "fitness"
    kind = KIND_CALLABLE
    linear = False

    def evaluate(self, x):
        raise NotImplementedError

    def compare(self, x, y):
        x = as_bits(x, self.n)
        y = as_bits(y, self.n)
        return _sign(self.evaluate(x), self.evaluate(y))

    def is_optimal(self, x):
        return bool(np.all(x))

    @property
    def kernel_weights(self):
        return _NO_WEIGHTS

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class LinearFunction(FitnessFunction):
    """f(x) = sum of w_i over the one-bits of x, all weights positive.

    ``sorted_weights`` holds the weights in descending order and ``order`` the
    permutation with ``sorted_weights == weights[order]``; theory code works on
    that canonical ordering.
    """

    name = "linear"
    kind = KIND_LINEAR
    linear = True

    def __init__(self, weights, name=None):
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 1:
            raise ValueError("weights must be a 1-d sequence")
        self.n = _check_n(w.shape[0])
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w <= 0):
            raise ValueError("weights must be strictly positive")
        w.flags.writeable = False
        self.weights = w
        self.order = np.argsort(-w, kind="stable")
        self.sorted_weights = w[self.order]
        self.sorted_weights.flags.writeable = False
        if name is not None:
            self.name = name

    @property
    def kernel_weights(self):
        return self.weights

    def evaluate(self, x):
        x = as_bits(x, self.n)
        return _pykernels.weighted_sum(x, self.weights)

    def compare(self, x, y):
        return _sign(self.evaluate(x), self.evaluate(y))

    def canonical(self):
        """The same function with weights sorted descending."""
        return LinearFunction(self.sorted_weights, name=self.name)

    def canonical_bits(self, x):
        """``x`` permuted to match ``canonical()``."""
        return as_bits(x, self.n)[self.order]


class OneMax(LinearFunction):
    name = "onemax"
    kind = KIND_ONEMAX

    def __init__(self, n):
        super().__init__(np.ones(_check_n(n)))

    def evaluate(self, x):
        return int(np.count_nonzero(as_bits(x, self.n)))

    def canonical(self):
        return self


class BinVal(LinearFunction):
    """w_i = 2^(n-i).

    Values are exact Python integers and comparisons are lexicographic on the
    bit strings, so both stay exact for any n; the float ``weights`` (used by
    pheromone sums) are finite only up to n = 1024.
    """

    name = "binval"
    kind = KIND_BINVAL

    def __init__(self, n):
        n = _check_n(n)
        if n > 1024:
            raise ValueError("BinVal weights overflow float64 beyond n = 1024")
        super().__init__(np.ldexp(1.0, np.arange(n - 1, -1, -1)))

    def evaluate(self, x):
        x = as_bits(x, self.n)
        return int(x.tobytes().translate(bytes.maketrans(b"\x00\x01", b"01")), 2)

    def compare(self, x, y):
        return _pykernels.lex_compare(as_bits(x, self.n), as_bits(y, self.n))

    def canonical(self):
        return self


class LeadingOnes(FitnessFunction):
    """Number of leading ones. Not linear: excluded from pheromone-sum theory."""

    name = "leadingones"
    kind = KIND_LEADINGONES

    def __init__(self, n):
        self.n = _check_n(n)

    def evaluate(self, x):
        return _pykernels.leading_ones(as_bits(x, self.n))


class CallableFitness(FitnessFunction):
    """A user objective ``func(bits) -> comparable``.

    Its optimum is unknown to the engine, so a ``target`` value must be given
    for runs; a run stops once ``func(x*) >= target``.
    """

    def __init__(self, func, n, target=None, name="callable"):
        self.func = func
        self.n = _check_n(n)
        self.target = target
        self.name = name

    def evaluate(self, x):
        return self.func(as_bits(x, self.n))

    def is_optimal(self, x):
        if self.target is None:
            raise ValueError(f"fitness {self.name!r} has no known optimum; supply a target value")
        return self.evaluate(x) >= self.target


def make_onemax(n):
    return OneMax(n)


def make_binval(n):
    return BinVal(n)


def make_leadingones(n):
    return LeadingOnes(n)


def make_random_linear(n, rng):
    """Weights drawn uniformly from (0, 1]; consumes ``n`` doubles of ``rng``."""
    n = _check_n(n)
    # 1 - U for U in [0, 1) is uniform on (0, 1], so no zero ever needs redrawing
    return LinearFunction(1.0 - rng.random(n), name="random_linear")


def load_weights(path):
    """Linear function from a text file with one decimal weight per line.

    Blank lines and lines starting with ``#`` are ignored.
    """
    weights = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from None
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{path}:{lineno}: weights must be positive and finite")
            weights.append(value)
    return LinearFunction(weights, name=f"file:{path}")


def make_function(spec, n, rng=None):
    """Build a function from its spec string.

    ``spec`` is one of ``onemax``, ``binval``, ``leadingones``,
    ``random_linear`` (needs ``rng``) or ``file:<path>``.
    """
    if spec == "onemax":
        return OneMax(n)
    if spec == "binval":
        return BinVal(n)
    if spec == "leadingones":
        return LeadingOnes(n)
    if spec == "random_linear":
        if rng is None:
            raise ValueError("random_linear needs a random generator")
        return make_random_linear(n, rng)
    if spec.startswith("file:"):
        f = load_weights(spec[len("file:"):])
        if n is not None and f.n != n:
            raise ValueError(f"{spec} defines {f.n} weights but n = {n}")
        return f
    raise ValueError(f"unknown function {spec!r}")


FUNCTION_NAMES = ("onemax", "binval", "leadingones", "random_linear")
