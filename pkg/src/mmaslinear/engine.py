"""MMAS and MMAS*: one ant, best-so-far reinforcement, stop at the optimum.

Iteration 1 is the construction of the initial best-so-far solution. Every
iteration constructs one solution, applies the acceptance rule, updates the
pheromones with respect to x* and then checks for the optimum, so the
optimization time is the index of the iteration that first sampled it.

Runs without instrumentation execute entirely inside the kernel backend.
With an observer or a trace the same loop is stepped from Python; both paths
consume the random stream identically and give identical results.
"""

import enum
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from mmaslinear._backend import kernels
from mmaslinear import _pykernels
from mmaslinear.fitness import (
    KIND_BINVAL,
    KIND_CALLABLE,
    KIND_LEADINGONES,
    KIND_LINEAR,
    KIND_ONEMAX,
)
from mmaslinear.pheromone import init_state
from mmaslinear.rng import make_rng

DEFAULT_MAX_ITERATIONS = 10**8
NO_LEVEL = -2


class Variant(enum.Enum):
    MMAS = "mmas"
    MMAS_STAR = "mmas-star"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "-")
        if key in ("mmas*", "mmasstar", "mmas-star"):
            return cls.MMAS_STAR
        if key == "mmas":
            return cls.MMAS
        raise ValueError(f"unknown variant {text!r} (expected 'mmas' or 'mmas-star')")

    @property
    def accepts_equal(self):
        return self is Variant.MMAS


def acceptance(variant, fx, fbest):
    """MMAS replaces x* on f(x) >= f(x*), MMAS* only on f(x) > f(x*)."""
    if Variant.parse(variant).accepts_equal:
        return fx >= fbest
    return fx > fbest


@dataclass(frozen=True)
class AlgorithmConfig:
    variant: Variant
    n: int
    rho: float
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant.parse(self.variant))
        if int(self.n) < 2:
            raise ValueError(f"n must be at least 2, got {self.n}")
        if not 0.0 < float(self.rho) <= 1.0:
            raise ValueError(f"rho must lie in (0, 1], got {self.rho}")
        if int(self.max_iterations) < 1:
            raise ValueError("max_iterations must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


class Step(NamedTuple):
    """What an observer sees after each iteration. Arrays are read-only views."""

    iteration: int
    n: int
    rho: float
    tau: np.ndarray
    x: np.ndarray
    best: np.ndarray
    accepted: bool
    replaced: bool


TRACE_FIELDS = (
    ("iteration", np.int64),
    ("best_value", np.float64),
    ("wps", np.float64),
    ("fitness_level", np.int64),
    ("pheromone_level", np.int64),
    ("accepted", np.bool_),
    ("replaced", np.bool_),
    ("saturated", np.int64),
    ("best_ones", np.int64),
    ("best_leading_ones", np.int64),
)


@dataclass
class RunTrace:
    """Per-iteration records of one run.

    ``records`` is a structured array with the ``TRACE_FIELDS`` columns; for
    non-linear functions ``wps`` is NaN and ``pheromone_level`` is
    ``NO_LEVEL``. With snapshots enabled ``snapshots[k]`` holds the pheromones
    after the update of iteration ``k + 1`` and ``initial_tau`` those before
    iteration 1.
    """

    n: int
    rho: float
    variant: Variant
    function: str
    records: np.ndarray
    initial_tau: np.ndarray
    snapshots: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.records)

    def __getitem__(self, name):
        return self.records[name]

    def pheromones_before(self, k):
        """Pheromones in force when iteration ``k`` (1-based) constructed its solution."""
        return self.initial_tau if k == 1 else self.snapshots[k - 2]


@dataclass
class RunResult:
    optimization_time: Optional[int]
    final_best: np.ndarray
    iterations: int
    trace: Optional[RunTrace] = field(default=None, repr=False)

    @property
    def censored(self):
        return self.optimization_time is None


def _readonly(a):
    v = a.view()
    v.flags.writeable = False
    return v


class _Comparator:
    """Stateful comparison of a fresh sample against the cached x*."""

    def __init__(self, f):
        self.f = f
        self.kind = f.kind
        self.best_key = None

    def key(self, x, ones):
        kind = self.kind
        if kind == KIND_ONEMAX:
            return ones
        if kind == KIND_LEADINGONES:
            return _pykernels.leading_ones(x)
        if kind == KIND_LINEAR:
            return _pykernels.weighted_sum(x, self.f.weights)
        if kind == KIND_CALLABLE:
            return self.f.evaluate(x)
        return None

    def compare(self, x, key, best):
        if self.kind == KIND_BINVAL:
            return _pykernels.lex_compare(x, best)
        return (key > self.best_key) - (key < self.best_key)


def run(config, f, observer: Optional[Callable[[Step], None]] = None, trace=False, snapshots=False):
    """Run one MMAS/MMAS* execution on ``f``.

    ``observer`` is called synchronously after every iteration. ``trace``
    records a ``RunTrace``; ``snapshots`` additionally stores the pheromone
    vector of every iteration (O(n) memory per iteration).
    """
    if f.n != config.n:
        raise ValueError(f"function has n = {f.n} but config has n = {config.n}")
    if f.kind == KIND_CALLABLE and getattr(f, "target", None) is None:
        raise ValueError(f"fitness {f.name!r} has no known optimum; supply a target value")
    trace = trace or snapshots
    n = config.n
    rng = make_rng(config.seed)
    state = init_state(n, config.rho)
    best = np.zeros(n, dtype=np.uint8)
    x = np.zeros(n, dtype=np.uint8)

    if observer is None and not trace and f.kind != KIND_CALLABLE:
        it, found = kernels.run_loop(
            state.tau, best, x, state.rho, state.lo, state.hi, f.kind,
            f.kernel_weights, config.variant.accepts_equal, int(config.max_iterations), rng,
        )
        return RunResult(int(it) if found else None, best, int(it))
    return _run_stepped(config, f, rng, state, best, x, observer, trace, snapshots)


def _run_stepped(config, f, rng, state, best, x, observer, trace, snapshots):
    from mmaslinear.theory.levels import LevelClassifier

    n = config.n
    accept_equal = config.variant.accepts_equal
    comparator = _Comparator(f)
    callable_target = f.kind == KIND_CALLABLE
    classifier = LevelClassifier(f) if (trace and f.linear) else None
    rows = []
    snaps = [] if snapshots else None
    initial_tau = state.tau.copy()
    best_ones = 0
    best_value = 0.0
    best_level = 0
    found = False
    it = 0
    while it < config.max_iterations:
        it += 1
        ones = kernels.sample_into(state.tau, rng, x)
        key = comparator.key(x, ones)
        if it == 1:
            cmp = 1
        else:
            cmp = comparator.compare(x, key, best)
        accepted = cmp > 0 or (cmp == 0 and accept_equal)
        replaced = False
        if accepted:
            replaced = it == 1 or not np.array_equal(x, best)
            best[:] = x
            best_ones = ones
            comparator.best_key = key
            if trace and (replaced or it == 1):
                best_value = float(f.evaluate(best))
                best_level = (
                    classifier.fitness_level(best) if classifier else _pykernels.leading_ones(best)
                )
        state.reinforce(best)
        if trace:
            if classifier is not None:
                w = classifier.canonical_wps(state.tau)
                plevel = classifier.level_of_sum(w)
            else:
                w = float("nan")
                plevel = NO_LEVEL
            rows.append((
                it, best_value, w, best_level, plevel, accepted, replaced,
                int(np.count_nonzero(state.at_border(best))), best_ones,
                _pykernels.leading_ones(best),
            ))
            if snaps is not None:
                snaps.append(state.tau.copy())
        if observer is not None:
            observer(Step(it, n, state.rho, _readonly(state.tau), _readonly(x),
                          _readonly(best), accepted, replaced))
        if (f.is_optimal(best) if callable_target else best_ones == n):
            found = True
            break

    run_trace = None
    if trace:
        records = np.array(rows, dtype=list(TRACE_FIELDS))
        run_trace = RunTrace(
            n=n, rho=state.rho, variant=config.variant, function=f.name, records=records,
            initial_tau=initial_tau,
            snapshots=np.array(snaps).reshape(len(snaps), n) if snaps is not None else None,
        )
    return RunResult(it if found else None, best, it, run_trace)
