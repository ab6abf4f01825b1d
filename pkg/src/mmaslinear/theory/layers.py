"""Layers of pheromones and rediscovery of leading ones.

Sorted ascending, pheromones tau_(1) <= tau_(2) <= ... form an
(i, ell)-layer when tau_(j) >= min(1 - 1/n, 1 - (1 - rho)^(j ell)) for every
j <= i. In a layer the whole block is sampled as ones with probability
bounded below in terms of ell and rho alone.
"""

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from mmaslinear import _pykernels


def layer_thresholds(n, rho, ell, count):
    j = np.arange(1, count + 1)
    return np.minimum(1.0 - 1.0 / n, 1.0 - (1.0 - rho) ** (j * ell))


def layer_check(state, ell, bits=None):
    """Largest i such that the i smallest pheromones form an (i, ell)-layer.

    ``bits`` restricts the pheromones considered (default: all n).
    """
    if ell < 1:
        raise ValueError("ell must be a positive integer")
    tau = state.tau if bits is None else state.tau[np.asarray(bits, dtype=np.intp)]
    ordered = np.sort(tau)
    ok = ordered >= layer_thresholds(state.n, state.rho, ell, ordered.shape[0])
    failed = np.flatnonzero(~ok)
    return int(failed[0]) if failed.size else int(ordered.shape[0])


def rediscovery_probability(state, bits):
    """Exact probability that all ``bits`` are sampled as ones."""
    return float(np.prod(state.tau[np.asarray(bits, dtype=np.intp)]))


def estimate_rediscovery(state, bits, samples, rng):
    """Fraction of ``samples`` fresh ant solutions with all ``bits`` set."""
    bits = np.asarray(bits, dtype=np.intp)
    hits = 0
    remaining = samples
    while remaining:
        m = min(remaining, 65536)
        draws = rng.random((m, bits.shape[0])) < state.tau[bits]
        hits += int(np.count_nonzero(draws.all(axis=1)))
        remaining -= m
    return hits / samples


def rediscovery_reference(ell, rho):
    """exp(-5 / (ell rho)): reported next to estimates, not a pass/fail threshold."""
    return math.exp(-5.0 / (ell * rho))


@dataclass
class LeadingOnesViolation:
    iteration: int
    kind: str
    detail: str


@dataclass
class LeadingOnesTracker:
    """Observer for runs on BinVal or LeadingOnes.

    Checks that the leading ones of x* are never lost and that pheromones on
    those bits rise strictly at every update until they hit 1 - 1/n. Also
    records the (i, ell)-layer index of the leading-one block and the exact
    probability of resampling it.
    """

    n: int
    rho: float
    ell: int = 0
    leading_ones: List[int] = field(default_factory=list)
    layer_index: List[int] = field(default_factory=list)
    rediscovery: List[float] = field(default_factory=list)
    violations: List[LeadingOnesViolation] = field(default_factory=list)

    def __post_init__(self):
        if self.ell <= 0:
            self.ell = math.ceil(5.0 / self.rho)
        self._prev_tau = np.full(self.n, 0.5)
        self._hi = 1.0 - 1.0 / self.n

    def __call__(self, step):
        lo_now = _pykernels.leading_ones(step.best)
        if self.leading_ones and lo_now < self.leading_ones[-1]:
            self.violations.append(LeadingOnesViolation(
                step.iteration, "lost", f"leading ones fell from {self.leading_ones[-1]} to {lo_now}"))
        kept = self.leading_ones[-1] if self.leading_ones else 0
        block = slice(0, min(kept, lo_now))
        before = self._prev_tau[block]
        after = np.asarray(step.tau[block])
        stalled = (after <= before) & (before < self._hi)
        if np.any(stalled):
            bit = int(np.flatnonzero(stalled)[0])
            self.violations.append(LeadingOnesViolation(
                step.iteration, "stalled", f"pheromone of leading bit {bit} did not rise"))
        self.leading_ones.append(lo_now)
        if lo_now:
            bits = np.arange(lo_now)
            tau = np.asarray(step.tau)
            ordered = np.sort(tau[:lo_now])
            ok = ordered >= layer_thresholds(self.n, self.rho, self.ell, lo_now)
            failed = np.flatnonzero(~ok)
            self.layer_index.append(int(failed[0]) if failed.size else lo_now)
            self.rediscovery.append(float(np.prod(tau[bits])))
        else:
            self.layer_index.append(0)
            self.rediscovery.append(1.0)
        self._prev_tau = np.array(step.tau)
