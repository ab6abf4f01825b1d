"""Exact small-scale probabilities of the number of ones in a sampled solution.

Bits are sampled independently, so the number of ones follows a
Poisson-binomial law. ``exact_ones_distribution`` computes it by dynamic
programming; ``enumerate_ones_distribution`` by summing over all 2^n
outcomes and exists only to cross-check the former.
"""

import itertools
import math

import numpy as np

MAX_EXACT_N = 30
MAX_ENUMERATION_N = 20


def _probabilities(tau, limit):
    p = np.asarray(getattr(tau, "tau", tau), dtype=np.float64)
    if p.ndim != 1:
        raise ValueError("expected a 1-d vector of probabilities")
    if p.shape[0] > limit:
        raise ValueError(f"n = {p.shape[0]} exceeds the exact-computation guard of {limit}")
    return p


def exact_ones_distribution(tau):
    """P(#ones = k) for k = 0..n. Guarded to n <= 30."""
    p = _probabilities(tau, MAX_EXACT_N)
    dist = np.zeros(p.shape[0] + 1)
    dist[0] = 1.0
    for m, q in enumerate(p, 1):
        # dist[k] <- dist[k] (1 - q) + dist[k-1] q, for k = m down to 0
        dist[1:m + 1] = dist[1:m + 1] * (1.0 - q) + dist[:m] * q
        dist[0] *= 1.0 - q
    return dist


def enumerate_ones_distribution(tau):
    """Same law by brute force over all 2^n outcomes. Guarded to n <= 20."""
    p = _probabilities(tau, MAX_ENUMERATION_N)
    n = p.shape[0]
    dist = [0.0] * (n + 1)
    for outcome in itertools.product((0, 1), repeat=n):
        prob = 1.0
        for bit, q in zip(outcome, p):
            prob *= q if bit else 1.0 - q
        dist[sum(outcome)] += prob
    return np.array(dist)


def gleser_premise(tau, tau_prime):
    """For every j, the j least entries of tau sum to at least those of tau_prime."""
    a = np.sort(np.asarray(tau, dtype=np.float64))
    b = np.sort(np.asarray(tau_prime, dtype=np.float64))
    if a.shape != b.shape:
        raise ValueError("pheromone vectors differ in length")
    return bool(np.all(np.cumsum(a) >= np.cumsum(b)))


def gleser_threshold(tau_prime):
    """floor(lambda + 1) with lambda the sum of tau_prime."""
    return math.floor(float(np.sum(tau_prime)) + 1.0)


def gleser_verify(tau, tau_prime, tol=1e-12, k=None):
    """P_tau(#ones >= k) >= P_tau'(#ones >= k), by default for k = floor(sum(tau') + 1).

    Both sides from ``exact_ones_distribution``; ``tol`` absorbs the rounding
    of the two dynamic programs. Note that for non-integer sums this default
    threshold admits counterexamples such as tau = (0.4, 0.4),
    tau' = (0, 0.8). No counterexample is known for k >= sum(tau') + 2.
    """
    if len(tau) != len(tau_prime):
        raise ValueError("pheromone vectors differ in length")
    if k is None:
        k = gleser_threshold(tau_prime)
    if k > len(tau):
        return True
    lhs = exact_ones_distribution(tau)[k:].sum()
    rhs = exact_ones_distribution(tau_prime)[k:].sum()
    return bool(lhs >= rhs - tol)


def random_premise_pair(n, rng, max_tries=1000):
    """A random pair (tau, tau') in [0, 1]^n with ``gleser_premise(tau, tau')`` true.

    tau is built from tau' by random Robin-Hood transfers between pairs of
    entries (which keep the total and raise the sums of least entries) and
    occasional non-negative increments; pairs that lose the premise to
    rounding are redrawn.
    """
    for _ in range(max_tries):
        tau_prime = rng.random(n)
        tau = tau_prime.copy()
        for _ in range(int(rng.integers(1, 2 * n + 1))):
            a, b = rng.choice(n, size=2, replace=False)
            lo, hi = (a, b) if tau[a] <= tau[b] else (b, a)
            delta = rng.random() * (tau[hi] - tau[lo]) / 2.0
            tau[lo] += delta
            tau[hi] -= delta
        if rng.random() < 0.3:
            bump = rng.random(n) * (rng.random(n) < 0.3)
            tau = np.minimum(tau + bump * (1.0 - tau), 1.0)
        if gleser_premise(tau, tau_prime):
            return tau, tau_prime
    raise RuntimeError("could not draw a premise-satisfying pair")
