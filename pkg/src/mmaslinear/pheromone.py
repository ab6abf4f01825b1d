"""Pheromones on the chain construction graph.

Bit ``i`` can be set by the 1-edge or the 0-edge leaving node ``v_i``. Only
the 1-edge pheromones are stored: the two edges of a bit always sum to 1, so
the 0-edge value is ``1 - tau[i]`` and the probability of taking the 1-edge
is ``tau[i]`` itself.
"""

import numpy as np

from mmaslinear._backend import kernels


def borders(n):
    """The pheromone interval ``(1/n, 1 - 1/n)``."""
    lo = 1.0 / n
    return lo, 1.0 - lo


def as_bits(x, n=None):
    """Coerce a bit string, a sequence of 0/1 or an array to a uint8 array."""
    if isinstance(x, str):
        x = [int(c) for c in x]
    bits = np.ascontiguousarray(x, dtype=np.uint8)
    if bits.ndim != 1 or np.any(bits > 1):
        raise ValueError("a bit solution is a 1-d sequence of 0/1 values")
    if n is not None and bits.shape[0] != n:
        raise ValueError(f"bit solution has length {bits.shape[0]}, expected {n}")
    return bits


def bits_to_str(x):
    return "".join("1" if b else "0" for b in x)


class PheromoneState:
    """1-edge pheromones of an ``n``-bit construction graph.

    ``tau`` is owned by the state; ``update`` returns a new state while the
    engine mutates a private state in place through ``reinforce``.
    """

    __slots__ = ("n", "rho", "lo", "hi", "tau")

    def __init__(self, n, rho, tau=None):
        n = int(n)
        if n < 2:
            raise ValueError(f"n must be at least 2, got {n}")
        rho = float(rho)
        if not 0.0 < rho <= 1.0:
            raise ValueError(f"rho must lie in (0, 1], got {rho}")
        self.n = n
        self.rho = rho
        self.lo, self.hi = borders(n)
        if tau is None:
            self.tau = np.full(n, 0.5)
        else:
            tau = np.array(tau, dtype=np.float64)
            if tau.shape != (n,):
                raise ValueError(f"tau must have shape ({n},), got {tau.shape}")
            if np.any(tau < self.lo) or np.any(tau > self.hi):
                raise ValueError("pheromones must lie within [1/n, 1 - 1/n]")
            self.tau = tau

    @property
    def zero_edges(self):
        return 1.0 - self.tau

    def copy(self):
        return PheromoneState(self.n, self.rho, self.tau.copy())

    def reinforce(self, best):
        """Evaporate and reward the path of ``best`` in place."""
        kernels.update_inplace(self.tau, best, self.rho, self.lo, self.hi)

    def at_border(self, best):
        """Boolean mask of bits sitting exactly on the border ``best`` pulls them to."""
        return np.where(best.astype(bool), self.tau == self.hi, self.tau == self.lo)

    def __eq__(self, other):
        if not isinstance(other, PheromoneState):
            return NotImplemented
        return (self.n, self.rho) == (other.n, other.rho) and np.array_equal(self.tau, other.tau)

    def __repr__(self):
        return f"PheromoneState(n={self.n}, rho={self.rho}, tau={self.tau!r})"


def init_state(n, rho):
    """All pheromones at 1/2."""
    return PheromoneState(n, rho)


def sample_solution(state, rng):
    """Construct one solution: bit ``i`` is 1 with probability ``tau[i]``.

    Consumes exactly ``n`` uniform doubles from ``rng``, bit 1 first, also for
    bits whose pheromone sits on a border.
    """
    out = np.empty(state.n, dtype=np.uint8)
    kernels.sample_into(state.tau, rng, out)
    return out


def update(state, best):
    """Pheromones after one update with respect to ``best``.

    Rewarded 1-edges move to ``min((1-rho) tau + rho, 1 - 1/n)``, the others
    to ``max((1-rho) tau, 1/n)``; clamped values are the border constants.
    """
    best = as_bits(best, state.n)
    new = state.copy()
    new.reinforce(best)
    return new
