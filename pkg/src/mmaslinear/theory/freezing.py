"""Freezing: how fast repeated reinforcement of one x* pushes pheromones to the borders.

Reinforcing a fixed x* shrinks the distance of every bit to its border by a
factor (1 - rho) per update, so after ceil(ln(n) / rho) updates every bit
has reached it.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from mmaslinear.pheromone import PheromoneState, as_bits


def freezing_bound(n, rho):
    """ceil(ln(n) / rho), the number of updates after which all bits are frozen."""
    return math.ceil(math.log(n) / rho)


def saturation_times(state, x_star, max_updates=None):
    """Per-bit number of reinforcements of ``x_star`` until the bit sits on its border.

    Bits already on their border report 0, bits still off it after
    ``max_updates`` (default: the freezing bound) report -1. ``state`` is not
    modified.
    """
    x_star = as_bits(x_star, state.n)
    if max_updates is None:
        max_updates = freezing_bound(state.n, state.rho)
    work = state.copy()
    times = np.full(state.n, -1, dtype=np.int64)
    times[work.at_border(x_star)] = 0
    for u in range(1, max_updates + 1):
        if np.all(times >= 0):
            break
        work.reinforce(x_star)
        times[(times < 0) & work.at_border(x_star)] = u
    return times


@dataclass
class FreezingWindow:
    """A maximal stretch of iterations with the same x*."""

    start: int
    updates: int = 0
    lag: Optional[int] = None
    times: np.ndarray = field(default=None, repr=False)

    @property
    def saturated(self):
        return self.lag is not None


class FreezingTracker:
    """Observer checking freezing on a live run.

    A window opens whenever x* is replaced by a different string (under MMAS
    also by an equally good one) and lasts until the next replacement. For
    each window the tracker records after how many updates every bit had
    reached its border; a window that survives ``bound`` updates without
    freezing completely is a violation.
    """

    def __init__(self, n, rho):
        self.n = n
        self.rho = rho
        self.bound = freezing_bound(n, rho)
        self.lo = 1.0 / n
        self.hi = 1.0 - self.lo
        self.windows: List[FreezingWindow] = []
        self.violations: List[FreezingWindow] = []
        self._prev_tau = np.full(n, 0.5)
        self._best = None

    def _border_mask(self, tau, best):
        return np.where(best.astype(bool), tau == self.hi, tau == self.lo)

    def __call__(self, step):
        if step.replaced or not self.windows:
            self._best = np.array(step.best)
            w = FreezingWindow(start=step.iteration, times=np.full(self.n, -1, dtype=np.int64))
            w.times[self._border_mask(self._prev_tau, self._best)] = 0
            self.windows.append(w)
        w = self.windows[-1]
        w.updates += 1
        if w.lag is None:
            newly = (w.times < 0) & self._border_mask(step.tau, self._best)
            w.times[newly] = w.updates
            if np.all(w.times >= 0):
                w.lag = int(w.times.max())
            elif w.updates == self.bound:
                self.violations.append(w)
        self._prev_tau = np.array(step.tau)

    @property
    def max_lag(self):
        lags = [w.lag for w in self.windows if w.lag is not None]
        return max(lags) if lags else None

    @property
    def complete_windows(self):
        """Windows that lasted at least ``bound`` updates or froze."""
        return [w for w in self.windows if w.saturated or w.updates >= self.bound]
