"""Pheromone drift on OneMax and saturation of pheromone levels.

``drift_check_onemax`` replays a trace with pheromone snapshots and checks,
step by step, the one-step gain of the pheromone sum towards the current
number of ones in x*, its multi-step geometric form, and that a pheromone
sum which has reached v(a_m) with x* holding more than m ones never drops
below v(a_m) again. ``saturation_check`` checks that ceil(ln(n)/rho)
iterations with x* on fitness level >= i leave the pheromones on pheromone
level >= i, for any linear function.

Violations are collected, not raised: a violation means a bug in the engine
or in these checks.
"""

import csv
from dataclasses import dataclass, field
from typing import List

import numpy as np

from mmaslinear.theory.freezing import freezing_bound
from mmaslinear.theory.levels import LevelClassifier, alpha

TOLERANCE = 1e-9


@dataclass(frozen=True)
class DriftWitness:
    """One application of the one-step drift inequality.

    ``lhs`` is f(tau+) - alpha_i, ``rhs`` is (f(tau) - alpha_i)(1 - rho) +
    (j - i) rho. ``escaped`` marks steps where f(tau+) >= v(a_{i+1}), for which
    the inequality is not required.
    """

    iteration: int
    i: int
    j: int
    lhs: float
    rhs: float
    escaped: bool
    floor_gap: float = 0.0

    def holds(self, tol=TOLERANCE):
        return self.escaped or (self.lhs >= self.rhs - tol and self.floor_gap >= -tol)


@dataclass(frozen=True)
class MultiStepViolation:
    start: int
    iteration: int
    i: int
    j: int
    t: int
    gain: float
    bound: float


@dataclass(frozen=True)
class FloorViolation:
    iteration: int
    floor: int
    wps: float
    threshold: float


@dataclass
class DriftReport:
    witnesses: List[DriftWitness] = field(default_factory=list)
    violations: List[DriftWitness] = field(default_factory=list)
    multistep_checks: int = 0
    multistep_violations: List[MultiStepViolation] = field(default_factory=list)
    floor_checks: int = 0
    floor_violations: List[FloorViolation] = field(default_factory=list)

    @property
    def ok(self):
        return not (self.violations or self.multistep_violations or self.floor_violations)

    def merge(self, other):
        self.witnesses += other.witnesses
        self.violations += other.violations
        self.multistep_checks += other.multistep_checks
        self.multistep_violations += other.multistep_violations
        self.floor_checks += other.floor_checks
        self.floor_violations += other.floor_violations
        return self


def drift_check_onemax(trace, tol=TOLERANCE):
    """Check one-step drift, multi-step drift and the no-decrease floor on a OneMax trace."""
    if trace.function != "onemax":
        raise ValueError(f"drift checks need a OneMax trace, got {trace.function!r}")
    if trace.snapshots is None:
        raise ValueError("drift checks need a trace recorded with pheromone snapshots")
    from mmaslinear.fitness import OneMax

    n, rho = trace.n, trace.rho
    levels = LevelClassifier(OneMax(n))
    v = levels.v
    keep = 1.0 - rho
    ones = trace["best_ones"]
    report = DriftReport()
    floor = -1
    windows = []  # [start, i, j, t]
    w_before = levels.canonical_wps(trace.initial_tau)
    for k in range(1, len(trace) + 1):
        w_after = levels.canonical_wps(trace.snapshots[k - 1])
        j = int(ones[k - 1])
        i = levels.level_of_sum(w_before)

        if 0 <= i < j:
            a_i = alpha(n, i)
            escaped = w_after >= v(i + 1)
            witness = DriftWitness(
                iteration=k, i=i, j=j, lhs=w_after - a_i,
                rhs=(w_before - a_i) * keep + (j - i) * rho,
                escaped=bool(escaped), floor_gap=w_after - v(i),
            )
            report.witnesses.append(witness)
            if not witness.holds(tol):
                report.violations.append(witness)
            if not any(win[1] == i and win[2] == j for win in windows):
                windows.append([k, i, j, 0])

        still_open = []
        for win in windows:
            start, wi, wj, t = win
            t += 1
            win[3] = t
            if w_after >= v(wi + 1):
                continue
            report.multistep_checks += 1
            gain = w_after - alpha(n, wi)
            bound = (wj - wi) * (1.0 - keep**t)
            if gain < bound - tol:
                report.multistep_violations.append(
                    MultiStepViolation(start, k, wi, wj, t, gain, bound))
            still_open.append(win)
        windows = still_open

        m = min(i, j - 1)
        if m > floor:
            floor = m
        if floor >= 0:
            report.floor_checks += 1
            if w_after < v(floor) - tol:
                report.floor_violations.append(FloorViolation(k, floor, w_after, v(floor)))
        w_before = w_after
    return report


@dataclass(frozen=True)
class SaturationViolation:
    iteration: int
    required_level: int
    wps: float
    threshold: float


@dataclass
class SaturationReport:
    window: int
    checks: int = 0
    violations: List[SaturationViolation] = field(default_factory=list)
    fitness_regressions: List[int] = field(default_factory=list)
    pheromone_regressions: List[int] = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def saturation_check(trace, f, tol=TOLERANCE):
    """Empirical pheromone saturation on a trace of a run on linear ``f``.

    Level regressions (fitness or pheromone level dropping between
    consecutive iterations) are listed for inspection and do not count as
    violations.
    """
    levels = LevelClassifier(f)
    L = freezing_bound(trace.n, trace.rho)
    report = SaturationReport(window=L)
    flevel = trace["fitness_level"]
    wps = trace["wps"]
    plevel = trace["pheromone_level"]
    report.fitness_regressions = (np.flatnonzero(np.diff(flevel) < 0) + 2).tolist()
    report.pheromone_regressions = (np.flatnonzero(np.diff(plevel) < 0) + 2).tolist()
    if len(trace) < L:
        return report
    required = np.lib.stride_tricks.sliding_window_view(flevel, L).min(axis=1)
    for idx, req in enumerate(required.tolist()):
        k = idx + L  # 1-based iteration closing the window
        report.checks += 1
        threshold = levels.v(req)
        if wps[k - 1] < threshold - tol:
            report.violations.append(SaturationViolation(k, req, float(wps[k - 1]), threshold))
    return report


WITNESS_COLUMNS = ("iteration", "i", "j", "lhs", "rhs", "escaped")


def write_witnesses(witnesses, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(WITNESS_COLUMNS)
        for w in witnesses:
            writer.writerow([w.iteration, w.i, w.j, repr(w.lhs), repr(w.rhs), int(w.escaped)])
