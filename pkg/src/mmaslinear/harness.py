"""Parameter sweeps: runtime against n and against 1/rho, with aggregation and output.

Each run's seed is derived from the master seed, the grid point's content
(function, variant, n and the bit pattern of rho) and the replicate index,
so results are identical for any degree of parallelism and a grid point's
numbers do not change when other points are added to the plan.

Plan files are INI files with a single ``[plan]`` section::

    [plan]
    functions = onemax, binval, random_linear
    variants = mmas, mmas-star
    n_values = 50, 100, 200
    rho_values = 1.0, 0.5, 0.1, 0.05
    # instead of rho_values: rho = 1/x for x = start, start+step, ..., stop
    # rho_inverse = 501:1001:50
    replicates = 200
    master_seed = 1
    max_iterations = 100000000
    random_linear_mode = per_run

``functions`` entries are ``onemax``, ``binval``, ``leadingones``,
``random_linear`` or ``file:<path>``; ``random_linear_mode`` is ``per_run``
(fresh weights for every run) or ``fixed_instance`` (one weight vector per n
shared by all runs).
"""

import configparser
import csv
import json
import math
import os
import re
import shutil
import statistics
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple

import numpy as np

from mmaslinear.engine import DEFAULT_MAX_ITERATIONS, AlgorithmConfig, Variant, run
from mmaslinear.fitness import FUNCTION_NAMES, make_function
from mmaslinear.rng import INSTANCE_STREAM, derive_seed, float_key, label_key, make_rng

RANDOM_LINEAR_MODES = ("per_run", "fixed_instance")
SUMMARY_COLUMNS = (
    "function", "variant", "n", "rho", "replicates", "censored",
    "mean", "stddev", "median", "min", "max", "seed",
)
FIT_COLUMNS = ("function", "variant", "n", "slope", "intercept", "r_squared", "lo", "hi", "points")


class PlanError(ValueError):
    """A malformed plan; ``key`` names the offending field."""

    def __init__(self, key, message):
        super().__init__(f"plan key {key!r}: {message}")
        self.key = key


class OutputError(OSError):
    def __init__(self, path, cause):
        super().__init__(f"cannot write {path}: {cause}")
        self.path = path


def rho_from_inverse(start, stop, step):
    """rho = 1/x for x = start, start + step, ..., up to and including stop."""
    if start < 1 or step < 1 or stop < start:
        raise ValueError("need 1 <= start <= stop and step >= 1")
    return tuple(1.0 / x for x in range(start, stop + 1, step))


def _check_function(spec):
    if spec in FUNCTION_NAMES or (spec.startswith("file:") and len(spec) > 5):
        return spec
    raise PlanError("functions", f"unknown function {spec!r}")


@dataclass(frozen=True)
class GridPoint:
    function: str
    variant: Variant
    n: int
    rho: float

    def key(self):
        return (label_key(self.function), label_key(self.variant.value), self.n, float_key(self.rho))


@dataclass(frozen=True)
class ExperimentPlan:
    functions: Tuple[str, ...]
    variants: Tuple[Variant, ...]
    n_values: Tuple[int, ...]
    rho_values: Tuple[float, ...]
    replicates: int
    master_seed: int = 0
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    random_linear_mode: str = "per_run"

    def __post_init__(self):
        def fix(name, value):
            object.__setattr__(self, name, value)

        if isinstance(self.functions, str):
            fix("functions", (self.functions,))
        fix("functions", tuple(_check_function(s) for s in self.functions))
        try:
            fix("variants", tuple(Variant.parse(v) for v in self.variants))
        except ValueError as exc:
            raise PlanError("variants", str(exc)) from None
        fix("n_values", tuple(int(n) for n in self.n_values))
        fix("rho_values", tuple(float(r) for r in self.rho_values))
        for name in ("functions", "variants", "n_values", "rho_values"):
            if not getattr(self, name):
                raise PlanError(name, "must not be empty")
        if any(n < 2 for n in self.n_values):
            raise PlanError("n_values", "every n must be at least 2")
        if any(not 0.0 < r <= 1.0 for r in self.rho_values):
            raise PlanError("rho_values", "every rho must lie in (0, 1]")
        if int(self.replicates) < 1:
            raise PlanError("replicates", "must be a positive integer")
        if int(self.max_iterations) < 1:
            raise PlanError("max_iterations", "must be a positive integer")
        if not 0 <= int(self.master_seed) < 2**64:
            raise PlanError("master_seed", "must be an unsigned 64-bit integer")
        if self.random_linear_mode not in RANDOM_LINEAR_MODES:
            raise PlanError("random_linear_mode", f"must be one of {', '.join(RANDOM_LINEAR_MODES)}")

    def grid(self):
        return [
            GridPoint(f, v, n, rho)
            for f in self.functions
            for v in self.variants
            for n in self.n_values
            for rho in self.rho_values
        ]

    def to_dict(self):
        return {
            "functions": list(self.functions),
            "variants": [v.value for v in self.variants],
            "n_values": list(self.n_values),
            "rho_values": list(self.rho_values),
            "replicates": int(self.replicates),
            "master_seed": int(self.master_seed),
            "max_iterations": int(self.max_iterations),
            "random_linear_mode": self.random_linear_mode,
        }


_PLAN_KEYS = {
    "functions", "variants", "n_values", "rho_values", "rho_inverse", "replicates",
    "master_seed", "max_iterations", "random_linear_mode",
}


def _split(text):
    return [item.strip() for item in text.split(",") if item.strip()]


def parse_plan(text, source="<plan>"):
    """Parse the INI plan format described in the module docstring."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise PlanError("<syntax>", str(exc).splitlines()[0]) from None
    if not parser.has_section("plan"):
        raise PlanError("[plan]", "missing [plan] section")
    extra = [s for s in parser.sections() if s != "plan"]
    if extra:
        raise PlanError(f"[{extra[0]}]", "unknown section")
    raw = dict(parser.items("plan"))
    for key in raw:
        if key not in _PLAN_KEYS:
            raise PlanError(key, "unknown key")

    def need(key):
        if key not in raw:
            raise PlanError(key, "missing")
        return raw[key]

    def ints(key, value):
        try:
            return [int(v) for v in _split(value)]
        except ValueError:
            raise PlanError(key, f"expected integers, got {value!r}") from None

    def one_int(key, default=None):
        if key not in raw:
            if default is None:
                raise PlanError(key, "missing")
            return default
        values = ints(key, raw[key])
        if len(values) != 1:
            raise PlanError(key, f"expected one integer, got {raw[key]!r}")
        return values[0]

    if "rho_values" in raw and "rho_inverse" in raw:
        raise PlanError("rho_inverse", "give either rho_values or rho_inverse, not both")
    if "rho_inverse" in raw:
        parts = raw["rho_inverse"].split(":")
        try:
            start, stop, step = (int(p) for p in parts)
            rhos = rho_from_inverse(start, stop, step)
        except ValueError:
            raise PlanError("rho_inverse", f"expected start:stop:step, got {raw['rho_inverse']!r}") from None
    else:
        text = need("rho_values")
        try:
            rhos = tuple(float(v) for v in _split(text))
        except ValueError:
            raise PlanError("rho_values", f"expected numbers, got {text!r}") from None

    return ExperimentPlan(
        functions=tuple(_split(need("functions"))),
        variants=tuple(_split(raw.get("variants", "mmas, mmas-star"))),
        n_values=tuple(ints("n_values", need("n_values"))),
        rho_values=rhos,
        replicates=one_int("replicates"),
        master_seed=one_int("master_seed", 0),
        max_iterations=one_int("max_iterations", DEFAULT_MAX_ITERATIONS),
        random_linear_mode=raw.get("random_linear_mode", "per_run").strip(),
    )


def load_plan(path):
    with open(path, encoding="utf-8") as fh:
        return parse_plan(fh.read(), source=str(path))


def plan_text(plan):
    """Render a plan in the file format."""
    d = plan.to_dict()
    lines = ["[plan]"]
    for key in ("functions", "variants", "n_values", "rho_values"):
        lines.append(f"{key} = " + ", ".join(repr(v) if isinstance(v, float) else str(v) for v in d[key]))
    for key in ("replicates", "master_seed", "max_iterations", "random_linear_mode"):
        lines.append(f"{key} = {d[key]}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class RunSummary:
    """Aggregate of all replicates at one grid point.

    Statistics cover uncensored runs only; ``censored`` counts the runs that
    hit the iteration cap. ``times`` holds the uncensored optimization times
    in replicate order.
    """

    function: str
    variant: str
    n: int
    rho: float
    replicates: int
    censored: int
    mean: float
    stddev: float
    median: float
    min: float
    max: float
    seed: int
    times: Tuple[int, ...] = field(default=(), repr=False)

    def row(self):
        return {c: getattr(self, c) for c in SUMMARY_COLUMNS}


def summarize(point, times, master_seed):
    done = [t for t in times if t is not None]
    arr = np.array(done, dtype=np.float64)
    nan = float("nan")
    return RunSummary(
        function=point.function,
        variant=point.variant.value,
        n=point.n,
        rho=point.rho,
        replicates=len(times),
        censored=len(times) - len(done),
        mean=float(arr.mean()) if done else nan,
        stddev=float(arr.std(ddof=1)) if len(done) > 1 else nan,
        median=float(np.median(arr)) if done else nan,
        min=float(arr.min()) if done else nan,
        max=float(arr.max()) if done else nan,
        seed=int(master_seed),
        times=tuple(int(t) for t in done),
    )


def run_seed(master_seed, point, replicate):
    """64-bit seed of one replicate at one grid point."""
    return derive_seed(master_seed, *point.key(), replicate)


def _instance(plan, point, seed):
    if point.function != "random_linear":
        return make_function(point.function, point.n)
    if plan.random_linear_mode == "fixed_instance":
        inst_seed = derive_seed(plan.master_seed, label_key("instance"), label_key(point.function), point.n)
        return make_function("random_linear", point.n, make_rng(inst_seed, INSTANCE_STREAM))
    return make_function("random_linear", point.n, make_rng(seed, INSTANCE_STREAM))


def _run_chunk(plan, point, replicates):
    times = []
    shared = None if point.function == "random_linear" else make_function(point.function, point.n)
    for r in replicates:
        seed = run_seed(plan.master_seed, point, r)
        f = shared if shared is not None else _instance(plan, point, seed)
        config = AlgorithmConfig(point.variant, point.n, point.rho, plan.max_iterations, seed)
        times.append(run(config, f).optimization_time)
    return times


def execute(plan, parallelism=1, progress=None):
    """Run every grid point ``plan.replicates`` times and aggregate per point.

    ``progress``, if given, is called with (points done, points total).
    Results do not depend on ``parallelism``.
    """
    if parallelism < 1:
        raise ValueError("parallelism must be a positive integer")
    grid = plan.grid()
    for point in grid:
        if point.function.startswith("file:"):
            make_function(point.function, point.n)  # fail early on bad files or wrong n
    reps = range(plan.replicates)
    summaries = []
    if parallelism == 1:
        for idx, point in enumerate(grid):
            summaries.append(summarize(point, _run_chunk(plan, point, reps), plan.master_seed))
            if progress:
                progress(idx + 1, len(grid))
        return summaries

    chunk = max(1, math.ceil(plan.replicates / (4 * parallelism)))
    tasks = [(p, range(s, min(s + chunk, plan.replicates)))
             for p in grid for s in range(0, plan.replicates, chunk)]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        futures = [pool.submit(_run_chunk, plan, p, r) for p, r in tasks]
        by_point = {}
        for (point, r), fut in zip(tasks, futures):
            by_point.setdefault(point, {})[r.start] = fut.result()
    for idx, point in enumerate(grid):
        parts = by_point[point]
        times = [t for start in sorted(parts) for t in parts[start]]
        summaries.append(summarize(point, times, plan.master_seed))
        if progress:
            progress(idx + 1, len(grid))
    return summaries


@dataclass(frozen=True)
class RegressionFit:
    """Unweighted least squares of mean optimization time on 1/rho over (lo, hi]."""

    slope: float
    intercept: float
    r_squared: float
    lo: float
    hi: float
    points: int
    function: str = ""
    variant: str = ""
    n: int = 0

    def row(self):
        return {c: getattr(self, c) for c in FIT_COLUMNS}


def regress_tail(summaries, interval=(500.0, 1000.0)):
    """Fit mean time against 1/rho for summaries with 1/rho in the half-open ``(lo, hi]``."""
    lo, hi = interval
    chosen = [s for s in summaries if lo < 1.0 / s.rho <= hi and not math.isnan(s.mean)]
    if len(chosen) < 3:
        raise ValueError(f"need at least 3 points with 1/rho in ({lo}, {hi}], got {len(chosen)}")
    series = {(s.function, s.variant, s.n) for s in chosen}
    if len(series) > 1:
        raise ValueError("summaries mix several (function, variant, n) series")
    x = [1.0 / s.rho for s in chosen]
    y = [s.mean for s in chosen]
    slope, intercept = statistics.linear_regression(x, y)
    my = statistics.fmean(y)
    ss_tot = sum((v - my) ** 2 for v in y)
    ss_res = sum((v - (slope * u + intercept)) ** 2 for u, v in zip(x, y))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    function, variant, n = series.pop()
    return RegressionFit(slope, intercept, r2, lo, hi, len(chosen), function, variant, n)


def _cell(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, float):
        return repr(value)
    return value


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return _json_value(float(value))
    return value


def _rows(items):
    """(columns, list of row dicts) for summaries, fits or drift witnesses."""
    from mmaslinear.theory.drift import WITNESS_COLUMNS, DriftWitness

    if isinstance(items, (RunSummary, RegressionFit, DriftWitness)):
        items = [items]
    items = list(items)
    if not items:
        return SUMMARY_COLUMNS, []
    first = items[0]
    if isinstance(first, RunSummary):
        return SUMMARY_COLUMNS, [s.row() for s in items]
    if isinstance(first, RegressionFit):
        return FIT_COLUMNS, [f.row() for f in items]
    if isinstance(first, DriftWitness):
        return WITNESS_COLUMNS, [{c: getattr(w, c) for c in WITNESS_COLUMNS} for w in items]
    raise TypeError(f"cannot emit {type(first).__name__}")


def emit(items, fmt, path, columns=None):
    """Write summaries, regression fits or drift witnesses as CSV or JSON.

    An empty list produces a header-only CSV (summary columns unless
    ``columns`` is given) or an empty JSON list.
    """
    cols, rows = _rows(items)
    if columns is not None:
        cols = columns
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            if fmt == "csv":
                writer = csv.writer(fh)
                writer.writerow(cols)
                for row in rows:
                    writer.writerow([_cell(row[c]) for c in cols])
            elif fmt == "json":
                json.dump([{c: _json_value(row[c]) for c in cols} for row in rows], fh, indent=2)
                fh.write("\n")
            else:
                raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise OutputError(path, exc.strerror or exc) from exc


def output_stem(function, variant):
    """File stem ``<function>_<variant>`` made safe for file names."""
    if function.startswith("file:"):
        base = os.path.splitext(os.path.basename(function[5:]))[0]
        function = f"file-{base}"
    return re.sub(r"[^A-Za-z0-9._-]+", "-", function) + "_" + variant


def write_sweep(summaries, plan, out_dir, formats=("csv", "json"), version="0"):
    """Write one file per (function, variant) plus ``manifest.json`` into ``out_dir``.

    Files are written to a scratch directory first and moved into place only
    when all of them succeeded; on failure nothing partial is left behind.
    Returns the written paths.
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
        scratch = tempfile.mkdtemp(prefix=".partial-", dir=out_dir)
    except OSError as exc:
        raise OutputError(out_dir, exc.strerror or exc) from exc
    try:
        groups = {}
        for s in summaries:
            groups.setdefault((s.function, s.variant), []).append(s)
        names = []
        for (function, variant), rows in groups.items():
            for fmt in formats:
                name = f"{output_stem(function, variant)}.{fmt}"
                emit(rows, fmt, os.path.join(scratch, name))
                names.append(name)
        manifest = {
            "tool": "mmaslinear",
            "version": version,
            "plan": plan.to_dict(),
            "master_seed": int(plan.master_seed),
            "files": names,
        }
        with open(os.path.join(scratch, "manifest.json"), "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
        names.append("manifest.json")
        written = []
        for name in names:
            target = os.path.join(out_dir, name)
            os.replace(os.path.join(scratch, name), target)
            written.append(target)
        return written
    except OSError as exc:
        raise OutputError(out_dir, exc.strerror or exc) from exc
    finally:
        shutil.rmtree(scratch, ignore_errors=True)
