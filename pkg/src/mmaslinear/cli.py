"""Command-line interface: ``mmaslinear {run, sweep, verify, oracle}``.

Exit codes: 0 success (censored runs included), 1 usage error, 2 failed
verification or oracle check, 3 I/O error. Summaries go to standard output,
machine-readable data only to files.
"""

import argparse
import csv
import os
import sys

import numpy as np

from mmaslinear import __version__
from mmaslinear.engine import NO_LEVEL, TRACE_FIELDS, AlgorithmConfig, Variant, run
from mmaslinear.fitness import FUNCTION_NAMES, make_function
from mmaslinear.harness import (
    RANDOM_LINEAR_MODES,
    ExperimentPlan,
    OutputError,
    PlanError,
    execute,
    load_plan,
    rho_from_inverse,
    write_sweep,
)
from mmaslinear.pheromone import bits_to_str, init_state
from mmaslinear.rng import INSTANCE_STREAM, make_rng
from mmaslinear.theory.drift import drift_check_onemax, saturation_check, write_witnesses
from mmaslinear.theory.freezing import FreezingTracker, freezing_bound, saturation_times
from mmaslinear.theory.layers import LeadingOnesTracker, rediscovery_reference
from mmaslinear.theory.oracles import (
    MAX_ENUMERATION_N,
    MAX_EXACT_N,
    enumerate_ones_distribution,
    exact_ones_distribution,
    gleser_verify,
    random_premise_pair,
)

OUTPUT_ENV = "MMASLINEAR_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_IO = 0, 1, 2, 3
DISTRIBUTION_TOL = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _n(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if n < 2:
        raise argparse.ArgumentTypeError(f"n must be at least 2, got {n}")
    return n


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _rho(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}") from None
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"rho must lie in (0, 1], got {text}")
    return v


def _variant(text):
    try:
        return Variant.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _function(text):
    if text in FUNCTION_NAMES or (text.startswith("file:") and len(text) > 5):
        return text
    raise argparse.ArgumentTypeError(
        f"unknown function {text!r} (choose from {', '.join(FUNCTION_NAMES)} or file:<path>)")


def _listof(kind):
    def parse(text):
        return [kind(item.strip()) for item in text.split(",") if item.strip()]
    return parse


def _inverse_range(text):
    try:
        start, stop, step = (int(p) for p in text.split(":"))
        return rho_from_inverse(start, stop, step)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None


def build_parser():
    parser = _Parser(prog="mmaslinear", description="Simplified MAX-MIN ant systems on linear functions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{run,sweep,verify,oracle}", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("run", help="a single run")
    p.add_argument("--variant", type=_variant, default=Variant.MMAS_STAR,
                   help="mmas (accept ties) or mmas-star (strict improvements); default mmas-star")
    p.add_argument("--function", type=_function, default="onemax",
                   help=f"one of {', '.join(FUNCTION_NAMES)} or file:<path> with one weight per line")
    p.add_argument("--n", type=_n, required=True, help="number of bits (>= 2)")
    p.add_argument("--rho", type=_rho, default=0.1, help="evaporation factor in (0, 1]; default 0.1")
    p.add_argument("--seed", type=_seed, default=0, help="RNG seed; default 0")
    p.add_argument("--max-iters", type=_positive, default=10**8,
                   help="iteration cap; a capped run is reported as CENSORED")
    p.add_argument("--trace", metavar="PATH", help="write the per-iteration trace as CSV")

    p = sub.add_parser("sweep", help="a parameter sweep from a plan file or inline flags")
    p.add_argument("--plan", metavar="FILE", help="INI plan file; excludes the inline plan flags")
    p.add_argument("--function", type=_listof(_function), help="comma-separated functions")
    p.add_argument("--variant", type=_listof(_variant), help="comma-separated variants; default both")
    p.add_argument("--n", type=_listof(_n), help="comma-separated n values")
    p.add_argument("--rho", type=_listof(_rho), help="comma-separated rho values")
    p.add_argument("--rho-inverse", type=_inverse_range, metavar="START:STOP:STEP",
                   help="rho = 1/x for x in START..STOP (inclusive) by STEP")
    p.add_argument("--replicates", type=_positive, help="runs per grid point")
    p.add_argument("--seed", type=_seed, default=0, help="master seed; default 0")
    p.add_argument("--max-iters", type=_positive, default=10**8, help="iteration cap per run")
    p.add_argument("--random-linear-mode", choices=RANDOM_LINEAR_MODES, default="per_run",
                   help="fresh random weights per run or one instance per n")
    p.add_argument("--out", metavar="DIR",
                   help=f"output directory; default ${OUTPUT_ENV} or ./results")
    p.add_argument("--format", choices=("csv", "json", "both"), default="both", help="output format")
    p.add_argument("--parallel", type=_positive, default=1, help="worker processes; default 1")

    p = sub.add_parser("verify", help="check an analytical invariant on a fresh run")
    p.add_argument("--suite", choices=("freezing", "drift", "levels", "layers"), required=True,
                   help="freezing: border saturation; drift: OneMax pheromone drift; "
                        "levels: pheromone saturation on fitness levels; layers: leading ones on BinVal")
    p.add_argument("--n", type=_n, required=True, help="number of bits")
    p.add_argument("--rho", type=_rho, default=0.1, help="evaporation factor; default 0.1")
    p.add_argument("--seed", type=_seed, default=0, help="RNG seed; default 0")
    p.add_argument("--iters", type=_positive, default=20000, help="iteration cap of the run; default 20000")
    p.add_argument("--variant", type=_variant, default=Variant.MMAS_STAR, help="default mmas-star")
    p.add_argument("--function", type=_function,
                   help="fitness function (levels only; default onemax); drift uses onemax, layers binval")
    p.add_argument("--witnesses", metavar="PATH", help="drift suite: write all witnesses as CSV")

    p = sub.add_parser("oracle", help="cross-check the exact sampling oracle")
    p.add_argument("--check", choices=("gleser", "distribution"), required=True,
                   help="gleser: dominance on random premise pairs; distribution: DP against enumeration")
    p.add_argument("--n", type=_n, required=True, help=f"vector length (<= {MAX_EXACT_N})")
    p.add_argument("--trials", type=_positive, default=1000, help="random trials; default 1000")
    p.add_argument("--seed", type=_seed, default=0, help="RNG seed; default 0")
    return parser


def _say(*parts):
    print(*parts, flush=True)


def _trace_rows(trace):
    cols = [name for name, _ in TRACE_FIELDS]
    for rec in trace.records:
        row = []
        for name in cols:
            value = rec[name]
            if name == "wps":
                row.append("" if np.isnan(value) else repr(float(value)))
            elif name == "best_value":
                row.append(repr(float(value)))
            elif name == "pheromone_level" and value == NO_LEVEL:
                row.append("")
            else:
                row.append(int(value))
        yield row


def write_trace(trace, path):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([name for name, _ in TRACE_FIELDS])
            writer.writerows(_trace_rows(trace))
    except OSError as exc:
        raise OutputError(path, exc.strerror or exc) from exc


def _function_for(spec, n, seed):
    try:
        return make_function(spec, n, make_rng(seed, INSTANCE_STREAM))
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_run(args):
    f = _function_for(args.function, args.n, args.seed)
    config = AlgorithmConfig(args.variant, args.n, args.rho, args.max_iters, args.seed)
    result = run(config, f, trace=bool(args.trace))
    _say(f"variant: {config.variant.value}  function: {f.name}  n: {args.n}  rho: {args.rho!r}")
    _say(f"seed: {args.seed}")
    if result.censored:
        _say(f"optimization time: CENSORED after {result.iterations} iterations")
    else:
        _say(f"optimization time: {result.optimization_time}")
    if args.n <= 64:
        _say(f"best: {bits_to_str(result.final_best)}")
    if args.trace:
        write_trace(result.trace, args.trace)
        _say(f"trace: {args.trace}")
    return EXIT_OK


def _sweep_plan(args):
    inline = [args.function, args.variant, args.n, args.rho, args.rho_inverse, args.replicates]
    if args.plan:
        if any(v is not None for v in inline):
            raise UsageError("--plan cannot be combined with inline plan flags")
        return load_plan(args.plan)
    missing = [flag for flag, v in (("--function", args.function), ("--n", args.n),
                                    ("--replicates", args.replicates)) if v is None]
    if args.rho is None and args.rho_inverse is None:
        missing.append("--rho or --rho-inverse")
    if missing:
        raise UsageError("sweep needs --plan or " + ", ".join(missing))
    if args.rho is not None and args.rho_inverse is not None:
        raise UsageError("give either --rho or --rho-inverse, not both")
    return ExperimentPlan(
        functions=tuple(args.function),
        variants=tuple(args.variant or (Variant.MMAS, Variant.MMAS_STAR)),
        n_values=tuple(args.n),
        rho_values=tuple(args.rho if args.rho is not None else args.rho_inverse),
        replicates=args.replicates,
        master_seed=args.seed,
        max_iterations=args.max_iters,
        random_linear_mode=args.random_linear_mode,
    )


def cmd_sweep(args):
    try:
        plan = _sweep_plan(args)
    except OSError as exc:
        raise UsageError(f"cannot read plan {args.plan}: {exc.strerror or exc}") from None
    out = args.out or os.environ.get(OUTPUT_ENV) or "results"
    formats = ("csv", "json") if args.format == "both" else (args.format,)
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as exc:
        raise OutputError(out, exc.strerror or exc) from exc
    total = len(plan.grid())
    _say(f"sweep: {total} grid points x {plan.replicates} replicates, master seed {plan.master_seed}")

    def progress(done, count):
        _say(f"  [{done}/{count}]")

    try:
        summaries = execute(plan, args.parallel, progress=progress)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    written = write_sweep(summaries, plan, out, formats, version=__version__)
    _say(f"{'function':<16}{'variant':<11}{'n':>6}{'rho':>12}{'mean':>14}{'median':>10}{'censored':>10}")
    for s in summaries:
        _say(f"{s.function:<16}{s.variant:<11}{s.n:>6}{s.rho:>12.6g}{s.mean:>14.2f}"
             f"{s.median:>10.1f}{s.censored:>10}")
    for path in written:
        _say(f"wrote {path}")
    return EXIT_OK


def _verdict(ok):
    _say("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAILED


def _verify_freezing(args, f):
    n, rho = args.n, args.rho
    bound = freezing_bound(n, rho)
    rng = make_rng(args.seed, INSTANCE_STREAM)
    x_star = (rng.random(n) < 0.5).astype(np.uint8)
    # worst case: every bit starts on the wrong border
    state = init_state(n, rho)
    state.tau[:] = np.where(x_star == 1, state.lo, state.hi)
    worst = saturation_times(state, x_star)
    fixed_ok = bool(np.all(worst >= 0))
    fixed_lag = int(worst.max())
    tracker = FreezingTracker(n, rho)
    result = run(AlgorithmConfig(args.variant, n, rho, args.iters, args.seed), f, observer=tracker)
    _say(f"freezing bound ceil(ln n / rho) = {bound}")
    _say(f"fixed x* from the opposite borders: max saturation lag {fixed_lag}")
    live = tracker.max_lag
    _say(f"live run ({result.iterations} iterations): {len(tracker.windows)} windows, "
         f"{len(tracker.complete_windows)} complete, max saturation lag "
         f"{'n/a' if live is None else live}, violations {len(tracker.violations)}")
    ok = fixed_ok and fixed_lag <= bound and not tracker.violations
    if tracker.violations:
        w = tracker.violations[0]
        _say(f"first violation: window starting at iteration {w.start}")
    if ok:
        _say(f"max saturation lag {max(fixed_lag, live or 0)} <= {bound}")
    return _verdict(ok)


def _verify_drift(args, f):
    if f.name != "onemax":
        raise UsageError("the drift suite runs on onemax only")
    config = AlgorithmConfig(args.variant, args.n, args.rho, args.iters, args.seed)
    trace = run(config, f, snapshots=True).trace
    report = drift_check_onemax(trace)
    _say(f"iterations: {len(trace)}")
    _say(f"one-step witnesses: {len(report.witnesses)}, violations {len(report.violations)}")
    _say(f"multi-step checks: {report.multistep_checks}, violations {len(report.multistep_violations)}")
    _say(f"floor checks: {report.floor_checks}, violations {len(report.floor_violations)}")
    if args.witnesses:
        try:
            write_witnesses(report.witnesses, args.witnesses)
        except OSError as exc:
            raise OutputError(args.witnesses, exc.strerror or exc) from exc
        _say(f"witnesses: {args.witnesses}")
    if report.violations:
        _say(f"first offending witness: {report.violations[0]}")
    elif report.multistep_violations:
        _say(f"first multi-step violation: {report.multistep_violations[0]}")
    elif report.floor_violations:
        _say(f"first floor violation: {report.floor_violations[0]}")
    return _verdict(report.ok)


def _verify_levels(args, f):
    if not f.linear:
        raise UsageError("the levels suite needs a linear function")
    config = AlgorithmConfig(args.variant, args.n, args.rho, args.iters, args.seed)
    trace = run(config, f, trace=True).trace
    report = saturation_check(trace, f)
    _say(f"iterations: {len(trace)}, window ceil(ln n / rho) = {report.window}")
    _say(f"windows checked: {report.checks}, violations {len(report.violations)}")
    _say(f"fitness-level regressions: {len(report.fitness_regressions)}, "
         f"pheromone-level regressions: {len(report.pheromone_regressions)}")
    if report.violations:
        _say(f"first violation: {report.violations[0]}")
    return _verdict(report.ok)


def _verify_layers(args, f):
    tracker = LeadingOnesTracker(args.n, args.rho)
    config = AlgorithmConfig(args.variant, args.n, args.rho, args.iters, args.seed)
    result = run(config, f, observer=tracker)
    _say(f"iterations: {result.iterations}, final leading ones {tracker.leading_ones[-1]}")
    _say(f"layer parameter ell = {tracker.ell}, reference exp(-5/(ell rho)) = "
         f"{rediscovery_reference(tracker.ell, args.rho):.4f}")
    rediscovery = np.array(tracker.rediscovery)
    _say(f"rediscovery probability of the leading block: min {rediscovery.min():.4g}, "
         f"mean {rediscovery.mean():.4g}")
    _say(f"violations: {len(tracker.violations)}")
    if tracker.violations:
        _say(f"first violation: {tracker.violations[0]}")
    return _verdict(not tracker.violations)


def cmd_verify(args):
    default = {"drift": "onemax", "layers": "binval"}.get(args.suite, "onemax")
    spec = args.function or default
    if args.suite == "drift" and spec != "onemax":
        raise UsageError("the drift suite runs on onemax only")
    if args.suite == "layers" and spec not in ("binval", "leadingones"):
        raise UsageError("the layers suite runs on binval or leadingones")
    f = _function_for(spec, args.n, args.seed)
    suite = {"freezing": _verify_freezing, "drift": _verify_drift,
             "levels": _verify_levels, "layers": _verify_layers}[args.suite]
    _say(f"suite: {args.suite}  variant: {args.variant.value}  function: {f.name}  "
         f"n: {args.n}  rho: {args.rho!r}  seed: {args.seed}")
    return suite(args, f)


def cmd_oracle(args):
    n = args.n
    if n > MAX_EXACT_N:
        raise UsageError(f"n = {n} exceeds the exact-oracle guard of {MAX_EXACT_N}")
    rng = make_rng(args.seed)
    if args.check == "gleser":
        for trial in range(args.trials):
            tau, tau_prime = random_premise_pair(n, rng)
            if not gleser_verify(tau, tau_prime):
                _say(f"counterexample at trial {trial}:")
                _say(f"  tau  = {tau.tolist()}")
                _say(f"  tau' = {tau_prime.tolist()}")
                return _verdict(False)
        _say(f"{args.trials} premise-satisfying pairs, no counterexample")
        return _verdict(True)

    if n > MAX_ENUMERATION_N:
        raise UsageError(f"n = {n} exceeds the enumeration guard of {MAX_ENUMERATION_N}")
    worst = 0.0
    for _ in range(args.trials):
        tau = rng.random(n)
        worst = max(worst, float(np.max(np.abs(
            exact_ones_distribution(tau) - enumerate_ones_distribution(tau)))))
    _say(f"{args.trials} random vectors, max |DP - enumeration| = {worst:.3e} (tolerance {DISTRIBUTION_TOL:g})")
    return _verdict(worst <= DISTRIBUTION_TOL)


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "verify": cmd_verify, "oracle": cmd_oracle}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, PlanError) as exc:
        print(f"mmaslinear {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutputError as exc:
        print(f"mmaslinear {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
