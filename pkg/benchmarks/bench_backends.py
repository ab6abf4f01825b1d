"""Compare the compiled kernels with the numpy fallback.

Times full MMAS* runs on OneMax and BinVal with both backends, checks that
they return identical results, and prints time per iteration.

    python benchmarks/bench_backends.py [--n 50 100] [--rho 0.1] [--runs 5]
"""

import argparse
import time

import numpy as np

from mmaslinear import _backend
from mmaslinear.fitness import make_function
from mmaslinear.pheromone import init_state
from mmaslinear.rng import make_rng


def timed_run(kernels, f, rho, seed, accept_equal=False, cap=10**7):
    state = init_state(f.n, rho)
    best = np.zeros(f.n, dtype=np.uint8)
    x = np.zeros(f.n, dtype=np.uint8)
    rng = make_rng(seed)
    t0 = time.perf_counter()
    it, found = kernels.run_loop(state.tau, best, x, state.rho, state.lo, state.hi, f.kind,
                                 f.kernel_weights, accept_equal, cap, rng)
    return time.perf_counter() - t0, int(it), state.tau.copy()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[50, 100])
    parser.add_argument("--rho", type=float, default=0.1)
    parser.add_argument("--runs", type=int, default=5)
    parser.add_argument("--functions", nargs="+", default=["onemax", "binval"])
    args = parser.parse_args()

    backends = {"python": _backend.load("python")}
    try:
        backends["cython"] = _backend.load("cython")
    except ImportError:
        print("compiled kernels not built; timing the numpy fallback only")

    print(f"{'function':<10}{'n':>6}{'backend':>9}{'iters':>10}{'ns/iter':>12}{'speedup':>9}")
    for name in args.functions:
        for n in args.n:
            f = make_function(name, n)
            per_iter = {}
            outcome = {}
            for label, kernels in backends.items():
                total_t, total_it = 0.0, 0
                results = []
                for seed in range(args.runs):
                    dt, it, tau = timed_run(kernels, f, args.rho, seed)
                    total_t += dt
                    total_it += it
                    results.append((it, tau))
                per_iter[label] = total_t / total_it * 1e9
                outcome[label] = results
                speed = per_iter["python"] / per_iter[label]
                print(f"{name:<10}{n:>6}{label:>9}{total_it:>10}{per_iter[label]:>12.0f}{speed:>8.1f}x")
            if len(outcome) == 2:
                same = all(a[0] == b[0] and np.array_equal(a[1], b[1])
                           for a, b in zip(outcome["python"], outcome["cython"]))
                print(f"{'':<16}backends identical: {same}")


if __name__ == "__main__":
    main()
