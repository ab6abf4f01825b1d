"""numpy versions of the compiled kernels in ``_ckernels.pyx``.

Every function here must produce bit-identical results to its compiled twin
for the same generator state; ``tests/test_backends.py`` holds them to that.
"""

import numpy as np

KIND_ONEMAX = 0
KIND_BINVAL = 1
KIND_LEADINGONES = 2
KIND_LINEAR = 3


def sample_into(tau, rng, out):
    """Fill ``out`` with one ant's path; returns the number of ones."""
    np.less(rng.random(tau.shape[0]), tau, out=out, casting="unsafe")
    return int(np.count_nonzero(out))


def update_inplace(tau, best, rho, lo, hi):
    keep = 1.0 - rho
    up = np.minimum(keep * tau + rho, hi)
    down = np.maximum(keep * tau, lo)
    np.copyto(tau, np.where(best.astype(bool), up, down))


def leading_ones(x):
    zeros = np.flatnonzero(x == 0)
    return int(zeros[0]) if zeros.size else int(x.shape[0])


def weighted_sum(x, weights):
    # sequential accumulation, matching the compiled left-to-right loop
    return float(np.add.accumulate(np.where(x != 0, weights, 0.0))[-1])


def lex_compare(x, y):
    diff = np.flatnonzero(x != y)
    if not diff.size:
        return 0
    return 1 if x[diff[0]] > y[diff[0]] else -1


def run_loop(tau, best, x, rho, lo, hi, kind, weights, accept_equal, max_iterations, rng):
    n = tau.shape[0]
    it = 0
    ones_best = 0
    lo_best = 0
    f_best = 0.0
    found = False
    while it < max_iterations:
        it += 1
        ones_x = sample_into(tau, rng, x)
        if it == 1:
            cmp = 1
        elif kind == KIND_ONEMAX:
            cmp = (ones_x > ones_best) - (ones_x < ones_best)
        elif kind == KIND_BINVAL:
            cmp = lex_compare(x, best)
        elif kind == KIND_LEADINGONES:
            lo_x = leading_ones(x)
            cmp = (lo_x > lo_best) - (lo_x < lo_best)
        else:
            f_x = weighted_sum(x, weights)
            cmp = (f_x > f_best) - (f_x < f_best)
        if cmp > 0 or (cmp == 0 and accept_equal):
            best[:] = x
            ones_best = ones_x
            if kind == KIND_LEADINGONES:
                lo_best = leading_ones(x)
            elif kind == KIND_LINEAR:
                f_best = weighted_sum(x, weights)
        update_inplace(tau, best, rho, lo, hi)
        if ones_best == n:
            found = True
            break
    return it, found
