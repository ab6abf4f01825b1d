"""Standalone (1+1) EA and (1+1) EA* for cross-checking the ant systems.

This deliberately shares no code with the engine or the kernels: it is the
independent reference for the rho = 1 equivalence. It follows the same
counting (the initial uniform sample is iteration 1) and seeding
conventions, so runs can be paired by seed.
"""

import numpy as np

from mmaslinear.rng import make_rng


def one_plus_one_ea(f, seed, strict=True, max_iterations=10**8):
    """Optimization time of the (1+1) EA* (``strict``) or (1+1) EA on ``f``.

    Returns ``None`` if the cap is reached first. The optimum is the all-ones
    string, as for every function in :mod:`mmaslinear.fitness`.
    """
    n = f.n
    rng = make_rng(seed)
    parent = (rng.random(n) < 0.5).astype(np.uint8)
    if parent.all():
        return 1
    p = 1.0 / n
    fp = f.evaluate(parent)
    for t in range(2, max_iterations + 1):
        child = parent ^ (rng.random(n) < p).astype(np.uint8)
        fc = f.evaluate(child)
        if fc > fp or (not strict and fc == fp):
            parent, fp = child, fc
            if parent.all():
                return t
    return None
