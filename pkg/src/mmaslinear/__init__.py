"""Simplified MAX-MIN ant systems on linear pseudo-Boolean functions."""

from mmaslinear._backend import NAME as BACKEND
from mmaslinear.engine import AlgorithmConfig, RunResult, RunTrace, Variant, acceptance, run
from mmaslinear.fitness import (
    BinVal,
    CallableFitness,
    LeadingOnes,
    LinearFunction,
    OneMax,
    load_weights,
    make_binval,
    make_function,
    make_leadingones,
    make_onemax,
    make_random_linear,
)
from mmaslinear.pheromone import PheromoneState, init_state, sample_solution, update

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig", "BACKEND", "BinVal", "CallableFitness", "LeadingOnes",
    "LinearFunction", "OneMax", "PheromoneState", "RunResult", "RunTrace", "Variant",
    "acceptance", "init_state", "load_weights", "make_binval", "make_function",
    "make_leadingones", "make_onemax", "make_random_linear", "run", "sample_solution",
    "update",
]
