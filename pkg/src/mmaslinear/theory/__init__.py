"""Quantities for checking runtime analysis statements on live runs, plus exact oracles."""

from mmaslinear.theory.drift import (
    DriftReport,
    DriftWitness,
    SaturationReport,
    drift_check_onemax,
    saturation_check,
    write_witnesses,
)
from mmaslinear.theory.freezing import (
    FreezingTracker,
    freezing_bound,
    saturation_times,
)
from mmaslinear.theory.layers import (
    LeadingOnesTracker,
    estimate_rediscovery,
    layer_check,
    rediscovery_probability,
    rediscovery_reference,
)
from mmaslinear.theory.levels import (
    LevelClassifier,
    alpha,
    fitness_level,
    leftmost_zero_flip,
    pheromone_level,
    prefix_point,
    v_of,
    wps,
)
from mmaslinear.theory.oracles import (
    MAX_EXACT_N,
    enumerate_ones_distribution,
    exact_ones_distribution,
    gleser_premise,
    gleser_verify,
    random_premise_pair,
)

__all__ = [
    "DriftReport", "DriftWitness", "FreezingTracker", "LeadingOnesTracker",
    "LevelClassifier", "MAX_EXACT_N", "SaturationReport", "alpha",
    "drift_check_onemax", "enumerate_ones_distribution", "estimate_rediscovery",
    "exact_ones_distribution", "fitness_level", "freezing_bound", "gleser_premise",
    "gleser_verify", "layer_check", "leftmost_zero_flip", "pheromone_level",
    "prefix_point", "random_premise_pair", "rediscovery_probability",
    "rediscovery_reference", "saturation_check", "saturation_times", "v_of",
    "write_witnesses", "wps",
]
