"""Mutable categorical distributions on Huffman-style sum trees."""

from ._jit import JIT_ENABLED
from .baseline import CdfTable, build_cdf, cdf_sample, leaf_intervals
from .errors import (
    CategoricalError,
    ConfigError,
    DuplicateKeyError,
    EmptyDistributionError,
    EmptyWeightsError,
    InvalidWeightError,
    InvariantError,
    KeyNotFoundError,
    OutOfRangeError,
)
from .oracle import entropy, huffman_depths, optimal_expected_length
from .tree import MutableCategorical
from .workload import (
    DeletionConfig,
    MeasurementRow,
    SteadyStateConfig,
    WeightDistribution,
    gen_weight,
    run_deletion,
    run_steady_state,
)

__all__ = [
    "JIT_ENABLED",
    "CdfTable",
    "CategoricalError",
    "ConfigError",
    "DeletionConfig",
    "DuplicateKeyError",
    "EmptyDistributionError",
    "EmptyWeightsError",
    "InvalidWeightError",
    "InvariantError",
    "KeyNotFoundError",
    "MeasurementRow",
    "MutableCategorical",
    "OutOfRangeError",
    "SteadyStateConfig",
    "WeightDistribution",
    "build_cdf",
    "cdf_sample",
    "entropy",
    "gen_weight",
    "huffman_depths",
    "leaf_intervals",
    "optimal_expected_length",
    "run_deletion",
    "run_steady_state",
]
