"""Sensitivity and block sensitivity of Boolean functions and lattice colorings."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .boolfn import (
    BooleanOracle,
    TruthTable,
    block_sensitivity,
    l_block_sensitivity,
    measure,
    sensitivity,
)
from .bounds import (
    kk_check,
    kk_constant,
    lattice_lower_bound_check,
    max_independent_set,
    max_mutual_intersection,
    repeated_bound_check,
    slice_graph,
    sliced_bound_check,
)
from .constructions import rubinstein_f, slice_coloring, slice_group, sorted_function
from .lattice import exact_report, sampled_report
from .reductions import coloring_to_function, function_to_coloring
from .search import exhaustive_scan, random_scan

__all__ = [
    "BACKEND",
    "BooleanOracle",
    "TruthTable",
    "block_sensitivity",
    "coloring_to_function",
    "exact_report",
    "exhaustive_scan",
    "function_to_coloring",
    "kk_check",
    "kk_constant",
    "l_block_sensitivity",
    "lattice_lower_bound_check",
    "max_independent_set",
    "max_mutual_intersection",
    "measure",
    "random_scan",
    "repeated_bound_check",
    "rubinstein_f",
    "sampled_report",
    "sensitivity",
    "slice_coloring",
    "slice_graph",
    "slice_group",
    "sliced_bound_check",
    "sorted_function",
]
