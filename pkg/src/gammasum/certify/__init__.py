"""Numerical certificates for the majorization and maximal-density inequalities."""

from .bounds import (
    block_index,
    block_lower_constant,
    block_upper_constant,
    half_shape_bounds,
    large_shape_bounds,
    small_shape_lower,
)
from .explore import explore_small_shape
from .functionals import F, G, ExponentialMixture, centred_expectation, uncentred_expectation
from .report import CertificateReport
from .suites import SUITE_NAMES, SUITES, case_inputs, evaluate_case, replay, run_suite

__all__ = [
    "CertificateReport",
    "ExponentialMixture",
    "F",
    "G",
    "SUITES",
    "SUITE_NAMES",
    "block_index",
    "block_lower_constant",
    "block_upper_constant",
    "case_inputs",
    "centred_expectation",
    "evaluate_case",
    "explore_small_shape",
    "half_shape_bounds",
    "large_shape_bounds",
    "replay",
    "run_suite",
    "small_shape_lower",
    "uncentred_expectation",
]
