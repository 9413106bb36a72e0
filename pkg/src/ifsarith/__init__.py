"""Exact arithmetic of an overlapping three-map self-similar set.

Certifies, at exact rational parameters, the interval identities for
the sum, difference, quotient and square-root sum of the set with
itself, re-derives the parameter-region maps behind those results, and
cross-validates every certificate against a brute-force oracle.
"""

__version__ = "0.1.0"

from .exact import EQ, GT, LT, NegativeRadicand, SqrtSum2, cmp_rational, cmp_sqrt2
from .ifs import InvalidParams, Params, WordSet, basic_interval, level_cover, tilde, validate_params, wordset_union
from .intervals import (
    BinaryOp,
    DivisionByZeroBoundary,
    Interval,
    IntervalUnion,
    MixedEndpointKinds,
    NegativeOperand,
    box_image,
    normalize,
    op_on_unions,
)
from .oracle import DepthLimit, enumerate_endpoints, gap_search, outer_cover, pairwise_density
from .regions import GridSpec, RegionMap, check_implication, classify_point, render_map, scan_grid
from .stability import StabilityRefusal, UnequalLengths, one_step_stable, stability_hypotheses, stable_closure
from .theorems import (
    Status,
    Verdict,
    corollary_report,
    verify_diff,
    verify_div,
    verify_sqrtsum,
    verify_sum,
    verify_sum_digit_ifs,
)

__all__ = [
    "BinaryOp",
    "DepthLimit",
    "DivisionByZeroBoundary",
    "EQ",
    "GT",
    "GridSpec",
    "Interval",
    "IntervalUnion",
    "InvalidParams",
    "LT",
    "MixedEndpointKinds",
    "NegativeOperand",
    "NegativeRadicand",
    "Params",
    "RegionMap",
    "SqrtSum2",
    "StabilityRefusal",
    "Status",
    "UnequalLengths",
    "Verdict",
    "WordSet",
    "basic_interval",
    "box_image",
    "check_implication",
    "classify_point",
    "cmp_rational",
    "cmp_sqrt2",
    "corollary_report",
    "enumerate_endpoints",
    "gap_search",
    "level_cover",
    "normalize",
    "one_step_stable",
    "op_on_unions",
    "outer_cover",
    "pairwise_density",
    "render_map",
    "scan_grid",
    "stability_hypotheses",
    "stable_closure",
    "tilde",
    "validate_params",
    "verify_diff",
    "verify_div",
    "verify_sqrtsum",
    "verify_sum",
    "verify_sum_digit_ifs",
    "wordset_union",
]
