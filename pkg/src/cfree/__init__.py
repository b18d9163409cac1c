"""Exact rational computer algebra for two-state noncommutative probability."""

from .ncpoly import (
    NCPolynomial,
    TensorPolynomial,
    diff_quotient,
    left_derivative,
    apply_state_partial,
    evaluate,
)
from .ncseries import (
    NCSeries,
    series_inverse,
    substitute_sided,
    solve_fixed_point_M_from_R,
    FIXED_POINT_VARIANTS,
)
from .partitions import (
    SetPartition,
    enumerate_partitions,
    classify_classes,
    outer_classes,
    inner_classes,
    singletons,
    outer_order_relations,
)

__version__ = "0.1.0"
