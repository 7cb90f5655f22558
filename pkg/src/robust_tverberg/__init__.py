"""Robust Tverberg partition families with exact rational certificates."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, DimensionMismatch, RetryBudgetExhausted, SchemaError
from .geom_core import (
    Halfspace,
    HalfspaceFamily,
    PointConfig,
    common_point_of_hulls,
    halfspace_family,
    origin_in_hull,
)
from .sarkaria_lift import Partition, is_tverberg, lift, lifted_is_tverberg, simplex_frame
from .robust_constructor import (
    PartitionFamily,
    RobustParams,
    construct_family,
    epsilon_threshold,
    m_required,
    sample_family,
    schedule,
)
from .adversary_verifier import (
    BadSubsetCertificate,
    check_certificate,
    greedy_adversary,
    maximal_bad_subsets,
    monte_carlo_verify,
    verify_family,
)
from .colorful import (
    ColorfulParams,
    blocks_from_classes,
    construct_colorful_family,
    fixed_point_probability,
    m_col_bound,
    verify_colorful_family,
)

__all__ = [
    "BadSubsetCertificate",
    "BudgetExceeded",
    "ColorfulParams",
    "DimensionMismatch",
    "Halfspace",
    "HalfspaceFamily",
    "Partition",
    "PartitionFamily",
    "PointConfig",
    "RetryBudgetExhausted",
    "RobustParams",
    "SchemaError",
    "blocks_from_classes",
    "check_certificate",
    "common_point_of_hulls",
    "construct_colorful_family",
    "construct_family",
    "epsilon_threshold",
    "fixed_point_probability",
    "greedy_adversary",
    "halfspace_family",
    "is_tverberg",
    "lift",
    "lifted_is_tverberg",
    "m_col_bound",
    "m_required",
    "maximal_bad_subsets",
    "monte_carlo_verify",
    "origin_in_hull",
    "sample_family",
    "schedule",
    "simplex_frame",
    "verify_colorful_family",
    "verify_family",
]
