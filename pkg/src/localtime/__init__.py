# Singular Drift Lab - Local Times
from .estimators import (
    DEFAULT_EPS,
    LocalTimeEstimate,
    LocalTimeTable,
    estimate_local_times,
    estimate_Lm,
    estimate_Lminus,
    estimate_Lplus,
    local_time_table,
)
from .identities import (
    IdentityReport,
    LevelResult,
    SupportReport,
    check_identity,
    check_occupation_formula,
    check_support,
    left_right_ratio,
    outside_range_zero,
    square_integral,
    transformed_level_ratio,
)

__all__ = [
    "DEFAULT_EPS",
    "IdentityReport",
    "LevelResult",
    "LocalTimeEstimate",
    "LocalTimeTable",
    "SupportReport",
    "check_identity",
    "check_occupation_formula",
    "check_support",
    "estimate_Lm",
    "estimate_Lminus",
    "estimate_Lplus",
    "estimate_local_times",
    "left_right_ratio",
    "local_time_table",
    "outside_range_zero",
    "square_integral",
    "transformed_level_ratio",
]
