# Singular Drift Lab - Coefficients
from .piecewise import (
    ExpPowerPiece,
    LocalBehavior,
    PiecewisePower,
    PowerPiece,
    Side,
    ValidationReport,
    ZeroSets,
    check_drift_function,
    evaluate,
    piece_from_dict,
    zero_sets,
)

__all__ = [
    "ExpPowerPiece",
    "LocalBehavior",
    "PiecewisePower",
    "PowerPiece",
    "Side",
    "ValidationReport",
    "ZeroSets",
    "check_drift_function",
    "evaluate",
    "piece_from_dict",
    "zero_sets",
]
