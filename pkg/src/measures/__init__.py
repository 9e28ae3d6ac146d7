# Singular Drift Lab - Drift Measures
from .drift_measure import (
    LocalSignedMeasure,
    drift_function_from_measure,
    drift_measure_from_f,
    pushforward,
    residual_g_nu,
    solve_g_nu,
    validate_atoms,
)

__all__ = [
    "LocalSignedMeasure",
    "drift_function_from_measure",
    "drift_measure_from_f",
    "pushforward",
    "residual_g_nu",
    "solve_g_nu",
    "validate_atoms",
]
