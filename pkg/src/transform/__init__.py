# Singular Drift Lab - Space Transformation
from .space_transform import (
    SpaceTransform,
    build_transform,
    dump_table,
    invariant_residuals,
    sigma,
    sigma_tilde,
)

__all__ = [
    "SpaceTransform",
    "build_transform",
    "dump_table",
    "invariant_residuals",
    "sigma",
    "sigma_tilde",
]
