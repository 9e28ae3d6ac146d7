# Singular Drift Lab - Well-Posedness
from .sets import Interval, PointAndIntervalSet, singular_set, zero_set
from .verdicts import (
    Verdict,
    WellPosednessReport,
    check_skewness,
    image_identity,
    transformed_sets,
    verdicts,
)

__all__ = [
    "Interval",
    "PointAndIntervalSet",
    "Verdict",
    "WellPosednessReport",
    "check_skewness",
    "image_identity",
    "singular_set",
    "transformed_sets",
    "verdicts",
    "zero_set",
]
