# Singular Drift Lab - Verification Harness
from .catalog import (
    PROVENANCE_TAGS,
    STATISTICS,
    Catalog,
    CatalogCheck,
    CatalogError,
    CatalogRunner,
    CheckResult,
    Observation,
    ScenarioCatalogEntry,
    SuiteReport,
    Tolerance,
    ToleranceKind,
    run_catalog,
)
from .stats import (
    Histogram,
    KsResult,
    McStats,
    batch_standard_error,
    bessel_cdf,
    explosion_reference,
    histogram,
    ks_2sample,
    ks_test,
    mc_stats,
    skew_normal_cdf,
)

__all__ = [
    "PROVENANCE_TAGS",
    "STATISTICS",
    "Catalog",
    "CatalogCheck",
    "CatalogError",
    "CatalogRunner",
    "CheckResult",
    "Histogram",
    "KsResult",
    "McStats",
    "Observation",
    "ScenarioCatalogEntry",
    "SuiteReport",
    "Tolerance",
    "ToleranceKind",
    "batch_standard_error",
    "bessel_cdf",
    "explosion_reference",
    "histogram",
    "ks_2sample",
    "ks_test",
    "mc_stats",
    "run_catalog",
    "skew_normal_cdf",
]
