"""
Monte Carlo summary statistics and Kolmogorov-Smirnov tests.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import stats

logger = logging.getLogger(__name__)

KS_CRITICAL_1PCT = 1.6276  # asymptotic two-sided 1% point of the Kolmogorov distribution
MIN_KS_SAMPLES = 100
DEFAULT_BATCHES = 20


@dataclass
class Histogram:
    """Counts on fixed edges; first and last counts are under- and overflow."""

    edges: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> dict[str, Any]:
        return {"edges": [float(e) for e in self.edges], "counts": [int(c) for c in self.counts]}


def histogram(samples, edges) -> Histogram:
    edges = np.asarray(edges, dtype=float)
    x = np.asarray(samples, dtype=float)
    x = x[~np.isnan(x)]
    bins = np.searchsorted(edges, x, side="right")
    return Histogram(edges, np.bincount(bins, minlength=len(edges) + 1))


@dataclass
class KsResult:
    statistic: float
    critical: float
    p_value: float
    n: int

    @property
    def passed(self) -> bool:
        return self.statistic < self.critical

    def to_dict(self) -> dict[str, Any]:
        return {
            "statistic": self.statistic,
            "critical": self.critical,
            "p_value": self.p_value,
            "n": self.n,
            "passed": self.passed,
        }


def _check_size(n: int) -> None:
    if n < MIN_KS_SAMPLES:
        raise ValueError(f"KS test needs at least {MIN_KS_SAMPLES} samples, got {n}")


def ks_test(samples, cdf) -> KsResult:
    """Two-sided one-sample KS test at the 1% level (asymptotic critical value)."""
    x = np.asarray(samples, dtype=float)
    _check_size(len(x))
    result = stats.kstest(x, cdf)
    return KsResult(
        float(result.statistic), KS_CRITICAL_1PCT / math.sqrt(len(x)), float(result.pvalue), len(x)
    )


def ks_2sample(a, b) -> KsResult:
    """Two-sample KS test at the 1% level."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    _check_size(min(len(a), len(b)))
    result = stats.ks_2samp(a, b)
    n, m = len(a), len(b)
    critical = KS_CRITICAL_1PCT * math.sqrt((n + m) / (n * m))
    return KsResult(float(result.statistic), critical, float(result.pvalue), n + m)


def batch_standard_error(samples, n_batches: int = DEFAULT_BATCHES) -> float:
    """Standard error of the mean from the spread of batch means."""
    x = np.asarray(samples, dtype=float)
    n_batches = min(n_batches, len(x))
    if n_batches < 2:
        return math.nan
    means = np.array([chunk.mean() for chunk in np.array_split(x, n_batches)])
    return float(means.std(ddof=1) / math.sqrt(n_batches))


@dataclass
class McStats:
    n: int
    mean: float
    variance: float
    se: float
    batch_se: float
    histogram: Histogram | None = None
    ks: KsResult | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "se": self.se,
            "batch_se": self.batch_se,
            "histogram": self.histogram.to_dict() if self.histogram else None,
            "ks": self.ks.to_dict() if self.ks else None,
        }


def mc_stats(samples, edges=None, cdf=None, n_batches: int = DEFAULT_BATCHES) -> McStats:
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    variance = float(x.var(ddof=1))
    return McStats(
        n=n,
        mean=float(x.mean()),
        variance=variance,
        se=math.sqrt(variance / n),
        batch_se=batch_standard_error(x, n_batches),
        histogram=histogram(x, edges) if edges is not None else None,
        ks=ks_test(x, cdf) if cdf is not None else None,
    )


# -- reference distributions ------------------------------------------------------------


def skew_normal_cdf(p: float, t: float = 1.0):
    """Marginal of a skew Brownian motion from 0: density 2p phi on x > 0, 2(1 - p) phi below."""
    scale = math.sqrt(t)

    def cdf(x):
        phi = stats.norm.cdf(np.asarray(x, dtype=float) / scale)
        return np.where(x < 0, 2.0 * (1.0 - p) * phi, (1.0 - p) + 2.0 * p * (phi - 0.5))

    return cdf


def bessel_cdf(delta: float, t: float = 1.0, p: float = 0.5):
    """Signed Bessel marginal from 0: |X_t|^2 / t is chi-square with delta degrees of freedom."""

    def cdf(x):
        x = np.asarray(x, dtype=float)
        radial = stats.chi2.cdf(x * x / t, delta)
        return np.where(x < 0, (1.0 - p) * (1.0 - radial), (1.0 - p) + p * radial)

    return cdf


def explosion_reference(t: float, distance: float) -> float:
    """P(a Brownian motion from 0 hits level ``distance`` before t) = 2 P(N > distance / sqrt t)."""
    return float(2.0 * stats.norm.sf(distance / math.sqrt(t)))
