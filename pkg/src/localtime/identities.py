"""
Numerical checks of local-time identities on simulated paths.
"""

import logging
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..coefficients.piecewise import PiecewisePower, Side, zero_sets
from ..transform.space_transform import SpaceTransform
from .estimators import (
    LocalTimeTable,
    path_arrays,
    steps_before,
    window,
    window_mass,
    window_sum,
)

logger = logging.getLogger(__name__)

IDENTITY_TOLERANCE = 0.1
IDENTITY_FLOOR = 1e-3
OCCUPATION_TOLERANCE = 0.05


@dataclass
class LevelResult:
    level: float
    value: float | None
    passed: bool
    skipped: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "value": self.value,
            "passed": self.passed,
            "skipped": self.skipped,
        }


@dataclass
class IdentityReport:
    name: str
    levels: list[LevelResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.levels)

    @property
    def worst(self) -> float:
        values = [r.value for r in self.levels if r.value is not None]
        return max(values) if values else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "levels": [r.to_dict() for r in self.levels],
        }


def check_identity(
    table: LocalTimeTable,
    f: PiecewisePower,
    tolerance: float = IDENTITY_TOLERANCE,
    floor: float = IDENTITY_FLOOR,
) -> IdentityReport:
    """
    2 f(y) L_m(t, y) = L+(t, y) at every level off F.

    The per-path relative error |2 f(y) L_m - L+| / max(L+, floor) is averaged
    over paths. Levels in F are skipped (both sides vanish).
    """
    F = set(zero_sets(f).F)
    report = IdentityReport("occupation_density_identity")
    for j, y in enumerate(table.levels):
        y = float(y)
        if y in F:
            report.levels.append(LevelResult(y, None, True, "0 = 0 degenerate"))
            continue
        lp = table.Lp[:, j]
        lhs = 2.0 * f.value_at(y) * table.Lm_right[:, j]
        err = float(np.mean(np.abs(lhs - lp) / np.maximum(lp, floor)))
        report.levels.append(LevelResult(y, err, err < tolerance))
    return report


def check_occupation_formula(
    path, g: PiecewisePower, t: float, eps: float, tolerance: float = OCCUPATION_TOLERANCE
) -> LevelResult:
    """
    sum g(X_n) qv_n against int L+(t, y) g(y) dy on a y-grid of spacing eps.

    The grid is aligned to multiples of eps; both sides are pooled over the paths
    of a batch. The returned value is the relative residual.
    """
    times, X, qv = path_arrays(path)
    k = steps_before(times, t)
    Xs, q = X[..., :k], qv[..., :k]
    finite = np.isfinite(Xs) & (q > 0.0)
    if not finite.any():
        return LevelResult(0.0, 0.0, True)
    xs, qs = Xs[finite], q[finite]
    lhs = float(np.sum(g.evaluate(xs) * qs))

    start = eps * np.floor(xs.min() / eps)
    n_bins = int(np.floor((xs.max() - start) / eps)) + 1
    grid = start + eps * np.arange(n_bins)
    # L+(y_i) * eps is the qv mass of bin i
    bins = np.clip(np.searchsorted(grid, xs, side="right") - 1, 0, n_bins - 1)
    mass = np.bincount(bins, weights=qs, minlength=n_bins)
    rhs = float(np.sum(g.evaluate(grid) * mass))

    residual = abs(lhs - rhs) / (abs(lhs) + 1e-9)
    return LevelResult(0.0, residual, residual < tolerance)


@dataclass
class SupportReport:
    level: float
    eps: float
    far_increment: float
    after_absorption: float
    positive_fraction: float

    @property
    def passed(self) -> bool:
        return self.far_increment == 0.0 and self.after_absorption == 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "level": self.level,
            "eps": self.eps,
            "far_increment": self.far_increment,
            "after_absorption": self.after_absorption,
            "positive_fraction": self.positive_fraction,
            "passed": self.passed,
        }


def check_support(path, y: float, t: float, eps: float) -> SupportReport:
    """
    The measure L_m(ds, y) only grows while X is near y.

    Increments of the window estimator on steps with |X - y| >= 2 eps must be
    exactly zero, as must increments after absorption.
    """
    times, X, qv = path_arrays(path)
    k = steps_before(times, t)
    Xs, q = np.atleast_2d(X[..., :k]), np.atleast_2d(qv[..., :k])
    increments = np.where(window(Xs, y, eps, Side.RIGHT), q, 0.0)
    far = np.abs(Xs - y) >= 2.0 * eps
    far_increment = float(np.abs(increments[far]).sum())

    after = 0.0
    absorption = getattr(path, "absorption_time", None)
    if absorption is not None:
        absorbed_at = np.atleast_1d(np.asarray(absorption, dtype=float))
        step_times = times[:k]
        frozen = step_times[None, :] >= absorbed_at[:, None]
        after = float(np.abs(increments[frozen]).sum())

    positive = float(np.mean(increments.sum(axis=-1) > 0.0))
    return SupportReport(float(y), eps, far_increment, after, positive)


def outside_range_zero(path, f: PiecewisePower, levels, t: float, eps: float) -> bool:
    """Estimates at levels whose windows miss the running range are exactly 0."""
    times, X, _ = path_arrays(path)
    k = steps_before(times, t)
    Xs = np.atleast_2d(X[..., :k])
    finite = np.where(np.isfinite(Xs), Xs, np.nan)
    lo, hi = np.nanmin(finite, axis=-1), np.nanmax(finite, axis=-1)
    for y in levels:
        right = np.atleast_1d(window_sum(path, y, t, eps, Side.RIGHT))
        left = np.atleast_1d(window_sum(path, y, t, eps, Side.LEFT))
        miss_right = (y > hi) | (y + eps <= lo)
        miss_left = (y - eps >= hi) | (y <= lo)
        if np.any(right[miss_right] != 0.0) or np.any(left[miss_left] != 0.0):
            return False
    return True


def left_right_ratio(table: LocalTimeTable, level: float) -> float:
    """Pooled L_m(t, y-) / L_m(t, y)."""
    j = int(np.flatnonzero(table.levels == level)[0])
    right = float(table.Lm_right[:, j].mean())
    if right == 0.0:
        raise ValueError(f"no occupation to the right of {level}")
    return float(table.Lm_left[:, j].mean()) / right


def square_integral(path, f: PiecewisePower, t: float) -> np.ndarray:
    """sum (1/f(X_n))^2 qv_n per path, with 0 * inf = 0."""
    times, X, qv = path_arrays(path)
    k = steps_before(times, t)
    Xs, q = X[..., :k], qv[..., :k]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = q / np.asarray(f.evaluate(Xs), dtype=float) ** 2
    return np.sum(np.where(q > 0.0, terms, 0.0), axis=-1)


def transformed_level_ratio(
    path, t_map: SpaceTransform, y: float, t: float, eps: float
) -> float:
    """
    Pooled L+ of Y at G(y) over pooled L_m of X at y (limit 2).

    The quadratic variation of Y is qv / f(X)^2.
    """
    times, X, qv = path_arrays(path)
    k = steps_before(times, t)
    Xs, q = X[..., :k], qv[..., :k]
    Ys = np.asarray(path.Y)[..., :k]
    f = t_map.f
    with np.errstate(divide="ignore", invalid="ignore"):
        qy = np.where(q > 0.0, q / np.asarray(f.evaluate(Xs), dtype=float) ** 2, 0.0)
    gy = float(t_map.G(y))
    lp_y = np.sum(np.where(window(Ys, gy, eps, Side.RIGHT), qy, 0.0)) / eps
    lm_x = np.sum(np.where(window(Xs, y, eps, Side.RIGHT), q, 0.0)) / window_mass(
        f, y, eps, Side.RIGHT
    )
    if lm_x == 0.0:
        raise ValueError(f"no occupation near level {y}")
    return float(lp_y / lm_x)
