"""
Window estimators of semimartingale local times from discretized paths.

With qv_n the quadratic variation accrued on [t_n, t_{n+1}):

    L+(t, y)     ~ (1/eps) * sum_{t_n < t} 1{y <= X_n < y + eps} qv_n
    L-(t, y)     ~ (1/eps) * sum_{t_n < t} 1{y - eps < X_n < y} qv_n
    L_m(t, y)    ~ sum_{t_n < t} 1{y <= X_n < y + eps} qv_n / m([y, y + eps))
    L_m(t, y-)   ~ sum_{t_n < t} 1{y - eps < X_n < y} qv_n / m((y - eps, y))

where m(dx) = 2 f(x) dx. Normalizing by the exact m-mass keeps L_m finite at
zeros of f. Every estimator accepts one path or a batch (time on the last axis).
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from ..coefficients.piecewise import PiecewisePower, Side

logger = logging.getLogger(__name__)

DEFAULT_EPS = 0.02  # window width for T = 1 at step 1e-4


@dataclass
class LocalTimeEstimate:
    """Path-averaged estimates at one level."""

    level: float
    eps: float
    t: float
    Lp: float
    Lminus: float
    Lm_right: float
    Lm_left: float
    n_samples: int

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def path_arrays(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(times, X, qv) of a PathSample or PathBatch."""
    values = path.values if hasattr(path, "values") else path.X
    return np.asarray(path.times), np.asarray(values), np.asarray(path.qv)


def steps_before(times: np.ndarray, t: float) -> int:
    """Number of steps n with t_n < t on the grid (t snapped to the grid)."""
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    dt = times[1] - times[0] if len(times) > 1 else 1.0
    k = int(np.searchsorted(times, t + 1e-9 * dt, side="right")) - 1
    return max(0, min(k, len(times) - 1))


def window(X: np.ndarray, y: float, eps: float, side: Side) -> np.ndarray:
    """Membership of X in [y, y + eps) (RIGHT) or (y - eps, y) (LEFT)."""
    if not eps > 0.0:
        raise ValueError(f"window width must be positive, got {eps}")
    if side is Side.RIGHT:
        return (X >= y) & (X < y + eps)
    return (X > y - eps) & (X < y)


def window_sum(path, y: float, t: float, eps: float, side: Side) -> np.ndarray:
    """Quadratic variation accrued inside the window before time t."""
    times, X, qv = path_arrays(path)
    k = steps_before(times, t)
    Xs, q = X[..., :k], qv[..., :k]
    return np.sum(np.where(window(Xs, y, eps, side), q, 0.0), axis=-1)


def window_mass(f: PiecewisePower, y: float, eps: float, side: Side) -> float:
    lo, hi = (y, y + eps) if side is Side.RIGHT else (y - eps, y)
    mass = 2.0 * f.integrate(lo, hi)
    if not mass > 0.0:
        raise ValueError(f"window ({lo}, {hi}) has zero m-mass")
    return mass


def _scalar(v: np.ndarray):
    return float(v) if np.ndim(v) == 0 else v


def estimate_Lplus(path, y: float, t: float, eps: float):
    return _scalar(window_sum(path, y, t, eps, Side.RIGHT) / eps)


def estimate_Lminus(path, y: float, t: float, eps: float):
    return _scalar(window_sum(path, y, t, eps, Side.LEFT) / eps)


def estimate_Lm(path, f: PiecewisePower, y: float, side: Side, t: float, eps: float):
    """Occupation density with respect to m(dx) = 2 f(x) dx, one-sided."""
    return _scalar(window_sum(path, y, t, eps, side) / window_mass(f, y, eps, side))


@dataclass
class LocalTimeTable:
    """Per-path estimates, shape (n_paths, n_levels)."""

    levels: np.ndarray
    eps: float
    t: float
    Lp: np.ndarray
    Lminus: np.ndarray
    Lm_right: np.ndarray
    Lm_left: np.ndarray

    @property
    def n_paths(self) -> int:
        return self.Lp.shape[0]

    def estimates(self) -> list[LocalTimeEstimate]:
        return [
            LocalTimeEstimate(
                level=float(y),
                eps=self.eps,
                t=self.t,
                Lp=float(self.Lp[:, j].mean()),
                Lminus=float(self.Lminus[:, j].mean()),
                Lm_right=float(self.Lm_right[:, j].mean()),
                Lm_left=float(self.Lm_left[:, j].mean()),
                n_samples=self.n_paths,
            )
            for j, y in enumerate(self.levels)
        ]

    @classmethod
    def concat(cls, tables: list["LocalTimeTable"]) -> "LocalTimeTable":
        if not tables:
            raise ValueError("no local-time tables to combine")
        first = tables[0]
        return cls(
            first.levels,
            first.eps,
            first.t,
            np.concatenate([tb.Lp for tb in tables]),
            np.concatenate([tb.Lminus for tb in tables]),
            np.concatenate([tb.Lm_right for tb in tables]),
            np.concatenate([tb.Lm_left for tb in tables]),
        )


def local_time_table(batch, f: PiecewisePower, levels, t: float, eps: float) -> LocalTimeTable:
    """All four estimators at every level for every path of a batch."""
    levels = np.asarray(levels, dtype=float)
    right = np.stack([window_sum(batch, y, t, eps, Side.RIGHT) for y in levels], axis=-1)
    left = np.stack([window_sum(batch, y, t, eps, Side.LEFT) for y in levels], axis=-1)
    m_right = np.array([window_mass(f, y, eps, Side.RIGHT) for y in levels])
    m_left = np.array([window_mass(f, y, eps, Side.LEFT) for y in levels])
    return LocalTimeTable(
        levels=levels,
        eps=eps,
        t=t,
        Lp=np.atleast_2d(right / eps),
        Lminus=np.atleast_2d(left / eps),
        Lm_right=np.atleast_2d(right / m_right),
        Lm_left=np.atleast_2d(left / m_left),
    )


def estimate_local_times(batch, f: PiecewisePower, levels, t: float, eps: float):
    """Path-averaged estimates at each level."""
    return local_time_table(batch, f, levels, t, eps).estimates()
