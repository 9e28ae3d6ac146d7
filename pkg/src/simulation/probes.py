"""
Skew site probabilities and path-level probes (explosion, occupation near F).
"""

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np

from .scenario import Scenario
from .step_tables import site_skew_probability
from .walk import DEFAULT_BATCH, PathBatch, simulate_walk

logger = logging.getLogger(__name__)


def skew_prob_from_atom(alpha: float) -> float:
    """
    Probability of leaving a skew point to the right, p = 1 / (2 (1 - alpha)).

    The jump control L- = (1 - 2 alpha) L+ at the atom fixes the ratio of the
    one-sided local times; for a skew Brownian motion that ratio is (1 - p) / p.
    """
    return site_skew_probability(alpha, 1.0, 1.0)


@dataclass
class ExplosionStats:
    n_paths: int
    fraction: float
    min_time: float | None
    mean_time: float | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_paths": self.n_paths,
            "fraction": self.fraction,
            "min_time": self.min_time,
            "mean_time": self.mean_time,
        }


def explosion_stats(explosion_times: np.ndarray, horizon: float) -> ExplosionStats:
    times = np.asarray(explosion_times, dtype=float)
    exploded = times[~np.isnan(times) & (times <= horizon)]
    return ExplosionStats(
        n_paths=len(times),
        fraction=float(len(exploded) / len(times)) if len(times) else 0.0,
        min_time=float(exploded.min()) if exploded.size else None,
        mean_time=float(exploded.mean()) if exploded.size else None,
    )


def explosion_probe(
    scenario: Scenario,
    n_paths: int | None = None,
    batch_size: int = DEFAULT_BATCH,
    workers: int = 1,
) -> ExplosionStats:
    """Fraction of walk paths that leave G(R) before the horizon."""
    times = np.concatenate(
        [
            batch.explosion_time
            for batch in simulate_walk(scenario, n_paths, batch_size, workers=workers)
        ]
    )
    stats = explosion_stats(times, scenario.settings.T)
    logger.info(f"explosion probe '{scenario.name}': fraction {stats.fraction:.4f}")
    return stats


def occupation_fraction(batch: PathBatch, points, eps: float) -> float:
    """Fraction of recorded (path, time) pairs with |X - a| < eps for some point a."""
    X = batch.X[:, :-1]
    near = np.zeros(X.shape, dtype=bool)
    for a in points:
        near |= np.abs(X - a) < eps
    return float(near.mean())


def singular_occupation_points(scenario: Scenario) -> tuple[float, ...]:
    """F+ intersected with {b != 0}: points without occupation time."""
    zs = scenario.transform.zero_sets
    return tuple(a for a in zs.F_plus if scenario.b.value_at(a) != 0.0)
