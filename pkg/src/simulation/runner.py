"""
Engine dispatch and terminal-value aggregation.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Any

import numpy as np

from .probes import explosion_stats
from .scenario import Engine, Scenario
from .timechange import simulate_timechange
from .walk import DEFAULT_BATCH, PathBatch, simulate_walk

logger = logging.getLogger(__name__)


def simulate_paths(
    scenario: Scenario,
    n_paths: int | None = None,
    engine: Engine | None = None,
    record: bool = False,
    batch_size: int = DEFAULT_BATCH,
    workers: int = 1,
    first_index: int = 0,
) -> Iterator[PathBatch]:
    engine = engine or scenario.settings.engine
    if engine is Engine.TIMECHANGE:
        return simulate_timechange(
            scenario, n_paths, batch_size, record, workers, first_index=first_index
        )
    return simulate_walk(scenario, n_paths, batch_size, record, workers, first_index=first_index)


@dataclass
class SimulationResult:
    """Terminal values and freeze markers of a run, in path-index order."""

    scenario: str
    engine: Engine
    horizon: float
    indices: np.ndarray
    X_T: np.ndarray
    Y_T: np.ndarray
    qv_T: np.ndarray
    explosion_time: np.ndarray
    absorption_time: np.ndarray
    skew_points: np.ndarray
    skew_crossings: np.ndarray

    @property
    def n_paths(self) -> int:
        return len(self.indices)

    def summary(self) -> dict[str, Any]:
        finite = self.X_T[np.isfinite(self.X_T)]
        absorbed = ~np.isnan(self.absorption_time)
        return {
            "scenario": self.scenario,
            "engine": self.engine.value,
            "horizon": self.horizon,
            "n_paths": self.n_paths,
            "mean_X_T": float(finite.mean()) if finite.size else None,
            "var_X_T": float(finite.var(ddof=1)) if finite.size > 1 else None,
            "mean_qv_T": float(self.qv_T.mean()),
            "absorbed_fraction": float(absorbed.mean()),
            "explosion": explosion_stats(self.explosion_time, self.horizon).to_dict(),
            "skew_crossings": {
                str(float(a)): int(c)
                for a, c in zip(self.skew_points, self.skew_crossings.sum(axis=0), strict=True)
            },
        }


def collect(scenario: Scenario, batches, engine: Engine | None = None) -> SimulationResult:
    """Concatenate the terminal state of a stream of batches."""
    parts = list(batches)
    if not parts:
        raise ValueError("no batches to collect")
    return SimulationResult(
        scenario=scenario.name,
        engine=engine or scenario.settings.engine,
        horizon=float(parts[0].times[-1]),
        indices=np.concatenate([p.indices for p in parts]),
        X_T=np.concatenate([p.X[:, -1] for p in parts]),
        Y_T=np.concatenate([p.Y[:, -1] for p in parts]),
        qv_T=np.concatenate([p.qv.sum(axis=1) for p in parts]),
        explosion_time=np.concatenate([p.explosion_time for p in parts]),
        absorption_time=np.concatenate([p.absorption_time for p in parts]),
        skew_points=parts[0].skew_points,
        skew_crossings=np.concatenate([p.skew_crossings for p in parts]),
    )


def run_simulation(
    scenario: Scenario,
    n_paths: int | None = None,
    engine: Engine | None = None,
    batch_size: int = DEFAULT_BATCH,
    workers: int = 1,
) -> SimulationResult:
    engine = engine or scenario.settings.engine
    batches = simulate_paths(scenario, n_paths, engine, False, batch_size, workers)
    result = collect(scenario, batches, engine)
    logger.info(f"simulated {result.n_paths} paths of '{scenario.name}' ({engine.value})")
    return result
