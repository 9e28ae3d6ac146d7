"""
Walk engine: a Bernoulli random walk for the transformed process Y = G(X).

Away from sites Y makes a symmetric step of length eta(Y) (clipped at the next
site with the martingale split). At a site g it leaves to the right with
probability d- / (d- + (1 - 2 alpha) d+), alpha being the skewness atom carried
by g. Paths are absorbed on E_sigma and frozen at +/-inf after leaving G(R).
"""

import logging
import math
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat

import numpy as np
from scipy import special

from .scenario import QvMode, Scenario, StepRule
from .step_tables import StepTable, site_skew_probability
from .streams import DEFAULT_CHUNK, UniformStreams

logger = logging.getLogger(__name__)

SNAP_TOLERANCE = 1e-9  # relative to the step length
DEFAULT_BATCH = 500


@dataclass
class PathSample:
    """One simulated path on the recorded time grid."""

    index: int
    times: np.ndarray
    values: np.ndarray
    Y: np.ndarray
    qv: np.ndarray
    explosion_time: float | None = None
    absorbed_at: float | None = None
    absorption_time: float | None = None
    skew_crossings: dict[float, int] = field(default_factory=dict)


@dataclass
class PathBatch:
    """
    A batch of paths sharing one time grid.

    ``qv[:, j]`` is the quadratic variation accrued on [times[j], times[j + 1]);
    without recording the grid is just [0, T]. NaN marks a missing explosion or
    absorption.
    """

    indices: np.ndarray
    times: np.ndarray
    X: np.ndarray
    Y: np.ndarray
    qv: np.ndarray
    explosion_time: np.ndarray
    absorbed_at: np.ndarray
    absorption_time: np.ndarray
    skew_crossings: np.ndarray
    skew_points: np.ndarray

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[PathSample]:
        for i in range(len(self)):
            yield self.sample(i)

    def sample(self, i: int) -> PathSample:
        def opt(v: float) -> float | None:
            return None if math.isnan(v) else float(v)

        return PathSample(
            index=int(self.indices[i]),
            times=self.times,
            values=self.X[i],
            Y=self.Y[i],
            qv=self.qv[i],
            explosion_time=opt(self.explosion_time[i]),
            absorbed_at=opt(self.absorbed_at[i]),
            absorption_time=opt(self.absorption_time[i]),
            skew_crossings={
                float(a): int(c)
                for a, c in zip(self.skew_points, self.skew_crossings[i], strict=True)
            },
        )

    @property
    def terminal(self) -> np.ndarray:
        return self.X[:, -1]


class CrossingCounter:
    """Sign changes of Y - g at each skew site g; steps onto or off a site do not count."""

    def __init__(self, n: int, sites: np.ndarray, y0: np.ndarray):
        self.sites = np.asarray(sites, dtype=float)
        self.counts = np.zeros((n, len(self.sites)), dtype=np.int64)
        self.side = np.zeros((n, len(self.sites)), dtype=np.int8)
        self.update(np.arange(n), y0)

    def update(self, rows: np.ndarray, y: np.ndarray) -> None:
        if not len(self.sites):
            return
        new = np.sign(np.asarray(y, dtype=float)[:, None] - self.sites[None, :]).astype(np.int8)
        old = self.side[rows]
        self.counts[rows] += (new != 0) & (old != 0) & (new != old)
        # a path sitting on the site keeps the side it came from
        self.side[rows] = np.where(new != 0, new, old)


class _WalkState:
    """Vectorized state of a batch: Y, X and the freeze markers."""

    def __init__(self, table: StepTable, indices: np.ndarray, chunk: int):
        scenario = table.scenario
        self.table = table
        self.t = table.t
        self.streams = UniformStreams(scenario.settings.seed, indices, chunk)
        x0 = np.asarray(scenario.initial.sample(self.streams.draw()), dtype=float)
        self.x = x0
        self.y = np.asarray(self.t.G(x0), dtype=float)
        n = len(indices)
        self.exploded = np.zeros(n, dtype=bool)
        self.explosion_time = np.full(n, np.nan)
        self.absorbed = table.in_singular_set(self.y)
        self.absorption_time = np.where(self.absorbed, 0.0, np.nan)
        self.absorbed_at = np.where(self.absorbed, x0, np.nan)
        sites = table.sites
        self.skew_sites = np.flatnonzero(sites.skew)
        self.crossings = CrossingCounter(n, sites.y[self.skew_sites], self.y)
        self._padded = np.concatenate([[-np.inf], sites.y, [np.inf]])

    @property
    def frozen(self) -> np.ndarray:
        return self.exploded | self.absorbed

    def _neighbours(self, y: np.ndarray):
        sites = self.table.sites
        j = np.searchsorted(sites.y, y)
        at = np.zeros(len(y), dtype=bool)
        if len(sites):
            at = (j < len(sites)) & (sites.y[np.minimum(j, len(sites) - 1)] == y)
        below = self._padded[j]
        # a path on site j looks past it to site j + 1
        last = len(self._padded) - 1
        above = np.where(at, self._padded[np.minimum(j + 2, last)], self._padded[j + 1])
        return j, at, below, above

    def _snap(self, y: np.ndarray, length: np.ndarray) -> np.ndarray:
        sites = self.table.sites.y
        if not len(sites):
            return y
        k = np.searchsorted(sites, y)
        lower = sites[np.maximum(k - 1, 0)]
        upper = sites[np.minimum(k, len(sites) - 1)]
        nearest = np.where(np.abs(y - lower) <= np.abs(upper - y), lower, upper)
        close = np.abs(y - nearest) <= SNAP_TOLERANCE * length
        return np.where(close, nearest, y)

    def advance(self, y: np.ndarray, u: np.ndarray) -> np.ndarray:
        table = self.table
        if table.rule is StepRule.GAUSSIAN:
            return y + table.euler_step(y) * special.ndtri(u)

        sites = table.sites
        j, at, below, above = self._neighbours(y)
        new = np.empty_like(y)
        length = np.empty_like(y)

        free = ~at
        if free.any():
            yf = y[free]
            eta = table.interior_step(yf)
            a = np.maximum(yf - eta, below[free])
            c = np.minimum(yf + eta, above[free])
            down = u[free] < (c - yf) / (c - a)
            new[free] = np.where(down, a, c)
            length[free] = c - a

        if at.any():
            js = j[at]
            ys = y[at]
            a = np.maximum(ys - sites.d_minus[js], below[at])
            c = np.minimum(ys + sites.d_plus[js], above[at])
            p_up = site_skew_probability(sites.alpha[js], ys - a, c - ys)
            new[at] = np.where(u[at] < p_up, c, a)
            length[at] = c - a

        return self._snap(new, length)

    def step(self, time_after: float) -> np.ndarray:
        """Advance every unfrozen path by one step; returns the qv increments."""
        scenario = self.table.scenario
        dt = scenario.settings.step
        u = self.streams.draw()
        active = np.flatnonzero(~self.frozen)
        dq = np.zeros(len(self.y))
        if not active.size:
            return dq

        y_old, x_old = self.y[active], self.x[active]
        y_new = self.advance(y_old, u[active])
        x_new = np.asarray(self.t.H(y_new), dtype=float)

        if scenario.settings.qv_mode is QvMode.MODEL:
            bx = np.asarray(scenario.b.evaluate(x_old), dtype=float)
            occupied = np.asarray(scenario.f.evaluate(x_old), dtype=float) != 0.0
            dq[active] = np.where(occupied, bx * bx * dt, 0.0)
        else:
            with np.errstate(invalid="ignore"):
                jump = (x_new - x_old) ** 2
            dq[active] = np.where(np.isfinite(jump), jump, 0.0)

        self.y[active], self.x[active] = y_new, x_new
        self.crossings.update(active, y_new)
        sites = self.table.sites
        if sites.boundary.any():
            out = np.isin(y_new, sites.y[sites.boundary])
            self.exploded[active[out]] = True
            self.explosion_time[active[out]] = time_after
        else:
            out = np.zeros(len(active), dtype=bool)
        hit = ~out & self.table.in_singular_set(y_new)
        if hit.any():
            rows = active[hit]
            self.absorbed[rows] = True
            self.absorption_time[rows] = time_after
            self.absorbed_at[rows] = x_new[hit]
        return dq


def walk_batch(
    table: StepTable, indices: np.ndarray, record: bool = False, chunk: int = DEFAULT_CHUNK
) -> PathBatch:
    """Simulate the paths with the given indices."""
    settings = table.scenario.settings
    n_steps, dt = settings.n_steps, settings.step
    state = _WalkState(table, np.asarray(indices), chunk)
    n = len(indices)

    if record:
        times = dt * np.arange(n_steps + 1)
        X = np.empty((n, n_steps + 1))
        Y = np.empty((n, n_steps + 1))
        qv = np.empty((n, n_steps))
        X[:, 0], Y[:, 0] = state.x, state.y
    else:
        times = np.array([0.0, n_steps * dt])
        X = np.empty((n, 2))
        Y = np.empty((n, 2))
        qv = np.zeros((n, 1))
        X[:, 0], Y[:, 0] = state.x, state.y

    for k in range(n_steps):
        dq = state.step((k + 1) * dt)
        if record:
            X[:, k + 1], Y[:, k + 1], qv[:, k] = state.x, state.y, dq
        else:
            qv[:, 0] += dq
    if not record:
        X[:, 1], Y[:, 1] = state.x, state.y

    sites = table.sites
    return PathBatch(
        indices=np.asarray(indices),
        times=times,
        X=X,
        Y=Y,
        qv=qv,
        explosion_time=state.explosion_time,
        absorbed_at=state.absorbed_at,
        absorption_time=state.absorption_time,
        skew_crossings=state.crossings.counts,
        skew_points=sites.x[state.skew_sites],
    )


def batch_indices(n_paths: int, batch_size: int, first_index: int = 0) -> list[np.ndarray]:
    if batch_size < 1:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    stop = first_index + n_paths
    return [
        np.arange(start, min(start + batch_size, stop))
        for start in range(first_index, stop, batch_size)
    ]


def simulate_walk(
    scenario: Scenario,
    n_paths: int | None = None,
    batch_size: int = DEFAULT_BATCH,
    record: bool = False,
    workers: int = 1,
    first_index: int = 0,
    chunk: int = DEFAULT_CHUNK,
    table: StepTable | None = None,
) -> Iterator[PathBatch]:
    """
    Stream batches of walk paths.

    Path i always uses the stream (seed, i): the emitted paths are identical for
    every batch size and worker count.
    """
    scenario.validate()
    n_paths = n_paths if n_paths is not None else scenario.settings.n_paths
    table = table or StepTable(scenario)
    batches = batch_indices(n_paths, batch_size, first_index)
    logger.info(
        f"walk engine: {n_paths} paths of '{scenario.name}' in {len(batches)} batches, "
        f"{scenario.settings.n_steps} steps each"
    )
    if workers <= 1:
        for indices in batches:
            yield walk_batch(table, indices, record, chunk)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(walk_batch, repeat(table), batches, repeat(record), repeat(chunk))
