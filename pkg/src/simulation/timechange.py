"""
Time-change engine.

The transformed process is Y = W o A^{-1}, where W is a (skew) Brownian motion
approximated by a walk of resolution h and A = int k(W) is the clock with density
k = (f/b)^2 o H. Y at a grid time is interpolated linearly between the two
consecutive walk states whose clock values bracket it. Serves as the
distributional reference for the walk engine.
"""

import logging
from collections.abc import Iterator
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat

import numpy as np

from .probes import skew_prob_from_atom
from .scenario import QvMode, Scenario
from .step_tables import CLOCK_CAP
from .streams import DEFAULT_CHUNK, UniformStreams
from .walk import DEFAULT_BATCH, SNAP_TOLERANCE, CrossingCounter, PathBatch, batch_indices

logger = logging.getLogger(__name__)

MAX_BASE_STEPS = 20_000_000


def check_timechange_scope(scenario: Scenario) -> None:
    """The engine handles G(R) = R, no absorbing set and at most one skew atom."""
    t = scenario.transform
    problems = []
    if not t.covers_real_line:
        problems.append(
            f"G(R) = ({t.G_minus_inf}, {t.G_plus_inf}) is not the whole line (explosion)"
        )
    if not scenario.report.E_bsqrtf.is_empty:
        problems.append(f"E_{{b/sqrt f}} = {scenario.report.E_bsqrtf} is not empty (absorption)")
    if len(scenario.nu.atoms) > 1:
        problems.append(f"{len(scenario.nu.atoms)} skew atoms (at most one is supported)")
    if problems:
        raise ValueError(
            f"scenario '{scenario.name}' is outside the time-change engine scope: "
            + "; ".join(problems)
        )


def _clock(scenario: Scenario, w: np.ndarray) -> np.ndarray:
    k = np.asarray(scenario.transform.clock_density(scenario.b, w), dtype=float)
    return np.minimum(k, CLOCK_CAP)


def _speed(scenario: Scenario, w: np.ndarray) -> np.ndarray:
    """d<X>/d(base time) = f(H(w))^2."""
    fx = np.asarray(scenario.f.evaluate(scenario.transform.H(w)), dtype=float)
    return fx * fx


def timechange_batch(
    scenario: Scenario,
    indices: np.ndarray,
    record: bool = False,
    chunk: int = DEFAULT_CHUNK,
    max_base_steps: int = MAX_BASE_STEPS,
) -> PathBatch:
    settings = scenario.settings
    t = scenario.transform
    h = settings.resolution
    n = len(indices)
    if record:
        grid = settings.step * np.arange(settings.n_steps + 1)
    else:
        grid = np.array([0.0, settings.n_steps * settings.step])
    last = len(grid) - 1

    streams = UniformStreams(settings.seed, indices, chunk)
    x0 = np.asarray(scenario.initial.sample(streams.draw()), dtype=float)
    w = np.asarray(t.G(x0), dtype=float)

    site, p_up = None, 0.5
    skew_points = np.empty(0)
    if scenario.nu.atoms:
        [(a, alpha)] = scenario.nu.atoms
        site, p_up = float(t.G(a)), skew_prob_from_atom(alpha)
        skew_points = np.array([a])
    crossings = CrossingCounter(n, [] if site is None else [site], w)

    Y = np.empty((n, len(grid)))
    Q = np.empty((n, len(grid)))
    Y[:, 0], Q[:, 0] = w, 0.0
    clock = np.zeros(n)
    qv = np.zeros(n)
    k_w = _clock(scenario, w)
    s_w = _speed(scenario, w)
    next_j = np.ones(n, dtype=np.int64)
    active = np.arange(n)

    steps = 0
    while active.size:
        u = streams.draw(active)
        wa = w[active]
        lo, hi = wa - h, wa + h
        on_site = np.zeros(active.size, dtype=bool)
        if site is not None:
            on_site = wa == site
            lo = np.where(wa > site, np.maximum(lo, site), lo)
            hi = np.where(wa < site, np.minimum(hi, site), hi)
        up = np.where(on_site, u < p_up, u >= (hi - wa) / (hi - lo))
        new = np.where(up, hi, lo)
        if site is not None:
            new = np.where(np.abs(new - site) <= SNAP_TOLERANCE * h, site, new)
        # expected exit time of (lo, hi) for a Brownian motion started at wa
        dtau = (wa - lo) * (hi - wa)

        k_new = _clock(scenario, new)
        s_new = _speed(scenario, new)
        a_old = clock[active]
        a_new = a_old + 0.5 * (k_w[active] + k_new) * dtau
        q_old = qv[active]
        q_new = q_old + 0.5 * (s_w[active] + s_new) * dtau

        while True:
            j = next_j[active]
            target = grid[np.minimum(j, last)]
            fill = (j <= last) & (a_new >= target)
            if not fill.any():
                break
            rows = active[fill]
            span = a_new[fill] - a_old[fill]
            safe = np.where(span > 0.0, span, 1.0)
            frac = np.where(span > 0.0, (target[fill] - a_old[fill]) / safe, 1.0)
            Y[rows, j[fill]] = wa[fill] + frac * (new[fill] - wa[fill])
            Q[rows, j[fill]] = q_old[fill] + frac * (q_new[fill] - q_old[fill])
            next_j[rows] += 1

        w[active], clock[active], qv[active] = new, a_new, q_new
        crossings.update(active, new)
        k_w[active], s_w[active] = k_new, s_new
        active = active[next_j[active] <= last]

        steps += 1
        if steps >= max_base_steps and active.size:
            logger.warning(
                f"time-change walk hit its cap of {max_base_steps} steps with "
                f"{active.size} paths unfinished; holding them at their last state"
            )
            for r in active:
                Y[r, next_j[r] :] = w[r]
                Q[r, next_j[r] :] = qv[r]
            break

    X = np.asarray(t.H(Y), dtype=float)
    if settings.qv_mode is QvMode.MODEL:
        increments = np.diff(Q, axis=1)
    else:
        increments = np.diff(X, axis=1) ** 2
    logger.debug(f"time-change batch of {n} paths used {steps} base steps")
    return PathBatch(
        indices=np.asarray(indices),
        times=grid,
        X=X,
        Y=Y,
        qv=increments,
        explosion_time=np.full(n, np.nan),
        absorbed_at=np.full(n, np.nan),
        absorption_time=np.full(n, np.nan),
        skew_crossings=crossings.counts,
        skew_points=skew_points,
    )


def simulate_timechange(
    scenario: Scenario,
    n_paths: int | None = None,
    batch_size: int = DEFAULT_BATCH,
    record: bool = False,
    workers: int = 1,
    first_index: int = 0,
    chunk: int = DEFAULT_CHUNK,
    max_base_steps: int = MAX_BASE_STEPS,
) -> Iterator[PathBatch]:
    """Stream batches of time-changed paths; same seeding contract as the walk engine."""
    scenario.validate()
    check_timechange_scope(scenario)
    n_paths = n_paths if n_paths is not None else scenario.settings.n_paths
    batches = batch_indices(n_paths, batch_size, first_index)
    logger.info(
        f"time-change engine: {n_paths} paths of '{scenario.name}', "
        f"base resolution {scenario.settings.resolution}"
    )
    if workers <= 1:
        for indices in batches:
            yield timechange_batch(scenario, indices, record, chunk, max_base_steps)
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(
            timechange_batch,
            repeat(scenario),
            batches,
            repeat(record),
            repeat(chunk),
            repeat(max_base_steps),
        )
