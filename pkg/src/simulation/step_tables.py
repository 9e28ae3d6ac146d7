"""
Sites and step lengths of the transformed walk.

In the transformed coordinate Y = G(X) the diffusion is a local martingale with
clock density k = sigma^{-2} = (f/b)^2 o H. With M1' = k and M2' = M1 the expected
exit time of (y - eta, y + eta) is M2(y + eta) - 2 M2(y) + M2(y - eta); the
``exit_time`` rule picks eta so that this equals the time step. One-sided lengths
at a site g solve 2 [M2(g + eta) - M2(g) - eta M1(g)] = step (and its mirror).
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..coefficients.piecewise import PiecewisePower, Side, bisect_increasing
from ..measures.drift_measure import LocalSignedMeasure, pushforward
from ..transform.space_transform import SpaceTransform
from ..wellposed.sets import PointAndIntervalSet
from ..wellposed.verdicts import transformed_sets
from .scenario import Scenario, StepRule

logger = logging.getLogger(__name__)

CLOCK_CAP = 1e12  # clock density where b vanishes
TABLE_RADIUS = 8.0  # half-width of the tabulated X range around the start
TABLE_NODES = 4001


def site_skew_probability(alpha, d_minus, d_plus):
    """
    Right-exit probability d- / (d- + (1 - 2 alpha) d+) at a site with one-sided
    step lengths d-, d+. Works elementwise on arrays.
    """
    alpha = np.asarray(alpha, dtype=float)
    d_minus = np.asarray(d_minus, dtype=float)
    d_plus = np.asarray(d_plus, dtype=float)
    if np.any(alpha >= 0.5):
        raise ValueError(f"skewness atom must be < 1/2, got {float(np.max(alpha))}")
    if np.any(d_minus <= 0.0) or np.any(d_plus <= 0.0):
        raise ValueError("one-sided step lengths must be positive")
    p = d_minus / (d_minus + (1.0 - 2.0 * alpha) * d_plus)
    return float(p) if p.ndim == 0 else p


@dataclass(frozen=True)
class Sites:
    """Points of the Y line where the walk must stop: skeleton images and boundaries."""

    y: np.ndarray
    x: np.ndarray
    alpha: np.ndarray
    absorbing: np.ndarray
    boundary: np.ndarray
    d_minus: np.ndarray
    d_plus: np.ndarray

    def __len__(self) -> int:
        return len(self.y)

    @property
    def skew(self) -> np.ndarray:
        return self.alpha != 0.0


class ClockTable:
    """Exact antiderivatives M1, M2 of a cellwise-constant clock density."""

    def __init__(self, nodes: np.ndarray, density: np.ndarray):
        self.nodes = nodes
        self.density = density
        dy = np.diff(nodes)
        self.m1 = np.concatenate([[0.0], np.cumsum(density * dy)])
        self.m2 = np.concatenate([[0.0], np.cumsum(self.m1[:-1] * dy + 0.5 * density * dy**2)])

    def _cell(self, z: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.nodes, z, side="right") - 1
        return np.clip(idx, 0, len(self.density) - 1)

    def M1(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        i = self._cell(z)
        return self.m1[i] + self.density[i] * (z - self.nodes[i])

    def M2(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        i = self._cell(z)
        dz = z - self.nodes[i]
        return self.m2[i] + self.m1[i] * dz + 0.5 * self.density[i] * dz**2

    def symmetric_step(self, y: np.ndarray, target: float) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        center = self.M2(y)
        return bisect_increasing(
            lambda eta: self.M2(y + eta) - 2.0 * center + self.M2(y - eta),
            np.full(y.shape, target),
            np.full(y.shape, np.inf),
        )

    def one_sided_step(self, g: np.ndarray, target: float, side: Side) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        sign = 1.0 if side is Side.RIGHT else -1.0
        m2, m1 = self.M2(g), self.M1(g)
        return bisect_increasing(
            lambda eta: 2.0 * (self.M2(g + sign * eta) - m2 - sign * eta * m1),
            np.full(g.shape, target),
            np.full(g.shape, np.inf),
        )


class StepTable:
    """Step lengths of the walk engine for one scenario."""

    def __init__(
        self,
        scenario: Scenario,
        radius: float = TABLE_RADIUS,
        n_nodes: int = TABLE_NODES,
    ):
        self.scenario = scenario
        self.t: SpaceTransform = scenario.transform
        self.b: PiecewisePower = scenario.b
        self.step = scenario.settings.step
        self.rule = scenario.settings.step_rule
        self.sqrt_step = math.sqrt(self.step)
        _, self.singular = transformed_sets(self.t, self.b)

        if self.rule is StepRule.GAUSSIAN:
            skeleton = set(self.b.skeleton()) | set(self.t.f.skeleton())
            if skeleton or not self.t.covers_real_line:
                raise ValueError(
                    "the gaussian step rule needs smooth coefficients without sites and G(R) = R"
                )

        self._build_nodes(scenario.initial.center, radius, n_nodes)
        self.sites = self._build_sites(scenario.nu)
        logger.debug(
            f"step table: {len(self.nodes)} nodes on [{self.lo}, {self.hi}], "
            f"{len(self.sites)} sites"
        )

    # -- interior -------------------------------------------------------------------

    def _build_nodes(self, center: float, radius: float, n_nodes: int) -> None:
        t = self.t
        xs = np.linspace(center - radius, center + radius, n_nodes)
        ys = t.G(xs)
        lo, hi = float(ys[0]), float(ys[-1])
        image_sites = t.G(np.asarray(sorted(set(self.b.skeleton()) | set(t.f.skeleton()))))
        inside = image_sites[(image_sites > lo) & (image_sites < hi)]
        nodes = np.unique(np.concatenate([ys, np.linspace(lo, hi, n_nodes), inside]))
        self.nodes = nodes
        self.lo, self.hi = lo, hi

        mids = 0.5 * (nodes[:-1] + nodes[1:])
        density = np.minimum(np.asarray(t.clock_density(self.b, mids), dtype=float), CLOCK_CAP)
        self.clock = ClockTable(nodes, density)
        if self.rule is StepRule.EXIT_TIME:
            self.node_steps = self.clock.symmetric_step(nodes, self.step)
            self.node_steps = np.minimum(self.node_steps, hi - lo)
        else:
            self.node_steps = None

    def euler_step(self, y: np.ndarray) -> np.ndarray:
        return np.asarray(self.t.sigma_tilde(self.b, y), dtype=float) * self.sqrt_step

    def interior_step(self, y: np.ndarray) -> np.ndarray:
        """Symmetric step length eta(y) away from sites."""
        y = np.asarray(y, dtype=float)
        if self.node_steps is None:
            return self.euler_step(y)
        eta = np.interp(y, self.nodes, self.node_steps)
        outside = (y < self.lo) | (y > self.hi)
        if outside.any():
            eta[outside] = self.euler_step(y[outside])
        return eta

    # -- sites --------------------------------------------------------------------------

    def _build_sites(self, nu: LocalSignedMeasure) -> Sites:
        t = self.t
        xs = sorted(set(self.b.skeleton()) | set(t.f.skeleton()))
        ys = [float(t.G(x)) for x in xs]
        masses = dict(pushforward(nu, t).atoms) if nu.atoms else {}
        boundary = []
        if math.isfinite(t.G_minus_inf):
            xs.insert(0, -math.inf)
            ys.insert(0, t.G_minus_inf)
            boundary.append(0)
        if math.isfinite(t.G_plus_inf):
            xs.append(math.inf)
            ys.append(t.G_plus_inf)
            boundary.append(len(ys) - 1)

        y = np.asarray(ys, dtype=float)
        is_boundary = np.zeros(len(y), dtype=bool)
        is_boundary[boundary] = True
        alpha = np.asarray([masses.get(v, 0.0) for v in ys], dtype=float)
        absorbing = np.asarray(
            [not b and self.singular.contains(v) for v, b in zip(ys, is_boundary, strict=True)],
            dtype=bool,
        )
        d_minus = np.zeros(len(y))
        d_plus = np.zeros(len(y))
        regular = ~is_boundary & ~absorbing
        if regular.any():
            d_minus[regular] = self._site_step(y[regular], Side.LEFT)
            d_plus[regular] = self._site_step(y[regular], Side.RIGHT)
        return Sites(y, np.asarray(xs, dtype=float), alpha, absorbing, is_boundary, d_minus, d_plus)

    def _site_step(self, g: np.ndarray, side: Side) -> np.ndarray:
        euler = np.asarray(self.t.sigma_tilde(self.b, g, side), dtype=float) * self.sqrt_step
        if self.rule is not StepRule.EXIT_TIME:
            return euler
        inside = (g >= self.lo) & (g <= self.hi)
        out = euler.copy()
        if inside.any():
            out[inside] = self.clock.one_sided_step(g[inside], self.step, side)
        return np.minimum(out, self.hi - self.lo)

    def in_singular_set(self, y: np.ndarray) -> np.ndarray:
        """Membership in the closure of E_sigma (absorbing set)."""
        return in_set(self.singular, y)


def in_set(s: PointAndIntervalSet, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    hit = np.isin(y, np.asarray(s.points, dtype=float))
    for iv in s.intervals:
        hit |= (y >= iv.lo) & (y <= iv.hi)
    return hit
