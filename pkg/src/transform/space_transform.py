"""
Space transformation G(x) = int_0^x 1/f, its inverse H and the transformed
diffusion coefficient sigma = (b/f) o H.
"""

import logging
import math

import numpy as np

from ..coefficients.piecewise import (
    PiecewisePower,
    Side,
    ZeroSets,
    check_drift_function,
    zero_sets,
)

logger = logging.getLogger(__name__)

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(10)


class SpaceTransform:
    """
    G, H and the component decomposition of R minus F for a drift function f.

    G is assembled from closed-form antiderivatives of 1/f on every piece and is
    continuous across breakpoints; H inverts each piece in closed form (bisection
    for curved exp-power pieces).
    """

    def __init__(self, f: PiecewisePower):
        self.f = f
        self.zero_sets: ZeroSets = zero_sets(f)
        self._split = f.split_at([0.0])
        self._recip = tuple(p.reciprocal() for p in self._split.pieces)
        self._offsets = self._assemble_offsets()
        breaks = np.asarray(self._split.breakpoints, dtype=float)
        self._x_breaks = breaks
        self.G_minus_inf = float(self._offsets[0] + self._recip[0].primitive(-math.inf))
        self.G_plus_inf = float(self._offsets[-1] + self._recip[-1].primitive(math.inf))
        self._y_breaks = self.G(breaks) if breaks.size else breaks

        points = [-math.inf, *self.zero_sets.F, math.inf]
        self.components = tuple(zip(points, points[1:], strict=False))

    def _assemble_offsets(self) -> np.ndarray:
        pieces = self._split.pieces
        offsets = np.zeros(len(pieces))
        start = next(i for i, p in enumerate(pieces) if p.left == 0.0)
        g_at = 0.0
        for i in range(start, len(pieces)):
            recip = self._recip[i]
            offsets[i] = g_at - float(recip.primitive(pieces[i].left))
            if math.isfinite(pieces[i].right):
                g_at = offsets[i] + float(recip.primitive(pieces[i].right))
        g_at = 0.0
        for i in range(start - 1, -1, -1):
            recip = self._recip[i]
            offsets[i] = g_at - float(recip.primitive(pieces[i].right))
            if math.isfinite(pieces[i].left):
                g_at = offsets[i] + float(recip.primitive(pieces[i].left))
        return offsets

    # -- G and H ------------------------------------------------------------------

    def G(self, x):
        xs = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xs).ravel()
        out = np.empty(flat.shape)
        idx = self._split.piece_index(flat)
        for i in np.unique(idx):
            mask = idx == i
            out[mask] = self._offsets[i] + self._recip[i].primitive(flat[mask])
        out[flat == -math.inf] = self.G_minus_inf
        out[flat == math.inf] = self.G_plus_inf
        if xs.ndim == 0:
            return float(out[0])
        return out.reshape(xs.shape)

    def in_range(self, y) -> np.ndarray:
        ys = np.asarray(y, dtype=float)
        return (ys >= self.G_minus_inf) & (ys <= self.G_plus_inf)

    def H(self, y):
        """Inverse of G on [G(-inf), G(+inf)], sending finite boundary values to +/-inf."""
        ys = np.asarray(y, dtype=float)
        flat = np.atleast_1d(ys).ravel()
        if not np.all(self.in_range(flat)):
            bad = flat[~self.in_range(flat)][0]
            raise ValueError(
                f"y = {bad} outside the closure of G(R) = [{self.G_minus_inf}, {self.G_plus_inf}]"
            )
        out = np.empty(flat.shape)
        idx = np.searchsorted(self._y_breaks, flat, side="right")
        for i in np.unique(idx):
            mask = idx == i
            piece = self._split.pieces[i]
            x = self._recip[i].invert_primitive(flat[mask] - self._offsets[i])
            out[mask] = np.clip(x, piece.left, piece.right)
        # breakpoints map back exactly
        hit = np.isin(flat, self._y_breaks)
        if hit.any():
            out[hit] = self._x_breaks[np.searchsorted(self._y_breaks, flat[hit])]
        out[flat == self.G_minus_inf] = -math.inf
        out[flat == self.G_plus_inf] = math.inf
        if ys.ndim == 0:
            return float(out[0])
        return out.reshape(ys.shape)

    @property
    def image_skeleton(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """(G(F+), G(F-))."""
        zs = self.zero_sets
        return (
            tuple(float(self.G(x)) for x in zs.F_plus),
            tuple(float(self.G(x)) for x in zs.F_minus),
        )

    @property
    def covers_real_line(self) -> bool:
        return self.G_minus_inf == -math.inf and self.G_plus_inf == math.inf

    # -- transformed coefficients ---------------------------------------------------

    def _ratio(self, b: PiecewisePower, y, side: Side) -> tuple[np.ndarray, np.ndarray]:
        x = self.H(y)
        return np.asarray(b.evaluate(x, side)), np.asarray(self.f.evaluate(x, side))

    def sigma(self, b: PiecewisePower, y, side: Side = Side.RIGHT):
        """(b/f)(H(y)): +inf on G(F+ & {b != 0}), with 0 * inf = 0."""
        bv, fv = self._ratio(b, y, side)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(bv == 0.0, 0.0, np.where(fv == 0.0, np.inf, bv / fv))
        return float(out) if out.ndim == 0 else out

    def sigma_tilde(self, b: PiecewisePower, y, side: Side = Side.RIGHT):
        """sigma with its infinite values on G(F+ & {b != 0}) replaced by 1."""
        out = np.asarray(self.sigma(b, y, side))
        out = np.where(np.isinf(out), 1.0, out)
        return float(out) if out.ndim == 0 else out

    def clock_density(self, b: PiecewisePower, y) -> np.ndarray:
        """(f/b)^2 o H: the time scale of the transformed diffusion; inf where b = 0."""
        bv, fv = self._ratio(b, y, Side.RIGHT)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(bv == 0.0, np.inf, (fv / bv) ** 2)


def build_transform(f: PiecewisePower) -> SpaceTransform:
    """Validate f and assemble its space transformation."""
    report = check_drift_function(f)
    if not report.passed:
        raise ValueError(f"not a drift function: {'; '.join(report.violations)}")
    transform = SpaceTransform(f)
    logger.debug(
        f"built transform: G(-inf)={transform.G_minus_inf}, G(+inf)={transform.G_plus_inf}, "
        f"{len(transform.components)} components"
    )
    return transform


def sigma(t: SpaceTransform, b: PiecewisePower, y, side: Side = Side.RIGHT):
    return t.sigma(b, y, side)


def sigma_tilde(t: SpaceTransform, b: PiecewisePower, y, side: Side = Side.RIGHT):
    return t.sigma_tilde(b, y, side)


def _cumulative_from_zero(func, nodes: np.ndarray) -> np.ndarray:
    """int_0^x func for every node x (0 must be a node)."""
    lo, hi = nodes[:-1], nodes[1:]
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    points = mid[:, None] + half[:, None] * GAUSS_NODES[None, :]
    cells = half * (func(points) @ GAUSS_WEIGHTS)
    zero = int(np.searchsorted(nodes, 0.0))
    out = np.zeros_like(nodes)
    out[zero + 1 :] = np.cumsum(cells[zero:])
    out[:zero] = -np.cumsum(cells[:zero][::-1])[::-1]
    return out


def invariant_residuals(
    t: SpaceTransform, lower: float = -4.0, upper: float = 4.0, n_points: int = 8001
) -> dict[str, float]:
    """
    roundtrip: sup |H(G(x)) - x| on [lower, upper];
    inverse_equation: sup |H(y) - int_0^y f(H(u)) du| on G([lower, upper]).
    """
    xs = np.linspace(lower, upper, n_points)
    roundtrip = float(np.max(np.abs(t.H(t.G(xs)) - xs)))

    ys = t.G(xs)
    extra = [0.0, *t.G(np.asarray(t.f.breakpoints, dtype=float))]
    nodes = np.unique(np.concatenate([ys, [y for y in extra if ys[0] <= y <= ys[-1]]]))
    integral = _cumulative_from_zero(lambda u: t.f.evaluate(t.H(u)), nodes)
    inverse_equation = float(np.max(np.abs(t.H(nodes) - integral)))
    return {"roundtrip": roundtrip, "inverse_equation": inverse_equation}


def dump_table(t: SpaceTransform, b: PiecewisePower, xs) -> dict[str, np.ndarray]:
    """Columns x, G(x), H(G(x)), sigma_tilde(G(x)) for plotting."""
    xs = np.asarray(xs, dtype=float)
    ys = t.G(xs)
    return {
        "x": xs,
        "G": ys,
        "H_of_G": t.H(ys),
        "sigma_tilde": np.asarray(t.sigma_tilde(b, ys)),
    }
