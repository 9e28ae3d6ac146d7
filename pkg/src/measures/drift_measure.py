"""
Locally finite signed measures with atoms and a piecewise-power density.

Covers the measure <-> drift function duality: solving the integral equation
for g_nu (so that f_nu = 1/g_nu), its quadrature residual, and the drift
measure 1/2 f^{-1} df of a zero-free drift function.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy import integrate

from ..coefficients.piecewise import (
    ExpPowerPiece,
    PiecewisePower,
    PowerPiece,
    Side,
    ValidationReport,
    check_drift_function,
    decode_real,
    zero_sets,
)

logger = logging.getLogger(__name__)

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(10)


@dataclass(frozen=True)
class LocalSignedMeasure:
    """Atoms plus an absolutely continuous part with piecewise-power density."""

    atoms: tuple[tuple[float, float], ...] = ()
    density: PiecewisePower | None = None

    def __post_init__(self):
        atoms = tuple(sorted((float(x), float(m)) for x, m in self.atoms))
        points = [x for x, _ in atoms]
        if len(set(points)) != len(points):
            raise ValueError("a measure cannot carry two atoms at the same point")
        for x, m in atoms:
            if not (math.isfinite(x) and math.isfinite(m)):
                raise ValueError(f"atom ({x}, {m}) must be finite")
        object.__setattr__(self, "atoms", atoms)
        if self.density is not None:
            for piece in self.density.pieces:
                if not isinstance(piece, PowerPiece):
                    raise ValueError("density pieces must be power pieces")

    @classmethod
    def zero(cls) -> "LocalSignedMeasure":
        return cls()

    @classmethod
    def atom(cls, point: float, mass: float) -> "LocalSignedMeasure":
        return cls(((point, mass),))

    @classmethod
    def constant_density(cls, beta: float) -> "LocalSignedMeasure":
        return cls((), PiecewisePower.constant(beta))

    @property
    def is_atomic(self) -> bool:
        """No absolutely continuous part."""
        return self.density is None or all(p.coeff == 0.0 for p in self.density.pieces)

    @property
    def atom_points(self) -> tuple[float, ...]:
        return tuple(x for x, _ in self.atoms)

    def mass_at(self, x: float) -> float:
        return dict(self.atoms).get(float(x), 0.0)

    def density_or_zero(self) -> PiecewisePower:
        return self.density if self.density is not None else PiecewisePower.constant(0.0)

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"atoms": [{"point": x, "mass": m} for x, m in self.atoms]}
        if self.density is not None:
            data["density_pieces"] = self.density.to_dict()["pieces"]
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "LocalSignedMeasure":
        if not isinstance(data, dict):
            raise ValueError(f"measure must be an object, got {type(data).__name__}")
        unknown = set(data) - {"atoms", "density_pieces"}
        if unknown:
            raise ValueError(f"unknown field '{sorted(unknown)[0]}'")
        atoms = []
        for i, raw in enumerate(data.get("atoms", [])):
            if not isinstance(raw, dict) or set(raw) != {"point", "mass"}:
                raise ValueError(f"atoms[{i}] must have exactly 'point' and 'mass'")
            atoms.append((decode_real(raw["point"]), decode_real(raw["mass"])))
        density = None
        if "density_pieces" in data:
            density = PiecewisePower.from_dict({"pieces": data["density_pieces"]})
        return cls(tuple(atoms), density)


def validate_atoms(nu: LocalSignedMeasure) -> ValidationReport:
    """Every atom must carry mass < 1/2."""
    report = ValidationReport()
    for x, m in nu.atoms:
        if m == 0.5:
            report.violations.append(
                f"atom at {x} has mass 1/2: reflecting barrier (unsupported)"
            )
        elif m > 0.5:
            report.violations.append(f"atom at {x} has mass {m} > 1/2: no solution in general")
    return report


def _exp_piece(density_piece: PowerPiece, left: float, right: float, ref: float, g_ref: float):
    """Solution piece g = g_ref * exp(-2 * int_ref^x rho) on (left, right)."""
    c = density_piece.coeff
    if c == 0.0:
        return PowerPiece(left, right, g_ref)
    if density_piece.is_constant:
        side = 1 if ref <= left else -1
        return ExpPowerPiece(left, right, g_ref, -2.0 * c * side, 1.0, ref)
    if density_piece.is_logarithmic:
        # exp(-2c log|x - a|) is a power of |x - a|
        a, side = density_piece.anchor, density_piece.direction
        scale = g_ref * abs(ref - a) ** (2.0 * side * c)
        return PowerPiece(left, right, scale, -2.0 * side * c, a)
    a, q = density_piece.anchor, density_piece.exponent + 1.0
    side = 1 if a <= left else -1
    p_ref = float(density_piece.primitive(ref))
    return ExpPowerPiece(left, right, g_ref * math.exp(2.0 * p_ref), -2.0 * side * c / q, q, a)


def solve_g_nu(nu: LocalSignedMeasure) -> PiecewisePower:
    """
    Unique cadlag solution of

        g(x) = 1 - 2 int_[0,x] g(y-) nu(dy),   x >= 0
        g(x) = 1 + 2 int_(x,0) g(y-) nu(dy),   x < 0

    built by sweeping outward from 0: across the density g evolves by
    exp(-2 * accumulated density) and at an atom a, g(a) = g(a-) * (1 - 2 nu({a})).
    """
    report = validate_atoms(nu)
    if not report.passed:
        raise ValueError(f"g_nu is not positive: {'; '.join(report.violations)}")
    density = nu.density_or_zero().split_at([0.0, *nu.atom_points])
    masses = dict(nu.atoms)

    right_pieces = []
    g_at = 1.0 - 2.0 * masses.get(0.0, 0.0)
    for piece in (p for p in density.pieces if p.left >= 0.0):
        sol = _exp_piece(piece, piece.left, piece.right, piece.left, g_at)
        right_pieces.append(sol)
        if math.isfinite(piece.right):
            g_at = sol.limit(piece.right) * (1.0 - 2.0 * masses.get(piece.right, 0.0))

    left_pieces = []
    g_before = 1.0
    for piece in (p for p in reversed(density.pieces) if p.right <= 0.0):
        sol = _exp_piece(piece, piece.left, piece.right, piece.right, g_before)
        left_pieces.append(sol)
        if math.isfinite(piece.left):
            g_before = sol.limit(piece.left) / (1.0 - 2.0 * masses.get(piece.left, 0.0))

    g = PiecewisePower(tuple(reversed(left_pieces)) + tuple(right_pieces))
    logger.debug(f"solved g_nu with {len(g.pieces)} pieces for {len(nu.atoms)} atoms")
    return g


def drift_function_from_measure(nu: LocalSignedMeasure) -> PiecewisePower:
    """f_nu = 1 / g_nu, a drift function without zeros."""
    return solve_g_nu(nu).reciprocal()


def _cell_integrals(g: PiecewisePower, rho: PiecewisePower, nodes: np.ndarray) -> np.ndarray:
    """int g * rho over consecutive cells of ``nodes``."""
    lo, hi = nodes[:-1], nodes[1:]
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    points = mid[:, None] + half[:, None] * GAUSS_NODES[None, :]
    values = g.evaluate(points) * rho.evaluate(points)
    cells = half * (values @ GAUSS_WEIGHTS)

    # adaptive quadrature where the density piece has a non-trivial anchor
    singular = sorted({p.anchor for p in rho.pieces if not p.is_constant and p.coeff != 0.0})
    for a in singular:
        for k in np.flatnonzero((lo == a) | (hi == a)):
            u, v = float(lo[k]), float(hi[k])
            cells[k] = integrate.quad(
                lambda y: float(g.evaluate(y) * rho.evaluate(y)),
                u,
                v,
                epsabs=1e-15,
                epsrel=1e-13,
                limit=200,
            )[0]
    return cells


def residual_g_nu(
    nu: LocalSignedMeasure,
    g: PiecewisePower,
    lower: float = -10.0,
    upper: float = 10.0,
    step: float = 1e-3,
) -> float:
    """
    Sup over a grid of |g(x) - RHS(x)| / max(1, |g(x)|), where RHS is the right-hand
    side of the g_nu integral equation evaluated by quadrature with exact atom sums.
    """
    n = int(round((upper - lower) / step))
    grid = np.linspace(lower, upper, n + 1)
    rho = nu.density_or_zero()
    extra = [0.0, *rho.skeleton(), *nu.atom_points]
    nodes = np.unique(np.concatenate([grid, [x for x in extra if lower <= x <= upper]]))
    if nodes[0] > 0.0 or nodes[-1] < 0.0:
        nodes = np.unique(np.append(nodes, 0.0))
    cells = _cell_integrals(g, rho, nodes)

    zero = int(np.searchsorted(nodes, 0.0))
    cumulative = np.zeros_like(nodes)
    cumulative[zero + 1 :] = np.cumsum(cells[zero:])
    cumulative[:zero] = np.cumsum(cells[:zero][::-1])[::-1]

    atom_terms = [(a, float(g.evaluate(a, Side.LEFT)) * m) for a, m in nu.atoms]
    rhs = np.empty_like(nodes)
    for k, x in enumerate(nodes):
        if x >= 0.0:
            jumps = sum(t for a, t in atom_terms if 0.0 <= a <= x)
            rhs[k] = 1.0 - 2.0 * (cumulative[k] + jumps)
        else:
            jumps = sum(t for a, t in atom_terms if x < a < 0.0)
            rhs[k] = 1.0 + 2.0 * (cumulative[k] + jumps)

    on_grid = np.isin(nodes, grid)
    values = g.evaluate(nodes[on_grid])
    scale = np.maximum(1.0, np.abs(values))
    return float(np.max(np.abs(values - rhs[on_grid]) / scale))


def drift_measure_from_f(f: PiecewisePower) -> LocalSignedMeasure:
    """nu(dy) = 1/2 f(y)^{-1} df(y) for a drift function without zeros."""
    report = check_drift_function(f)
    if not report.passed:
        raise ValueError(f"not a drift function: {'; '.join(report.violations)}")
    zs = zero_sets(f)
    if zs.F:
        raise ValueError(
            f"drift measure is only sigma-finite when f has zeros (F = {list(zs.F)})"
        )
    atoms = []
    for a in f.breakpoints:
        after, before = f.value_at(a), f.left_limit(a)
        if after != before:
            atoms.append((a, 0.5 * (after - before) / after))

    pieces = []
    for piece in f.pieces:
        if isinstance(piece, ExpPowerPiece):
            q = piece.exponent
            coeff = 0.5 * piece.rate * q * piece.direction
            if q == 1.0:
                pieces.append(PowerPiece(piece.left, piece.right, coeff))
            else:
                pieces.append(PowerPiece(piece.left, piece.right, coeff, q - 1.0, piece.anchor))
        elif piece.is_constant:
            pieces.append(PowerPiece(piece.left, piece.right, 0.0))
        else:
            # d(c|x-a|^p) / (c|x-a|^p) = p sign(x-a) dx / |x-a|, anchor off the piece
            coeff = 0.5 * piece.exponent * piece.direction
            pieces.append(PowerPiece(piece.left, piece.right, coeff, -1.0, piece.anchor))
    return LocalSignedMeasure(tuple(atoms), PiecewisePower(tuple(pieces)))


def pushforward(nu: LocalSignedMeasure, transform) -> LocalSignedMeasure:
    """Image measure nu o G^{-1} of an atomic measure: atoms move to G(a)."""
    if not nu.is_atomic:
        raise ValueError("pushforward is defined for atomic (skewness) measures only")
    return LocalSignedMeasure(tuple((float(transform.G(a)), m) for a, m in nu.atoms))
