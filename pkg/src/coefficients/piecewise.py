"""
Piecewise-power functions on the real line.

Drift functions f and diffusion coefficients b are held exactly as finitely many
pieces. A piece is either a power ``coeff * |x - anchor| ** exponent`` or an
exp-power ``coeff * exp(rate * |x - anchor| ** exponent)``; the anchor of a
non-constant piece never lies strictly inside its interval, so every piece is
monotone and has closed-form antiderivatives (up to incomplete gamma functions).
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np
from scipy import integrate, special

logger = logging.getLogger(__name__)

BISECTION_MAX_ITER = 200
BISECTION_TOL = 1e-12


class Side(Enum):
    """Which one-sided value of a function to read at a point."""

    RIGHT = "right"
    LEFT = "left"


def encode_real(x: float) -> float | str:
    """JSON has no infinities; spell them as strings."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def decode_real(x: float | int | str) -> float:
    if isinstance(x, str):
        if x in ("inf", "+inf"):
            return math.inf
        if x == "-inf":
            return -math.inf
        raise ValueError(f"expected a number or '+/-inf', got '{x}'")
    if isinstance(x, bool) or not isinstance(x, int | float):
        raise ValueError(f"expected a number, got {type(x).__name__}")
    return float(x)


def _default_anchor(left: float, right: float) -> float:
    """Finite end nearest to 0 (0 itself for the whole line)."""
    finite = [e for e in (left, right) if math.isfinite(e)]
    if not finite:
        return 0.0
    return min(finite, key=abs)


def bisect_increasing(func, targets: np.ndarray, upper: np.ndarray) -> np.ndarray:
    """Vectorized bisection for func(u) = targets on [0, upper], func increasing."""
    lo = np.zeros_like(targets)
    hi = np.where(np.isinf(upper), 1.0, upper).astype(float)
    unbounded = np.isinf(upper)
    # grow brackets of unbounded pieces until they enclose the target
    for _ in range(BISECTION_MAX_ITER):
        grow = unbounded & (func(hi) < targets)
        if not grow.any():
            break
        hi = np.where(grow, 2.0 * hi, hi)
    # converged entries are frozen so every entry is independent of its neighbours
    for _ in range(BISECTION_MAX_ITER):
        open_ = hi - lo > BISECTION_TOL * np.maximum(1.0, hi)
        if not open_.any():
            break
        mid = 0.5 * (lo + hi)
        below = func(mid) < targets
        lo = np.where(open_ & below, mid, lo)
        hi = np.where(open_ & ~below, mid, hi)
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class _PieceBase:
    left: float
    right: float
    coeff: float

    def _check_interval(self) -> None:
        if not self.left < self.right:
            raise ValueError(f"empty piece interval ({self.left}, {self.right})")
        if math.isnan(self.coeff) or math.isinf(self.coeff):
            raise ValueError(f"piece coefficient must be finite, got {self.coeff}")

    def _check_anchor(self, anchor: float) -> None:
        if not math.isfinite(anchor):
            raise ValueError(f"anchor of a non-constant piece must be finite, got {anchor}")
        if self.left < anchor < self.right:
            raise ValueError(
                f"anchor {anchor} lies inside piece interval ({self.left}, {self.right})"
            )

    @property
    def direction(self) -> int:
        """+1 when the piece lies right of its anchor, -1 when left."""
        return 1 if self.anchor <= self.left else -1

    def primitive(self, x) -> np.ndarray:
        """Signed antiderivative vanishing at the anchor: sign(x - a) * I(|x - a|)."""
        xs = np.asarray(x, dtype=float)
        dist = np.abs(xs - self.anchor)
        return np.sign(xs - self.anchor) * self._radial_integral(dist)

    def invert_primitive(self, w) -> np.ndarray:
        """Inverse of ``primitive`` on the piece (w in its range)."""
        ws = np.asarray(w, dtype=float)
        dist = self._radial_integral_inverse(np.abs(ws))
        return self.anchor + np.sign(ws) * dist

    def contains(self, x: float) -> bool:
        return self.left < x < self.right


@dataclass(frozen=True)
class PowerPiece(_PieceBase):
    """``coeff * |x - anchor| ** exponent`` on the open interval (left, right)."""

    exponent: float = 0.0
    anchor: float | None = None

    kind = "power"

    def __post_init__(self):
        self._check_interval()
        if not (-1.0 < self.exponent < 1.0 or self.exponent == -1.0):
            raise ValueError(f"PowerPiece exponent must lie in [-1, 1), got {self.exponent}")
        if self.exponent == 0.0:
            object.__setattr__(self, "anchor", _default_anchor(self.left, self.right))
            return
        if self.anchor is None:
            raise ValueError("a PowerPiece with non-zero exponent needs an anchor")
        object.__setattr__(self, "anchor", float(self.anchor))
        self._check_anchor(self.anchor)
        if self.is_logarithmic and self.left <= self.anchor <= self.right:
            raise ValueError(
                f"exponent -1 needs an anchor off [{self.left}, {self.right}], got {self.anchor}"
            )

    @property
    def is_constant(self) -> bool:
        return self.exponent == 0.0

    @property
    def is_logarithmic(self) -> bool:
        """Exponent -1: the primitive is a logarithm."""
        return self.exponent == -1.0

    @property
    def direction(self) -> int:
        if self.is_constant and self.left < self.anchor < self.right:
            return 1
        return super().direction

    def value(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        if self.is_constant:
            return np.full(xs.shape, self.coeff)
        with np.errstate(divide="ignore"):
            return self.coeff * np.abs(xs - self.anchor) ** self.exponent

    def limit(self, x: float) -> float:
        """Value approached inside the piece at a point of its closure."""
        if self.is_constant or x != self.anchor:
            return float(self.value(x))
        if self.coeff == 0.0:
            return 0.0
        return 0.0 if self.exponent > 0 else math.copysign(math.inf, self.coeff)

    def _radial_integral(self, dist: np.ndarray) -> np.ndarray:
        q = self.exponent + 1.0
        if q == 0.0:
            return self.coeff * np.log(dist)
        return self.coeff * dist**q / q

    def _radial_integral_inverse(self, w: np.ndarray) -> np.ndarray:
        q = self.exponent + 1.0
        return (q * w / self.coeff) ** (1.0 / q)

    def primitive(self, x) -> np.ndarray:
        if self.is_constant:
            return self.coeff * (np.asarray(x, dtype=float) - self.anchor)
        return super().primitive(x)

    def invert_primitive(self, w) -> np.ndarray:
        if self.is_constant:
            return self.anchor + np.asarray(w, dtype=float) / self.coeff
        if self.is_logarithmic:
            # log primitives change sign, so the side comes from the piece
            side = self.direction
            return self.anchor + side * np.exp(side * np.asarray(w, dtype=float) / self.coeff)
        return super().invert_primitive(w)

    def reciprocal(self) -> "PowerPiece":
        if self.coeff == 0.0:
            raise ValueError(f"reciprocal of a vanishing piece on ({self.left}, {self.right})")
        return PowerPiece(self.left, self.right, 1.0 / self.coeff, -self.exponent, self.anchor)

    def scaled(self, factor: float) -> "PowerPiece":
        return PowerPiece(self.left, self.right, factor * self.coeff, self.exponent, self.anchor)

    def restricted(self, left: float, right: float) -> "PowerPiece":
        return PowerPiece(left, right, self.coeff, self.exponent, self.anchor)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "l": encode_real(self.left),
            "r": encode_real(self.right),
            "anchor": encode_real(self.anchor),
            "coeff": self.coeff,
            "exponent": self.exponent,
        }


@dataclass(frozen=True)
class ExpPowerPiece(_PieceBase):
    """``coeff * exp(rate * |x - anchor| ** exponent)`` on (left, right), exponent in (0, 2)."""

    rate: float = 0.0
    exponent: float = 1.0
    anchor: float | None = None

    kind = "exp_power"

    def __post_init__(self):
        self._check_interval()
        if not 0.0 < self.exponent < 2.0:
            raise ValueError(f"ExpPowerPiece exponent must lie in (0, 2), got {self.exponent}")
        if not math.isfinite(self.rate):
            raise ValueError(f"ExpPowerPiece rate must be finite, got {self.rate}")
        anchor = self.anchor
        if anchor is None:
            if not (math.isfinite(self.left) or math.isfinite(self.right)):
                raise ValueError("an ExpPowerPiece needs a finite end to anchor on")
            anchor = _default_anchor(self.left, self.right)
        object.__setattr__(self, "anchor", float(anchor))
        self._check_anchor(self.anchor)

    is_constant = False

    def value(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        with np.errstate(over="ignore"):
            return self.coeff * np.exp(self.rate * np.abs(xs - self.anchor) ** self.exponent)

    def limit(self, x: float) -> float:
        return float(self.value(x))

    def _radial_integral(self, dist: np.ndarray) -> np.ndarray:
        r, q = self.rate, self.exponent
        dist = np.asarray(dist, dtype=float)
        if r == 0.0:
            return self.coeff * dist
        if q == 1.0:
            with np.errstate(over="ignore"):
                return self.coeff * np.expm1(r * dist) / r
        if r < 0.0:
            a = 1.0 / q
            lam = -r
            scale = special.gamma(a) * lam ** (-a) / q
            return self.coeff * scale * special.gammainc(a, lam * dist**q)
        # growing exp-power with curvature exponent != 1: adaptive quadrature
        flat = dist.ravel()
        out = np.array(
            [
                integrate.quad(lambda t: math.exp(r * t**q), 0.0, u, epsabs=1e-14, epsrel=1e-13)[0]
                if math.isfinite(u)
                else math.inf
                for u in flat
            ]
        )
        return self.coeff * out.reshape(dist.shape)

    def _radial_integral_inverse(self, w: np.ndarray) -> np.ndarray:
        r, q = self.rate, self.exponent
        w = np.asarray(w, dtype=float)
        if r == 0.0:
            return w / self.coeff
        if q == 1.0:
            arg = r * w / self.coeff
            with np.errstate(divide="ignore", invalid="ignore"):
                dist = np.log1p(arg) / r
            return np.where(arg <= -1.0, np.inf, dist)
        reach = max(abs(self.left - self.anchor), abs(self.right - self.anchor))
        return bisect_increasing(self._radial_integral, w, np.full(w.shape, reach))

    def reciprocal(self) -> "ExpPowerPiece":
        if self.coeff == 0.0:
            raise ValueError(f"reciprocal of a vanishing piece on ({self.left}, {self.right})")
        return ExpPowerPiece(
            self.left, self.right, 1.0 / self.coeff, -self.rate, self.exponent, self.anchor
        )

    def scaled(self, factor: float) -> "ExpPowerPiece":
        return ExpPowerPiece(
            self.left, self.right, factor * self.coeff, self.rate, self.exponent, self.anchor
        )

    def restricted(self, left: float, right: float) -> "ExpPowerPiece":
        return ExpPowerPiece(left, right, self.coeff, self.rate, self.exponent, self.anchor)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "l": encode_real(self.left),
            "r": encode_real(self.right),
            "anchor": encode_real(self.anchor),
            "coeff": self.coeff,
            "rate": self.rate,
            "exponent": self.exponent,
        }


Piece = PowerPiece | ExpPowerPiece

_PIECE_FIELDS = {
    "power": {"kind", "l", "r", "anchor", "coeff", "exponent"},
    "exp_power": {"kind", "l", "r", "anchor", "coeff", "rate", "exponent"},
}


def piece_from_dict(data: dict[str, Any]) -> Piece:
    """Build a piece from its JSON form; unknown keys are errors."""
    if not isinstance(data, dict):
        raise ValueError(f"piece must be an object, got {type(data).__name__}")
    kind = data.get("kind", "power")
    if kind not in _PIECE_FIELDS:
        raise ValueError(f"unknown piece kind '{kind}'")
    unknown = set(data) - _PIECE_FIELDS[kind]
    if unknown:
        raise ValueError(f"unknown field '{sorted(unknown)[0]}' in {kind} piece")
    for key in ("l", "r", "coeff"):
        if key not in data:
            raise ValueError(f"missing field '{key}' in {kind} piece")
    anchor = decode_real(data["anchor"]) if data.get("anchor") is not None else None
    if kind == "power":
        return PowerPiece(
            decode_real(data["l"]),
            decode_real(data["r"]),
            decode_real(data["coeff"]),
            decode_real(data.get("exponent", 0.0)),
            anchor,
        )
    if "rate" not in data:
        raise ValueError("missing field 'rate' in exp_power piece")
    return ExpPowerPiece(
        decode_real(data["l"]),
        decode_real(data["r"]),
        decode_real(data["coeff"]),
        decode_real(data["rate"]),
        decode_real(data.get("exponent", 1.0)),
        anchor,
    )


@dataclass(frozen=True)
class LocalBehavior:
    """Leading behavior coeff * |x - x0| ** exponent of a function on one side of x0."""

    coeff: float
    exponent: float

    @property
    def vanishes(self) -> bool:
        return self.coeff == 0.0


@dataclass
class ValidationReport:
    """Outcome of a diagnostic check: passes iff no violation was found."""

    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "violations": list(self.violations)}


@dataclass(frozen=True)
class PiecewisePower:
    """
    Right-continuous function given by contiguous pieces covering the real line.

    ``values`` holds explicit values at finite breakpoints; without an entry the
    value at a breakpoint is the limit from the piece on its right.
    """

    pieces: tuple[Piece, ...]
    values: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise ValueError("a piecewise function needs at least one piece")
        if pieces[0].left != -math.inf or pieces[-1].right != math.inf:
            raise ValueError("pieces must cover the whole real line")
        for prev, nxt in zip(pieces, pieces[1:], strict=False):
            if prev.right != nxt.left:
                raise ValueError(
                    f"pieces must be contiguous: ({prev.left}, {prev.right}) "
                    f"is followed by ({nxt.left}, {nxt.right})"
                )
        breaks = {p.right for p in pieces[:-1]}
        values = tuple(sorted((float(x), float(v)) for x, v in self.values))
        for x, _ in values:
            if x not in breaks:
                raise ValueError(f"explicit value at {x}, which is not a breakpoint")
        if len({x for x, _ in values}) != len(values):
            raise ValueError("duplicate explicit breakpoint values")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "values", values)

    # -- constructors -------------------------------------------------------------

    @classmethod
    def constant(cls, coeff: float) -> "PiecewisePower":
        return cls((PowerPiece(-math.inf, math.inf, coeff),))

    @classmethod
    def symmetric_power(
        cls, coeff: float, exponent: float, anchor: float = 0.0
    ) -> "PiecewisePower":
        """``coeff * |x - anchor| ** exponent`` on both sides of the anchor."""
        return cls(
            (
                PowerPiece(-math.inf, anchor, coeff, exponent, anchor),
                PowerPiece(anchor, math.inf, coeff, exponent, anchor),
            )
        )

    @classmethod
    def step(cls, breakpoints: list[float], levels: list[float]) -> "PiecewisePower":
        """Piecewise-constant function with ``levels[i]`` between consecutive breakpoints."""
        if len(levels) != len(breakpoints) + 1:
            raise ValueError("a step function needs one more level than breakpoints")
        edges = [-math.inf, *breakpoints, math.inf]
        bounds = zip(edges, edges[1:], levels, strict=False)
        return cls(tuple(PowerPiece(lo, hi, c) for lo, hi, c in bounds))

    # -- structure ----------------------------------------------------------------

    @cached_property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(p.right for p in self.pieces[:-1])

    @cached_property
    def _breaks(self) -> np.ndarray:
        return np.asarray(self.breakpoints, dtype=float)

    def skeleton(self) -> tuple[float, ...]:
        """Finite points where the function may jump, vanish or blow up."""
        return self.breakpoints

    def piece_index(self, x, side: Side = Side.RIGHT) -> np.ndarray:
        return np.searchsorted(self._breaks, x, side="right" if side is Side.RIGHT else "left")

    def piece_at(self, x: float, side: Side = Side.RIGHT) -> Piece:
        return self.pieces[int(self.piece_index(x, side))]

    def zero_pieces(self) -> list[Piece]:
        return [p for p in self.pieces if p.coeff == 0.0]

    # -- evaluation ---------------------------------------------------------------

    def evaluate(self, x, side: Side = Side.RIGHT):
        """g(x) (side=RIGHT) or g(x-) (side=LEFT); +inf at +/-inf."""
        xs = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xs).ravel()
        out = np.full(flat.shape, np.inf)
        finite = np.isfinite(flat)
        if finite.any():
            xf = flat[finite]
            idx = self.piece_index(xf, side)
            vals = np.empty_like(xf)
            for i in np.unique(idx):
                mask = idx == i
                vals[mask] = self._piece_values(int(i), xf[mask])
            if side is Side.RIGHT:
                for point, value in self.values:
                    vals[xf == point] = value
            out[finite] = vals
        if xs.ndim == 0:
            return float(out[0])
        return out.reshape(xs.shape)

    def _piece_values(self, i: int, x: np.ndarray) -> np.ndarray:
        piece = self.pieces[i]
        vals = piece.value(x)
        # exact limits at the anchor (avoids 0 * inf and sign noise)
        at_anchor = x == piece.anchor
        if at_anchor.any() and not piece.is_constant:
            vals = np.where(at_anchor, piece.limit(piece.anchor), vals)
        return vals

    def __call__(self, x):
        return self.evaluate(x, Side.RIGHT)

    def value_at(self, x: float) -> float:
        return self.evaluate(x, Side.RIGHT)

    def left_limit(self, x: float) -> float:
        return self.evaluate(x, Side.LEFT)

    def right_limit(self, x: float) -> float:
        """Limit from the right, ignoring an explicit breakpoint value."""
        return self.piece_at(x, Side.RIGHT).limit(x)

    def local_behavior(self, x0: float, side: Side) -> LocalBehavior:
        """Leading power behavior on the given side of x0."""
        piece = self.piece_at(x0, side)
        if piece.coeff == 0.0:
            return LocalBehavior(0.0, 0.0)
        if isinstance(piece, PowerPiece) and not piece.is_constant and piece.anchor == x0:
            return LocalBehavior(piece.coeff, piece.exponent)
        return LocalBehavior(piece.limit(x0), 0.0)

    # -- algebra ------------------------------------------------------------------

    def reciprocal(self) -> "PiecewisePower":
        for x, v in self.values:
            if v == 0.0:
                raise ValueError(f"reciprocal undefined: explicit zero value at {x}")
        return PiecewisePower(
            tuple(p.reciprocal() for p in self.pieces),
            tuple((x, 1.0 / v) for x, v in self.values),
        )

    def scaled(self, factor: float) -> "PiecewisePower":
        return PiecewisePower(
            tuple(p.scaled(factor) for p in self.pieces),
            tuple((x, factor * v) for x, v in self.values),
        )

    def split_at(self, points) -> "PiecewisePower":
        """Same function with extra breakpoints at the given finite points."""
        cuts = sorted({float(c) for c in points if math.isfinite(c)})
        pieces: list[Piece] = []
        for piece in self.pieces:
            inner = [c for c in cuts if piece.left < c < piece.right]
            edges = [piece.left, *inner, piece.right]
            if not inner:
                pieces.append(piece)
                continue
            for lo, hi in zip(edges, edges[1:], strict=False):
                pieces.append(piece.restricted(lo, hi))
        return PiecewisePower(tuple(pieces), self.values)

    def integrate(self, u: float, v: float) -> float:
        """Exact integral of g over [u, v] (finite u <= v)."""
        if not (math.isfinite(u) and math.isfinite(v)):
            raise ValueError("integration bounds must be finite")
        if v < u:
            return -self.integrate(v, u)
        total = 0.0
        for piece in self.pieces:
            lo, hi = max(u, piece.left), min(v, piece.right)
            if lo >= hi:
                continue
            total += float(piece.primitive(hi) - piece.primitive(lo))
        return total

    def total_variation(self, u: float, v: float) -> float:
        """Total variation on [u, v], pieces being monotone."""
        if not (math.isfinite(u) and math.isfinite(v)) or v < u:
            raise ValueError("total variation needs finite bounds u <= v")
        chain = [self.value_at(u)]
        for piece in self.pieces:
            lo, hi = max(u, piece.left), min(v, piece.right)
            if lo >= hi:
                continue
            if lo != u:
                chain.append(self.left_limit(lo))
                chain.append(self.value_at(lo))
            chain.append(piece.limit(lo))
            chain.append(piece.limit(hi))
        chain.append(self.value_at(v))
        steps = np.abs(np.diff(np.asarray(chain, dtype=float)))
        return float(np.nansum(steps))

    # -- serialization ------------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"pieces": [p.to_dict() for p in self.pieces]}
        if self.values:
            data["values"] = [{"point": x, "value": v} for x, v in self.values]
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "PiecewisePower":
        if not isinstance(data, dict):
            raise ValueError(f"function must be an object, got {type(data).__name__}")
        unknown = set(data) - {"pieces", "values"}
        if unknown:
            raise ValueError(f"unknown field '{sorted(unknown)[0]}'")
        if "pieces" not in data or not isinstance(data["pieces"], list):
            raise ValueError("missing field 'pieces' (a list)")
        pieces = []
        for i, raw in enumerate(data["pieces"]):
            try:
                pieces.append(piece_from_dict(raw))
            except ValueError as e:
                raise ValueError(f"pieces[{i}]: {e}") from e
        values = []
        for i, raw in enumerate(data.get("values", [])):
            if not isinstance(raw, dict) or set(raw) != {"point", "value"}:
                raise ValueError(f"values[{i}] must have exactly 'point' and 'value'")
            values.append((decode_real(raw["point"]), decode_real(raw["value"])))
        return cls(tuple(pieces), tuple(values))


# -- operations -----------------------------------------------------------------------


def evaluate(g: PiecewisePower, x, side: Side = Side.RIGHT):
    """g(x) or g(x-); +inf at +/-inf (drift-function convention)."""
    return g.evaluate(x, side)


@dataclass(frozen=True)
class ZeroSets:
    F_plus: tuple[float, ...]
    F_minus: tuple[float, ...]

    @property
    def F(self) -> tuple[float, ...]:
        return tuple(sorted(set(self.F_plus) | set(self.F_minus)))


def zero_sets(f: PiecewisePower) -> ZeroSets:
    """F+ = {f = 0} and F- = {f(.-) = 0}; both lie on the breakpoint skeleton."""
    vanishing = f.zero_pieces()
    if vanishing:
        piece = vanishing[0]
        raise ValueError(
            f"f vanishes on ({piece.left}, {piece.right}): 1/f not locally integrable"
        )
    skeleton = f.skeleton()
    f_plus = tuple(x for x in skeleton if f.value_at(x) == 0.0)
    f_minus = tuple(x for x in skeleton if f.left_limit(x) == 0.0)
    return ZeroSets(f_plus, f_minus)


def check_drift_function(f: PiecewisePower) -> ValidationReport:
    """Non-negative, right-continuous, locally BV, with 1/f locally integrable."""
    report = ValidationReport()
    for piece in f.pieces:
        where = f"({piece.left}, {piece.right})"
        if piece.coeff < 0.0:
            report.violations.append(f"negative values on {where}")
        elif piece.coeff == 0.0:
            report.violations.append(f"1/f not locally integrable: f vanishes on {where}")
        if (
            isinstance(piece, PowerPiece)
            and piece.exponent < 0.0
            and piece.anchor in (piece.left, piece.right)
        ):
            report.violations.append(
                f"f unbounded near {piece.anchor}: not of locally bounded variation"
            )
    for x, v in f.values:
        if v < 0.0:
            report.violations.append(f"negative value at breakpoint {x}")
        if v != f.right_limit(x):
            report.violations.append(f"not right-continuous at {x}")
    if report.violations:
        logger.debug(f"drift function rejected: {report.violations}")
    return report
