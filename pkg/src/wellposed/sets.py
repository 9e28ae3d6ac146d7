"""
Zero sets N_h and singularity sets E_h of piecewise-power coefficients.

E_h is the set of points x such that the integral of h^{-2} diverges on every
open neighborhood of x. For the power class this is decided by the local
exponent e on each side: divergence iff h vanishes identically there or 2e >= 1.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any

from ..coefficients.piecewise import PiecewisePower, Side, encode_real

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    """Interval with per-end closedness; infinite ends are always open."""

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"degenerate interval ({self.lo}, {self.hi})")
        if math.isinf(self.lo):
            object.__setattr__(self, "lo_closed", False)
        if math.isinf(self.hi):
            object.__setattr__(self, "hi_closed", False)

    def contains(self, x: float) -> bool:
        if self.lo < x < self.hi:
            return True
        return (x == self.lo and self.lo_closed) or (x == self.hi and self.hi_closed)

    def covers(self, other: "Interval") -> bool:
        lo_ok = self.lo < other.lo or (
            self.lo == other.lo and (self.lo_closed or not other.lo_closed)
        )
        hi_ok = self.hi > other.hi or (
            self.hi == other.hi and (self.hi_closed or not other.hi_closed)
        )
        return lo_ok and hi_ok

    def to_dict(self) -> dict[str, Any]:
        return {
            "lo": encode_real(self.lo),
            "hi": encode_real(self.hi),
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
        }

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo}, {self.hi}{right}"


def _merge(intervals: list[Interval], points: set[float]) -> list[Interval]:
    merged: list[Interval] = []
    for iv in sorted(intervals, key=lambda i: (i.lo, not i.lo_closed)):
        if merged:
            last = merged[-1]
            touching = iv.lo == last.hi and (
                last.hi_closed or iv.lo_closed or iv.lo in points
            )
            if iv.lo < last.hi or touching:
                if iv.hi > last.hi:
                    hi, hi_closed = iv.hi, iv.hi_closed
                elif iv.hi == last.hi:
                    hi, hi_closed = last.hi, last.hi_closed or iv.hi_closed
                else:
                    hi, hi_closed = last.hi, last.hi_closed
                merged[-1] = Interval(last.lo, hi, last.lo_closed, hi_closed)
                continue
        merged.append(iv)
    return merged


@dataclass(frozen=True)
class PointAndIntervalSet:
    """Finite union of points and intervals in canonical form."""

    points: tuple[float, ...] = ()
    intervals: tuple[Interval, ...] = ()

    def __post_init__(self):
        points = {float(p) for p in self.points}
        intervals = _merge(list(self.intervals), points)
        # close open ends that carry an isolated point, then merge again
        closed = []
        for iv in intervals:
            closed.append(
                Interval(
                    iv.lo,
                    iv.hi,
                    iv.lo_closed or iv.lo in points,
                    iv.hi_closed or iv.hi in points,
                )
            )
        intervals = _merge(closed, points)
        points = {p for p in points if not any(iv.contains(p) for iv in intervals)}
        object.__setattr__(self, "points", tuple(sorted(points)))
        object.__setattr__(self, "intervals", tuple(intervals))

    @property
    def is_empty(self) -> bool:
        return not self.points and not self.intervals

    def contains(self, x: float) -> bool:
        return x in self.points or any(iv.contains(x) for iv in self.intervals)

    def issubset(self, other: "PointAndIntervalSet") -> bool:
        return all(other.contains(p) for p in self.points) and all(
            any(mine_in.covers(iv) for mine_in in other.intervals) for iv in self.intervals
        )

    def map(self, func) -> "PointAndIntervalSet":
        """Image under a strictly increasing map defined on the extended line."""
        return PointAndIntervalSet(
            tuple(float(func(p)) for p in self.points),
            tuple(
                Interval(float(func(iv.lo)), float(func(iv.hi)), iv.lo_closed, iv.hi_closed)
                for iv in self.intervals
            ),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "points": [encode_real(p) for p in self.points],
            "intervals": [iv.to_dict() for iv in self.intervals],
        }

    def __str__(self) -> str:
        parts = [str(p) for p in self.points] + [str(iv) for iv in self.intervals]
        return "{" + ", ".join(parts) + "}" if parts else "{}"


def zero_set(h: PiecewisePower) -> PointAndIntervalSet:
    """N_h = {h = 0}: isolated zeros on the skeleton plus vanishing pieces."""
    points = [x for x in h.skeleton() if h.value_at(x) == 0.0]
    intervals = []
    for piece in h.zero_pieces():
        lo_closed = math.isfinite(piece.left) and h.value_at(piece.left) == 0.0
        hi_closed = math.isfinite(piece.right) and h.value_at(piece.right) == 0.0
        intervals.append(Interval(piece.left, piece.right, lo_closed, hi_closed))
    return PointAndIntervalSet(tuple(points), tuple(intervals))


def diverges(b: PiecewisePower, x0: float, side: Side, f: PiecewisePower | None = None) -> bool:
    """Does int (b^2/f)^{-1} diverge on the given side of x0?"""
    lb = b.local_behavior(x0, side)
    if lb.vanishes:
        return True
    exponent = lb.exponent
    if f is not None:
        exponent -= 0.5 * f.local_behavior(x0, side).exponent
    return 2.0 * exponent >= 1.0


def singular_set(h: PiecewisePower, f: PiecewisePower | None = None) -> PointAndIntervalSet:
    """
    E_h, or E_{h/sqrt f} when a drift function f is given.

    The quotient is never built as a piecewise function: its local exponent
    at a point is the exponent of h minus half the exponent of f.
    """
    skeleton = set(h.skeleton())
    if f is not None:
        skeleton |= set(f.skeleton())
    points = [
        x0 for x0 in sorted(skeleton) if any(diverges(h, x0, side, f) for side in Side)
    ]
    intervals = [Interval(p.left, p.right) for p in h.zero_pieces()]
    return PointAndIntervalSet(tuple(points), tuple(intervals))
