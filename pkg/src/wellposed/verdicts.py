"""
Existence and uniqueness verdicts for good solutions.

Every verdict instantiates one condition on the sets E_{b/sqrt f} and N_b and
reports that condition verbatim instead of a bare boolean.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

from ..coefficients.piecewise import PiecewisePower, Side, ValidationReport, zero_sets
from ..measures.drift_measure import LocalSignedMeasure, validate_atoms
from ..transform.space_transform import SpaceTransform
from .sets import Interval, PointAndIntervalSet, singular_set, zero_set

logger = logging.getLogger(__name__)

EXISTS_CONDITION = "E_{b/sqrt f} subset of N_b"
UNIQUE_CONDITION = "E_{b/sqrt f} = N_b"


@dataclass(frozen=True)
class Verdict:
    holds: bool
    condition: str
    statement: str

    def to_dict(self) -> dict[str, Any]:
        return {"holds": self.holds, "condition": self.condition, "statement": self.statement}


@dataclass
class WellPosednessReport:
    N_b: PointAndIntervalSet
    E_b: PointAndIntervalSet
    E_bsqrtf: PointAndIntervalSet
    atoms: ValidationReport
    verdicts: dict[str, Verdict] = field(default_factory=dict)

    @property
    def symmetric_exists(self) -> bool:
        return self.verdicts["symmetric_exists"].holds

    @property
    def symmetric_unique(self) -> bool:
        return self.verdicts["symmetric_unique"].holds

    @property
    def skew_exists(self) -> bool:
        return self.verdicts["skew_exists"].holds

    @property
    def skew_unique(self) -> bool:
        return self.verdicts["skew_unique"].holds

    def to_dict(self) -> dict[str, Any]:
        return {
            "N_b": self.N_b.to_dict(),
            "E_b": self.E_b.to_dict(),
            "E_bsqrtf": self.E_bsqrtf.to_dict(),
            "atoms": self.atoms.to_dict(),
            "verdicts": {name: v.to_dict() for name, v in sorted(self.verdicts.items())},
        }


def check_skewness(f: PiecewisePower, nu: LocalSignedMeasure) -> ValidationReport:
    """nu must be atomic, carried by F-, with every atom below 1/2."""
    report = validate_atoms(nu)
    if not nu.is_atomic:
        report.violations.append("skewness measure must be atomic")
    f_minus = set(zero_sets(f).F_minus)
    for x in nu.atom_points:
        if x not in f_minus:
            report.violations.append(f"atom at {x} is not in F- = {sorted(f_minus)}")
    return report


def verdicts(
    f: PiecewisePower, b: PiecewisePower, nu: LocalSignedMeasure | None = None
) -> WellPosednessReport:
    """Decide existence and uniqueness of symmetric and skew good solutions."""
    nu = nu if nu is not None else LocalSignedMeasure.zero()
    atoms = check_skewness(f, nu)
    if not atoms.passed:
        raise ValueError(f"invalid skewness measure: {'; '.join(atoms.violations)}")

    n_b = zero_set(b)
    e_b = singular_set(b)
    e_ratio = singular_set(b, f)
    exists = e_ratio.issubset(n_b)
    unique = exists and e_ratio == n_b

    report = WellPosednessReport(n_b, e_b, e_ratio, atoms)
    report.verdicts = {
        "symmetric_exists": Verdict(
            exists, EXISTS_CONDITION, "a symmetric good solution exists for every initial law"
        ),
        "symmetric_unique": Verdict(
            unique, UNIQUE_CONDITION, "the symmetric good solution is unique in law"
        ),
        "skew_exists": Verdict(
            exists,
            EXISTS_CONDITION,
            "a skew good solution with the given skewness exists (F countable)",
        ),
        "skew_unique": Verdict(
            unique,
            UNIQUE_CONDITION,
            "the skew good solution with the given skewness is unique in law (F countable)",
        ),
    }
    logger.debug(f"verdicts: exists={exists}, unique={unique}, N_b={n_b}, E={e_ratio}")
    return report


# -- image identity ---------------------------------------------------------------------


def _cell_probe(lo: float, hi: float) -> float:
    if math.isinf(lo) and math.isinf(hi):
        return 0.0
    if math.isinf(lo):
        return hi - 1.0
    if math.isinf(hi):
        return lo + 1.0
    return 0.5 * (lo + hi)


def transformed_sets(
    t: SpaceTransform, b: PiecewisePower
) -> tuple[PointAndIntervalSet, PointAndIntervalSet]:
    """
    (N_sigma, E_sigma) computed in the transformed coordinate.

    sigma is evaluated on the image skeleton and on every image cell; on the
    side of a point y0 = G(x0) sigma behaves like |y - y0|^e with
    e = (p_b - p_f) / (1 - p_f), p_b and p_f being the local exponents of b and f.
    """
    f = t.f
    skeleton = sorted(set(b.skeleton()) | set(f.skeleton()))
    ys = [float(t.G(x)) for x in skeleton]
    edges = [t.G_minus_inf, *ys, t.G_plus_inf]

    # sigma(G(x0)) = b(x0) / f(x0) at skeleton points
    zero_points = [y for x, y in zip(skeleton, ys, strict=True) if b.value_at(x) == 0.0]
    zero_cells = []
    for lo, hi in zip(edges, edges[1:], strict=False):
        if lo < hi and t.sigma(b, _cell_probe(lo, hi)) == 0.0:
            lo_closed = math.isfinite(lo) and lo in zero_points
            hi_closed = math.isfinite(hi) and hi in zero_points
            zero_cells.append(Interval(lo, hi, lo_closed, hi_closed))
    n_sigma = PointAndIntervalSet(tuple(zero_points), tuple(zero_cells))

    singular_points = []
    for x0, y0 in zip(skeleton, ys, strict=True):
        for side in Side:
            lb = b.local_behavior(x0, side)
            if lb.vanishes:
                singular_points.append(y0)
                break
            p_f = f.local_behavior(x0, side).exponent
            exponent = (lb.exponent - p_f) / (1.0 - p_f)
            if 2.0 * exponent >= 1.0:
                singular_points.append(y0)
                break
    # zero cells are singular up to their ends, except at the image boundary
    singular_cells = tuple(
        Interval(iv.lo, iv.hi, iv.lo != t.G_minus_inf, iv.hi != t.G_plus_inf)
        for iv in zero_cells
    )
    return n_sigma, PointAndIntervalSet(tuple(singular_points), singular_cells)


def image_identity(t: SpaceTransform, b: PiecewisePower) -> dict[str, bool]:
    """Compare N_sigma, E_sigma with the images G(N_b), G(E_{b/sqrt f})."""
    n_sigma, e_sigma = transformed_sets(t, b)
    return {
        "N": n_sigma == zero_set(b).map(t.G),
        "E": e_sigma == singular_set(b, t.f).map(t.G),
    }
