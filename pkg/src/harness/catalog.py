"""
Scenario catalog and the scripted acceptance suite.

The catalog (YAML) lists entries; each entry names a scenario file, optional
settings overrides and a list of checks. A check computes one statistic and
compares it with a target under a tolerance rule. Every check must carry a
provenance tag and a reference statement; the runner refuses a catalog that
fails this lint.

Reports are deterministic for a given seed and selection: checks are sorted by
name, floats are written at full precision and nothing time-dependent is
recorded.
"""

import json
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from ..coefficients.piecewise import PiecewisePower, encode_real
from ..localtime.estimators import DEFAULT_EPS, LocalTimeTable, local_time_table
from ..localtime.identities import (
    check_identity,
    check_occupation_formula,
    check_support,
    left_right_ratio,
    outside_range_zero,
    square_integral,
    transformed_level_ratio,
)
from ..measures.drift_measure import (
    LocalSignedMeasure,
    drift_measure_from_f,
    residual_g_nu,
    solve_g_nu,
)
from ..scenarios.config_parser import load_config
from ..simulation.probes import occupation_fraction, singular_occupation_points
from ..simulation.runner import SimulationResult, run_simulation, simulate_paths
from ..simulation.scenario import Engine, Scenario
from ..simulation.walk import DEFAULT_BATCH, PathBatch
from ..transform.space_transform import build_transform, invariant_residuals
from ..wellposed.verdicts import image_identity
from .stats import (
    batch_standard_error,
    bessel_cdf,
    explosion_reference,
    ks_2sample,
    ks_test,
    skew_normal_cdf,
)

logger = logging.getLogger(__name__)

PROVENANCE_TAGS = ("closed-form", "derived", "trivial", "literature")
DEFAULT_CATALOG = Path("config/catalog.yaml")
DEFAULT_K = 3.0  # k in the k * SE rule


class CatalogError(ValueError):
    """Malformed catalog, failed metadata lint or unknown selection."""


class ToleranceKind(Enum):
    K_SE = "k_se"  # |value - target| <= k * se
    ABS = "abs"  # |value - target| <= width
    UPPER = "upper"  # value < target
    LOWER = "lower"  # value > target
    EXACT = "exact"  # value == target
    KS = "ks"  # KS statistic below its critical value
    KS_REJECT = "ks_reject"  # KS statistic at or above its critical value


KS_KINDS = (ToleranceKind.KS, ToleranceKind.KS_REJECT)


@dataclass(frozen=True)
class Tolerance:
    kind: ToleranceKind
    width: float | None = None  # k for k_se, half-width for abs

    def accepts(self, observation: "Observation", target: float | None) -> bool:
        value = observation.value
        if value is None or (isinstance(value, float) and math.isnan(value)):
            return False
        match self.kind:
            case ToleranceKind.K_SE:
                se = observation.se
                return se is not None and abs(value - target) <= self.width * se
            case ToleranceKind.ABS:
                return abs(value - target) <= self.width
            case ToleranceKind.UPPER:
                return value < target
            case ToleranceKind.LOWER:
                return value > target
            case ToleranceKind.EXACT:
                return value == target
            case ToleranceKind.KS:
                return value < observation.critical
            case ToleranceKind.KS_REJECT:
                return value >= observation.critical

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"kind": self.kind.value}
        if self.width is not None:
            data["width"] = self.width
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Tolerance":
        kind = ToleranceKind(data["kind"])
        width = data.get("k", data.get("width"))
        if kind is ToleranceKind.K_SE and width is None:
            width = DEFAULT_K
        if kind is ToleranceKind.ABS and width is None:
            raise ValueError("abs tolerance needs a width")
        return cls(kind, float(width) if width is not None else None)


@dataclass(frozen=True)
class CatalogCheck:
    name: str
    statistic: str
    target: float | None
    tolerance: Tolerance
    provenance: str
    reference: str
    params: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ScenarioCatalogEntry:
    name: str
    scenario: str | None  # scenario file, relative to the catalog's scenario directory
    settings: dict[str, Any]
    checks: tuple[CatalogCheck, ...]
    slow: bool = False  # long Monte Carlo runs, skipped by --skip-slow


@dataclass
class Observation:
    value: float | None
    se: float | None = None
    critical: float | None = None
    detail: dict[str, Any] = field(default_factory=dict)


def _clean(value: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, NaN to None, infinities spelled out."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, list | tuple | np.ndarray):
        return [_clean(v) for v in value]
    if isinstance(value, np.bool_ | bool):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        value = float(value)
        return None if math.isnan(value) else encode_real(value)
    return value


@dataclass
class CheckResult:
    name: str
    entry: str
    statistic: str
    value: float | None
    target: float | None
    tolerance: Tolerance
    passed: bool
    provenance: str
    reference: str
    se: float | None = None
    critical: float | None = None
    detail: dict[str, Any] = field(default_factory=dict)
    error: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return _clean(
            {
                "name": self.name,
                "entry": self.entry,
                "statistic": self.statistic,
                "value": self.value,
                "target": self.target,
                "tolerance": self.tolerance.to_dict(),
                "passed": self.passed,
                "provenance": self.provenance,
                "reference": self.reference,
                "se": self.se,
                "critical": self.critical,
                "detail": self.detail,
                "error": self.error,
            }
        )


@dataclass
class SuiteReport:
    seed: int
    selection: list[str]
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "selection": sorted(self.selection),
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": len(self.failed),
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"


# -- catalog loading --------------------------------------------------------------------


def _parse_check(raw: dict[str, Any], entry: str) -> CatalogCheck:
    name = raw.get("name")
    if not name:
        raise CatalogError(f"entry '{entry}': check without a name")
    try:
        target = raw.get("target")
        return CatalogCheck(
            name=name,
            statistic=raw.get("statistic", ""),
            target=float(target) if target is not None else None,
            tolerance=Tolerance.from_dict(raw.get("tolerance") or {"kind": "k_se"}),
            provenance=raw.get("provenance") or "",
            reference=raw.get("reference") or "",
            params=dict(raw.get("params") or {}),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise CatalogError(f"check '{name}': {e}") from e


@dataclass
class Catalog:
    entries: list[ScenarioCatalogEntry]
    scenario_dir: Path

    @classmethod
    def load(cls, path: str | Path = DEFAULT_CATALOG) -> "Catalog":
        path = Path(path)
        try:
            with open(path) as f:
                data = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise CatalogError(f"cannot load catalog {path}: {e}") from e
        scenario_dir = path.parent / data.get("scenario_dir", "scenarios/v1")
        entries = []
        for raw in data.get("entries", []):
            name = raw.get("name")
            if not name:
                raise CatalogError("catalog entry without a name")
            checks = tuple(_parse_check(c, name) for c in raw.get("checks", []))
            entries.append(
                ScenarioCatalogEntry(
                    name,
                    raw.get("scenario"),
                    dict(raw.get("settings") or {}),
                    checks,
                    bool(raw.get("slow", False)),
                )
            )
        logger.debug(f"loaded {len(entries)} catalog entries from {path}")
        return cls(entries, scenario_dir)

    def lint(self) -> list[str]:
        """Metadata problems that make the catalog unusable."""
        problems = []
        seen: set[str] = set()
        for entry in self.entries:
            if not entry.checks:
                problems.append(f"entry '{entry.name}' has no checks")
            for check in entry.checks:
                where = f"check '{check.name}'"
                if check.name in seen:
                    problems.append(f"{where} is defined twice")
                seen.add(check.name)
                if check.provenance not in PROVENANCE_TAGS:
                    problems.append(
                        f"{where}: provenance must be one of {', '.join(PROVENANCE_TAGS)}"
                    )
                if not check.reference.strip():
                    problems.append(f"{where}: missing reference statement")
                if check.statistic not in STATISTICS:
                    problems.append(f"{where}: unknown statistic '{check.statistic}'")
                if check.target is None and check.tolerance.kind not in KS_KINDS:
                    problems.append(f"{where}: missing target")
        return problems

    def select(
        self, selection: list[str] | None, include_slow: bool = True
    ) -> list[tuple[ScenarioCatalogEntry, list[CatalogCheck]]]:
        """Entries and checks matching the names given (all when empty); named ones always run."""
        if not selection:
            return [(e, list(e.checks)) for e in self.entries if include_slow or not e.slow]
        wanted = set(selection)
        chosen = []
        for entry in self.entries:
            if entry.name in wanted:
                chosen.append((entry, list(entry.checks)))
                continue
            checks = [c for c in entry.checks if c.name in wanted]
            if checks:
                chosen.append((entry, checks))
        known = {e.name for e in self.entries} | {c.name for e in self.entries for c in e.checks}
        missing = sorted(wanted - known)
        if missing:
            raise CatalogError(f"unknown selection: {', '.join(missing)}")
        return chosen


# -- per-entry simulation cache ---------------------------------------------------------

SIMULATION_PARAMS = ("engine", "step", "n_paths", "T")


class EntryContext:
    """Lazily simulated data for the checks of one entry, shared between them."""

    def __init__(
        self,
        entry: ScenarioCatalogEntry,
        scenario_dir: Path,
        seed: int,
        workers: int = 1,
        batch_size: int = DEFAULT_BATCH,
    ):
        self.entry = entry
        self.scenario_dir = scenario_dir
        self.seed = seed
        self.workers = workers
        self.batch_size = batch_size
        self._scenario: Scenario | None = None
        self._results: dict[tuple, SimulationResult] = {}
        self._recorded: dict[tuple, list[PathBatch]] = {}

    def load(self, filename: str) -> Scenario:
        return load_config(self.scenario_dir / filename).scenario

    @property
    def scenario(self) -> Scenario:
        if self._scenario is None:
            if self.entry.scenario is None:
                raise CatalogError(f"entry '{self.entry.name}' has no scenario")
            scenario = self.load(self.entry.scenario)
            self._scenario = self._apply(scenario, self.entry.settings)
        return self._scenario

    def _apply(self, scenario: Scenario, overrides: dict[str, Any]) -> Scenario:
        changes: dict[str, Any] = {"seed": self.seed}
        for key in SIMULATION_PARAMS:
            if key in overrides:
                value = overrides[key]
                if key == "engine":
                    value = Engine(value)
                elif key == "n_paths":
                    value = int(value)
                else:
                    value = float(value)
                changes[key] = value
        return scenario.with_settings(**changes)

    def scenario_for(self, params: dict[str, Any]) -> Scenario:
        return self._apply(self.scenario, params)

    def result(self, params: dict[str, Any]) -> SimulationResult:
        scenario = self.scenario_for(params)
        key = tuple(sorted(scenario.settings.to_dict().items()))
        if key not in self._results:
            self._results[key] = run_simulation(
                scenario, batch_size=self.batch_size, workers=self.workers
            )
        return self._results[key]

    def recorded(self, params: dict[str, Any]) -> list[PathBatch]:
        scenario = self.scenario_for(params)
        key = tuple(sorted(scenario.settings.to_dict().items()))
        if key not in self._recorded:
            self._recorded[key] = list(
                simulate_paths(
                    scenario, record=True, batch_size=self.batch_size, workers=self.workers
                )
            )
        return self._recorded[key]

    def local_time_tables(self, params: dict[str, Any], levels) -> LocalTimeTable:
        scenario = self.scenario_for(params)
        t = float(params.get("t", scenario.settings.T))
        eps = float(params.get("eps", DEFAULT_EPS))
        return LocalTimeTable.concat(
            [local_time_table(b, scenario.f, levels, t, eps) for b in self.recorded(params)]
        )


# -- statistics -------------------------------------------------------------------------

Statistic = Callable[[EntryContext, dict[str, Any]], Observation]
STATISTICS: dict[str, Statistic] = {}


def statistic(name: str) -> Callable[[Statistic], Statistic]:
    def register(func: Statistic) -> Statistic:
        STATISTICS[name] = func
        return func

    return register


def _functions(ctx: EntryContext, params: dict[str, Any]) -> list[PiecewisePower]:
    if "functions" in params:
        return [PiecewisePower.from_dict(d) for d in params["functions"]]
    return [ctx.scenario.f]


@statistic("g_nu_residual")
def _g_nu_residual(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    residuals = []
    for raw in params["measures"]:
        nu = LocalSignedMeasure.from_dict(raw)
        residuals.append(
            residual_g_nu(
                nu,
                solve_g_nu(nu),
                float(params.get("lower", -10.0)),
                float(params.get("upper", 10.0)),
            )
        )
    return Observation(max(residuals), detail={"residuals": residuals})


@statistic("duality_error")
def _duality_error(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """sup |g_nu * f - 1| for nu the drift measure of f normalized at f(0-) = 1."""
    xs = np.linspace(float(params.get("lower", -10.0)), float(params.get("upper", 10.0)), 20001)
    errors = []
    for f in _functions(ctx, params):
        f = f.scaled(1.0 / f.left_limit(0.0))
        g = solve_g_nu(drift_measure_from_f(f))
        errors.append(float(np.max(np.abs(g.evaluate(xs) * f.evaluate(xs) - 1.0))))
    return Observation(max(errors), detail={"errors": errors})


@statistic("transform_residual")
def _transform_residual(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    which = params.get("which", "roundtrip")
    values = [invariant_residuals(build_transform(f))[which] for f in _functions(ctx, params)]
    return Observation(max(values), detail={which: values})


@statistic("verdict")
def _verdict(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    report = ctx.scenario.report
    names = params.get("verdicts") or sorted(report.verdicts)
    holding = [name for name in names if report.verdicts[name].holds]
    return Observation(float(len(holding)), detail={"holding": holding, "checked": list(names)})


@statistic("singular_sets_empty")
def _singular_sets_empty(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    report = ctx.scenario.report
    empty = report.N_b.is_empty and report.E_bsqrtf.is_empty
    return Observation(
        float(empty), detail={"N_b": str(report.N_b), "E_bsqrtf": str(report.E_bsqrtf)}
    )


@statistic("image_identity")
def _image_identity(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    detail = {}
    for filename in params["scenarios"]:
        scenario = ctx.load(filename)
        detail[scenario.name] = image_identity(scenario.transform, scenario.b)
    agree = all(d["N"] and d["E"] for d in detail.values())
    return Observation(float(agree), detail=detail)


def _terminal(ctx: EntryContext, params: dict[str, Any]) -> np.ndarray:
    return ctx.result(params).X_T


@statistic("prob_positive")
def _prob_positive(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """P(X_T > 0), lattice ties at 0 counted one half."""
    x = _terminal(ctx, params)
    p = float(np.mean((x > 0.0) + 0.5 * (x == 0.0)))
    return Observation(p, se=math.sqrt(p * (1.0 - p) / len(x)), detail={"n": len(x)})


def _moment(x: np.ndarray) -> Observation:
    return Observation(
        float(x.mean()),
        se=float(x.std(ddof=1) / math.sqrt(len(x))),
        detail={"n": len(x), "batch_se": batch_standard_error(x)},
    )


@statistic("mean")
def _mean(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    return _moment(_terminal(ctx, params))


@statistic("mean_square")
def _mean_square(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    return _moment(_terminal(ctx, params) ** 2)


@statistic("explosion_fraction")
def _explosion_fraction(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    result = ctx.result(params)
    times = result.explosion_time
    fraction = float(np.mean(~np.isnan(times) & (times <= result.horizon)))
    detail: dict[str, Any] = {"n": result.n_paths}
    if "distance" in params:
        detail["reference"] = explosion_reference(result.horizon, float(params["distance"]))
    se = math.sqrt(fraction * (1.0 - fraction) / result.n_paths)
    return Observation(fraction, se=se, detail=detail)


def _reference_cdf(cdf: dict[str, Any], t: float):
    kind = cdf["kind"]
    if kind == "skew_normal":
        return skew_normal_cdf(float(cdf["p"]), t)
    if kind == "bessel":
        return bessel_cdf(float(cdf["delta"]), t, float(cdf.get("p", 0.5)))
    raise ValueError(f"unknown reference distribution '{kind}'")


@statistic("ks_closed_form")
def _ks_closed_form(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    result = ctx.result(params)
    ks = ks_test(result.X_T, _reference_cdf(params["cdf"], result.horizon))
    return Observation(ks.statistic, critical=ks.critical, detail=ks.to_dict())


@statistic("ks_engines")
def _ks_engines(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    walk = ctx.result({**params, "engine": Engine.WALK.value}).X_T
    timechange = ctx.result({**params, "engine": Engine.TIMECHANGE.value}).X_T
    ks = ks_2sample(walk, timechange)
    return Observation(ks.statistic, critical=ks.critical, detail=ks.to_dict())


def _levels(params: dict[str, Any]) -> list[float]:
    return [float(y) for y in params.get("levels", [0.0])]


@statistic("lm_jump_ratio")
def _lm_jump_ratio(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """Pooled L_m(t, a-) / L_m(t, a) at a skew point a."""
    level = float(params.get("level", 0.0))
    table = ctx.local_time_tables(params, [level])
    return Observation(left_right_ratio(table, level), detail={"n_paths": table.n_paths})


@statistic("lm_left_right_agreement")
def _lm_left_right_agreement(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """max |L_m(t, y-) / L_m(t, y) - 1| over levels off F-."""
    levels = _levels(params)
    table = ctx.local_time_tables(params, levels)
    ratios = {y: left_right_ratio(table, y) for y in levels}
    return Observation(max(abs(r - 1.0) for r in ratios.values()), detail={"ratios": ratios})


@statistic("identity_error")
def _identity_error(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    table = ctx.local_time_tables(params, _levels(params))
    report = check_identity(table, ctx.scenario_for(params).f)
    return Observation(report.worst, detail=report.to_dict())


@statistic("occupation_residual")
def _occupation_residual(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    scenario = ctx.scenario_for(params)
    g = (
        PiecewisePower.from_dict(params["g"])
        if "g" in params
        else PiecewisePower.step([0.0, 1.0], [0.0, 1.0, 0.0])
    )
    t = float(params.get("t", scenario.settings.T))
    eps = float(params.get("eps", 0.01))
    residuals = [check_occupation_formula(b, g, t, eps).value for b in ctx.recorded(params)]
    return Observation(max(residuals), detail={"per_batch": residuals})


@statistic("outside_range")
def _outside_range(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    scenario = ctx.scenario_for(params)
    t = float(params.get("t", scenario.settings.T))
    eps = float(params.get("eps", DEFAULT_EPS))
    levels = _levels(params)
    zero = all(
        outside_range_zero(b, scenario.f, levels, t, eps) for b in ctx.recorded(params)
    )
    return Observation(float(zero))


@statistic("support_increment")
def _support_increment(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """Window-estimator growth away from the level or after absorption (must be 0)."""
    scenario = ctx.scenario_for(params)
    t = float(params.get("t", scenario.settings.T))
    eps = float(params.get("eps", DEFAULT_EPS))
    level = float(params.get("level", 0.0))
    reports = [check_support(b, level, t, eps) for b in ctx.recorded(params)]
    total = sum(r.far_increment + r.after_absorption for r in reports)
    positive = float(np.mean([r.positive_fraction for r in reports]))
    return Observation(total, detail={"positive_fraction": positive})


@statistic("no_occupation")
def _no_occupation(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """
    Time fraction spent within eps of F+ where b does not vanish, at each window
    width. The value is the fraction at the narrowest width; it is missing unless
    the fractions fall strictly as the width shrinks.
    """
    scenario = ctx.scenario_for(params)
    points = singular_occupation_points(scenario)
    raw = params.get("eps", [0.1, 0.01])
    widths = sorted((float(e) for e in (raw if isinstance(raw, list) else [raw])), reverse=True)
    batches = ctx.recorded(params)
    fractions = [
        float(np.mean([occupation_fraction(b, points, eps) for b in batches])) for eps in widths
    ]
    decreasing = all(b < a for a, b in zip(fractions, fractions[1:], strict=False))
    detail = {"points": list(points), "eps": widths, "fractions": fractions}
    detail["decreasing"] = decreasing
    held = decreasing or not points
    return Observation(fractions[-1] if held else None, detail=detail)


@statistic("square_integral_stability")
def _square_integral_stability(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """Relative change of the mean of int (1/f(X))^2 d<X> when the step is halved."""
    coarse = ctx.scenario_for(params)
    fine_params = {**params, "step": coarse.settings.step / 2.0}
    t = float(params.get("t", coarse.settings.T))

    def mean_integral(p: dict[str, Any]) -> float:
        values = [square_integral(b, coarse.f, t) for b in ctx.recorded(p)]
        return float(np.mean(np.concatenate(values)))

    a, b = mean_integral(params), mean_integral(fine_params)
    return Observation(abs(a - b) / abs(b), detail={"coarse": a, "fine": b})


@statistic("transformed_level_ratio")
def _transformed_level_ratio(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    scenario = ctx.scenario_for(params)
    t = float(params.get("t", scenario.settings.T))
    eps = float(params.get("eps", DEFAULT_EPS))
    level = float(params.get("level", 0.5))
    ratios = [
        transformed_level_ratio(b, scenario.transform, level, t, eps)
        for b in ctx.recorded(params)
    ]
    return Observation(float(np.mean(ratios)), detail={"per_batch": ratios})


@statistic("stream_invariance")
def _stream_invariance(ctx: EntryContext, params: dict[str, Any]) -> Observation:
    """X_T per path index is the same for every batch size and worker count."""
    scenario = ctx.scenario_for(params)
    n = int(params.get("n_paths", 64))
    layouts = [(n, 1), (7, 1), (5, 2)]
    runs = [
        np.concatenate(
            [b.X[:, -1] for b in simulate_paths(scenario, n, batch_size=size, workers=workers)]
        )
        for size, workers in layouts
    ]
    same = all(np.array_equal(runs[0], r, equal_nan=True) for r in runs[1:])
    return Observation(float(same), detail={"layouts": [list(x) for x in layouts]})


# -- runner -----------------------------------------------------------------------------


class CatalogRunner:
    """Runs selected catalog checks entry by entry; paths are simulated in parallel."""

    def __init__(
        self,
        catalog: Catalog,
        seed: int = 0,
        workers: int = 1,
        batch_size: int = DEFAULT_BATCH,
    ):
        problems = catalog.lint()
        if problems:
            raise CatalogError("catalog failed metadata lint: " + "; ".join(problems))
        self.catalog = catalog
        self.seed = seed
        self.workers = workers
        self.batch_size = batch_size

    def _run_check(self, ctx: EntryContext, check: CatalogCheck) -> CheckResult:
        result = CheckResult(
            name=check.name,
            entry=ctx.entry.name,
            statistic=check.statistic,
            value=None,
            target=check.target,
            tolerance=check.tolerance,
            passed=False,
            provenance=check.provenance,
            reference=check.reference,
        )
        try:
            observation = STATISTICS[check.statistic](ctx, check.params)
        except (ValueError, KeyError, ZeroDivisionError) as e:
            logger.error(f"check '{check.name}' could not be evaluated: {e}")
            result.error = str(e)
            return result
        result.value = observation.value
        result.se = observation.se
        result.critical = observation.critical
        result.detail = observation.detail
        result.passed = check.tolerance.accepts(observation, check.target)
        status = "PASS" if result.passed else "FAIL"
        logger.info(f"{status} {check.name}: {observation.value} (target {check.target})")
        return result

    def run(self, selection: list[str] | None = None, include_slow: bool = True) -> SuiteReport:
        chosen = self.catalog.select(selection, include_slow)
        report = SuiteReport(self.seed, list(selection or ["all"]))
        for entry, checks in chosen:
            ctx = EntryContext(
                entry, self.catalog.scenario_dir, self.seed, self.workers, self.batch_size
            )
            for check in checks:
                report.checks.append(self._run_check(ctx, check))
        report.checks.sort(key=lambda c: c.name)
        logger.info(f"suite finished: {len(report.failed)} of {len(report.checks)} checks failed")
        return report


def run_catalog(
    selection: list[str] | None = None,
    seed: int = 0,
    catalog: Catalog | str | Path = DEFAULT_CATALOG,
    workers: int = 1,
    batch_size: int = DEFAULT_BATCH,
    include_slow: bool = True,
) -> SuiteReport:
    if not isinstance(catalog, Catalog):
        catalog = Catalog.load(catalog)
    return CatalogRunner(catalog, seed, workers, batch_size).run(selection, include_slow)
