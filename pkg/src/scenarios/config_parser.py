"""
Scenario configuration files.

One JSON object per scenario:

    {
      "name": "bessel-1.5",
      "drift_function": {"pieces": [...]}            # or {"from_measure": {...}}
      "diffusion": {"pieces": [...]},
      "skewness": {"atoms": [{"point": 0.0, "mass": 0.25}]},
      "initial": {"point": 0.0},                     # or {"sampler": "uniform", ...}
      "simulation": {"T": 1.0, "step": 0.0001, "n_paths": 1000, "engine": "walk", "seed": 0},
      "outputs": {"paths": "out/paths", "stats": "out/stats.json"}
    }

Unknown keys are errors. Numbers are written with repr precision so
parse(emit(config)) == config.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..coefficients.piecewise import PiecewisePower, check_drift_function, decode_real
from ..measures.drift_measure import LocalSignedMeasure, drift_function_from_measure
from ..simulation.scenario import (
    Engine,
    InitialKind,
    InitialLaw,
    QvMode,
    Scenario,
    SimulationSettings,
    StepRule,
)
from ..wellposed.verdicts import check_skewness

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = (
    "name",
    "drift_function",
    "diffusion",
    "skewness",
    "initial",
    "simulation",
    "outputs",
)
REQUIRED_KEYS = ("name", "drift_function", "diffusion")
SIMULATION_KEYS = {
    "T",
    "step",
    "base_resolution",
    "n_paths",
    "engine",
    "seed",
    "step_rule",
    "qv_mode",
}
OUTPUT_KEYS = {"paths", "stats", "localtime", "levels", "eps"}
INITIAL_KEYS = {
    "point": {"point"},
    "uniform": {"sampler", "low", "high"},
    "normal": {"sampler", "mean", "std"},
}


class ScenarioConfigError(ValueError):
    """Configuration problem anchored at a field path and, when known, a line."""

    def __init__(
        self, message: str, field: str = "", line: int | None = None, column: int | None = None
    ):
        self.message = message
        self.field = field
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        if field:
            where.append(f"field '{field}'")
        prefix = f"{' '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


@dataclass(frozen=True)
class OutputTargets:
    """Where simulate/localtime write their artifacts; None means not requested."""

    paths: str | None = None
    stats: str | None = None
    localtime: str | None = None
    levels: tuple[float, ...] = ()
    eps: float | None = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {}
        for key in ("paths", "stats", "localtime"):
            if getattr(self, key) is not None:
                data[key] = getattr(self, key)
        if self.levels:
            data["levels"] = list(self.levels)
        if self.eps is not None:
            data["eps"] = self.eps
        return data


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: Scenario
    outputs: OutputTargets = field(default_factory=OutputTargets)
    drift_measure: LocalSignedMeasure | None = None  # set when f was given as f_nu

    @property
    def name(self) -> str:
        return self.scenario.name

    def to_dict(self) -> dict[str, Any]:
        s = self.scenario
        data: dict[str, Any] = {"name": s.name}
        if self.drift_measure is not None:
            data["drift_function"] = {"from_measure": self.drift_measure.to_dict()}
        else:
            data["drift_function"] = s.f.to_dict()
        data["diffusion"] = s.b.to_dict()
        data["skewness"] = {"atoms": [{"point": x, "mass": m} for x, m in s.nu.atoms]}
        data["initial"] = s.initial.to_dict()
        data["simulation"] = s.settings.to_dict()
        outputs = self.outputs.to_dict()
        if outputs:
            data["outputs"] = outputs
        return data


def _line_of(text: str, key: str) -> int | None:
    match = re.search(rf'"{re.escape(key)}"\s*:', text)
    return text.count("\n", 0, match.start()) + 1 if match else None


def _require_object(value: Any, path: str) -> dict[str, Any]:
    if not isinstance(value, dict):
        raise ScenarioConfigError(f"expected an object, got {type(value).__name__}", path)
    return value


def _reject_unknown(data: dict[str, Any], allowed, path: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        where = f"{path}.{unknown[0]}" if path else unknown[0]
        raise ScenarioConfigError("unknown field", where)


def _number(data: dict[str, Any], key: str, path: str) -> float:
    try:
        return decode_real(data[key])
    except ValueError as e:
        raise ScenarioConfigError(str(e), f"{path}.{key}") from e


def _function(data: Any, path: str) -> PiecewisePower:
    try:
        return PiecewisePower.from_dict(_require_object(data, path))
    except ScenarioConfigError:
        raise
    except ValueError as e:
        raise ScenarioConfigError(str(e), path) from e


def _drift_function(data: Any) -> tuple[PiecewisePower, LocalSignedMeasure | None]:
    data = _require_object(data, "drift_function")
    if "from_measure" in data:
        _reject_unknown(data, {"from_measure"}, "drift_function")
        try:
            nu = LocalSignedMeasure.from_dict(data["from_measure"])
            f = drift_function_from_measure(nu)
        except ValueError as e:
            raise ScenarioConfigError(str(e), "drift_function.from_measure") from e
        return f, nu
    f = _function(data, "drift_function")
    report = check_drift_function(f)
    if not report.passed:
        raise ScenarioConfigError("; ".join(report.violations), "drift_function")
    return f, None


def _skewness(data: Any, f: PiecewisePower) -> LocalSignedMeasure:
    data = _require_object(data, "skewness")
    _reject_unknown(data, {"atoms"}, "skewness")
    atoms = data.get("atoms", [])
    if not isinstance(atoms, list):
        raise ScenarioConfigError("expected a list", "skewness.atoms")
    parsed = []
    for i, raw in enumerate(atoms):
        path = f"skewness.atoms[{i}]"
        raw = _require_object(raw, path)
        _reject_unknown(raw, {"point", "mass"}, path)
        for key in ("point", "mass"):
            if key not in raw:
                raise ScenarioConfigError("missing field", f"{path}.{key}")
        parsed.append((_number(raw, "point", path), _number(raw, "mass", path)))
    try:
        nu = LocalSignedMeasure(tuple(parsed))
    except ValueError as e:
        raise ScenarioConfigError(str(e), "skewness.atoms") from e
    report = check_skewness(f, nu)
    if not report.passed:
        first = report.violations[0]
        index = next((i for i, (x, _) in enumerate(parsed) if f"atom at {x} " in first), None)
        key = "point" if "not in F-" in first else "mass"
        where = f"skewness.atoms[{index}].{key}" if index is not None else "skewness.atoms"
        raise ScenarioConfigError("; ".join(report.violations), where)
    return nu


def _initial(data: Any) -> InitialLaw:
    data = _require_object(data, "initial")
    kind = data.get("sampler", "point")
    if kind not in INITIAL_KEYS or (kind == "point" and "sampler" in data):
        raise ScenarioConfigError(f"unknown sampler '{kind}'", "initial.sampler")
    _reject_unknown(data, INITIAL_KEYS[kind], "initial")
    try:
        if kind == "point":
            return InitialLaw.at(_number(data, "point", "initial") if "point" in data else 0.0)
        keys = sorted(INITIAL_KEYS[kind] - {"sampler"})
        numbers = {k: _number(data, k, "initial") for k in keys if k in data}
        return InitialLaw(InitialKind(kind), **numbers)
    except ScenarioConfigError:
        raise
    except ValueError as e:
        raise ScenarioConfigError(str(e), "initial") from e


def _enum(enum_cls, value: Any, path: str):
    try:
        return enum_cls(value)
    except ValueError as e:
        choices = ", ".join(m.value for m in enum_cls)
        raise ScenarioConfigError(f"expected one of {choices}, got {value!r}", path) from e


def _settings(data: Any) -> SimulationSettings:
    data = _require_object(data, "simulation")
    _reject_unknown(data, SIMULATION_KEYS, "simulation")
    kwargs: dict[str, Any] = {}
    for key in ("T", "step", "base_resolution"):
        if key in data:
            kwargs[key] = _number(data, key, "simulation")
    for key in ("n_paths", "seed"):
        if key in data:
            value = data[key]
            if isinstance(value, bool) or not isinstance(value, int):
                raise ScenarioConfigError("expected an integer", f"simulation.{key}")
            kwargs[key] = value
    if "engine" in data:
        kwargs["engine"] = _enum(Engine, data["engine"], "simulation.engine")
    if "step_rule" in data:
        kwargs["step_rule"] = _enum(StepRule, data["step_rule"], "simulation.step_rule")
    if "qv_mode" in data:
        kwargs["qv_mode"] = _enum(QvMode, data["qv_mode"], "simulation.qv_mode")
    try:
        return SimulationSettings(**kwargs)
    except ValueError as e:
        raise ScenarioConfigError(str(e), "simulation") from e


def _outputs(data: Any) -> OutputTargets:
    data = _require_object(data, "outputs")
    _reject_unknown(data, OUTPUT_KEYS, "outputs")
    for key in ("paths", "stats", "localtime"):
        if key in data and not isinstance(data[key], str):
            raise ScenarioConfigError("expected a path string", f"outputs.{key}")
    levels = data.get("levels", [])
    if not isinstance(levels, list):
        raise ScenarioConfigError("expected a list", "outputs.levels")
    eps = _number(data, "eps", "outputs") if "eps" in data else None
    if eps is not None and not eps > 0.0:
        raise ScenarioConfigError(f"window width must be positive, got {eps}", "outputs.eps")
    return OutputTargets(
        paths=data.get("paths"),
        stats=data.get("stats"),
        localtime=data.get("localtime"),
        levels=tuple(decode_real(y) for y in levels),
        eps=eps,
    )


def _build(data: Any) -> ScenarioConfig:
    data = _require_object(data, "")
    _reject_unknown(data, TOP_LEVEL_KEYS, "")
    for key in REQUIRED_KEYS:
        if key not in data:
            raise ScenarioConfigError("missing field", key)
    name = data["name"]
    if not isinstance(name, str) or not name:
        raise ScenarioConfigError("expected a non-empty string", "name")

    f, drift_measure = _drift_function(data["drift_function"])
    b = _function(data["diffusion"], "diffusion")
    nu = _skewness(data.get("skewness", {}), f)
    initial = _initial(data.get("initial", {}))
    settings = _settings(data.get("simulation", {}))
    outputs = _outputs(data.get("outputs", {}))
    return ScenarioConfig(Scenario(name, f, b, nu, initial, settings), outputs, drift_measure)


def parse_config(text: str) -> ScenarioConfig:
    """Parse one scenario; every failure is a ScenarioConfigError."""
    if not text.strip():
        raise ScenarioConfigError("empty configuration", line=1, column=1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioConfigError(f"syntax error: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        return _build(data)
    except ScenarioConfigError as e:
        if e.line is not None or not e.field:
            raise
        top = re.split(r"[.\[]", e.field, maxsplit=1)[0]
        raise ScenarioConfigError(e.message, e.field, _line_of(text, top)) from e


def emit_config(config: ScenarioConfig) -> str:
    return json.dumps(config.to_dict(), indent=2) + "\n"


def load_config(path: str | Path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ScenarioConfigError(f"cannot read {path}: {e.strerror}") from e
    config = parse_config(text)
    logger.debug(f"loaded scenario '{config.name}' from {path}")
    return config
