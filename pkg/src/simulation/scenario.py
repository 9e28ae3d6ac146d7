"""
Scenario model: coefficients, skewness, initial law and engine settings.

Also houses the skew Bessel family, whose transform and second moment are known
in closed form and anchor most of the statistical checks.
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np
from scipy import special

from ..coefficients.piecewise import ExpPowerPiece, PiecewisePower, PowerPiece
from ..measures.drift_measure import LocalSignedMeasure
from ..transform.space_transform import SpaceTransform, build_transform
from ..wellposed.verdicts import WellPosednessReport, verdicts

logger = logging.getLogger(__name__)

DEFAULT_STEP = 1e-4
MAX_SEED = 2**64 - 1


class Engine(Enum):
    WALK = "walk"
    TIMECHANGE = "timechange"


class StepRule(Enum):
    EXIT_TIME = "exit_time"  # expected exit time of every step is the step length
    EULER = "euler"  # step sigma_tilde(Y) * sqrt(step)
    GAUSSIAN = "gaussian"  # Euler-Maruyama; scenarios without sites only


class QvMode(Enum):
    MODEL = "model"  # b(X)^2 * dt
    REALIZED = "realized"  # squared increments of X


class InitialKind(Enum):
    POINT = "point"
    UNIFORM = "uniform"
    NORMAL = "normal"


@dataclass(frozen=True)
class InitialLaw:
    """Law of X_0: a point mass or a sampler driven by one uniform per path."""

    kind: InitialKind = InitialKind.POINT
    point: float = 0.0
    low: float = 0.0
    high: float = 1.0
    mean: float = 0.0
    std: float = 1.0

    def __post_init__(self):
        if self.kind is InitialKind.UNIFORM and not self.low < self.high:
            raise ValueError(f"uniform initial law needs low < high, got [{self.low}, {self.high}]")
        if self.kind is InitialKind.NORMAL and not self.std > 0.0:
            raise ValueError(f"normal initial law needs std > 0, got {self.std}")
        if self.kind is InitialKind.POINT and not math.isfinite(self.point):
            raise ValueError(f"initial point must be finite, got {self.point}")

    @classmethod
    def at(cls, point: float) -> "InitialLaw":
        return cls(InitialKind.POINT, point=point)

    @property
    def is_point(self) -> bool:
        return self.kind is InitialKind.POINT

    def sample(self, u):
        """Inverse-CDF draw from uniforms u."""
        if self.kind is InitialKind.UNIFORM:
            return self.low + u * (self.high - self.low)
        if self.kind is InitialKind.NORMAL:
            return self.mean + self.std * special.ndtri(u)
        return self.point + 0.0 * u

    @property
    def center(self) -> float:
        if self.kind is InitialKind.UNIFORM:
            return 0.5 * (self.low + self.high)
        if self.kind is InitialKind.NORMAL:
            return self.mean
        return self.point

    def to_dict(self) -> dict[str, Any]:
        if self.kind is InitialKind.POINT:
            return {"point": self.point}
        if self.kind is InitialKind.UNIFORM:
            return {"sampler": "uniform", "low": self.low, "high": self.high}
        return {"sampler": "normal", "mean": self.mean, "std": self.std}


@dataclass(frozen=True)
class SimulationSettings:
    T: float = 1.0
    step: float = DEFAULT_STEP
    base_resolution: float | None = None  # time-change walk step; sqrt(step) when unset
    n_paths: int = 1000
    engine: Engine = Engine.WALK
    seed: int = 0
    step_rule: StepRule = StepRule.EXIT_TIME
    qv_mode: QvMode = QvMode.MODEL

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0.0):
            raise ValueError(f"horizon T must be positive, got {self.T}")
        if not (self.step > 0.0 and self.step <= self.T):
            raise ValueError(f"step must lie in (0, T], got {self.step}")
        if self.base_resolution is not None and not self.base_resolution > 0.0:
            raise ValueError(f"base_resolution must be positive, got {self.base_resolution}")
        if self.n_paths < 1:
            raise ValueError(f"n_paths must be at least 1, got {self.n_paths}")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    @property
    def n_steps(self) -> int:
        return max(1, int(round(self.T / self.step)))

    @property
    def resolution(self) -> float:
        return self.base_resolution if self.base_resolution is not None else math.sqrt(self.step)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        for key in ("engine", "step_rule", "qv_mode"):
            data[key] = data[key].value
        if data["base_resolution"] is None:
            del data["base_resolution"]
        return data


@dataclass(frozen=True)
class Scenario:
    """Everything needed to simulate one equation."""

    name: str
    f: PiecewisePower
    b: PiecewisePower
    nu: LocalSignedMeasure = field(default_factory=LocalSignedMeasure.zero)
    initial: InitialLaw = field(default_factory=InitialLaw)
    settings: SimulationSettings = field(default_factory=SimulationSettings)

    @cached_property
    def transform(self) -> SpaceTransform:
        return build_transform(self.f)

    @cached_property
    def report(self) -> WellPosednessReport:
        return verdicts(self.f, self.b, self.nu)

    @property
    def is_skew(self) -> bool:
        return bool(self.nu.atoms)

    def validate(self) -> WellPosednessReport:
        """Raise unless a (symmetric or skew) good solution exists."""
        report = self.report
        exists = report.skew_exists if self.is_skew else report.symmetric_exists
        if not exists:
            raise ValueError(
                f"scenario '{self.name}': no good solution exists "
                f"(E_{{b/sqrt f}} = {report.E_bsqrtf} is not contained in N_b = {report.N_b})"
            )
        return report

    def with_settings(self, **changes) -> "Scenario":
        return replace(self, settings=replace(self.settings, **changes))


# -- skew Bessel family -----------------------------------------------------------------


def _check_dimension(delta: float) -> None:
    if not 1.0 < delta < 2.0:
        raise ValueError(f"Bessel dimension must lie in (1, 2), got {delta}")


def bessel_drift_function(delta: float) -> PiecewisePower:
    """f_delta(x) = |x|^(delta - 1)."""
    _check_dimension(delta)
    return PiecewisePower.symmetric_power(1.0, delta - 1.0, 0.0)


def bessel_G(delta: float, x):
    _check_dimension(delta)
    xs = np.asarray(x, dtype=float)
    return np.sign(xs) * np.abs(xs) ** (2.0 - delta) / (2.0 - delta)


def bessel_H(delta: float, y):
    _check_dimension(delta)
    ys = np.asarray(y, dtype=float)
    return np.sign(ys) * ((2.0 - delta) * np.abs(ys)) ** (1.0 / (2.0 - delta))


def bessel_second_moment(delta: float, x0: float, t: float) -> float:
    """E[X_t^2] = x0^2 + delta * t, for every skewness."""
    return x0 * x0 + delta * t


def bessel_scenario(
    delta: float,
    alpha: float = 0.0,
    x0: float = 0.0,
    settings: SimulationSettings | None = None,
) -> Scenario:
    nu = LocalSignedMeasure.atom(0.0, alpha) if alpha != 0.0 else LocalSignedMeasure.zero()
    name = f"bessel-{delta}" if alpha == 0.0 else f"bessel-{delta}-skew-{alpha}"
    return Scenario(
        name,
        bessel_drift_function(delta),
        PiecewisePower.constant(1.0),
        nu,
        InitialLaw.at(x0),
        settings or SimulationSettings(),
    )


def explosion_scenario(settings: SimulationSettings | None = None) -> Scenario:
    """f = b = e^{2x}: Y = G(X) is a Brownian motion stopped at G(+inf) = 1/2."""
    f = PiecewisePower(
        (
            ExpPowerPiece(-math.inf, 0.0, 1.0, -2.0, 1.0, 0.0),
            ExpPowerPiece(0.0, math.inf, 1.0, 2.0, 1.0, 0.0),
        )
    )
    return Scenario("explosion", f, f, settings=settings or SimulationSettings())


def skew_bm_scenario(settings: SimulationSettings | None = None) -> Scenario:
    """f = 1 left of 0 and 3 right of it: P(X_t > 0) = 3/4."""
    f = PiecewisePower((PowerPiece(-math.inf, 0.0, 1.0), PowerPiece(0.0, math.inf, 3.0)))
    return Scenario(
        "skew-bm", f, PiecewisePower.constant(1.0), settings=settings or SimulationSettings()
    )
