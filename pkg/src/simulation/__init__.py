# Singular Drift Lab - Simulation
from .probes import (
    ExplosionStats,
    explosion_probe,
    occupation_fraction,
    singular_occupation_points,
    skew_prob_from_atom,
)
from .runner import SimulationResult, collect, run_simulation, simulate_paths
from .scenario import (
    Engine,
    InitialKind,
    InitialLaw,
    QvMode,
    Scenario,
    SimulationSettings,
    StepRule,
    bessel_drift_function,
    bessel_G,
    bessel_H,
    bessel_scenario,
    bessel_second_moment,
    explosion_scenario,
    skew_bm_scenario,
)
from .step_tables import StepTable, site_skew_probability
from .streams import UniformStreams
from .timechange import check_timechange_scope, simulate_timechange
from .walk import PathBatch, PathSample, simulate_walk

__all__ = [
    "Engine",
    "ExplosionStats",
    "InitialKind",
    "InitialLaw",
    "PathBatch",
    "PathSample",
    "QvMode",
    "Scenario",
    "SimulationResult",
    "SimulationSettings",
    "StepRule",
    "StepTable",
    "UniformStreams",
    "bessel_G",
    "bessel_H",
    "bessel_drift_function",
    "bessel_scenario",
    "bessel_second_moment",
    "check_timechange_scope",
    "collect",
    "explosion_probe",
    "explosion_scenario",
    "occupation_fraction",
    "run_simulation",
    "simulate_paths",
    "simulate_timechange",
    "simulate_walk",
    "singular_occupation_points",
    "site_skew_probability",
    "skew_bm_scenario",
    "skew_prob_from_atom",
]
