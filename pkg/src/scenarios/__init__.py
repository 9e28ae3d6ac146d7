# Singular Drift Lab - Scenario Configuration
from .config_parser import (
    OutputTargets,
    ScenarioConfig,
    ScenarioConfigError,
    emit_config,
    load_config,
    parse_config,
)

__all__ = [
    "OutputTargets",
    "ScenarioConfig",
    "ScenarioConfigError",
    "emit_config",
    "load_config",
    "parse_config",
]
