"""Tests for config_parser.py - strict scenario files."""

import json

import pytest

from src.scenarios.config_parser import (
    ScenarioConfigError,
    emit_config,
    load_config,
    parse_config,
)
from src.simulation.scenario import Engine, InitialKind

SHIPPED = [
    "b-quarter.json",
    "b-three-quarter.json",
    "bessel-1.5.json",
    "bessel-skew-0.25.json",
    "constant.json",
    "explosion.json",
    "gdrift-beta-0.5.json",
    "skew-bm.json",
    "zero-interval.json",
]


def minimal(**extra):
    half = {"kind": "power", "anchor": 0.0, "coeff": 1.0, "exponent": 0.5}
    data = {
        "name": "bessel",
        "drift_function": {
            "pieces": [{**half, "l": "-inf", "r": 0.0}, {**half, "l": 0.0, "r": "inf"}]
        },
        "diffusion": {"pieces": [{"l": "-inf", "r": "inf", "coeff": 1.0}]},
    }
    data.update(extra)
    return json.dumps(data, indent=2)


class TestShippedScenarios:
    @pytest.mark.parametrize("filename", SHIPPED)
    def test_parses(self, scenario_dir, filename):
        config = load_config(scenario_dir / filename)
        assert config.name == filename.removesuffix(".json")

    @pytest.mark.parametrize("filename", SHIPPED)
    def test_emit_round_trip(self, scenario_dir, filename):
        config = load_config(scenario_dir / filename)
        assert parse_config(emit_config(config)) == config

    def test_from_measure(self, scenario_dir):
        config = load_config(scenario_dir / "gdrift-beta-0.5.json")
        assert config.drift_measure is not None
        assert config.scenario.f(1.0) == pytest.approx(2.718281828459045)

    def test_skew_outputs(self, scenario_dir):
        config = load_config(scenario_dir / "bessel-skew-0.25.json")
        assert config.scenario.nu.atoms == ((0.0, 0.25),)
        assert config.outputs.levels == (-0.5, 0.0, 0.5)
        assert config.outputs.eps == 0.02


class TestParseConfig:
    def test_defaults(self):
        config = parse_config(minimal())
        settings = config.scenario.settings
        assert settings.engine is Engine.WALK
        assert config.scenario.initial.kind is InitialKind.POINT
        assert config.scenario.nu.atoms == ()

    def test_empty_text(self):
        with pytest.raises(ScenarioConfigError, match="empty configuration") as info:
            parse_config("  \n")
        assert info.value.line == 1

    def test_syntax_error_has_position(self):
        with pytest.raises(ScenarioConfigError, match="syntax error") as info:
            parse_config('{\n  "name": \n}')
        assert info.value.line == 3
        assert info.value.column == 1

    def test_unknown_top_level_field(self):
        text = minimal(colour="red")
        with pytest.raises(ScenarioConfigError, match="unknown field") as info:
            parse_config(text)
        assert info.value.field == "colour"
        assert info.value.line == text.splitlines().index('  "colour": "red"') + 1

    def test_missing_diffusion(self):
        data = json.loads(minimal())
        del data["diffusion"]
        with pytest.raises(ScenarioConfigError, match="missing field") as info:
            parse_config(json.dumps(data))
        assert info.value.field == "diffusion"

    def test_reflecting_atom(self):
        text = minimal(skewness={"atoms": [{"point": 0.0, "mass": 0.5}]})
        with pytest.raises(ScenarioConfigError, match="reflecting barrier") as info:
            parse_config(text)
        assert info.value.field == "skewness.atoms[0].mass"
        assert info.value.line is not None

    def test_atom_outside_F_minus(self):
        text = minimal(skewness={"atoms": [{"point": 1.0, "mass": 0.25}]})
        with pytest.raises(ScenarioConfigError, match="not in F-") as info:
            parse_config(text)
        assert info.value.field == "skewness.atoms[0].point"

    def test_negative_drift_function(self):
        text = minimal(drift_function={"pieces": [{"l": "-inf", "r": "inf", "coeff": -1.0}]})
        with pytest.raises(ScenarioConfigError, match="negative"):
            parse_config(text)

    def test_bad_engine(self):
        with pytest.raises(ScenarioConfigError, match="expected one of walk, timechange"):
            parse_config(minimal(simulation={"engine": "euler"}))

    def test_integer_fields(self):
        with pytest.raises(ScenarioConfigError) as info:
            parse_config(minimal(simulation={"n_paths": 1.5}))
        assert info.value.field == "simulation.n_paths"

    def test_settings_validation(self):
        with pytest.raises(ScenarioConfigError, match="step"):
            parse_config(minimal(simulation={"T": 0.1, "step": 1.0}))

    def test_uniform_initial(self):
        config = parse_config(minimal(initial={"sampler": "uniform", "low": -1.0, "high": 1.0}))
        assert config.scenario.initial.kind is InitialKind.UNIFORM

    def test_unknown_sampler(self):
        with pytest.raises(ScenarioConfigError, match="unknown sampler"):
            parse_config(minimal(initial={"sampler": "cauchy"}))

    def test_bad_output_eps(self):
        with pytest.raises(ScenarioConfigError, match="positive"):
            parse_config(minimal(outputs={"eps": 0.0}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioConfigError, match="cannot read"):
            load_config(tmp_path / "absent.json")

    def test_error_message_format(self):
        error = ScenarioConfigError("unknown field", "outputs.colour", line=4, column=2)
        assert str(error) == "line 4, column 2 field 'outputs.colour': unknown field"
