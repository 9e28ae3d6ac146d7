"""Tests for the simulation engines, seeding and probes."""

import math

import numpy as np
import pytest

from src.coefficients.piecewise import PiecewisePower
from src.simulation.probes import (
    explosion_stats,
    occupation_fraction,
    singular_occupation_points,
    skew_prob_from_atom,
)
from src.simulation.runner import collect, run_simulation, simulate_paths
from src.simulation.scenario import (
    Engine,
    InitialKind,
    InitialLaw,
    Scenario,
    SimulationSettings,
    StepRule,
    bessel_scenario,
    bessel_second_moment,
    explosion_scenario,
)
from src.simulation.step_tables import StepTable, site_skew_probability
from src.simulation.streams import UniformStreams
from src.simulation.timechange import check_timechange_scope
from src.simulation.walk import batch_indices, simulate_walk


def terminal(scenario, **kwargs):
    return np.concatenate([b.X[:, -1] for b in simulate_walk(scenario, **kwargs)])


def power_b_from_origin(p, settings):
    return Scenario(
        f"b-power-{p}",
        PiecewisePower.constant(1.0),
        PiecewisePower.symmetric_power(1.0, p),
        initial=InitialLaw.at(0.0),
        settings=settings,
    )


class TestUniformStreams:
    def test_stream_depends_only_on_seed_and_index(self):
        together = UniformStreams(7, [0, 1, 2])
        alone = UniformStreams(7, [1])
        for _ in range(5):
            assert together.draw()[1] == alone.draw()[0]

    def test_chunk_size_does_not_matter(self):
        small = UniformStreams(7, [4], chunk=3)
        large = UniformStreams(7, [4])
        a = [small.draw()[0] for _ in range(10)]
        b = [large.draw()[0] for _ in range(10)]
        assert a == b

    def test_partial_draws(self):
        streams = UniformStreams(1, [0, 1])
        reference = UniformStreams(1, [0, 1])
        streams.draw([0])
        first = reference.draw()
        second = reference.draw()
        np.testing.assert_array_equal(streams.draw(), [second[0], first[1]])

    def test_bad_chunk(self):
        with pytest.raises(ValueError):
            UniformStreams(0, [0], chunk=0)


class TestSettings:
    def test_step_larger_than_horizon(self):
        with pytest.raises(ValueError, match="step"):
            SimulationSettings(T=0.1, step=1.0)

    def test_negative_seed(self):
        with pytest.raises(ValueError, match="seed"):
            SimulationSettings(seed=-1)

    def test_n_steps_and_resolution(self):
        settings = SimulationSettings(T=1.0, step=0.01)
        assert settings.n_steps == 100
        assert settings.resolution == pytest.approx(0.1)

    def test_to_dict_uses_enum_values(self):
        data = SimulationSettings(engine=Engine.TIMECHANGE).to_dict()
        assert data["engine"] == "timechange"
        assert "base_resolution" not in data


class TestInitialLaw:
    def test_point(self):
        assert InitialLaw.at(0.5).to_dict() == {"point": 0.5}

    def test_uniform_sample(self):
        law = InitialLaw(InitialKind.UNIFORM, low=-1.0, high=1.0)
        assert law.sample(0.75) == pytest.approx(0.5)
        assert law.center == 0.0

    def test_invalid_uniform(self):
        with pytest.raises(ValueError):
            InitialLaw(InitialKind.UNIFORM, low=1.0, high=1.0)


class TestScenario:
    def test_validate_passes_for_bessel(self, bessel):
        assert bessel.validate().symmetric_exists

    def test_validate_rejects_missing_solution(self, small_settings):
        base = PiecewisePower.symmetric_power(1.0, 0.75)
        b = PiecewisePower(base.pieces, ((0.0, 1.0),))
        scenario = Scenario("stuck", PiecewisePower.constant(1.0), b, settings=small_settings)
        with pytest.raises(ValueError, match="no good solution"):
            scenario.validate()

    def test_with_settings(self, bessel):
        assert bessel.with_settings(seed=11).settings.seed == 11
        assert bessel.settings.seed == 3

    def test_bessel_dimension_range(self):
        with pytest.raises(ValueError, match="dimension"):
            bessel_scenario(2.5)

    def test_second_moment(self):
        assert bessel_second_moment(1.5, 0.5, 2.0) == pytest.approx(3.25)


class TestSkewProbabilities:
    def test_from_atom(self):
        assert skew_prob_from_atom(0.0) == 0.5
        assert skew_prob_from_atom(0.25) == pytest.approx(2.0 / 3.0)

    def test_reflecting_atom(self):
        with pytest.raises(ValueError):
            skew_prob_from_atom(0.5)

    def test_site_rule(self):
        assert site_skew_probability(0.0, 1.0, 1.0) == 0.5
        assert site_skew_probability(0.25, 1.0, 1.0) == pytest.approx(2.0 / 3.0)

    def test_site_rule_is_elementwise(self):
        p = site_skew_probability(np.array([0.0, 0.25]), np.array([1.0, 2.0]), 1.0)
        np.testing.assert_allclose(p, [0.5, 0.8])
        with pytest.raises(ValueError, match="positive"):
            site_skew_probability(0.0, np.array([1.0, 0.0]), 1.0)

    def test_step_table_skew_bm_site(self, skew_bm):
        """One-sided exit-time lengths at the jump of f give P(right) = 3/4."""
        sites = StepTable(skew_bm).sites
        (i,) = np.flatnonzero(sites.y == 0.0)
        p = site_skew_probability(0.0, sites.d_minus[i], sites.d_plus[i])
        assert p == pytest.approx(0.75, rel=1e-6)

    def test_gaussian_rule_needs_smooth_coefficients(self, bessel):
        with pytest.raises(ValueError, match="gaussian"):
            StepTable(bessel.with_settings(step_rule=StepRule.GAUSSIAN))


class TestWalkEngine:
    def test_batch_size_invariance(self, bessel):
        a = terminal(bessel, batch_size=20)
        b = terminal(bessel, batch_size=7)
        np.testing.assert_array_equal(a, b)

    def test_first_index_selects_streams(self, bessel):
        full = terminal(bessel, n_paths=20)
        tail = terminal(bessel, n_paths=5, first_index=10)
        np.testing.assert_array_equal(full[10:15], tail)

    def test_seed_changes_paths(self, bessel):
        a = terminal(bessel)
        b = terminal(bessel.with_settings(seed=4))
        assert not np.array_equal(a, b)

    def test_recorded_shapes(self, bessel):
        (batch,) = list(simulate_walk(bessel, record=True))
        n_steps = bessel.settings.n_steps
        assert batch.X.shape == (20, n_steps + 1)
        assert batch.qv.shape == (20, n_steps)
        assert np.all(np.diff(batch.times) > 0.0)
        assert np.all(batch.qv >= 0.0)

    def test_path_samples(self, bessel):
        (batch,) = list(simulate_walk(bessel, n_paths=3, record=True))
        samples = list(batch)
        assert [s.index for s in samples] == [0, 1, 2]
        assert samples[0].explosion_time is None

    def test_batch_indices(self):
        chunks = batch_indices(5, 2, first_index=3)
        assert [list(c) for c in chunks] == [[3, 4], [5, 6], [7]]

    def test_explosion_marks_paths(self):
        scenario = explosion_scenario(SimulationSettings(T=1.0, step=0.01, n_paths=200, seed=1))
        result = run_simulation(scenario)
        exploded = ~np.isnan(result.explosion_time)
        assert exploded.any()
        assert np.all(np.isinf(result.X_T[exploded]))
        assert np.all(result.explosion_time[exploded] <= 1.0)

    def test_zero_interval_absorbs(self, scenario_dir):
        from src.scenarios.config_parser import load_config

        scenario = load_config(scenario_dir / "zero-interval.json").scenario
        scenario = scenario.with_settings(T=1.0, step=0.01, n_paths=50)
        result = run_simulation(scenario)
        absorbed = ~np.isnan(result.absorption_time)
        assert absorbed.any()
        assert np.all(result.X_T[absorbed] == 0.0)

    def test_steep_diffusion_holds_its_zero(self, small_settings):
        """b = |x|^0.75 started at 0: absorbed at once, the recorded path is constant."""
        (batch,) = list(simulate_walk(power_b_from_origin(0.75, small_settings), record=True))
        assert np.all(batch.X == 0.0)
        assert np.all(batch.Y == 0.0)
        assert np.all(batch.qv == 0.0)
        np.testing.assert_array_equal(batch.absorption_time, 0.0)
        np.testing.assert_array_equal(batch.absorbed_at, 0.0)

    @pytest.mark.parametrize("p, held", [(0.49, False), (0.5, True)])
    def test_divergence_boundary_decides_absorption(self, small_settings, p, held):
        (batch,) = list(simulate_walk(power_b_from_origin(p, small_settings), record=True))
        assert bool(np.all(batch.X == 0.0)) is held
        assert bool(np.all(batch.absorption_time == 0.0)) is held

    def test_recorded_paths_freeze(self, scenario_dir):
        from src.scenarios.config_parser import load_config

        cases = [
            explosion_scenario(SimulationSettings(T=1.0, step=0.01, n_paths=100, seed=1)),
            load_config(scenario_dir / "zero-interval.json").scenario.with_settings(
                T=1.0, step=0.01, n_paths=50
            ),
        ]
        frozen = 0
        for scenario in cases:
            for batch in simulate_walk(scenario, record=True):
                stop = np.fmin(batch.explosion_time, batch.absorption_time)
                for i in np.flatnonzero(~np.isnan(stop)):
                    k = int(np.searchsorted(batch.times, stop[i] - 1e-12))
                    assert np.all(batch.X[i, k:] == batch.X[i, k])
                    assert np.all(batch.Y[i, k:] == batch.Y[i, k])
                    assert np.all(batch.qv[i, k:] == 0.0)
                    frozen += 1
        assert frozen > 0

    def test_skew_crossings_count_sign_changes(self, scenario_dir):
        from src.scenarios.config_parser import load_config

        scenario = load_config(scenario_dir / "bessel-skew-0.25.json").scenario
        scenario = scenario.with_settings(T=0.5, step=0.01, n_paths=20)
        (batch,) = list(simulate_walk(scenario, record=True))
        assert list(batch.skew_points) == [0.0]
        for i in range(len(batch)):
            side = np.sign(batch.Y[i])
            side = side[side != 0.0]
            assert batch.skew_crossings[i, 0] == np.count_nonzero(np.diff(side))
        assert batch.skew_crossings.sum() > 0

    @pytest.mark.slow
    def test_skew_bm_positive_probability(self, skew_bm):
        scenario = skew_bm.with_settings(T=0.25, step=1e-3, n_paths=2000)
        x = run_simulation(scenario).X_T
        p = float(np.mean((x > 0.0) + 0.5 * (x == 0.0)))
        assert p == pytest.approx(0.75, abs=0.05)

    @pytest.mark.slow
    def test_workers_do_not_change_paths(self, bessel):
        a = terminal(bessel)
        b = terminal(bessel, batch_size=5, workers=2)
        np.testing.assert_array_equal(a, b)


class TestTimeChangeEngine:
    def test_scope_rejects_explosion(self):
        with pytest.raises(ValueError, match="explosion"):
            check_timechange_scope(explosion_scenario())

    def test_batch_size_invariance(self, skew_bm):
        def run(size):
            batches = simulate_paths(skew_bm, engine=Engine.TIMECHANGE, batch_size=size)
            return collect(skew_bm, batches, Engine.TIMECHANGE).X_T

        np.testing.assert_array_equal(run(20), run(6))

    def test_recorded_grid(self, bessel):
        batches = list(simulate_paths(bessel, engine=Engine.TIMECHANGE, record=True))
        assert batches[0].X.shape == (20, bessel.settings.n_steps + 1)
        assert np.all(np.isfinite(batches[0].X))


class TestProbes:
    def test_explosion_stats(self):
        stats = explosion_stats(np.array([0.5, np.nan, 2.0, 0.25]), horizon=1.0)
        assert stats.fraction == 0.5
        assert stats.min_time == 0.25
        assert stats.mean_time == pytest.approx(0.375)

    def test_no_explosions(self):
        stats = explosion_stats(np.full(3, np.nan), horizon=1.0)
        assert stats.fraction == 0.0
        assert stats.min_time is None

    def test_occupation_fraction(self, synthetic_path):
        assert occupation_fraction(synthetic_path, [0.0], 0.05) == pytest.approx(0.5)

    def test_singular_occupation_points(self, bessel):
        assert singular_occupation_points(bessel) == (0.0,)

    def test_summary(self, bessel):
        summary = run_simulation(bessel).summary()
        assert summary["n_paths"] == 20
        assert summary["engine"] == "walk"
        assert summary["explosion"]["fraction"] == 0.0
        assert math.isfinite(summary["mean_X_T"])

    def test_collect_needs_batches(self, bessel):
        with pytest.raises(ValueError):
            collect(bessel, [])
