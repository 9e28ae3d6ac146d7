"""Tests for local-time estimators and identity checks on hand-made paths."""

from types import SimpleNamespace

import numpy as np
import pytest

from src.coefficients.piecewise import PiecewisePower, Side
from src.localtime.estimators import (
    LocalTimeTable,
    estimate_Lm,
    estimate_Lminus,
    estimate_Lplus,
    local_time_table,
    steps_before,
    window_mass,
)
from src.localtime.identities import (
    check_identity,
    check_occupation_formula,
    check_support,
    left_right_ratio,
    outside_range_zero,
    square_integral,
    transformed_level_ratio,
)
from src.transform.space_transform import build_transform

ONE = PiecewisePower.constant(1.0)


class TestStepsBefore:
    def test_grid_point(self):
        times = np.array([0.0, 0.1, 0.2, 0.3])
        assert steps_before(times, 0.2) == 2
        assert steps_before(times, 0.3) == 3

    def test_clamped(self):
        times = np.array([0.0, 0.1, 0.2])
        assert steps_before(times, 5.0) == 2

    def test_negative_time(self):
        with pytest.raises(ValueError):
            steps_before(np.array([0.0, 1.0]), -1.0)


class TestEstimators:
    def test_Lplus(self, synthetic_path):
        assert estimate_Lplus(synthetic_path, 0.0, 0.4, 0.05)[0] == pytest.approx(4.0)

    def test_Lminus(self, synthetic_path):
        assert estimate_Lminus(synthetic_path, 0.1, 0.4, 0.05)[0] == pytest.approx(2.0)

    def test_Lplus_before_time(self, synthetic_path):
        assert estimate_Lplus(synthetic_path, 0.0, 0.1, 0.05)[0] == pytest.approx(2.0)

    def test_Lm_normalizes_by_m_mass(self, synthetic_path):
        lm = estimate_Lm(synthetic_path, ONE, 0.0, Side.RIGHT, 0.4, 0.05)
        assert lm[0] == pytest.approx(2.0)

    def test_window_mass_power(self):
        f = PiecewisePower.symmetric_power(1.0, 0.5)
        assert window_mass(f, 0.0, 0.04, Side.RIGHT) == pytest.approx(4.0 / 3.0 * 0.008)

    def test_zero_window_mass(self):
        with pytest.raises(ValueError, match="zero m-mass"):
            window_mass(PiecewisePower.constant(0.0), 0.0, 0.1, Side.LEFT)

    def test_window_width(self, synthetic_path):
        with pytest.raises(ValueError, match="positive"):
            estimate_Lplus(synthetic_path, 0.0, 0.4, 0.0)


class TestLocalTimeTable:
    def test_table_shape_and_estimates(self, synthetic_path):
        table = local_time_table(synthetic_path, ONE, [0.0, 0.5, 3.0], 0.4, 0.05)
        assert table.Lp.shape == (1, 3)
        estimates = table.estimates()
        assert [e.level for e in estimates] == [0.0, 0.5, 3.0]
        assert estimates[2].Lp == 0.0
        assert estimates[0].n_samples == 1

    def test_concat(self, synthetic_path):
        table = local_time_table(synthetic_path, ONE, [0.0], 0.4, 0.05)
        assert LocalTimeTable.concat([table, table]).n_paths == 2

    def test_concat_empty(self):
        with pytest.raises(ValueError):
            LocalTimeTable.concat([])


class TestIdentities:
    def test_identity_holds_exactly_for_constant_f(self, synthetic_path):
        table = local_time_table(synthetic_path, ONE, [0.0, 0.5], 0.4, 0.05)
        report = check_identity(table, ONE)
        assert report.passed
        assert report.worst == pytest.approx(0.0, abs=1e-12)

    def test_identity_skips_zero_of_f(self, synthetic_path):
        f = PiecewisePower.symmetric_power(1.0, 0.5)
        table = local_time_table(synthetic_path, f, [0.0], 0.4, 0.05)
        report = check_identity(table, f)
        assert report.levels[0].skipped is not None
        assert report.passed

    def test_occupation_formula_constant_g(self, synthetic_path):
        result = check_occupation_formula(synthetic_path, ONE, 0.4, 0.05)
        assert result.passed
        assert result.value == pytest.approx(0.0, abs=1e-12)

    def test_support(self, synthetic_path):
        report = check_support(synthetic_path, 0.0, 0.4, 0.05)
        assert report.far_increment == 0.0
        assert report.passed
        assert report.positive_fraction == 1.0

    def test_support_after_absorption(self):
        path = SimpleNamespace(
            times=np.array([0.0, 0.1, 0.2]),
            X=np.array([[0.0, 0.0, 0.0]]),
            qv=np.array([[0.1, 0.0]]),
            absorption_time=np.array([0.1]),
        )
        assert check_support(path, 0.0, 0.2, 0.05).passed

    def test_outside_range(self, synthetic_path):
        assert outside_range_zero(synthetic_path, ONE, [-5.0, 5.0], 0.4, 0.05)

    def test_left_right_ratio(self):
        table = LocalTimeTable(
            levels=np.array([0.0]),
            eps=0.1,
            t=1.0,
            Lp=np.ones((2, 1)),
            Lminus=np.ones((2, 1)),
            Lm_right=np.array([[2.0], [2.0]]),
            Lm_left=np.array([[1.0], [1.0]]),
        )
        assert left_right_ratio(table, 0.0) == 0.5

    def test_left_right_ratio_without_occupation(self):
        table = LocalTimeTable(
            np.array([0.0]), 0.1, 1.0, *(np.zeros((1, 1)) for _ in range(4))
        )
        with pytest.raises(ValueError, match="no occupation"):
            left_right_ratio(table, 0.0)

    def test_square_integral(self, synthetic_path):
        f = PiecewisePower.constant(2.0)
        np.testing.assert_allclose(square_integral(synthetic_path, f, 0.4), [0.1])

    def test_transformed_level_ratio_is_two(self, synthetic_path):
        t = build_transform(ONE)
        assert transformed_level_ratio(synthetic_path, t, 0.0, 0.4, 0.05) == pytest.approx(2.0)
