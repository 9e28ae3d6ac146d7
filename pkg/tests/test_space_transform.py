"""Tests for space_transform.py - G, H and the transformed coefficient."""

import math

import numpy as np
import pytest

from src.coefficients.piecewise import ExpPowerPiece, PiecewisePower
from src.simulation.scenario import bessel_G, bessel_H
from src.transform.space_transform import build_transform, dump_table, invariant_residuals


@pytest.fixture
def bessel_transform():
    return build_transform(PiecewisePower.symmetric_power(1.0, 0.5))


@pytest.fixture
def exp_transform():
    """f = e^x: G(x) = 1 - e^{-x}, G(R) = (-inf, 1)."""
    return build_transform(
        PiecewisePower(
            (
                ExpPowerPiece(-math.inf, 0.0, 1.0, -1.0, 1.0, 0.0),
                ExpPowerPiece(0.0, math.inf, 1.0, 1.0, 1.0, 0.0),
            )
        )
    )


class TestG:
    def test_bessel_closed_form(self, bessel_transform):
        xs = np.array([-4.0, -0.25, 0.0, 1.0, 9.0])
        np.testing.assert_allclose(bessel_transform.G(xs), bessel_G(1.5, xs))

    def test_G_vanishes_at_origin(self, bessel_transform):
        assert bessel_transform.G(0.0) == 0.0

    def test_covers_real_line(self, bessel_transform):
        assert bessel_transform.covers_real_line
        assert bessel_transform.G(math.inf) == math.inf

    def test_bounded_image(self, exp_transform):
        assert exp_transform.G_plus_inf == pytest.approx(1.0)
        assert exp_transform.G_minus_inf == -math.inf
        assert not exp_transform.covers_real_line
        assert exp_transform.G(-1.0) == pytest.approx(1.0 - math.e)

    def test_components_split_at_zeros(self, bessel_transform):
        assert bessel_transform.components == ((-math.inf, 0.0), (0.0, math.inf))


class TestH:
    def test_bessel_closed_form(self, bessel_transform):
        ys = np.array([-3.0, -0.5, 0.0, 2.0, 5.0])
        np.testing.assert_allclose(bessel_transform.H(ys), bessel_H(1.5, ys))

    def test_boundary_maps_to_infinity(self, exp_transform):
        assert exp_transform.H(exp_transform.G_plus_inf) == math.inf

    def test_outside_image_rejected(self, exp_transform):
        with pytest.raises(ValueError, match="outside the closure"):
            exp_transform.H(1.5)

    def test_breakpoints_map_back_exactly(self):
        t = build_transform(PiecewisePower.step([-1.0, 2.0], [1.0, 3.0, 0.5]))
        assert t.H(t.G(2.0)) == 2.0
        assert t.H(t.G(-1.0)) == -1.0


class TestSigma:
    def test_infinite_at_zero_of_f(self, bessel_transform):
        b = PiecewisePower.constant(1.0)
        assert bessel_transform.sigma(b, 0.0) == math.inf
        assert bessel_transform.sigma_tilde(b, 0.0) == 1.0

    def test_ratio_away_from_zero(self, bessel_transform):
        b = PiecewisePower.constant(1.0)
        assert bessel_transform.sigma(b, 2.0) == pytest.approx(1.0)
        assert bessel_transform.sigma(b, 4.0) == pytest.approx(0.5)

    def test_zero_times_infinity_is_zero(self, bessel_transform):
        b = PiecewisePower.symmetric_power(1.0, 0.75)
        assert bessel_transform.sigma(b, 0.0) == 0.0


class TestBuildTransform:
    def test_rejects_negative_f(self):
        with pytest.raises(ValueError, match="not a drift function"):
            build_transform(PiecewisePower.step([0.0], [-1.0, 1.0]))


class TestInvariants:
    def test_bessel_residuals(self, bessel_transform):
        residuals = invariant_residuals(bessel_transform, -2.0, 2.0, 401)
        assert residuals["roundtrip"] < 1e-9
        assert residuals["inverse_equation"] < 1e-8

    def test_step_residuals(self):
        t = build_transform(PiecewisePower.step([0.0], [1.0, 3.0]))
        residuals = invariant_residuals(t, -2.0, 2.0, 401)
        assert residuals["roundtrip"] < 1e-12
        assert residuals["inverse_equation"] < 1e-10

    def test_dump_table_columns(self, bessel_transform):
        xs = np.linspace(-1.0, 1.0, 5)
        table = dump_table(bessel_transform, PiecewisePower.constant(1.0), xs)
        assert list(table) == ["x", "G", "H_of_G", "sigma_tilde"]
        np.testing.assert_allclose(table["H_of_G"], xs, atol=1e-12)
        assert table["sigma_tilde"][2] == 1.0
