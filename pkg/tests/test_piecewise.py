"""Tests for piecewise.py - piecewise-power coefficients."""

import math

import numpy as np
import pytest

from src.coefficients.piecewise import (
    ExpPowerPiece,
    PiecewisePower,
    PowerPiece,
    Side,
    check_drift_function,
    decode_real,
    encode_real,
    piece_from_dict,
    zero_sets,
)


def exp_2x():
    return PiecewisePower(
        (
            ExpPowerPiece(-math.inf, 0.0, 1.0, -2.0, 1.0, 0.0),
            ExpPowerPiece(0.0, math.inf, 1.0, 2.0, 1.0, 0.0),
        )
    )


class TestRealEncoding:
    def test_infinities_become_strings(self):
        assert encode_real(math.inf) == "inf"
        assert encode_real(-math.inf) == "-inf"
        assert encode_real(1.5) == 1.5

    def test_decode_strings(self):
        assert decode_real("inf") == math.inf
        assert decode_real("-inf") == -math.inf
        assert decode_real(2) == 2.0

    def test_decode_rejects_garbage(self):
        with pytest.raises(ValueError):
            decode_real("big")

    def test_decode_rejects_bool(self):
        with pytest.raises(ValueError):
            decode_real(True)


class TestPieces:
    def test_exponent_out_of_range(self):
        with pytest.raises(ValueError, match="exponent"):
            PowerPiece(0.0, math.inf, 1.0, 1.0, 0.0)

    def test_anchor_inside_interval(self):
        with pytest.raises(ValueError, match="inside"):
            PowerPiece(-1.0, 1.0, 1.0, 0.5, 0.0)

    def test_power_piece_needs_anchor(self):
        with pytest.raises(ValueError, match="anchor"):
            PowerPiece(0.0, 1.0, 1.0, 0.5)

    def test_logarithmic_piece_needs_anchor_off_closure(self):
        with pytest.raises(ValueError, match="exponent -1"):
            PowerPiece(0.0, math.inf, 1.0, -1.0, 0.0)
        assert PowerPiece(1.0, math.inf, 1.0, -1.0, 0.0).is_logarithmic

    @pytest.mark.parametrize("x", [-4.0, -1.5])
    def test_logarithmic_primitive_inverts(self, x):
        piece = PowerPiece(-math.inf, -1.0, 0.25, -1.0, 0.0)
        assert piece.invert_primitive(piece.primitive(x)) == pytest.approx(x)

    def test_exp_power_exponent_range(self):
        with pytest.raises(ValueError):
            ExpPowerPiece(0.0, math.inf, 1.0, 1.0, 2.0, 0.0)

    def test_piece_from_dict_unknown_field(self):
        with pytest.raises(ValueError, match="unknown field 'colour'"):
            piece_from_dict({"l": "-inf", "r": "inf", "coeff": 1.0, "colour": "red"})

    def test_piece_from_dict_missing_field(self):
        with pytest.raises(ValueError, match="missing field 'coeff'"):
            piece_from_dict({"l": "-inf", "r": "inf"})


class TestPiecewisePower:
    def test_pieces_must_cover_the_line(self):
        with pytest.raises(ValueError, match="whole real line"):
            PiecewisePower((PowerPiece(0.0, math.inf, 1.0),))

    def test_pieces_must_be_contiguous(self):
        pieces = (PowerPiece(-math.inf, 0.0, 1.0), PowerPiece(1.0, math.inf, 1.0))
        with pytest.raises(ValueError, match="contiguous"):
            PiecewisePower(pieces)

    def test_explicit_value_off_breakpoint(self):
        with pytest.raises(ValueError, match="not a breakpoint"):
            PiecewisePower(PiecewisePower.constant(1.0).pieces, ((0.5, 1.0),))

    def test_symmetric_power_values(self):
        f = PiecewisePower.symmetric_power(1.0, 0.5)
        assert f(4.0) == pytest.approx(2.0)
        assert f(-4.0) == pytest.approx(2.0)
        assert f(0.0) == 0.0
        assert f.left_limit(0.0) == 0.0

    def test_infinite_arguments(self):
        f = PiecewisePower.constant(1.0)
        assert f(math.inf) == math.inf
        assert f(-math.inf) == math.inf

    def test_vectorized_evaluation(self):
        f = PiecewisePower.step([0.0], [1.0, 3.0])
        np.testing.assert_array_equal(f(np.array([-1.0, 0.0, 2.0])), [1.0, 3.0, 3.0])

    def test_step_is_right_continuous(self):
        f = PiecewisePower.step([0.0], [1.0, 3.0])
        assert f.value_at(0.0) == 3.0
        assert f.left_limit(0.0) == 1.0

    def test_explicit_breakpoint_value(self):
        base = PiecewisePower.step([0.0, 1.0], [1.0, 0.0, 1.0])
        b = PiecewisePower(base.pieces, ((1.0, 0.0),))
        assert b.value_at(1.0) == 0.0
        assert b.right_limit(1.0) == 1.0

    def test_integrate_power(self):
        f = PiecewisePower.symmetric_power(1.0, 0.5)
        assert f.integrate(-1.0, 1.0) == pytest.approx(4.0 / 3.0)
        assert f.integrate(1.0, -1.0) == pytest.approx(-4.0 / 3.0)

    def test_integrate_reciprocal_singularity(self):
        g = PiecewisePower.symmetric_power(1.0, 0.5).reciprocal()
        assert g.integrate(0.0, 1.0) == pytest.approx(2.0)

    def test_integrate_logarithmic(self):
        rho = PiecewisePower(
            (
                PowerPiece(-math.inf, -1.0, 2.0, -1.0, 0.0),
                PowerPiece(-1.0, 1.0, 0.0),
                PowerPiece(1.0, math.inf, 1.0, -1.0, 0.0),
            )
        )
        assert rho.integrate(1.0, math.e) == pytest.approx(1.0)
        assert rho.integrate(-math.e, -1.0) == pytest.approx(2.0)
        assert rho(-2.0) == pytest.approx(1.0)

    def test_integrate_exp(self):
        assert exp_2x().integrate(0.0, 1.0) == pytest.approx((math.exp(2.0) - 1.0) / 2.0)
        assert exp_2x().integrate(-1.0, 0.0) == pytest.approx((1.0 - math.exp(-2.0)) / 2.0)

    def test_integrate_needs_finite_bounds(self):
        with pytest.raises(ValueError):
            PiecewisePower.constant(1.0).integrate(0.0, math.inf)

    def test_total_variation_of_step(self):
        f = PiecewisePower.step([0.0], [1.0, 3.0])
        assert f.total_variation(-1.0, 1.0) == pytest.approx(2.0)

    def test_scaled(self):
        f = PiecewisePower.step([0.0], [1.0, 3.0]).scaled(2.0)
        assert f.value_at(1.0) == 6.0

    def test_dict_round_trip(self):
        base = PiecewisePower.step([0.0, 1.0], [1.0, 0.0, 1.0])
        b = PiecewisePower(base.pieces, ((1.0, 0.0),))
        assert PiecewisePower.from_dict(b.to_dict()) == b
        assert PiecewisePower.from_dict(exp_2x().to_dict()) == exp_2x()


class TestZeroSets:
    def test_bessel_zero_at_origin(self):
        zs = zero_sets(PiecewisePower.symmetric_power(1.0, 0.5))
        assert zs.F_plus == (0.0,)
        assert zs.F_minus == (0.0,)
        assert zs.F == (0.0,)

    def test_no_zeros(self):
        zs = zero_sets(PiecewisePower.step([0.0], [1.0, 3.0]))
        assert zs.F == ()

    def test_vanishing_piece_rejected(self):
        with pytest.raises(ValueError, match="locally integrable"):
            zero_sets(PiecewisePower.step([0.0], [1.0, 0.0]))


class TestCheckDriftFunction:
    def test_valid(self):
        assert check_drift_function(PiecewisePower.symmetric_power(1.0, 0.5)).passed

    def test_negative(self):
        report = check_drift_function(PiecewisePower.step([0.0], [-1.0, 1.0]))
        assert not report.passed
        assert "negative" in report.violations[0]

    def test_unbounded(self):
        report = check_drift_function(PiecewisePower.symmetric_power(1.0, -0.5))
        assert any("bounded variation" in v for v in report.violations)

    def test_negative_exponent_away_from_anchor_is_bounded(self):
        f = PiecewisePower(
            (PowerPiece(-math.inf, 1.0, 1.0), PowerPiece(1.0, math.inf, 1.0, -0.5, 0.0))
        )
        assert check_drift_function(f).passed

    def test_not_right_continuous(self):
        base = PiecewisePower.step([0.0], [1.0, 3.0])
        report = check_drift_function(PiecewisePower(base.pieces, ((0.0, 1.0),)))
        assert any("right-continuous" in v for v in report.violations)

    def test_side_enum_reads_left_limit(self):
        f = PiecewisePower.step([0.0], [1.0, 3.0])
        assert f.evaluate(0.0, Side.LEFT) == 1.0
