"""Test the scalar layer, the extrapolation helpers and the configuration"""

from fractions import Fraction

from mpmath import mp
import pytest
from pytest import raises

from voronoicells import config, numeric
from voronoicells.config import ExtrapolationConfig, ILTConfig, ILTMethod
from voronoicells.errors import ConfigError, ConvergenceError, PrecisionError
from voronoicells.extrapolate import extrapolate_sequence, limit_coeffs, richardson


class TestScalars:
    def test_big_fraction_is_exact_division(self, precision):
        assert numeric.big(Fraction(1, 3)) == mp.one / 3

    def test_bits_below(self):
        assert numeric.bits_below(mp.mpf(1) / 1000, 1) == 10
        assert numeric.bits_below(4, 1) == 0
        assert numeric.bits_below(0, 1) == numeric.MAX_GUARD_BITS

    def test_stable_eval_absorbs_cancellation(self):
        value = numeric.stable_eval(lambda: (mp.pi + mp.mpf(10) ** -25) - mp.pi, 64)
        with mp.workprec(64):
            assert mp.almosteq(value, mp.mpf(10) ** -25, rel_eps=1e-15)

    def test_stable_eval_gives_up(self):
        with raises(PrecisionError):
            numeric.stable_eval(lambda: mp.rand(), 64)

    def test_nstr(self, precision):
        assert numeric.nstr(Fraction(-5, 24)) == "-5/24"
        assert numeric.nstr(7) == "7"
        assert numeric.nstr(mp.mpf(1) / 4, 5) == "0.25000"


class TestExtrapolation:
    def test_richardson_cancels_inverse_powers(self, precision):
        values = [3 + mp.mpf(2) / n - mp.mpf(5) / n**2 for n in range(10, 13)]
        assert mp.almosteq(richardson(values, 10), 3, rel_eps=1e-60)

    def test_extrapolate_sequence(self, precision):
        seq = {n: 1 - mp.one / n + mp.mpf(3) / n**3 for n in range(1, 20)}
        estimate = extrapolate_sequence(seq)
        assert mp.almosteq(estimate.value, 1, rel_eps=1e-60)
        assert estimate.last_index == 19

    def test_extrapolate_needs_points(self, precision):
        with raises(ConvergenceError):
            extrapolate_sequence({n: mp.one for n in range(3)})

    def test_extrapolate_needs_consecutive_indices(self, precision):
        seq = {n: mp.one for n in range(0, 30, 2)}
        with raises(ConvergenceError):
            extrapolate_sequence(seq)

    def test_limit_coeffs(self, precision):
        xs = [mp.mpf(k) / 10 for k in range(1, 6)]
        ys = [2 - 3 * x**2 for x in xs]
        c0, c2 = limit_coeffs(xs, ys, [0, 2])
        assert mp.almosteq(c0, 2, rel_eps=1e-60)
        assert mp.almosteq(c2, -3, rel_eps=1e-60)

    def test_limit_coeffs_underdetermined(self, precision):
        with raises(ConvergenceError):
            limit_coeffs([1], [1], [0, 1])


class TestConfig:
    def test_default_precision(self, monkeypatch):
        monkeypatch.delenv(config.PRECISION_ENV, raising=False)
        assert config.default_precision() == 256
        monkeypatch.setenv(config.PRECISION_ENV, "512")
        assert config.default_precision() == 512

    @pytest.mark.parametrize("raw", ["lots", "32"])
    def test_bad_precision(self, monkeypatch, raw):
        monkeypatch.setenv(config.PRECISION_ENV, raw)
        with raises(ConfigError):
            config.default_precision()

    def test_ilt_method_names(self):
        assert ILTMethod.parse("deformed_contour") is ILTMethod.DEFORMED_CONTOUR
        assert ILTMethod.DEFORMED_CONTOUR.mpmath_name() == "talbot"
        assert ILTMethod.DEFORMED_CONTOUR.other() is ILTMethod.ACCELERATED_FOURIER
        assert str(ILTMethod.ACCELERATED_FOURIER) == "accelerated_fourier"
        with raises(ConfigError):
            ILTMethod.parse("stehfest")

    def test_ilt_config_validation(self):
        with raises(ConfigError):
            ILTConfig(node_count=4)
        with raises(ConfigError):
            ILTConfig(target_tol=0)
        assert ILTConfig().to_dict()["method"] == "deformed_contour"

    def test_extrapolation_config_validation(self):
        with raises(ConfigError):
            ExtrapolationConfig(order=3, min_points=4)

    def test_run_config_is_jsonable(self):
        run = config.RunConfig("law", {"grid": (Fraction(1, 2), 1)}, ilt=ILTConfig())
        doc = run.to_dict()
        assert doc["arguments"]["grid"] == ["1/2", 1]
        assert doc["output_format"] == "csv"
