"""Test the truncated Laurent series in S"""

from mpmath import mp
from pytest import raises

from voronoicells.errors import SeriesError
from voronoicells.laurent import LaurentSeriesS


def S_series(min_order, coeffs, max_order=None, **kwargs) -> LaurentSeriesS:
    return LaurentSeriesS(min_order, [mp.mpf(c) for c in coeffs], max_order, **kwargs)


class TestArithmetic:
    def test_geometric_inverse(self, precision):
        inverse = S_series(0, [1, -1], 5).inverse()
        assert inverse.min_order == 0
        assert inverse.max_order == 5
        assert list(inverse.coeffs) == [1] * 6

    def test_inverse_keeps_relative_order(self, precision):
        inverse = LaurentSeriesS.variable(4).inverse()
        assert inverse.min_order == -1
        assert inverse.max_order == 2
        assert inverse[-1] == 1
        assert inverse[2] == 0

    def test_product_truncates_to_known_terms(self, precision):
        product = LaurentSeriesS.variable(3) * LaurentSeriesS.constant(2, 10)
        assert product.min_order == 1
        assert product.max_order == 3
        assert product[1] == 2

    def test_scalar_promotion(self, precision):
        series = 1 + LaurentSeriesS.variable(3)
        assert list(series.coeffs) == [1, 1, 0, 0]
        assert list((3 - series).coeffs) == [2, -1, 0, 0]

    def test_integer_power(self, precision):
        cube = S_series(0, [1, 1], 4) ** 3
        assert list(cube.coeffs) == [1, 3, 3, 1, 0]

    def test_exponentials_multiply(self, precision):
        product = LaurentSeriesS.exp_linear(3, 8) * LaurentSeriesS.exp_linear(-3, 8)
        assert product[0] == 1
        for n in range(1, 9):
            assert mp.almosteq(product[n], 0, abs_eps=mp.mpf(10) ** -60)

    def test_sqrt(self, precision):
        # S^2 (1 + S) has square root S (1 + S/2 - S^2/8 + ...)
        root = S_series(2, [1, 1], 6).sqrt()
        assert root.min_order == 1
        assert root[1] == 1
        assert root[2] == mp.mpf(1) / 2
        assert root[3] == mp.mpf(-1) / 8

    def test_sqrt_needs_even_order(self, precision):
        with raises(SeriesError):
            S_series(1, [1, 1], 4).sqrt()

    def test_sqrt_needs_positive_leading_term(self, precision):
        with raises(SeriesError):
            S_series(0, [-1, 1], 4).sqrt()

    def test_fractional_power_rejected(self, precision):
        with raises(SeriesError):
            S_series(0, [1, 1], 4) ** 0.5


class TestNoise:
    """Test that cancellation noise is recognized against the envelope"""

    def test_noise_below_envelope_is_dropped(self):
        noisy = S_series(0, ["1e-70", 2], 4, precision_bits=128, bounds=[1, 2])
        assert noisy.valuation() == 1
        assert noisy.inverse().min_order == -1

    def test_small_but_exact_term_is_kept(self):
        small = S_series(0, ["1e-70", 2], 4, precision_bits=128)
        assert small.valuation() == 0

    def test_inverse_of_vanishing_series(self, precision):
        with raises(SeriesError):
            S_series(0, [0, 0], 1).inverse()


class TestAccess:
    def test_below_min_order_is_zero(self, precision):
        assert LaurentSeriesS.variable(3)[-5] == 0

    def test_beyond_max_order(self, precision):
        with raises(SeriesError):
            LaurentSeriesS.variable(3)[4]

    def test_shift(self, precision):
        shifted = LaurentSeriesS.variable(3).shift(-4)
        assert shifted.min_order == -3
        assert shifted.max_order == -1

    def test_truncate(self, precision):
        series = LaurentSeriesS.exp_linear(1, 6).truncate(2)
        assert series.max_order == 2
        with raises(SeriesError):
            series.truncate(3)

    def test_immutable(self, precision):
        with raises(AttributeError):
            LaurentSeriesS.variable(3).min_order = 0
