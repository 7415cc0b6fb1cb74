"""Test the exact series arithmetic"""

from fractions import Fraction

from pytest import raises

from voronoicells.errors import SeriesError
from voronoicells.series import HalfGridSeries, RationalSeries


def x_series(coeffs, order=None) -> RationalSeries:
    return RationalSeries("x", coeffs, order)


class TestRationalSeries:
    """Test univariate exact series"""

    def test_geometric_inverse(self):
        inverse = 1 / x_series([1, -1], 6)
        assert inverse.coeffs == (1,) * 7

    def test_product_truncates_to_smaller_order(self):
        product = x_series([1, 1], 3) * x_series([1, 1], 5)
        assert product.order == 3
        assert product.coeffs == (1, 2, 1, 0)

    def test_integer_power(self):
        assert (x_series([1, 1], 4) ** 3).coeffs == (1, 3, 3, 1, 0)
        assert x_series([1, 1], 4) ** -1 == 1 / x_series([1, 1], 4)

    def test_log(self):
        log = x_series([1, 1], 4).log()
        assert log.coeffs == (0, 1, Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 4))

    def test_exp_inverts_log(self):
        f = x_series([1, 3, Fraction(1, 2), -7], 8)
        assert f.log().exp() == f

    def test_exp_needs_zero_constant(self):
        with raises(SeriesError):
            x_series([1, 1], 3).exp()

    def test_sqrt(self):
        root = x_series([1, -4], 5).sqrt()
        assert root.coeffs == (1, -2, -2, -4, -10, -28)
        assert root * root == x_series([1, -4], 5)

    def test_sqrt_of_non_square(self):
        with raises(SeriesError):
            x_series([2, 1], 3).sqrt()

    def test_revert_catalan(self):
        # the inverse of x - x^2 generates the Catalan numbers
        inverse = x_series([0, 1, -1], 7).revert()
        assert inverse.coeffs == (0, 1, 1, 2, 5, 14, 42, 132)

    def test_compose_with_reversion(self):
        f = x_series([0, 2, 1, Fraction(-1, 3)], 6)
        assert f.compose(f.revert("y")) == RationalSeries.variable("y", 6)

    def test_compose_needs_vanishing_inner(self):
        with raises(SeriesError):
            x_series([1, 1], 3).compose(x_series([1, 1], 3))

    def test_shift_down_needs_divisibility(self):
        assert x_series([0, 0, 1], 4).shift(-2).coeffs == (1, 0, 0)
        with raises(SeriesError):
            x_series([1, 1], 4).shift(-1)

    def test_floats_rejected(self):
        with raises(SeriesError):
            x_series([0.5])

    def test_variable_mismatch(self):
        with raises(SeriesError):
            x_series([1, 1]) + RationalSeries("y", [1, 1])

    def test_beyond_order(self):
        with raises(SeriesError):
            x_series([1, 1], 2)[3]


class TestHalfGridSeries:
    """Test bivariate series on the half-integer grid"""

    def test_inverse(self):
        inverse = (1 - HalfGridSeries.sqrt_gh(8)).inverse()
        assert list(inverse.items()) == [((k, k), 1) for k in range(5)]

    def test_log(self):
        log = (1 + HalfGridSeries.sqrt_gh(8)).log()
        assert list(log.items()) == [
            ((k, k), Fraction((-1) ** (k + 1), k)) for k in range(1, 5)
        ]

    def test_diagonal(self):
        series = HalfGridSeries({(0, 0): 1, (1, 1): 1, (2, 0): 3, (0, 2): 4}, 4)
        assert series.diagonal() == RationalSeries("g", [1, 8, 0], 2)

    def test_transpose(self):
        series = HalfGridSeries({(2, 0): 3, (1, 1): 5}, 4)
        assert series.transpose() == HalfGridSeries({(0, 2): 3, (1, 1): 5}, 4)

    def test_product_keeps_terms_fixed_by_valuation(self):
        # sqrt(gh) has doubled valuation 2, so its square is exact to order2 6
        product = HalfGridSeries.sqrt_gh(4) * HalfGridSeries.constant(1, 4)
        assert product.order2 == 4
        square = HalfGridSeries.sqrt_gh(4) * HalfGridSeries.sqrt_gh(4)
        assert square.order2 == 6
        assert list(square.items()) == [((2, 2), 1)]

    def test_half_integer_volume_rejected(self):
        with raises(SeriesError):
            HalfGridSeries({(1, 0): 1}, 4)

    def test_coefficient_beyond_order(self):
        with raises(SeriesError):
            HalfGridSeries.constant(1, 4).coeff(4, 2)

    def test_log_needs_unit_constant(self):
        with raises(SeriesError):
            HalfGridSeries.constant(2, 4).log()
