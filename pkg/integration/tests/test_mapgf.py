"""Test the exact generating functions of bi-pointed quadrangulations"""

from fractions import Fraction

import pytest
from pytest import approx, raises

from voronoicells import mapgf
from voronoicells.config import ExtrapolationConfig
from voronoicells.errors import ConvergenceError, DomainError
from voronoicells.series import RationalSeries


class TestCriticalParametrization:
    """Test g(x), its reversion and the critical expansion x(eps)"""

    def test_reversion(self):
        x = mapgf.x_of_g(8)
        assert mapgf.g_of_x(8).compose(x) == RationalSeries.variable("g", 8)

    def test_first_terms(self):
        # g = x - 7 x^2 + O(x^3)
        assert mapgf.x_of_g(4).coeffs[:3] == (0, 1, 7)

    def test_x_of_eps(self):
        expected = [
            1,
            -1,
            Fraction(1, 2),
            Fraction(-5, 24),
            Fraction(1, 12),
            Fraction(-13, 384),
            Fraction(1, 72),
            Fraction(-157, 27648),
            Fraction(1, 432),
        ]
        assert list(mapgf.x_of_eps(1, 8).coeffs) == expected

    def test_x_of_eps_scales_with_a(self):
        a = Fraction(3, 2)
        assert mapgf.x_of_eps(a, 6)[3] == Fraction(-5, 24) * a**3

    def test_G_of(self):
        assert mapgf.G_of(2, 4).coeffs == (Fraction(1, 12), 0, 0, 0, Fraction(-16, 432))


class TestTreesAndChains:
    """Test R_s and X_{s,t}"""

    def test_R_constant_term(self):
        for s in range(1, 5):
            assert mapgf.R_series(s, 6)[0] == 1
        assert mapgf.R_series(0, 6).coeffs == (0,) * 7

    def test_R_critical(self):
        assert mapgf.R_critical(1) == Fraction(4, 3)
        assert mapgf.R_critical(2) == Fraction(5, 3)

    def test_X_critical(self):
        assert mapgf.X_critical(1, 1) == Fraction(5, 4)
        assert mapgf.X_critical(0, 3) == 1

    @pytest.mark.parametrize("s,t", [(1, 1), (1, 2), (2, 3), (3, 3)])
    def test_diagonal_identity(self, s, t):
        assert mapgf.X_rec(s, t, 12).diagonal() == mapgf.X_diag(s, t, 6)

    def test_X_rec_symmetry(self):
        assert mapgf.X_rec(1, 3, 10).transpose() == mapgf.X_rec(3, 1, 10)

    def test_negative_label(self):
        with raises(DomainError):
            mapgf.X_diag(-1, 2, 4)

    @pytest.mark.slow
    def test_diagonal_identity_full(self):
        for s in range(1, 9):
            for t in range(s, 9):
                assert mapgf.X_rec(s, t, 40).diagonal() == mapgf.X_diag(s, t, 20)


class TestCellGeneratingFunction:
    """Test F(s, g, h) and its diagonal"""

    def test_diagonal_of_F(self):
        assert mapgf.F_series(2, 10).diagonal() == mapgf.F_diag(2, 5)

    def test_F_has_no_constant_term(self):
        assert mapgf.F_diag(1, 4)[0] == 0

    @pytest.mark.parametrize("s", [1, 2, 3])
    @pytest.mark.parametrize("a", [Fraction(1), Fraction(1, 2), Fraction(7, 3)])
    def test_critical_expansion(self, s, a):
        constant, f = mapgf.F_diag_eps(s, a, 6)
        assert constant == Fraction(s * s * (2 * s + 3), (s + 1) ** 2 * (2 * s - 1))
        assert f[4] == -(2 * s + 1) * a**4 / 60
        assert f[6] == (2 * s + 1) * (10 * s * s + 10 * s + 1) * a**6 / 1890

    def test_profile_constant(self):
        assert mapgf.profile_constant(1).f3 == Fraction(36, 5)

    def test_coeff_table(self):
        doc = mapgf.coeff_table_json(1, 6)
        s, series = mapgf.load_coeff_table(doc)
        assert s == 1
        assert series == mapgf.F_series(1, 6)

    def test_malformed_coeff_table(self):
        with raises(DomainError):
            mapgf.load_coeff_table({"s": 1, "entries": []})


class TestProfile:
    """Test the large-N distance profile"""

    @pytest.mark.parametrize("s", [1, 2])
    def test_profile_ratio_converges(self, s):
        profile = mapgf.profile_ratio(s, 100)
        assert float(profile.estimate.value) == approx(
            float(mapgf.profile_constant(s).f3), rel=0.02
        )

    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_profile_ratio_full(self, s):
        profile = mapgf.profile_ratio(s, 200)
        assert float(profile.estimate.value) == approx(
            float(mapgf.profile_constant(s).f3), rel=0.02
        )

    def test_low_order_stalls(self):
        # third order Richardson is not enough for s = 3
        low = mapgf.profile_ratio(3, 200, ExtrapolationConfig(order=3))
        high = mapgf.profile_ratio(3, 200)
        f3 = float(mapgf.profile_constant(3).f3)
        assert abs(float(high.estimate.value) - f3) < abs(float(low.estimate.value) - f3)


class TestCellProbability:
    """Test the local limit law of the second cell's volume"""

    def test_estimate_is_a_probability(self):
        estimate = mapgf.estimate_cell_probability(1, 1, 24)
        assert 0 < float(estimate.value) < 1
        assert estimate.last_index == 12

    def test_too_few_volumes(self):
        with raises(ConvergenceError):
            mapgf.estimate_cell_probability(1, 1, 8)

    def test_total_coeff(self):
        series = mapgf.F_series(1, 6)
        assert mapgf.total_coeff(series, 1) == sum(
            series.coeff(i, 2 - i) for i in range(3)
        )
