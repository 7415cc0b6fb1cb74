"""Test the law of the finite cell volume"""

from fractions import Fraction

from mpmath import mp
import pytest
from pytest import raises

from voronoicells import celllaw, scaling
from voronoicells.config import ILTConfig, ILTMethod
from voronoicells.errors import ConvergenceError, DomainError


def assert_close(value, expected, rel):
    assert mp.almosteq(value, expected, rel_eps=rel), (
        f"{mp.nstr(value, 25)} != {mp.nstr(expected, 25)}"
    )


class TestTransform:
    """Test E(sigma) = E[e^{-sigma V}]"""

    def test_normalized(self):
        assert celllaw.E_sigma(0) == 1
        assert celllaw.E_laplace(0) == 1

    def test_decreasing(self, precision):
        values = [celllaw.E_sigma(mp.mpf(s)) for s in ("1e-4", "0.1", "1", "10", "1e3")]
        assert all(1 > x > y > 0 for x, y in zip(values, values[1:]))

    def test_negative_sigma(self):
        with raises(DomainError):
            celllaw.E_sigma(-1)

    def test_small_sigma(self, precision):
        sigma = mp.mpf(10) ** -12
        assert mp.almosteq(
            celllaw.E_sigma(sigma), celllaw.E_sigma_small(sigma), abs_eps=1e-13
        )

    def test_large_sigma(self, precision):
        # the ratio to the leading form is 1 + O(sigma^(-1/4))
        sigma = mp.mpf(10) ** 12
        ratio = celllaw.E_sigma(sigma) / celllaw.E_sigma_large(sigma)
        assert abs(ratio - 1) < 0.005

    def test_large_sigma_constant(self, precision):
        expected = mp.mpf(18) * (140 + 99 * mp.sqrt(2)) / (4 + 3 * mp.sqrt(2)) ** 4
        assert_close(celllaw.large_sigma_constant(), expected, 1e-60)

    def test_continuation_agrees_on_the_real_axis(self, precision):
        assert_close(celllaw.E_laplace(mp.mpf(2)).real, celllaw.E_sigma(2), 1e-60)

    def test_continuation_is_conjugate_symmetric(self, precision):
        p = mp.mpc(1, 3)
        assert mp.almosteq(
            celllaw.E_laplace(p), mp.conj(celllaw.E_laplace(mp.conj(p))), rel_eps=1e-60
        )

    @pytest.mark.slow
    @pytest.mark.parametrize("sigma", [Fraction(1, 4), Fraction(1), Fraction(4)])
    def test_matches_scaling_function(self, sigma):
        with mp.workprec(512):
            tau = mp.sqrt(6) * mp.root(mp.mpf(sigma.numerator) / sigma.denominator, 4)
        coeff = scaling.extract_phi_coeff(3, tau, cross_check=False)
        with mp.workprec(256):
            assert_close(mp.mpf(7) / 8 * coeff, celllaw.E_sigma(sigma), 1e-20)


class TestInversion:
    """Test the two-method numerical inversion"""

    def test_exponential(self):
        inverted = celllaw.ilt(lambda p: 1 / (p + 1), 2)
        with mp.workprec(192):
            assert_close(inverted.value, mp.exp(-2), 1e-10)
        assert inverted.method is ILTMethod.DEFORMED_CONTOUR

    def test_selected_method_is_returned(self):
        cfg = ILTConfig(method=ILTMethod.ACCELERATED_FOURIER)
        assert celllaw.ilt(lambda p: 1 / p, 3, cfg).method is ILTMethod.ACCELERATED_FOURIER

    def test_levy_oracle(self):
        inverted = celllaw.ilt(celllaw.tree_laplace, mp.mpf("0.5"))
        with mp.workprec(192):
            assert_close(inverted.value, celllaw.tree_P(mp.mpf("0.5")), 1e-8)

    def test_one_sided_levy_half(self):
        inverted = celllaw.levy_density(mp.mpf(1) / 2, 1)
        with mp.workprec(192):
            exact = mp.exp(-mp.mpf(1) / 4) / (2 * mp.sqrt(mp.pi))
            assert_close(inverted.value, exact, 1e-8)

    def test_nonpositive_V(self):
        with raises(DomainError):
            celllaw.ilt(lambda p: 1 / p, 0)

    def test_failing_transform(self):
        with raises(ConvergenceError):
            celllaw.ilt(lambda p: 1 / mp.zero, 1)

    def test_density(self):
        inverted = celllaw.P_V(1)
        assert inverted.value > 0
        assert inverted.error <= 1e-6 * inverted.value

    @pytest.mark.slow
    def test_tail(self):
        V = mp.mpf(10) ** 4
        ratio = celllaw.P_V(V).value / celllaw.asympt_tail(V)
        assert abs(ratio - 1) < 0.1

    @pytest.mark.slow
    def test_flat_at_small_volume(self):
        V = mp.mpf("0.05")
        ratio = celllaw.P_V(V).value / celllaw.asympt_flat(V)
        assert abs(ratio - 1) < 0.2

    @pytest.mark.slow
    def test_heavy_tail(self):
        assert celllaw.cdf(mp.mpf(10) ** 4).value > 0.85


class TestAsymptotics:
    def test_tail_constant(self, precision):
        assert abs(celllaw.tail_constant() - mp.mpf("0.2295")) < 1e-4

    def test_saddle_point(self, precision):
        V = mp.mpf("0.3")
        saddle = celllaw.saddle_point(V)
        assert_close(saddle.sigma_star, mp.cbrt(9) / (4 * V ** (mp.mpf(4) / 3)), 1e-60)
        assert_close(saddle.exponent, -mp.cbrt(243) / (4 * mp.cbrt(V)), 1e-60)
        assert_close(saddle.curvature, mp.cbrt(3) * V ** (mp.mpf(7) / 3), 1e-60)

    def test_saddle_reproduces_flat_form(self, precision):
        V = mp.mpf("0.3")
        density = celllaw.saddle_point(V).density(celllaw.large_sigma_constant())
        assert_close(density, celllaw.asympt_flat(V), 1e-60)

    def test_levy_exponents(self, precision):
        law = celllaw.levy_asympt(mp.mpf(1) / 4, 2)
        assert_close(law.small_V_exponent, mp.mpf(7) / 6, 1e-70)
        assert_close(law.flat_exponent, mp.mpf(1) / 3, 1e-70)
        assert_close(law.tail_exponent, mp.mpf(5) / 4, 1e-70)

    def test_saddle_is_exact_at_one_half(self, precision):
        V = mp.mpf("0.7")
        law = celllaw.levy_asympt(mp.mpf(1) / 2, V)
        exact = V ** (-mp.mpf(3) / 2) * mp.exp(-1 / (4 * V)) / (2 * mp.sqrt(mp.pi))
        assert_close(law.small_V_form, exact, 1e-60)

    @pytest.mark.parametrize("alpha", [0, 1, "1.5"])
    def test_alpha_domain(self, alpha):
        with raises(DomainError):
            celllaw.levy_asympt(alpha, 1)
        with raises(DomainError):
            celllaw.stretched_saddle(alpha, 1, 1)


class TestTrees:
    """Test the tree cells and their Levy law"""

    def test_catalan(self):
        assert celllaw.R_tree_series(6).coeffs == (1, 1, 2, 5, 14, 42, 132)

    def test_R_tree(self, precision):
        assert celllaw.R_tree(0) == 1
        assert celllaw.R_tree(mp.mpf(1) / 4) == 2
        with raises(DomainError):
            celllaw.R_tree(mp.mpf("0.3"))

    def test_critical_point(self, precision):
        assert celllaw.G_tree(2, 0) == mp.mpf(1) / 4
        quarter = mp.mpf(1) / 4
        assert celllaw.F_tree(3, quarter, quarter) == 1

    def test_tree_scaling(self, precision):
        assert_close(celllaw.tree_scaling(1, 1, 2), mp.exp(-3), 1e-70)

    @pytest.mark.parametrize("sigma", ["0.25", "1", "4"])
    def test_transform_from_scaling(self, precision, sigma):
        sigma = mp.mpf(sigma)
        assert_close(celllaw.tree_E_from_scaling(sigma), celllaw.tree_E(sigma), 1e-60)

    def test_tree_density(self, precision):
        assert_close(celllaw.tree_P(1), mp.exp(-1) / mp.sqrt(mp.pi), 1e-70)
        with raises(DomainError):
            celllaw.tree_P(0)
