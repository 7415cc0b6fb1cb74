"""Test the contour integrals of the local limit"""

from mpmath import mp
import pytest
from pytest import raises

from voronoicells import locallimit
from voronoicells.config import ContourSpec
from voronoicells.errors import ConfigError, DomainError


def assert_close(value, expected, rel=1e-20):
    assert mp.almosteq(value, expected, rel_eps=rel, abs_eps=rel)


class TestContourIntegrals:
    def test_a6(self, precision):
        integral = locallimit.contour_integral("a6", 0)
        assert_close(integral.value, locallimit.expected_integral("a6", 0))
        assert integral.error < 1e-25 * integral.value

    @pytest.mark.parametrize("mu", [0, 1, -1, "0.25"])
    def test_quartic_shift(self, mu):
        integral = locallimit.contour_integral("quartic_shift", mu)
        with mp.workprec(512):
            expected = locallimit.expected_integral("quartic_shift", mu)
        assert_close(integral.value, expected)

    @pytest.mark.parametrize("mu", [0, 2, -3])
    def test_vanishing_integrals(self, mu):
        for kind, value in locallimit.vanishing_integrals(mu).items():
            assert abs(value) < 1e-25, kind

    def test_mu_from_the_contour(self, precision):
        spec = ContourSpec(mu=1)
        integral = locallimit.contour_integral("quartic_shift", None, spec)
        with mp.workprec(512):
            expected = locallimit.expected_integral("quartic_shift", 1)
        assert_close(integral.value, expected)

    def test_tanh_sinh(self, precision):
        spec = ContourSpec(quadrature="tanh-sinh")
        integral = locallimit.contour_integral("a6", 0, spec)
        assert_close(integral.value, locallimit.expected_integral("a6", 0))

    def test_unknown_kind(self):
        with raises(DomainError):
            locallimit.contour_integral("a5", 0)
        with raises(DomainError):
            locallimit.expected_integral("a5", 0)


class TestVolumeFraction:
    """Test the large-s law of the volume fraction of the second cell"""

    @pytest.mark.parametrize("mu", [1, -2])
    def test_two_point_law(self, precision, mu):
        value = locallimit.phi_mgf(mu)
        with mp.workprec(512):
            expected = (1 + mp.exp(mu)) / 2
        assert_close(value, expected)

    def test_mgf_at_zero(self, precision):
        assert_close(locallimit.phi_mgf(0), 1)


class TestContourSpec:
    def test_bad_quadrature(self):
        with raises(ConfigError):
            ContourSpec(quadrature="simpson")

    def test_bad_ray_length(self):
        with raises(ConfigError):
            ContourSpec(ray_length=0)
