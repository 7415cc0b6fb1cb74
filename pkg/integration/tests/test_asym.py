"""Test the trapping probability of asymmetric cells"""

from fractions import Fraction

from mpmath import mp
import pytest
from pytest import raises

from voronoicells import asym
from voronoicells.errors import DomainError


class TestTrappingProbability:
    def test_coefficients(self):
        assert asym.pi_coefficients() == tuple(
            Fraction(c, 64) for c in (32, 63, 0, -49, 0, 21, 0, -3)
        )

    @pytest.mark.parametrize(
        "w,expected",
        [(0, Fraction(1, 2)), (1, 1), (-1, 0), (Fraction(1, 2), Fraction(7425, 8192))],
    )
    def test_exact_values(self, w, expected):
        value = asym.Pi(w)
        assert isinstance(value, Fraction)
        assert value == expected

    def test_complement(self):
        assert asym.complement_defects() == []
        w = Fraction(3, 7)
        assert asym.Pi(w) + asym.Pi(-w) == 1

    def test_real_argument(self, precision):
        w = mp.mpf("0.3")
        assert mp.almosteq(asym.Pi(w) + asym.Pi(-w), 1, rel_eps=1e-70)
        assert mp.almosteq(asym.Pi(mp.mpf(1) / 2), mp.mpf(7425) / 8192, rel_eps=1e-70)

    @pytest.mark.parametrize("w", [2, Fraction(-9, 8), "1.0001"])
    def test_outside_range(self, w):
        if isinstance(w, str):
            w = mp.mpf(w)
        with raises(DomainError):
            asym.Pi(w)

    def test_monotone(self):
        values = [asym.Pi(w) for w in asym.omega_grid(101)]
        assert asym.is_monotone(values)
        assert not asym.is_monotone(list(reversed(values)))

    def test_omega_grid(self):
        assert asym.omega_grid(5) == [-1, Fraction(-1, 2), 0, Fraction(1, 2), 1]
        with raises(DomainError):
            asym.omega_grid(1)

    def test_pi_table(self):
        assert asym.pi_table([0, 1]) == [(0, Fraction(1, 2)), (1, 1)]


class TestExpansionConsistency:
    """Test the link between Pi and the asymmetric small-S expansion"""

    @pytest.mark.parametrize("w", [Fraction(1, 3), 0, Fraction(-4, 5)])
    def test_exact_omega(self, precision, w):
        report = asym.check_expansion_consistency(mp.sqrt(6), w)
        assert report.passed, report.failures
        assert mp.almosteq(report.pi_from_s3, report.pi_value, rel_eps=1e-70)

    def test_symmetric_limit(self, precision):
        report = asym.check_expansion_consistency(2, 0)
        assert mp.almosteq(report.s1_coeff, mp.mpf(-16) / 60, rel_eps=1e-70)
        assert mp.almosteq(report.s3_coeff, mp.mpf(64) / 189, rel_eps=1e-70)

    def test_real_omega(self, precision):
        report = asym.check_expansion_consistency(mp.sqrt(6), mp.mpf("0.25"))
        assert report.passed
        assert mp.almosteq(report.pi_from_s3, report.pi_value, rel_eps=1e-60)

    def test_endpoints_rejected(self):
        with raises(DomainError):
            asym.check_expansion_consistency(1, 1)

    def test_nonpositive_a(self):
        with raises(DomainError):
            asym.check_expansion_consistency(0, Fraction(1, 2))
