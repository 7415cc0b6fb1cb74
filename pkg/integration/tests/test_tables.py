"""Test the transcribed closed-form tables"""

import json
from fractions import Fraction

from mpmath import mp
import sympy
from pytest import raises

from voronoicells import tables
from voronoicells.errors import DomainError


class TestScalingTables:
    """Test the t, u, E and D tables"""

    def test_exchange_symmetry(self):
        assert tables.symmetry_defects(tables.scaling_tables()) == []

    def test_grid_sizes(self):
        st = tables.scaling_tables()
        assert len(st.t0) == len(st.t1) == 5
        assert len(st.u0) == len(st.u1) == 3
        assert len(st.D) == 6

    def test_E_vanishes_on_the_diagonal(self):
        st = tables.scaling_tables()
        assert st.E.subs(tables.b, tables.a) == 0

    def test_reduce_c(self):
        expr = tables.c**3 + tables.a
        e0, e1 = tables.reduce_c(expr)
        assert e0 == tables.a
        assert sympy.expand(e1 - (tables.a**2 + tables.b**2) / 2) == 0

    def test_dump_and_load(self):
        doc = json.loads(json.dumps(tables.dump_tables()))
        assert tables.tables_equal(tables.load_tables(doc), tables.scaling_tables())

    def test_load_malformed(self):
        with raises(DomainError):
            tables.load_tables({"t": []})


class TestLawPolynomials:
    """Test the polynomials of the cell volume Laplace transform"""

    def test_Q(self, precision):
        nt = tables.numeric_tables()
        assert mp.almosteq(nt.law_Q(mp.one), 2 + mp.sqrt(3), rel_eps=1e-30)

    def test_three_exponential_terms(self):
        assert len(tables.law_polynomials().P_m) == 3


class TestTrappingPolynomial:
    """Test the exact trapping probability polynomial"""

    def test_exact_values(self):
        assert tables.exact_pi(Fraction(0)) == Fraction(1, 2)
        assert tables.exact_pi(Fraction(1)) == 1
        assert tables.exact_pi(Fraction(-1)) == 0
        assert tables.exact_pi(Fraction(1, 2)) == Fraction(7425, 8192)

    def test_matches_asymmetric_expansion(self):
        _, s3 = tables.asym_small_S_coefficients()
        weight = sympy.Rational(7, 16) * 216
        assert sympy.expand(weight * s3 - tables.pi_polynomial()) == 0
