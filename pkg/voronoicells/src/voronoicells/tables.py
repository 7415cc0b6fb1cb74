"""Closed-form coefficient tables, transcribed exactly

Everything here is a sympy expression kept in the factored form it is
published in, so that it can be audited line by line.  The tables are

- t^(0)_{i,j}, t^(1)_{i,j} (0 <= i, j <= 4) and u^(0)_{i,j}, u^(1)_{i,j}
  (0 <= i, j <= 2), homogeneous polynomials in (a, b) entering the scaling
  function as t_{i,j} = t^(0)_{i,j} + c t^(1)_{i,j} with
  c = sqrt((a^2 + b^2) / 2);
- the prefactor polynomials E(a, b) and D(a, b, c), the latter as a list of
  factors each linear in c;
- the polynomials p_m, q_m of the scaling function at b = 0, with
  coefficients in Q(sqrt 2);
- the polynomials P, Q and P_m of the Laplace transform of the cell volume,
  with coefficients in Q(sqrt 3) and affine in gamma;
- the trapping probability polynomial of the asymmetric cells.

Numeric evaluators are produced with sympy.lambdify against mpmath, so the
surds are evaluated at whatever precision is current when they are called.

"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import logging
from typing import Any, Callable, Dict, List, Tuple

import sympy
from sympy import Rational, sqrt

from voronoicells.errors import DomainError

logger = logging.getLogger(__name__)

a, b, c = sympy.symbols("a b c", positive=True)
r, gamma, omega = sympy.symbols("r gamma omega")

SQRT2 = sqrt(2)
SQRT3 = sqrt(3)

# fmt: off
_T0 = {
    (0, 0): (a + b)**3 * (396*a**10 + 1448*a**9*b + 3672*a**8*b**2 + 6520*a**7*b**3 + 9135*a**6*b**4
                          + 10146*a**5*b**5 + 9135*a**4*b**6 + 6520*a**3*b**7 + 3672*a**2*b**8
                          + 1448*a*b**9 + 396*b**10),
    (0, 1): -4*(a**2 - b**2)**2 * (198*a**9 + 502*a**8*b + 1099*a**7*b**2 + 1551*a**6*b**3
                                   + 1806*a**5*b**4 + 1596*a**4*b**5 + 1128*a**3*b**6 + 596*a**2*b**7
                                   + 224*a*b**8 + 48*b**9),
    (0, 2): -6*b*(a**2 - b**2)*(2*a**2 + b**2) * (198*a**8 + 280*a**7*b + 611*a**6*b**2 + 584*a**5*b**3
                                                  + 599*a**4*b**4 + 368*a**3*b**5 + 200*a**2*b**6
                                                  + 64*a*b**7 + 12*b**8),
    (0, 3): 4*a*(a**2 - b**2)**2*(2*a**2 + b**2) * (99*a**6 + 29*a**5*b + 186*a**4*b**2 + 40*a**3*b**3
                                                    + 104*a**2*b**4 + 12*a*b**5 + 16*b**6),
    (0, 4): -(a - b)**3*(2*a**2 + b**2)**2 * (99*a**6 - 82*a**5*b + 191*a**4*b**2 - 120*a**3*b**3
                                               + 104*a**2*b**4 - 40*a*b**5 + 12*b**6),

    (1, 0): -4*(a**2 - b**2)**2 * (48*a**9 + 224*a**8*b + 596*a**7*b**2 + 1128*a**6*b**3
                                   + 1596*a**5*b**4 + 1806*a**4*b**5 + 1551*a**3*b**6 + 1099*a**2*b**7
                                   + 502*a*b**8 + 198*b**9),
    (1, 1): 8*(a + b)**3*(a**4 + 7*a**2*b**2 + b**4) * (48*a**6 + 74*a**5*b + 168*a**4*b**2
                                                       + 149*a**3*b**3 + 168*a**2*b**4 + 74*a*b**5
                                                       + 48*b**6),
    (1, 2): -24*b*(a**2 - b**2)**2*(2*a**2 + b**2) * (24*a**6 + 34*a**5*b + 62*a**4*b**2 + 54*a**3*b**3
                                                      + 43*a**2*b**4 + 20*a*b**5 + 6*b**6),
    (1, 3): -8*a*(a - b)**2*(2*a**2 + b**2)*(a**4 + 7*a**2*b**2 + b**4) * (24*a**4 + 7*a**3*b
                                                                          + 33*a**2*b**2 + 6*a*b**3
                                                                          + 10*b**4),
    (1, 4): 4*(a**2 - b**2)**2*(2*a**2 + b**2)**2 * (12*a**5 - 22*a**4*b + 27*a**3*b**2 - 27*a**2*b**3
                                                     + 14*a*b**4 - 6*b**5),

    (2, 0): 6*a*(a**2 - b**2)*(a**2 + 2*b**2) * (12*a**8 + 64*a**7*b + 200*a**6*b**2 + 368*a**5*b**3
                                                 + 599*a**4*b**4 + 584*a**3*b**5 + 611*a**2*b**6
                                                 + 280*a*b**7 + 198*b**8),
    (2, 1): -24*a*(a**2 - b**2)**2*(a**2 + 2*b**2) * (6*a**6 + 20*a**5*b + 43*a**4*b**2 + 54*a**3*b**3
                                                      + 62*a**2*b**4 + 34*a*b**5 + 24*b**6),
    (2, 2): sympy.Integer(0),
    (2, 3): 24*a**2*(a**2 - b**2)**2*(2*a**2 + b**2)*(a**2 + 2*b**2) * (3*a**3 - 2*a**2*b + 2*a*b**2
                                                                        - 2*b**3),
    (2, 4): -6*a*(a**2 - b**2)*(2*a**2 + b**2)**2*(a**2 + 2*b**2) * (3*a**4 - 8*a**3*b + 11*a**2*b**2
                                                                     - 8*a*b**3 + 6*b**4),

    (3, 0): 4*b*(a**2 - b**2)**2*(a**2 + 2*b**2) * (16*a**6 + 12*a**5*b + 104*a**4*b**2 + 40*a**3*b**3
                                                    + 186*a**2*b**4 + 29*a*b**5 + 99*b**6),
    (3, 1): -8*b*(a - b)**2*(a**2 + 2*b**2)*(a**4 + 7*a**2*b**2 + b**4) * (10*a**4 + 6*a**3*b
                                                                          + 33*a**2*b**2 + 7*a*b**3
                                                                          + 24*b**4),
    (3, 2): -24*b**2*(a**2 - b**2)**2*(2*a**2 + b**2)*(a**2 + 2*b**2) * (2*a**3 - 2*a**2*b + 2*a*b**2
                                                                         - 3*b**3),
    (3, 3): -8*a*b*(a + b)**3*(2*a**2 + b**2)*(a**2 + 2*b**2)*(a**4 + 7*a**2*b**2 + b**4),
    (3, 4): 4*b*(a**2 - b**2)**2*(2*a**2 + b**2)**2*(a**2 + 2*b**2)*(2*a**2 - a*b + 3*b**2),

    (4, 0): (a - b)**3*(a**2 + 2*b**2)**2 * (12*a**6 - 40*a**5*b + 104*a**4*b**2 - 120*a**3*b**3
                                              + 191*a**2*b**4 - 82*a*b**5 + 99*b**6),
    (4, 1): -4*(a**2 - b**2)**2*(a**2 + 2*b**2)**2 * (6*a**5 - 14*a**4*b + 27*a**3*b**2 - 27*a**2*b**3
                                                      + 22*a*b**4 - 12*b**5),
    (4, 2): 6*b*(a**2 - b**2)*(2*a**2 + b**2)*(a**2 + 2*b**2)**2 * (6*a**4 - 8*a**3*b + 11*a**2*b**2
                                                                    - 8*a*b**3 + 3*b**4),
    (4, 3): 4*a*(a**2 - b**2)**2*(2*a**2 + b**2)*(a**2 + 2*b**2)**2*(3*a**2 - a*b + 2*b**2),
    (4, 4): -(a + b)**3*(2*a**2 + b**2)**2*(a**2 + 2*b**2)**2*(3*a**2 + 2*a*b + 3*b**2),
}

_T1 = {
    (0, 0): 4*(a + b)**4 * (10*a**4 + 18*a**3*b + 25*a**2*b**2 + 18*a*b**3 + 10*b**4)
            * (14*a**4 + 12*a**3*b + 29*a**2*b**2 + 12*a*b**3 + 14*b**4),
    (0, 1): -4*(a**2 - b**2)**2 * (280*a**8 + 710*a**7*b + 1414*a**6*b**2 + 1839*a**5*b**3
                                   + 1881*a**4*b**4 + 1428*a**3*b**5 + 812*a**2*b**6 + 316*a*b**7
                                   + 68*b**8),
    (0, 2): -24*b*(a**2 - b**2)*(2*a**2 + b**2) * (10*a**3 + 7*a**2*b + 8*a*b**2 + 2*b**3)
            * (7*a**4 + 5*a**3*b + 9*a**2*b**2 + 4*a*b**3 + 2*b**4),
    (0, 3): 4*(a**2 - b**2)**2*(2*a**2 + b**2) * (140*a**6 + 41*a**5*b + 193*a**4*b**2 + 36*a**3*b**3
                                                  + 68*a**2*b**4 + 4*a*b**5 + 4*b**6),
    (0, 4): -4*(a - b)**3*(2*a**2 + b**2)**2*(5*a**2 - 2*a*b + 2*b**2) * (7*a**3 - 3*a**2*b
                                                                         + 6*a*b**2 - 2*b**3),

    (1, 0): -4*(a**2 - b**2)**2 * (68*a**8 + 316*a**7*b + 812*a**6*b**2 + 1428*a**5*b**3
                                   + 1881*a**4*b**4 + 1839*a**3*b**5 + 1414*a**2*b**6 + 710*a*b**7
                                   + 280*b**8),
    (1, 1): 16*(a + b)**2*(a**4 + 7*a**2*b**2 + b**4) * (34*a**6 + 86*a**5*b + 155*a**4*b**2
                                                        + 179*a**3*b**3 + 155*a**2*b**4 + 86*a*b**5
                                                        + 34*b**6),
    (1, 2): -24*b*(a**2 - b**2)**2*(2*a**2 + b**2) * (34*a**5 + 48*a**4*b + 71*a**3*b**2
                                                      + 52*a**2*b**3 + 30*a*b**4 + 8*b**5),
    (1, 3): -16*(a - b)**2*(2*a**2 + b**2)*(a**4 + 7*a**2*b**2 + b**4) * (17*a**4 + 5*a**3*b
                                                                         + 15*a**2*b**2 + 2*a*b**3
                                                                         + 2*b**4),
    (1, 4): 4*(a**2 - b**2)**2*(2*a**2 + b**2)**2 * (17*a**4 - 31*a**3*b + 30*a**2*b**2 - 22*a*b**3
                                                     + 8*b**4),

    (2, 0): 24*a*(a**2 - b**2)*(a**2 + 2*b**2) * (2*a**3 + 8*a**2*b + 7*a*b**2 + 10*b**3)
            * (2*a**4 + 4*a**3*b + 9*a**2*b**2 + 5*a*b**3 + 7*b**4),
    (2, 1): -24*a*(a**2 - b**2)**2*(a**2 + 2*b**2) * (8*a**5 + 30*a**4*b + 52*a**3*b**2
                                                      + 71*a**2*b**3 + 48*a*b**4 + 34*b**5),
    (2, 2): sympy.Integer(0),
    (2, 3): 24*a*(a**2 - b**2)**2*(2*a**2 + b**2)*(a**2 + 2*b**2) * (4*a**3 - 3*a**2*b - 2*b**3),
    (2, 4): -24*a*(a - 2*b)*(a**2 - b**2)*(2*a**2 + b**2)**2*(a**2 + 2*b**2)*(a**2 - a*b + b**2),

    (3, 0): 4*(a**2 - b**2)**2*(a**2 + 2*b**2) * (4*a**6 + 4*a**5*b + 68*a**4*b**2 + 36*a**3*b**3
                                                  + 193*a**2*b**4 + 41*a*b**5 + 140*b**6),
    (3, 1): -16*(a - b)**2*(a**2 + 2*b**2)*(a**4 + 7*a**2*b**2 + b**4) * (2*a**4 + 2*a**3*b
                                                                         + 15*a**2*b**2 + 5*a*b**3
                                                                         + 17*b**4),
    (3, 2): -24*b*(a**2 - b**2)**2*(2*a**2 + b**2)*(a**2 + 2*b**2) * (2*a**3 + 3*a*b**2 - 4*b**3),
    (3, 3): 16*(a + b)**2*(2*a**2 + b**2)*(a**2 + 2*b**2)*(a**2 - a*b + b**2)
            * (a**4 + 7*a**2*b**2 + b**4),
    (3, 4): -4*(a**2 - b**2)**2*(2*a**2 + b**2)**2*(a**2 + 2*b**2)*(a**2 - a*b + 4*b**2),

    (4, 0): -4*(a - b)**3*(a**2 + 2*b**2)**2*(2*a**2 - 2*a*b + 5*b**2) * (2*a**3 - 6*a**2*b
                                                                         + 3*a*b**2 - 7*b**3),
    (4, 1): 4*(a**2 - b**2)**2*(a**2 + 2*b**2)**2 * (8*a**4 - 22*a**3*b + 30*a**2*b**2 - 31*a*b**3
                                                     + 17*b**4),
    (4, 2): -24*b*(2*a - b)*(a**2 - b**2)*(2*a**2 + b**2)*(a**2 + 2*b**2)**2*(a**2 - a*b + b**2),
    (4, 3): -4*(a**2 - b**2)**2*(2*a**2 + b**2)*(a**2 + 2*b**2)**2*(4*a**2 - a*b + b**2),
    (4, 4): 4*(a + b)**4*(2*a**2 + b**2)**2*(a**2 + 2*b**2)**2,
}

_U0 = {
    (0, 0): -(a - b)**2*(a + b)*(2*a**2 + b**2)*(a**2 + 2*b**2),
    (0, 1): 4*(a - b)**2*(a + b)*(a**2 + 2*b**2)**2,
    (0, 2): -(a - b)*(a**2 + 2*b**2)*(2*a**4 + 17*a**2*b**2 + 17*b**4),
    (1, 0): 4*(a - b)**2*(a + b)*(2*a**2 + b**2)**2,
    (1, 1): -8*(a + b)*(4*a**2 + a*b + 4*b**2)*(a**4 + 7*a**2*b**2 + b**4),
    (1, 2): 4*(a**2 - b**2)*(4*a**5 + 14*a**4*b + 22*a**3*b**2 + 32*a**2*b**3 + 19*a*b**4 + 17*b**5),
    (2, 0): (a - b)*(2*a**2 + b**2)*(17*a**4 + 17*a**2*b**2 + 2*b**4),
    (2, 1): -4*(a**2 - b**2)*(17*a**5 + 19*a**4*b + 32*a**3*b**2 + 22*a**2*b**3 + 14*a*b**4 + 4*b**5),
    (2, 2): (a + b)*(34*a**6 + 76*a**5*b + 137*a**4*b**2 + 154*a**3*b**3 + 137*a**2*b**4 + 76*a*b**5
                     + 34*b**6),
}

_U1 = {
    (0, 0): sympy.Integer(0),
    (0, 1): -12*b*(a - b)**2*(a + b)*(a**2 + 2*b**2),
    (0, 2): 12*b*(a - b)*(a**2 + 2*b**2)**2,
    (1, 0): -12*a*(a - b)**2*(a + b)*(2*a**2 + b**2),
    (1, 1): 48*(a**2 + a*b + b**2)*(a**4 + 7*a**2*b**2 + b**4),
    (1, 2): -12*(a**2 - b**2)*(2*a**4 + 6*a**3*b + 11*a**2*b**2 + 9*a*b**3 + 8*b**4),
    (2, 0): -12*a*(a - b)*(2*a**2 + b**2)**2,
    (2, 1): 12*(a**2 - b**2)*(8*a**4 + 9*a**3*b + 11*a**2*b**2 + 6*a*b**3 + 2*b**4),
    (2, 2): -12*(a + b)**2*(a**2 + a*b + b**2)*(4*a**2 + a*b + 4*b**2),
}

_E = 6*a*b*(a - b)**2*(a + b)*(2*a**2 + b**2)*(a**2 + 2*b**2)

_D_FACTORS = (
    a + 2*c,
    b + 2*c,
    5*a**3 + 7*a**2*c + 4*a*b**2 + 2*b**2*c,
    4*a**2*b + 2*a**2*c + 5*b**3 + 7*b**2*c,
    17*a**2*(a**2 + b**2) + 12*a*(2*a**2 + b**2)*c + 2*b**4,
    2*a**4 + 12*b*(a**2 + 2*b**2)*c + 17*b**2*(a**2 + b**2),
)

_P_B0 = {
    1: -6*(816 + 577*SQRT2) - 6*(915 + 647*SQRT2)*r - 3*(618 + 437*SQRT2)*r**2 - 2*(99 + 70*SQRT2)*r**3,
    2: -24*(222 + 157*SQRT2) - 12*(126 + 89*SQRT2)*r + 12*(27 + 19*SQRT2)*r**2 + 4*(24 + 17*SQRT2)*r**3,
    3: -108*(4 + 3*SQRT2) - 180*(3 + 2*SQRT2)*r - 54*(4 + 3*SQRT2)*r**2 - 12*(3 + 2*SQRT2)*r**3,
    4: -24*(-6 + 5*SQRT2) + 12*(-6 + SQRT2)*r - 12*(3 + SQRT2)*r**2 - 4*SQRT2*r**3,
    5: -6*(-24 + 17*SQRT2) + 6*(-27 + 19*SQRT2)*r - 3*(-18 + 13*SQRT2)*r**2 + 2*(-3 + 2*SQRT2)*r**3,
}

_Q_B0 = {
    0: 6 + 3*SQRT2*r + r**2,
    1: -24*(-4 + 3*SQRT2) - 12*(-3 + 2*SQRT2)*r + 2*(-4 + 3*SQRT2)*r**2,
    2: 6*(-17 + 12*SQRT2) - 3*(-24 + 17*SQRT2)*r + (-17 + 12*SQRT2)*r**2,
}

_B0_PREFACTOR = -36*SQRT2 / (577 + 408*SQRT2)

_LAW_P = 96*(-252 - 399*SQRT3*r - 756*r**2 - 161*SQRT3*r**3 + 170*r**4 + 153*SQRT3*r**5
             + 144*r**6 + 22*SQRT3*r**7 + 4*r**8)

_LAW_PM = {
    1: (126*(168 + 85*gamma) + 63*SQRT3*r*(867 + 596*gamma) + 1323*r**2*(132 + 95*gamma)
        + 28*SQRT3*r**3*(3153 + 2300*gamma) + 24*r**4*(2463 + 1843*gamma)
        + SQRT3*r**5*(588 + 905*gamma) - 36*r**6*(177 + 124*gamma)
        - 6*SQRT3*r**7*(174 + 127*gamma) - 36*r**8*(4 + 3*gamma)),
    2: -8*(63*(24 + 17*gamma) + 63*SQRT3*r*(105 + 74*gamma) + 378*r**2*(78 + 55*gamma)
           + 14*SQRT3*r**3*(1569 + 1108*gamma) + 12*r**4*(2337 + 1652*gamma)
           + SQRT3*r**5*(6954 + 4919*gamma) + 18*r**6*(154 + 109*gamma)
           + 6*SQRT3*r**7*(24 + 17*gamma)),
    3: (126*(24 + 17*gamma) + 63*SQRT3*r*(277 + 196*gamma) + 189*r**2*(516 + 365*gamma)
        + 28*SQRT3*r**3*(3399 + 2404*gamma) + 24*r**4*(7193 + 5087*gamma)
        + SQRT3*r**5*(68436 + 48397*gamma) + 36*r**6*(1465 + 1036*gamma)
        + 6*SQRT3*r**7*(1342 + 949*gamma) + 12*r**8*(140 + 99*gamma)),
}

_LAW_Q = 1 + SQRT3*r + r**2

_PI = Rational(1, 64)*(1 + omega)**3*(32 - 33*omega + 3*omega**2 + 9*omega**3 - 3*omega**4)

# Small-S coefficients of the scaling function with cells of asymmetry omega
# at b = 0, multiplying a^4 S and a^6 S^3 respectively.
_ASYM_S1 = -Rational(1, 480)*(1 + omega)**3*(8 - 9*omega + 3*omega**2)
_ASYM_S3 = Rational(1, 6048)*(1 + omega)**3*(32 - 33*omega + 3*omega**2 + 9*omega**3 - 3*omega**4)
# fmt: on

Grid = Tuple[Tuple[sympy.Expr, ...], ...]


def _grid(table: Dict[Tuple[int, int], sympy.Expr], size: int) -> Grid:
    return tuple(tuple(table[(i, j)] for j in range(size)) for i in range(size))


@dataclass(frozen=True)
class ScalingTables:
    """The exact tables of the two-parameter scaling function"""

    t0: Grid
    t1: Grid
    u0: Grid
    u1: Grid
    E: sympy.Expr
    D: Tuple[sympy.Expr, ...]
    p: Tuple[sympy.Expr, ...]
    q: Tuple[sympy.Expr, ...]

    def t(self, i: int, j: int) -> sympy.Expr:
        return self.t0[i][j] + c * self.t1[i][j]

    def u(self, i: int, j: int) -> sympy.Expr:
        return self.u0[i][j] + c * self.u1[i][j]


@dataclass(frozen=True)
class LawPolynomials:
    """Polynomials in r = sigma^(1/4) of the cell volume Laplace transform"""

    P: sympy.Expr
    P_m: Tuple[sympy.Expr, ...]
    Q: sympy.Expr


@lru_cache(maxsize=1)
def scaling_tables() -> ScalingTables:
    return ScalingTables(
        t0=_grid(_T0, 5),
        t1=_grid(_T1, 5),
        u0=_grid(_U0, 3),
        u1=_grid(_U1, 3),
        E=_E,
        D=_D_FACTORS,
        p=tuple(_P_B0[m] for m in range(1, 6)),
        q=tuple(_Q_B0[m] for m in range(0, 3)),
    )


@lru_cache(maxsize=1)
def law_polynomials() -> LawPolynomials:
    return LawPolynomials(P=_LAW_P, P_m=tuple(_LAW_PM[m] for m in (1, 2, 3)), Q=_LAW_Q)


def b0_prefactor() -> sympy.Expr:
    return _B0_PREFACTOR


def pi_polynomial() -> sympy.Expr:
    return _PI


def asym_small_S_coefficients() -> Tuple[sympy.Expr, sympy.Expr]:
    """Coefficients of a^4 S and a^6 S^3 as polynomials in omega"""
    return _ASYM_S1, _ASYM_S3


def _swap(expr: sympy.Expr) -> sympy.Expr:
    return expr.subs({a: b, b: a}, simultaneous=True)


def symmetry_defects(tables: ScalingTables) -> List[str]:
    """Entries violating x_{i,j}(a, b) = x_{j,i}(b, a), checked exactly"""
    defects = []
    for name, grid in (("t0", tables.t0), ("t1", tables.t1), ("u0", tables.u0), ("u1", tables.u1)):
        size = len(grid)
        for i in range(size):
            for j in range(i, size):
                if sympy.expand(grid[i][j] - _swap(grid[j][i])) != 0:
                    defects.append(f"{name}[{i}][{j}]")
    return defects


def reduce_c(expr: sympy.Expr) -> Tuple[sympy.Expr, sympy.Expr]:
    """Write a polynomial in (a, b, c) as e0 + c e1 using c^2 = (a^2 + b^2) / 2"""
    poly = sympy.Poly(sympy.expand(expr), c)
    relation = sympy.Poly(c**2 - (a**2 + b**2) / 2, c)
    reduced = poly.rem(relation)
    return (
        sympy.expand(reduced.coeff_monomial(1)),
        sympy.expand(reduced.coeff_monomial(c)),
    )


def _terms(expr: sympy.Expr, *gens) -> List[List[int]]:
    """Exponents and integer coefficients of a polynomial with integer coefficients"""
    expr = sympy.expand(expr)
    if expr == 0:
        return []
    out = []
    for monom, coeff in sympy.Poly(expr, *gens).terms():
        coeff = sympy.Rational(coeff)
        if coeff.q != 1:
            raise DomainError(f"non-integer table coefficient {coeff}")
        out.append([*monom, int(coeff.p)])
    return out


def _from_terms(terms: List[List[int]], *gens) -> sympy.Expr:
    expr = sympy.Integer(0)
    for *monom, coeff in terms:
        term = sympy.Integer(coeff)
        for g, e in zip(gens, monom):
            term *= g**e
        expr += term
    return expr


def _surd_coeffs(expr: sympy.Expr, surd: sympy.Expr) -> List[List[List[int]]]:
    """Coefficients of r^k as [[num, den] rational part, [num, den] surd part]"""
    out = []
    for coeff in reversed(sympy.Poly(sympy.expand(expr), r).all_coeffs()):
        coeff = sympy.expand(coeff)
        irrational = sympy.Rational(coeff.coeff(surd))
        rational = sympy.Rational(sympy.expand(coeff - irrational * surd))
        out.append([[int(rational.p), int(rational.q)], [int(irrational.p), int(irrational.q)]])
    return out


def _from_surd_coeffs(coeffs, surd: sympy.Expr) -> sympy.Expr:
    expr = sympy.Integer(0)
    for k, ((pn, pd), (sn, sd)) in enumerate(coeffs):
        expr += (Rational(pn, pd) + Rational(sn, sd) * surd) * r**k
    return expr


def dump_tables(tables: ScalingTables = None) -> Dict[str, Any]:
    """An audit document with the tables in expanded integer form

    Entries are listed in the published order: i, j, the component (0 for
    the c-free part, 1 for the coefficient of c), and the terms as
    [exponent of a, exponent of b, coefficient].

    """

    tables = tables or scaling_tables()
    doc: Dict[str, Any] = {"t": [], "u": []}
    for key, grids in (("t", (tables.t0, tables.t1)), ("u", (tables.u0, tables.u1))):
        for component, grid in enumerate(grids):
            for i, row in enumerate(grid):
                for j, entry in enumerate(row):
                    doc[key].append(
                        {"i": i, "j": j, "component": component, "terms": _terms(entry, a, b)}
                    )
    doc["E"] = _terms(tables.E, a, b)
    doc["D"] = [
        {"c0": _terms(f.coeff(c, 0), a, b), "c1": _terms(f.coeff(c, 1), a, b)}
        for f in tables.D
    ]
    doc["p"] = [_surd_coeffs(p, SQRT2) for p in tables.p]
    doc["q"] = [_surd_coeffs(q, SQRT2) for q in tables.q]
    return doc


def load_tables(doc: Dict[str, Any]) -> ScalingTables:
    try:
        grids: Dict[Tuple[str, int], Dict[Tuple[int, int], sympy.Expr]] = {}
        for key in ("t", "u"):
            for entry in doc[key]:
                grid = grids.setdefault((key, int(entry["component"])), {})
                grid[(int(entry["i"]), int(entry["j"]))] = _from_terms(entry["terms"], a, b)
        return ScalingTables(
            t0=_grid(grids[("t", 0)], 5),
            t1=_grid(grids[("t", 1)], 5),
            u0=_grid(grids[("u", 0)], 3),
            u1=_grid(grids[("u", 1)], 3),
            E=_from_terms(doc["E"], a, b),
            D=tuple(
                _from_terms(f["c0"], a, b) + c * _from_terms(f["c1"], a, b)
                for f in doc["D"]
            ),
            p=tuple(_from_surd_coeffs(p, SQRT2) for p in doc["p"]),
            q=tuple(_from_surd_coeffs(q, SQRT2) for q in doc["q"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"malformed table document: {e}") from e


def tables_equal(left: ScalingTables, right: ScalingTables) -> bool:
    """Exact equality of every entry as polynomials"""
    pairs = [
        (x, y)
        for gl, gr in (
            (left.t0, right.t0),
            (left.t1, right.t1),
            (left.u0, right.u0),
            (left.u1, right.u1),
        )
        for rl, rr in zip(gl, gr)
        for x, y in zip(rl, rr)
    ]
    pairs.append((left.E, right.E))
    pairs.extend(zip(left.D, right.D))
    pairs.extend(zip(left.p, right.p))
    pairs.extend(zip(left.q, right.q))
    return all(sympy.expand(x - y) == 0 for x, y in pairs)


class NumericTables:
    """mpmath evaluators for the tables

    Each entry becomes a function of (a, b, c), or of r (and gamma) for the
    one-variable polynomials.  The functions only use ring operations and
    mpmath.sqrt on integer constants, so they accept mpf, mpc, or Laurent
    series arguments alike.

    """

    def __init__(self, tables: ScalingTables, law: LawPolynomials):
        abc = (a, b, c)
        self.t: Tuple[Tuple[Callable, ...], ...] = tuple(
            tuple(_lambdify(abc, tables.t(i, j)) for j in range(5)) for i in range(5)
        )
        self.u = tuple(
            tuple(_lambdify(abc, tables.u(i, j)) for j in range(3)) for i in range(3)
        )
        self.E = _lambdify(abc, tables.E)
        self.D = tuple(_lambdify(abc, f) for f in tables.D)
        self.p = tuple(_lambdify((r,), p) for p in tables.p)
        self.q = tuple(_lambdify((r,), q) for q in tables.q)
        self.b0_prefactor = _lambdify((), _B0_PREFACTOR)
        self.law_P = _lambdify((r,), law.P)
        self.law_P_m = tuple(_lambdify((r, gamma), pm) for pm in law.P_m)
        self.law_Q = _lambdify((r,), law.Q)


def _lambdify(args, expr: sympy.Expr) -> Callable:
    return sympy.lambdify(args, expr, modules="mpmath")


@lru_cache(maxsize=1)
def numeric_tables() -> NumericTables:
    logger.debug("compiling numeric evaluators for the scaling tables")
    return NumericTables(scaling_tables(), law_polynomials())


def exact_pi(value: Fraction) -> Fraction:
    """The trapping probability polynomial at an exact rational"""
    result = _PI.subs(omega, Rational(value.numerator, value.denominator))
    result = sympy.Rational(result)
    return Fraction(int(result.p), int(result.q))
