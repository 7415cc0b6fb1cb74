"""Trapping probability of asymmetric cells

When the two sources are biased by an asymmetry factor omega in [-1, 1], the
second cell stays finite in the local limit with probability Pi(omega), read
off the S^3 coefficient of the small-S expansion of the asymmetric scaling
function at b = 0.

"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import logging
from typing import List, Sequence, Tuple

from mpmath import mp
import sympy

from voronoicells.errors import DomainError
from voronoicells.numeric import BigReal, big
from voronoicells.tables import asym_small_S_coefficients, exact_pi, omega, pi_polynomial

logger = logging.getLogger(__name__)

# E = (7/16) [S^3] at a = sqrt 6, and (sqrt 6)^6 = 216
S3_WEIGHT = sympy.Rational(7, 16) * 216


@lru_cache(maxsize=1)
def pi_coefficients() -> Tuple[Fraction, ...]:
    """Coefficients of Pi in increasing powers of omega"""
    poly = sympy.Poly(sympy.expand(pi_polynomial()), omega)
    return tuple(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs()))


def _check_range(w, shown: str) -> None:
    if abs(w) > 1:
        raise DomainError(f"asymmetry factor {shown} lies outside [-1, 1]")


def Pi(w):
    """Probability that the second cell is finite, at asymmetry w

    Exact for int and Fraction arguments, a BigReal otherwise.  Raises a
    DomainError unless -1 <= w <= 1.

    """

    if isinstance(w, (int, Fraction)) and not isinstance(w, bool):
        w = Fraction(w)
        _check_range(w, str(w))
        return exact_pi(w)

    w = big(w)
    _check_range(w, mp.nstr(w, 10))
    return mp.polyval([big(c) for c in reversed(pi_coefficients())], w)


def complement_defects() -> List[int]:
    """Powers of omega at which Pi(omega) + Pi(-omega) - 1 has a nonzero coefficient"""
    coeffs = list(pi_coefficients())
    defects = []
    for k, c in enumerate(coeffs):
        total = c + (c if k % 2 == 0 else -c)
        if k == 0:
            total -= 1
        if total != 0:
            defects.append(k)
    return defects


@dataclass
class ConsistencyReport:
    """Outcome of the identities linking Pi to the asymmetric small-S expansion

    The values are the two expansion coefficients at the requested (a, omega),
    with `pi_from_s3` the S^3 coefficient rescaled to a trapping probability.

    """

    a: BigReal
    omega: BigReal
    s1_coeff: BigReal
    s3_coeff: BigReal
    pi_from_s3: BigReal
    pi_value: BigReal
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _exact_identity_failures() -> List[str]:
    s1, s3 = asym_small_S_coefficients()
    Pi_poly = pi_polynomial()
    checks = (
        (S3_WEIGHT * s3 - Pi_poly, "(7/16) [S^3] at a = sqrt 6 differs from Pi"),
        (s1.subs(omega, 0) + sympy.Rational(1, 60), "[a^4 S] at omega = 0 is not -1/60"),
        (s3.subs(omega, 0) - sympy.Rational(1, 189), "[a^6 S^3] at omega = 0 is not 1/189"),
        (Pi_poly + Pi_poly.subs(omega, -omega) - 1, "Pi(omega) + Pi(-omega) is not identically 1"),
    )
    return [message for expr, message in checks if sympy.expand(expr) != 0]


def check_expansion_consistency(a, w) -> ConsistencyReport:
    """Check the asymmetric expansion against Pi and the symmetric expansion

    The polynomial identities are checked exactly; the report also carries
    the coefficients of a^4 S and a^6 S^3 evaluated at (a, w).

    """

    a = big(a)
    if not a > 0:
        raise DomainError("a must be positive")
    if isinstance(w, int) and not isinstance(w, bool):
        w = Fraction(w)
    shown = mp.nstr(w, 10) if not isinstance(w, Fraction) else str(w)
    if abs(w) >= 1:
        raise DomainError(f"asymmetry factor {shown} must lie in (-1, 1)")

    s1, s3 = asym_small_S_coefficients()
    w_exact = sympy.Rational(w.numerator, w.denominator) if isinstance(w, Fraction) else None
    if w_exact is not None:
        s1_at, s3_at = s1.subs(omega, w_exact), s3.subs(omega, w_exact)
        s1_value = big(Fraction(int(s1_at.p), int(s1_at.q)))
        s3_value = big(Fraction(int(s3_at.p), int(s3_at.q)))
    else:
        s1_value = sympy.lambdify(omega, s1, modules="mpmath")(big(w))
        s3_value = sympy.lambdify(omega, s3, modules="mpmath")(big(w))

    report = ConsistencyReport(
        a=a,
        omega=big(w),
        s1_coeff=a**4 * s1_value,
        s3_coeff=a**6 * s3_value,
        pi_from_s3=mp.mpf(7) / 16 * mp.sqrt(6) ** 6 * s3_value,
        pi_value=big(Pi(w)),
        failures=_exact_identity_failures(),
    )
    for k in complement_defects():
        report.failures.append(f"omega^{k} coefficient of Pi(omega) + Pi(-omega) - 1 is nonzero")
    if report.failures:
        logger.warning("asymmetric expansion identities failed: %s", report.failures)
    return report


def omega_grid(points: int) -> List[Fraction]:
    """`points` equally spaced exact values from -1 to 1"""
    if points < 2:
        raise DomainError("an omega grid needs at least two points")
    return [Fraction(2 * k, points - 1) - 1 for k in range(points)]


def pi_table(ws: Sequence) -> List[Tuple]:
    """Rows (omega, Pi(omega))"""
    return [(w, Pi(w)) for w in ws]


def is_monotone(values: Sequence) -> bool:
    return all(x <= y for x, y in zip(values, values[1:]))
