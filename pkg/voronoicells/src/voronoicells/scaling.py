"""The scaling functions and the extraction of their small-S coefficients

The two-parameter scaling function is

    F(S, a, b) = -(e^{-(a+b)S} / 6) (T / D) (E / U)^3

with T = sum t_ij sigma^i tau^j, U = sum u_ij sigma^i tau^j, sigma = e^{-aS},
tau = e^{-bS}, and E, D the prefactor polynomials of `voronoicells.tables`.
Both E and U vanish on the diagonal b = a and at b = 0, so evaluation near
those lines runs with extra guard bits, and exactly on them switches to a
limit fit or to the closed form at b = 0.

"""

from dataclasses import dataclass
from fractions import Fraction
import logging
from typing import Dict

from mpmath import mp

from voronoicells.config import DEFAULT_EXTRACTION_BITS, DEFAULT_PRECISION_BITS
from voronoicells.errors import ConvergenceError, DomainError, SeriesError
from voronoicells.extrapolate import limit_coeffs
from voronoicells.laurent import LaurentSeriesS
from voronoicells.numeric import BigReal, big, bits_below, relative_error, stable_eval
from voronoicells.tables import numeric_tables

logger = logging.getLogger(__name__)

# Below this relative distance from b = a or b = 0 the direct formula loses
# more digits than the default guard covers.
NEAR_LINE_THRESHOLD = mp.mpf("1e-3")

NEAR_DIAGONAL_POINTS = 5
NEAR_DIAGONAL_START = 24

LAURENT_TERMS = 24
MAX_LAURENT_TERMS = 96

FIT_POINTS = 60
FIT_WINDOW = mp.mpf("0.5")
FIT_AGREEMENT_DIGITS = 8


def _positive(name: str, value) -> BigReal:
    value = big(value)
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {mp.nstr(value, 10)}")
    return value


def _nonnegative(name: str, value) -> BigReal:
    value = big(value)
    if value < 0:
        raise DomainError(f"{name} must be nonnegative, got {mp.nstr(value, 10)}")
    return value


def _combine(nt, a, b, c, sigma, tau):
    """T and U as polynomials in sigma and tau with table coefficients

    Works for scalars and for LaurentSeriesS arguments alike.

    """

    sigma_pow = [1, sigma]
    tau_pow = [1, tau]
    for k in range(2, 5):
        sigma_pow.append(sigma_pow[-1] * sigma)
        tau_pow.append(tau_pow[-1] * tau)

    T = 0
    for i in range(5):
        row = 0
        for j in range(5):
            row = row + nt.t[i][j](a, b, c) * tau_pow[j]
        T = T + row * sigma_pow[i]

    U = 0
    for i in range(3):
        row = 0
        for j in range(3):
            row = row + nt.u[i][j](a, b, c) * tau_pow[j]
        U = U + row * sigma_pow[i]
    return T, U


def _F_direct(S, a, b):
    nt = numeric_tables()
    c = mp.sqrt((a * a + b * b) / 2)
    sigma = mp.exp(-a * S)
    tau = mp.exp(-b * S)
    T, U = _combine(nt, a, b, c, sigma, tau)
    D = mp.one
    for factor in nt.D:
        D *= factor(a, b, c)
    E = nt.E(a, b, c)
    return -sigma * tau / 6 * T / D * (E / U) ** 3


def eval_F(S, a, b, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigReal:
    """The scaling function F(S, a, b)

    Exactly at b = 0 this is the closed form of eval_F_b0, and exactly at
    b = a the limit of a polynomial fit through b = a +/- delta.  Elsewhere
    the direct formula is evaluated with enough guard bits to absorb the
    cancellation near those two lines.

    """

    with mp.workprec(precision_bits + 16):
        S = _positive("S", S)
        a = _positive("a", a)
        b = _nonnegative("b", b)

    if b == 0:
        return eval_F_b0(S, a, precision_bits)
    if a == b:
        return _near_diagonal_limit(S, a, precision_bits)

    guard = 32
    with mp.workprec(precision_bits + 16):
        lo, hi = min(a, b), max(a, b)
        if abs(a - b) < NEAR_LINE_THRESHOLD * hi:
            guard += 6 * bits_below(a - b, hi)
        if lo < NEAR_LINE_THRESHOLD * hi:
            guard += 3 * bits_below(lo, hi)

    return stable_eval(
        lambda: _F_direct(S, a, b), precision_bits, guard, what="F(S, a, b)"
    )


def _near_diagonal_limit(S, a, precision_bits: int) -> BigReal:
    """F(S, a, a) as the constant term of a fit in the signed offset b - a"""
    logger.debug("evaluating F on the diagonal by a fit in b - a")
    bits = precision_bits + 64
    with mp.workprec(bits):
        base = mp.ldexp(a, -NEAR_DIAGONAL_START)
        xs, ys = [], []
        for k in range(NEAR_DIAGONAL_POINTS):
            scale = mp.ldexp(1, -k)
            for sign in (1, -1):
                delta = sign * base * scale
                xs.append(sign * scale)
                ys.append(eval_F(S, a, a + delta, bits))
    with mp.workprec(bits):
        value = limit_coeffs(xs, ys, list(range(len(xs))))[0]
    with mp.workprec(precision_bits):
        return +value


def eval_F_diag(S, a, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigReal:
    """F(S, a) = 2a^3 q (1+q) / (1-q)^3 with q = e^{-2aS}"""
    with mp.workprec(precision_bits + 16):
        S = _positive("S", S)
        a = _positive("a", a)
        q = mp.exp(-2 * a * S)
        one_minus_q = -mp.expm1(-2 * a * S)
        value = 2 * a**3 * q * (1 + q) / one_minus_q**3
    with mp.workprec(precision_bits):
        return +value


def _F_b0_direct(S, a):
    nt = numeric_tables()
    r = a * S
    num = mp.zero
    for m, p in enumerate(nt.p, start=1):
        num += p(r) * mp.exp(-m * r)
    den = mp.zero
    for m, q in enumerate(nt.q):
        den += q(r) * mp.exp(-m * r)
    return nt.b0_prefactor() * a**3 * num / den**3


def eval_F_b0(S, a, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigReal:
    """F(S, a, 0) from the p_m / q_m closed form"""
    with mp.workprec(precision_bits + 16):
        S = _positive("S", S)
        a = _positive("a", a)
        # numerator and denominator both vanish as S -> 0
        guard = 32 + 6 * bits_below(a * S, 1) if a * S < 1 else 32
    return stable_eval(
        lambda: _F_b0_direct(S, a), precision_bits, guard, what="F(S, a, 0)"
    )


def eval_r(S, a, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigReal:
    """r(S, a) = -a^2 (1 + 10 e^{-aS} + e^{-2aS}) / (3 (1 - e^{-aS})^2)"""
    with mp.workprec(precision_bits + 16):
        S = _positive("S", S)
        a = _positive("a", a)
        e = mp.exp(-a * S)
        value = -(a**2) * (1 + 10 * e + e * e) / (3 * mp.expm1(-a * S) ** 2)
    with mp.workprec(precision_bits):
        return +value


def eval_x_scaling(S, T, a, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigReal:
    """The diagonal scaling function x(S, T, a)

    X_{S/eps, T/eps}(g, g) = 3 + x(S, T, a) eps + O(eps^2) at g = G(a, eps),
    and F(S, a) = (1/3) d/dS d/dT x(S, T, a) at T = S.

    """

    with mp.workprec(precision_bits + 16):
        S = _positive("S", S)
        T = _positive("T", T)
        a = _positive("a", a)
        es, et, est = mp.exp(-a * S), mp.exp(-a * T), mp.exp(-a * (S + T))
        num = es + et - 3 * est + est * est
        den = mp.expm1(-a * S) * mp.expm1(-a * T) * mp.expm1(-a * (S + T))
        value = -3 * a + 6 * a * num / den
    with mp.workprec(precision_bits):
        return +value


@dataclass(frozen=True)
class SmallSExpansion:
    """F(S, a, b) = pole / S^3 + linear S + cubic S^3 + O(S^5)"""

    pole: Fraction
    linear: object
    cubic: object

    def coefficients(self) -> Dict[int, object]:
        return {-3: self.pole, -1: 0, 1: self.linear, 3: self.cubic}

    def value(self, S) -> BigReal:
        S = big(S)
        return big(self.pole) / S**3 + big(self.linear) * S + big(self.cubic) * S**3


def small_S_coefficients(a, b) -> SmallSExpansion:
    """The small-S expansion of F(S, a, b), exact for rational a and b"""
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        a, b = Fraction(a), Fraction(b)
        return SmallSExpansion(
            Fraction(1, 2), -(a**4 + b**4) / 60, (a**6 + b**6) / 189
        )
    a, b = big(a), big(b)
    return SmallSExpansion(
        Fraction(1, 2), -(a**4 + b**4) / 60, (a**6 + b**6) / 189
    )


def scaling_laurent(
    a,
    b,
    b_scaled: bool = False,
    terms: int = LAURENT_TERMS,
    precision_bits: int = DEFAULT_EXTRACTION_BITS,
) -> LaurentSeriesS:
    """F(S, a, b) as a Laurent series in S

    With b_scaled, the argument b is tau and the series is that of
    F(S, a, tau / S), where e^{-bS} = e^{-tau} is a constant.  Otherwise b is
    held fixed.  `terms` is the number of retained terms of every input.

    """

    nt = numeric_tables()
    with mp.workprec(precision_bits):
        a_val = _positive("a", a)
        b_val = _nonnegative("b", b)
        if b_val == 0:
            raise DomainError("the Laurent expansion needs b > 0; use the b = 0 form")

        a_s = LaurentSeriesS.constant(a_val, terms, precision_bits)
        sigma = LaurentSeriesS.exp_linear(-a_val, terms, precision_bits)
        if b_scaled:
            b_s = LaurentSeriesS.constant(b_val, terms, precision_bits).shift(-1)
            tau = mp.exp(-b_val)
        else:
            b_s = LaurentSeriesS.constant(b_val, terms, precision_bits)
            tau = LaurentSeriesS.exp_linear(-b_val, terms, precision_bits)

        # positive branch: the leading coefficient is positive for real a, b
        c = ((a_s * a_s + b_s * b_s) / 2).sqrt()
        T, U = _combine(nt, a_s, b_s, c, sigma, tau)
        D = nt.D[0](a_s, b_s, c)
        for factor in nt.D[1:]:
            D = D * factor(a_s, b_s, c)
        E = nt.E(a_s, b_s, c)
        ratio = E * U.inverse()
        return (sigma * tau) * T * D.inverse() * (ratio**3) * mp.mpf(-1) / 6


def scaling_laurent_b0(
    a, terms: int = LAURENT_TERMS, precision_bits: int = DEFAULT_EXTRACTION_BITS
) -> LaurentSeriesS:
    """F(S, a, 0) as a Laurent series in S, from the p_m / q_m form"""
    nt = numeric_tables()
    with mp.workprec(precision_bits):
        a_val = _positive("a", a)
        r = LaurentSeriesS.variable(terms, precision_bits) * a_val
        num = 0
        for m, p in enumerate(nt.p, start=1):
            num = num + p(r) * LaurentSeriesS.exp_linear(-m * a_val, terms, precision_bits)
        den = 0
        for m, q in enumerate(nt.q):
            den = den + q(r) * LaurentSeriesS.exp_linear(-m * a_val, terms, precision_bits)
        return num * (den**3).inverse() * (nt.b0_prefactor() * a_val**3)


def _laurent_coeff(i: int, tau, precision_bits: int) -> BigReal:
    order = 2 * i - 3
    a = mp.sqrt(6)
    terms = LAURENT_TERMS
    while terms <= MAX_LAURENT_TERMS:
        try:
            with mp.workprec(precision_bits):
                if tau == 0:
                    series = scaling_laurent_b0(a, terms, precision_bits)
                else:
                    series = scaling_laurent(a, tau, True, terms, precision_bits)
                return series.coeff(order)
        except SeriesError as e:
            logger.debug("Laurent window of %d terms too short: %s", terms, e)
        terms *= 2
    raise ConvergenceError(
        f"[S^{order}] is outside the computed window of {MAX_LAURENT_TERMS} terms"
    )


def _fit_coeff(i: int, tau, precision_bits: int) -> BigReal:
    """[S^{2i-3}] F(S, sqrt 6, tau / S) from a polynomial fit of S^3 F"""
    a = mp.sqrt(6)
    # c = sqrt((a^2 + tau^2 / S^2) / 2) branches at S = +/- i tau / a
    window = FIT_WINDOW if tau == 0 else min(FIT_WINDOW, tau / a)
    xs, ys = [], []
    for k in range(FIT_POINTS):
        S = window / 2 * (1 - mp.cos(mp.pi * (k + mp.mpf(1) / 2) / FIT_POINTS))
        b = tau / S
        xs.append(S)
        ys.append(S**3 * eval_F(S, a, b, precision_bits))
    return limit_coeffs(xs, ys, list(range(FIT_POINTS)))[2 * i]


def extract_phi_coeff(
    i: int,
    tau,
    precision_bits: int = DEFAULT_EXTRACTION_BITS,
    cross_check: bool = True,
) -> BigReal:
    """[S^{2i-3}] F(S, sqrt 6, tau / S)

    Computed by truncated Laurent arithmetic in S, and, unless cross_check is
    off, confirmed by an independent polynomial fit of S^3 F(S, sqrt 6, tau/S)
    at Chebyshev points in S.  Raises a ConvergenceError if the two disagree
    beyond FIT_AGREEMENT_DIGITS significant digits.

    """

    if i not in (0, 1, 2, 3):
        raise DomainError(f"coefficient index must be one of 0, 1, 2, 3, got {i}")
    with mp.workprec(precision_bits):
        tau = _nonnegative("tau", tau)

    value = _laurent_coeff(i, tau, precision_bits)
    if cross_check:
        with mp.workprec(precision_bits):
            fitted = _fit_coeff(i, tau, precision_bits)
            tol = mp.mpf(10) ** -FIT_AGREEMENT_DIGITS
            scale = max(abs(value), abs(fitted), mp.one)
            if abs(value - fitted) > tol * scale:
                raise ConvergenceError(
                    f"Laurent and fitted [S^{2 * i - 3}] disagree: "
                    f"{mp.nstr(value, 20)} vs {mp.nstr(fitted, 20)}"
                )
            logger.debug(
                "Laurent and fitted coefficients agree to %s",
                mp.nstr(relative_error(fitted, value), 3),
            )
    with mp.workprec(precision_bits):
        return +value
