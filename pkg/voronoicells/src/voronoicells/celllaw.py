"""The law of the finite Voronoi cell volume

E_sigma is the Laplace transform E[e^{-sigma V}] of the rescaled volume
V = n2 / s^4 of the finite cell, as a closed form in r = sigma^(1/4).  Its
density P(V) has no closed form and is obtained by numerical inversion,
always with two independent methods whose disagreement is an error.  The
module also holds the asymptotic forms of P(V) and the tree and one-sided
Levy laws they are compared with.

"""

from dataclasses import dataclass
import logging
from typing import Callable

from mpmath import mp

from voronoicells.config import DEFAULT_PRECISION_BITS, ILTConfig, ILTMethod
from voronoicells.errors import ConvergenceError, DomainError
from voronoicells.laurent import LaurentSeriesS
from voronoicells.numeric import BigComplex, BigReal, big, bits_below, stable_eval
from voronoicells.series import RationalSeries
from voronoicells.tables import numeric_tables

logger = logging.getLogger(__name__)


def _E_of_r(r):
    """E as a function of r = sigma^(1/4), real or complex"""
    nt = numeric_tables()
    sqrt2, sqrt6 = mp.sqrt(2), mp.sqrt(6)
    num = nt.law_P(r)
    for m, P_m in enumerate(nt.law_P_m, start=1):
        grow = mp.exp(m * sqrt6 * r)
        num += P_m(r, sqrt2) * grow + P_m(r, -sqrt2) / grow
    e = mp.exp(sqrt6 * r)
    den = nt.law_Q(r) * (4 + (4 + 3 * sqrt2) * e + (4 - 3 * sqrt2) / e) - 12
    return mp.mpf(3) / 2 * num / den**4


def _guard_for(r) -> int:
    # numerator and denominator both vanish at r = 0, the denominator as r^4
    if abs(r) >= 1:
        return 40
    return 40 + 4 * bits_below(r, 1)


def E_sigma(sigma, precision_bits: int = DEFAULT_PRECISION_BITS) -> BigReal:
    """E[e^{-sigma V}] for real sigma >= 0

    Equal to 1 at sigma = 0, where numerator and denominator both vanish.

    """

    with mp.workprec(precision_bits + 16):
        sigma = big(sigma)
        if sigma < 0:
            raise DomainError("sigma must be nonnegative")
        if sigma == 0:
            return mp.one
        r = mp.root(sigma, 4)
    return stable_eval(
        lambda: _E_of_r(r), precision_bits, _guard_for(r), what="E(sigma)"
    )


def E_laplace(p) -> BigComplex:
    """E analytically continued to complex sigma, principal fourth root

    Runs at the caller's precision, raised by enough guard bits to absorb the
    cancellation near p = 0.  Used as the transform in numerical inversions.

    """

    if p == 0:
        return mp.one
    r = mp.root(p, 4)
    with mp.extraprec(_guard_for(r)):
        value = _E_of_r(r)
    return +value


SMALL_SIGMA_COEFFS = (
    ("sigma^(1/4)", lambda: -665 * mp.sqrt(3) / 1024),
    ("sigma^(3/4)", lambda: mp.mpf(49) / (768 * mp.sqrt(3))),
    ("sigma", lambda: mp.mpf(63) / 80),
)


def E_sigma_small(sigma) -> BigReal:
    """1 - (665 sqrt3 / 1024) sigma^(1/4) + 49 / (768 sqrt3) sigma^(3/4) + (63/80) sigma"""
    sigma = big(sigma)
    quarter = mp.root(sigma, 4)
    c1, c3, c4 = (f() for _, f in SMALL_SIGMA_COEFFS)
    return 1 + c1 * quarter + c3 * quarter**3 + c4 * sigma


def large_sigma_constant() -> BigReal:
    """(9/2)(3 sqrt2 - 4), the constant of E ~ C e^{-sqrt6 sigma^(1/4)}"""
    return mp.mpf(9) / 2 * (3 * mp.sqrt(2) - 4)


def E_sigma_large(sigma) -> BigReal:
    sigma = big(sigma)
    return large_sigma_constant() * mp.exp(-mp.sqrt(6) * mp.root(sigma, 4))


@dataclass(frozen=True)
class Inversion:
    """A numerical inverse Laplace transform and its cross-method error"""

    value: BigReal
    error: BigReal
    method: ILTMethod


def _invert(transform: Callable, V, method: ILTMethod, cfg: ILTConfig) -> BigReal:
    with mp.workprec(cfg.precision_bits):
        return mp.invertlaplace(
            transform, V, method=method.mpmath_name(), degree=cfg.node_count
        )


def ilt(transform: Callable, V, cfg: ILTConfig = ILTConfig()) -> Inversion:
    """Inverse Laplace transform of `transform` at V

    Runs both the deformed-contour and the accelerated-Fourier methods and
    returns the value of cfg.method, with the difference between the two as
    error estimate.  Raises a ConvergenceError if they disagree by more than
    cfg.target_tol relative to the value.

    """

    V = big(V)
    if not V > 0:
        raise DomainError("the inversion point V must be positive")

    try:
        primary = _invert(transform, V, cfg.method, cfg)
        secondary = _invert(transform, V, cfg.method.other(), cfg)
    except (ZeroDivisionError, ValueError, OverflowError) as e:
        raise ConvergenceError(f"transform failed on the inversion contour: {e}") from e

    with mp.workprec(cfg.precision_bits):
        primary, secondary = mp.re(primary), mp.re(secondary)
        error = abs(primary - secondary)
        if error > cfg.target_tol * abs(primary):
            raise ConvergenceError(
                f"inversion methods disagree at V={mp.nstr(V, 8)}: "
                f"{mp.nstr(primary, 15)} vs {mp.nstr(secondary, 15)}"
            )
    logger.debug("inverted at V=%s: %s +/- %s", mp.nstr(V, 8), mp.nstr(primary, 15), mp.nstr(error, 3))
    return Inversion(primary, error, cfg.method)


def P_V(V, cfg: ILTConfig = ILTConfig()) -> Inversion:
    """The density P(V) of the rescaled volume of the finite cell"""
    return ilt(E_laplace, V, cfg)


def cdf(Lambda, cfg: ILTConfig = ILTConfig()) -> Inversion:
    """Integral of P from 0 to Lambda, by inversion of E / sigma"""
    return ilt(lambda p: E_laplace(p) / p, Lambda, cfg)


def truncated_mean(Lambda, cfg: ILTConfig = ILTConfig()) -> Inversion:
    """Integral of V P(V) from 0 to Lambda

    Integrating by parts, it is Lambda cdf(Lambda) minus the integral of the
    cdf, whose transform is E / sigma^2.

    """

    mass = cdf(Lambda, cfg)
    integrated = ilt(lambda p: E_laplace(p) / p**2, Lambda, cfg)
    with mp.workprec(cfg.precision_bits):
        Lambda = big(Lambda)
        value = Lambda * mass.value - integrated.value
        error = Lambda * mass.error + integrated.error
    return Inversion(value, error, cfg.method)


def tail_constant() -> BigReal:
    return 665 * mp.sqrt(3) / (4096 * mp.gamma(mp.mpf(3) / 4))


def asympt_tail(V) -> BigReal:
    """665 sqrt3 / (4096 Gamma(3/4)) V^(-5/4), the large-V equivalent of P"""
    V = big(V)
    return tail_constant() * V ** (-mp.mpf(5) / 4)


@dataclass(frozen=True)
class SaddlePoint:
    """Saddle point of sigma V - kappa sigma^alpha

    `exponent` is the value of the phase at sigma_star and `curvature` its
    second derivative, so the density is estimated as
    prefactor e^exponent / sqrt(2 pi curvature).

    """

    sigma_star: BigReal
    exponent: BigReal
    curvature: BigReal

    def density(self, prefactor) -> BigReal:
        return prefactor * mp.exp(self.exponent) / mp.sqrt(2 * mp.pi * self.curvature)


def stretched_saddle(alpha, kappa, V) -> SaddlePoint:
    """Saddle point of the Bromwich integral of e^{sigma V - kappa sigma^alpha}"""
    alpha, kappa, V = big(alpha), big(kappa), big(V)
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    if not V > 0:
        raise DomainError("V must be positive")
    sigma_star = (alpha * kappa / V) ** (1 / (1 - alpha))
    exponent = sigma_star * V - kappa * sigma_star**alpha
    curvature = kappa * alpha * (1 - alpha) * sigma_star ** (alpha - 2)
    return SaddlePoint(sigma_star, exponent, curvature)


def saddle_point(V) -> SaddlePoint:
    """The saddle point behind the small-V form of P

    sigma_star = 3^(2/3) / (4 V^(4/3)) and the exponent is
    -3^(5/3) / (4 V^(1/3)).

    """

    return stretched_saddle(mp.mpf(1) / 4, mp.sqrt(6), V)


def asympt_flat(V) -> BigReal:
    """3^(11/6) (3 - 2 sqrt2) / (2 sqrt pi) V^(-7/6) e^{-(3^(5/3)/4) V^(-1/3)}"""
    V = big(V)
    return (
        mp.power(3, mp.mpf(11) / 6)
        * (3 - 2 * mp.sqrt(2))
        / (2 * mp.sqrt(mp.pi))
        * V ** (-mp.mpf(7) / 6)
        * mp.exp(-mp.power(3, mp.mpf(5) / 3) / 4 * V ** (-mp.mpf(1) / 3))
    )


def tree_E(sigma) -> BigReal:
    """E_tree[e^{-sigma V}] = e^{-2 sqrt(sigma)}"""
    sigma = big(sigma)
    if sigma < 0:
        raise DomainError("sigma must be nonnegative")
    return mp.exp(-2 * mp.sqrt(sigma))


def tree_laplace(p) -> BigComplex:
    return mp.exp(-2 * mp.sqrt(p))


def tree_P(V) -> BigReal:
    """The Levy density V^(-3/2) e^(-1/V) / sqrt(pi)"""
    V = big(V)
    if not V > 0:
        raise DomainError("V must be positive")
    return mp.exp(-1 / V) / (mp.sqrt(mp.pi) * V ** (mp.mpf(3) / 2))


def R_tree(g) -> BigReal:
    """Generating function of planted trees, (1 - sqrt(1 - 4g)) / (2g)"""
    g = big(g)
    if g == 0:
        return mp.one
    if g > mp.mpf(1) / 4:
        raise DomainError("R_tree is singular beyond g = 1/4")
    return (1 - mp.sqrt(1 - 4 * g)) / (2 * g)


def R_tree_series(order: int) -> RationalSeries:
    """R_tree(g) as an exact series, whose coefficients are the Catalan numbers"""
    one_minus_4g = RationalSeries("g", [1, -4], order + 1)
    return ((1 - one_minus_4g.sqrt()).shift(-1) / 2).truncate(order)


def G_tree(c, eps) -> BigReal:
    """(1/4)(1 - c^2 eps^2 / 4)"""
    c, eps = big(c), big(eps)
    return (1 - c * c * eps * eps / 4) / 4


def F_tree(s: int, g, h) -> BigReal:
    """(g R_tree(g)^2)^s (h R_tree(h)^2)^s"""
    if s < 0:
        raise DomainError("s must be nonnegative")
    return (big(g) * R_tree(g) ** 2) ** s * (big(h) * R_tree(h) ** 2) ** s


def tree_scaling(S, a, b) -> BigReal:
    """The tree scaling function e^{-(a+b)S}"""
    return mp.exp(-(big(a) + big(b)) * big(S))


def tree_E_from_scaling(sigma, terms: int = 8) -> BigReal:
    """[S] F_tree(S, 2, 2 sigma^(1/2) / S) / [S] F_tree(S, 2, 0)

    With b = tau / S the factor e^{-bS} = e^{-tau} is constant, so the
    Laurent series in S is e^{-2S} e^{-tau}.

    """

    sigma = big(sigma)
    tau = 2 * mp.sqrt(sigma)
    scaled = LaurentSeriesS.exp_linear(-2, terms) * mp.exp(-tau)
    unscaled = LaurentSeriesS.exp_linear(-2, terms)
    return scaled.coeff(1) / unscaled.coeff(1)


@dataclass(frozen=True)
class LevyAsymptotics:
    """Small and large V behaviour of the one-sided Levy law e^{-sigma^alpha}

    At small V the density is flat, c V^-small_V_exponent
    e^{-c' V^-flat_exponent}, and at large V it decays as V^-tail_exponent.

    """

    alpha: BigReal
    small_V_exponent: BigReal
    flat_exponent: BigReal
    tail_exponent: BigReal
    small_V_form: BigReal
    tail_form: BigReal


def levy_asympt(alpha, V) -> LevyAsymptotics:
    alpha, V = big(alpha), big(V)
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    saddle = stretched_saddle(alpha, 1, V)
    return LevyAsymptotics(
        alpha=alpha,
        small_V_exponent=(2 - alpha) / (2 * (1 - alpha)),
        flat_exponent=alpha / (1 - alpha),
        tail_exponent=1 + alpha,
        small_V_form=saddle.density(1),
        tail_form=alpha / mp.gamma(1 - alpha) * V ** (-1 - alpha),
    )


def levy_density(alpha, V, cfg: ILTConfig = ILTConfig()) -> Inversion:
    """Density of the one-sided Levy law with transform e^{-sigma^alpha}"""
    alpha = big(alpha)
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    return ilt(lambda p: mp.exp(-mp.power(p, alpha)), V, cfg)
