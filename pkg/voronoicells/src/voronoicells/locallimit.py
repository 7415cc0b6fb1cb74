"""Contour integrals of the local limit

The large-s law of the volume fraction phi is read from integrals

    (1 / 2 i pi) int_C (-a^3 / 9) e^{a^4 / 36} K(a) da

over a contour C made of two half-lines leaving the origin, along which
a^4 has a negative real part.  For mu >= 0 the half-lines sit at angles
+/- pi/4, and K(a) = (a^4 - 36 mu)^{3/2} has a cut on [0, (36 mu)^{1/4}]
which the contour goes around.  For mu < 0 the branch points move onto the
+/- pi/4 lines, so the half-lines are tilted to +/- 3 pi/16 and no excursion
is needed.

"""

from dataclasses import dataclass
import logging
from typing import Callable, Dict

from mpmath import mp

from voronoicells.config import ContourSpec
from voronoicells.errors import ConvergenceError, DomainError
from voronoicells.numeric import BigReal, big

logger = logging.getLogger(__name__)

KINDS = ("a6", "quartic_shift", "constant", "quartic")

# relative quadrature error above which a contour integral is rejected
QUADRATURE_TOLERANCE = 1e-25


@dataclass(frozen=True)
class ContourIntegral:
    """A contour integral with its quadrature error estimate"""

    value: BigReal
    error: BigReal
    imag_residue: BigReal


def _integrand_K(kind: str, mu) -> Callable:
    if kind == "a6":
        return lambda a: a**6
    if kind == "quartic_shift":
        # a^6 (1 - 36 mu / a^4)^{3/2} with the principal power: the branch
        # that behaves as a^6 at infinity and has its cuts off the contour
        return lambda a: a**6 * mp.power(1 - 36 * mu / a**4, mp.mpf(3) / 2)
    if kind == "constant":
        return lambda a: mp.one
    if kind == "quartic":
        return lambda a: a**4
    raise DomainError(f"unknown integrand kind {kind!r}; expected one of {KINDS}")


def _ray_angle(mu) -> BigReal:
    if mu < 0:
        return 3 * mp.pi / 16
    return mp.pi / 4


def _quad(f: Callable, length, spec: ContourSpec):
    points = mp.linspace(0, length, spec.node_count + 1)
    return mp.quad(f, points, method=spec.quadrature, error=True)


def _excursion(kind: str, mu, spec: ContourSpec):
    """Jump of the integrand across the cut on [0, (36 mu)^{1/4}]

    Only (a^4 - 36 mu)^{3/2} has a cut there.  Going out above and back
    below the real axis picks up
    (1 / 18 pi) int_0^{6 sqrt mu} z^4 e^{mu - z^2 / 36} dz
    after substituting a^4 = 36 mu - z^2.

    """

    if kind != "quartic_shift" or mu <= 0:
        return mp.zero, mp.zero
    top = 6 * mp.sqrt(mu)
    value, err = _quad(lambda z: z**4 * mp.exp(mu - z * z / 36), top, spec)
    return value / (18 * mp.pi), err / (18 * mp.pi)


def _contour(kind: str, mu, spec: ContourSpec):
    K = _integrand_K(kind, mu)
    theta = _ray_angle(mu)
    upper = mp.expjpi(theta / mp.pi)
    lower = mp.conj(upper)

    def f(a):
        return -(a**3) / 9 * mp.exp(a**4 / 36) * K(a)

    # in along the upper ray, out along the lower one
    up, up_err = _quad(lambda t: f(t * upper) * upper, spec.ray_length, spec)
    down, down_err = _quad(lambda t: f(t * lower) * lower, spec.ray_length, spec)
    total = (down - up) / (2j * mp.pi)
    error = (abs(up_err) + abs(down_err)) / (2 * mp.pi)

    jump, jump_err = _excursion(kind, mu, spec)
    return total + jump, error + jump_err


def contour_integral(
    kind: str, mu, spec: ContourSpec = ContourSpec()
) -> ContourIntegral:
    """(1 / 2 i pi) int (-a^3 / 9) e^{a^4 / 36} K(a) da along the local limit contour

    `kind` selects K: "a6" for a^6, "quartic_shift" for (a^4 - 36 mu)^{3/2},
    and "constant" or "quartic" for the integrands 1 and a^4 whose integrals
    vanish by symmetry.  The integral is real; an imaginary part above the
    quadrature tolerance indicates a branch or contour error and raises a
    ConvergenceError.

    """

    with mp.workprec(spec.precision_bits):
        mu = big(spec.mu if mu is None else mu)
        value, error = _contour(kind, mu, spec)
        tol = max(10 * error, mp.ldexp(1, -spec.precision_bits // 2))
        scale = max(abs(value.real), mp.one)
        if abs(value.imag) > tol * scale:
            raise ConvergenceError(
                f"{kind} contour integral at mu={mp.nstr(mu, 10)} has imaginary "
                f"part {mp.nstr(value.imag, 5)}"
            )
        if error > QUADRATURE_TOLERANCE * scale:
            raise ConvergenceError(
                f"{kind} contour quadrature did not converge: error {mp.nstr(error, 5)}"
            )
        logger.debug(
            "%s contour integral at mu=%s: %s (error %s)",
            kind,
            mp.nstr(mu, 8),
            mp.nstr(value.real, 20),
            mp.nstr(error, 3),
        )
        return ContourIntegral(+value.real, +error, abs(value.imag))


def phi_mgf(mu, spec: ContourSpec = ContourSpec()) -> BigReal:
    """Large-s limit of E[e^{mu phi}] for the volume fraction phi = n2 / N

    The ratio of the a^6 plus quartic_shift integrals at mu to the same sum
    at mu = 0.  It equals (1 + e^mu) / 2: the second cell takes a vanishing
    or a full fraction of the volume with probability 1/2 each.

    """

    numerator = contour_integral("a6", mu, spec).value
    numerator += contour_integral("quartic_shift", mu, spec).value
    denominator = contour_integral("a6", 0, spec).value
    denominator += contour_integral("quartic_shift", 0, spec).value
    with mp.workprec(spec.precision_bits):
        return numerator / denominator


def vanishing_integrals(mu, spec: ContourSpec = ContourSpec()) -> Dict[str, BigReal]:
    """The constant and a^4 integrals, which vanish by symmetry"""
    return {
        kind: contour_integral(kind, mu, spec).value
        for kind in ("constant", "quartic")
    }


def expected_integral(kind: str, mu) -> BigReal:
    """Closed forms: 162 / sqrt(pi) for a6 and 162 e^mu / sqrt(pi) for quartic_shift"""
    mu = big(mu)
    if kind == "a6":
        return 162 / mp.sqrt(mp.pi)
    if kind == "quartic_shift":
        return 162 * mp.exp(mu) / mp.sqrt(mp.pi)
    if kind in ("constant", "quartic"):
        return mp.zero
    raise DomainError(f"unknown integrand kind {kind!r}; expected one of {KINDS}")
