"""Scalar layer: configurable-precision reals and complexes

BigReal and BigComplex are mpmath's mpf and mpc.  mpmath keeps its working
precision in a process-global context, so every evaluator here takes its
precision explicitly and runs inside `mp.workprec`.

"""

from fractions import Fraction
import logging
import math
from typing import Callable, TypeAlias

from mpmath import mp, mpc, mpf

from voronoicells.errors import PrecisionError

logger = logging.getLogger(__name__)

BigReal: TypeAlias = mpf
BigComplex: TypeAlias = mpc

# Beyond this many extra bits a cancellation is treated as hopeless.
MAX_GUARD_BITS = 4096


def big(value) -> BigReal:
    """Converts an int, Fraction, string or mpf to a BigReal

    Fractions are converted by exact division at the current precision rather
    than through a float.

    """

    if isinstance(value, Fraction):
        return mpf(value.numerator) / value.denominator
    return mpf(value)


def bits_below(x, reference) -> int:
    """Number of bits by which |x| is smaller than |reference|"""
    if x == 0:
        return MAX_GUARD_BITS
    if reference == 0:
        return 0
    return max(0, int(math.ceil(float(mp.log(abs(reference) / abs(x), 2)))))


def stable_eval(
    fn: Callable[[], BigReal | BigComplex],
    precision_bits: int,
    guard_bits: int = 32,
    what: str = "value",
):
    """Evaluate fn() until two precisions agree

    Evaluates at precision_bits + guard and at precision_bits + 2 * guard,
    doubling the guard until both results agree to precision_bits.  The more
    precise result is returned, rounded to precision_bits.  Raises a
    PrecisionError once the guard exceeds MAX_GUARD_BITS.

    """

    guard = max(guard_bits, 16)
    while guard <= MAX_GUARD_BITS:
        with mp.workprec(precision_bits + guard):
            low = fn()
        with mp.workprec(precision_bits + 2 * guard):
            high = fn()
            scale = max(abs(high), abs(low))
            if scale == 0 or abs(high - low) <= scale * mp.ldexp(1, -precision_bits):
                break
        logger.debug(
            "%s unstable with %d guard bits, retrying with %d",
            what,
            guard,
            2 * guard,
        )
        guard *= 2
    else:
        raise PrecisionError(
            f"{what} did not stabilise within {MAX_GUARD_BITS} guard bits"
        )

    with mp.workprec(precision_bits):
        return +high


def relative_error(value, reference) -> BigReal:
    if reference == 0:
        return abs(value)
    return abs(value - reference) / abs(reference)


def nstr(value, digits: int = 20) -> str:
    """Decimal string of a BigReal suitable for CSV and JSON artifacts"""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return mp.nstr(value, digits, strip_zeros=False, min_fixed=-6, max_fixed=12)
