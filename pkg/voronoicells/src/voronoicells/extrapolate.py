"""Sequence acceleration and small-parameter limit fits"""

from dataclasses import dataclass
import logging
from math import factorial
from typing import Mapping, Sequence

from mpmath import mp

from voronoicells.config import ExtrapolationConfig
from voronoicells.errors import ConvergenceError
from voronoicells.numeric import BigReal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Extrapolated:
    """An extrapolated limit with an error estimate

    `error` is the difference between the two last extrapolation windows.

    """

    value: BigReal
    error: BigReal
    last_index: int


def richardson(values: Sequence, start: int):
    """Richardson extrapolation of A(start), ..., A(start + N)

    Cancels corrections in 1/n up to order N = len(values) - 1, assuming A(n)
    has an asymptotic expansion in powers of 1/n.

    """

    order = len(values) - 1
    if order < 0:
        raise ConvergenceError("Richardson extrapolation needs at least one value")

    acc = mp.zero
    for j, a in enumerate(values):
        n = start + j
        weight = mp.mpf(n**order * (-1) ** (j + order)) / (
            factorial(j) * factorial(order - j)
        )
        acc += a * weight
    return acc


def limit_coeffs(xs: Sequence, ys: Sequence, exponents: Sequence[int]) -> list:
    """Fit ys ~ sum c_k xs^e_k and return the coefficients c_k

    With more points than exponents this is a least-squares fit.

    """

    if len(xs) != len(ys):
        raise ValueError("xs and ys must have the same length")
    if len(xs) < len(exponents):
        raise ConvergenceError(
            f"{len(xs)} points cannot determine {len(exponents)} coefficients"
        )

    mat = mp.matrix([[mp.mpf(x) ** e for e in exponents] for x in xs])
    rhs = mp.matrix(list(ys))
    sol = mp.lu_solve(mat, rhs)
    return [sol[k] for k in range(len(exponents))]


def extrapolate_sequence(
    seq: Mapping[int, BigReal], cfg: ExtrapolationConfig = ExtrapolationConfig()
) -> Extrapolated:
    """Extrapolate a sequence indexed by n to n -> infinity

    Uses the last cfg.order + 1 consecutive terms, and estimates the error as
    the change from the window ending one index earlier.

    """

    if len(seq) < cfg.min_points:
        raise ConvergenceError(
            f"need at least {cfg.min_points} points to extrapolate, got {len(seq)}"
        )

    last = max(seq)
    window = cfg.order + 1
    indices = range(last - window, last + 1)
    missing = [n for n in indices if n not in seq]
    if missing:
        raise ConvergenceError(f"sequence is missing indices {missing}")

    current = richardson([seq[n] for n in indices[1:]], indices[1])
    previous = richardson([seq[n] for n in indices[:-1]], indices[0])
    error = abs(current - previous)
    logger.debug("extrapolated to %s with error %s", mp.nstr(current, 12), mp.nstr(error, 3))
    return Extrapolated(current, error, last)
