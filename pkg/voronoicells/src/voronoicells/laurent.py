"""Truncated Laurent series in S with BigReal coefficients

A LaurentSeriesS holds the coefficients of S^min_order, ..., S^max_order.
Every coefficient carries a magnitude envelope, the sum of the absolute values
of the terms it was accumulated from.  Rounding errors are a small multiple
of 2^-precision_bits times the envelope, so a coefficient far below its
envelope is cancellation noise and is treated as zero when a leading term
has to be inverted.

"""

from fractions import Fraction
import logging
from typing import List, Optional, Sequence

from mpmath import mp, mpc, mpf

from voronoicells.errors import SeriesError
from voronoicells.numeric import big

logger = logging.getLogger(__name__)

Scalar = int | Fraction | mpf | mpc


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction, mpf, mpc)) and not isinstance(value, bool)


def _scalar(value):
    if isinstance(value, Fraction):
        return big(value)
    return mp.mpf(value) if isinstance(value, int) else value


class LaurentSeriesS:
    """A truncated Laurent series in S

    Coefficients of S^n for n > max_order are unknown; coefficients below
    min_order are zero.  An exactly zero series is represented with no
    coefficients and min_order = max_order + 1.

    """

    __slots__ = ("min_order", "max_order", "coeffs", "bounds", "precision_bits")

    def __init__(
        self,
        min_order: int,
        coeffs: Sequence,
        max_order: Optional[int] = None,
        precision_bits: Optional[int] = None,
        bounds: Optional[Sequence] = None,
    ):
        if max_order is None:
            max_order = min_order + len(coeffs) - 1
        width = max_order - min_order + 1
        if width < 0:
            raise SeriesError("max_order is below min_order - 1")

        cs = [_scalar(c) for c in list(coeffs)[:width]]
        cs.extend([mp.zero] * (width - len(cs)))
        if bounds is None:
            bs = [abs(c) for c in cs]
        else:
            bs = [mp.mpf(x) for x in list(bounds)[:width]]
            bs.extend([mp.zero] * (width - len(bs)))

        object.__setattr__(self, "min_order", min_order)
        object.__setattr__(self, "max_order", max_order)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "bounds", tuple(bs))
        object.__setattr__(
            self, "precision_bits", precision_bits if precision_bits else mp.prec
        )

    def __setattr__(self, name, value):
        raise AttributeError("LaurentSeriesS is immutable")

    @classmethod
    def constant(
        cls, value: Scalar, max_order: int, precision_bits: Optional[int] = None
    ) -> "LaurentSeriesS":
        return cls(0, [value], max_order, precision_bits)

    @classmethod
    def variable(
        cls, max_order: int, precision_bits: Optional[int] = None
    ) -> "LaurentSeriesS":
        return cls(1, [1], max_order, precision_bits)

    @classmethod
    def exp_linear(
        cls, k: Scalar, max_order: int, precision_bits: Optional[int] = None
    ) -> "LaurentSeriesS":
        """The Taylor series of e^(k S)"""
        k = _scalar(k)
        coeffs, term = [], mp.one
        for n in range(max_order + 1):
            coeffs.append(term)
            term = term * k / (n + 1)
        return cls(0, coeffs, max_order, precision_bits)

    def __repr__(self) -> str:
        terms = ", ".join(mp.nstr(c, 8) for c in self.coeffs)
        return f"LaurentSeriesS({self.min_order}, [{terms}], max_order={self.max_order})"

    def __len__(self) -> int:
        return len(self.coeffs)

    def coeff(self, n: int):
        """The coefficient of S^n"""
        if n > self.max_order:
            raise SeriesError(f"[S^{n}] is beyond the computed order {self.max_order}")
        if n < self.min_order:
            return mp.zero
        return self.coeffs[n - self.min_order]

    __getitem__ = coeff

    def _bound(self, n: int):
        if n < self.min_order or n > self.max_order:
            return mp.zero
        return self.bounds[n - self.min_order]

    def _new(self, min_order, coeffs, max_order, bounds, other=None) -> "LaurentSeriesS":
        bits = self.precision_bits
        if isinstance(other, LaurentSeriesS):
            bits = min(bits, other.precision_bits)
        return LaurentSeriesS(min_order, coeffs, max_order, bits, bounds)

    def _promote(self, other) -> "LaurentSeriesS":
        if isinstance(other, LaurentSeriesS):
            return other
        if _is_scalar(other):
            return LaurentSeriesS.constant(other, self.max_order, self.precision_bits)
        raise TypeError(f"cannot combine LaurentSeriesS with {type(other).__name__}")

    def truncate(self, max_order: int) -> "LaurentSeriesS":
        if max_order > self.max_order:
            raise SeriesError("cannot extend a truncated series")
        keep = max(0, max_order - self.min_order + 1)
        return self._new(
            min(self.min_order, max_order + 1),
            self.coeffs[:keep],
            max_order,
            self.bounds[:keep],
        )

    def shift(self, k: int) -> "LaurentSeriesS":
        """Multiply by S^k"""
        return self._new(
            self.min_order + k, self.coeffs, self.max_order + k, self.bounds
        )

    def is_negligible(self, n: int) -> bool:
        c = self.coeff(n)
        if c == 0:
            return True
        threshold = mp.ldexp(self._bound(n), -((3 * self.precision_bits) // 4))
        return abs(c) <= threshold

    def normalized(self) -> "LaurentSeriesS":
        """Drop leading coefficients that are pure cancellation noise"""
        drop = 0
        while drop < len(self.coeffs) and self.is_negligible(self.min_order + drop):
            drop += 1
        if drop == 0:
            return self
        logger.debug("dropping %d negligible leading coefficients", drop)
        return self._new(
            self.min_order + drop,
            self.coeffs[drop:],
            self.max_order,
            self.bounds[drop:],
        )

    def valuation(self) -> Optional[int]:
        """Order of the first non-negligible coefficient, None for zero"""
        s = self.normalized()
        return s.min_order if s.coeffs else None

    def __neg__(self) -> "LaurentSeriesS":
        return self._new(
            self.min_order, [-c for c in self.coeffs], self.max_order, self.bounds
        )

    def __pos__(self) -> "LaurentSeriesS":
        return self

    def __add__(self, other) -> "LaurentSeriesS":
        try:
            other = self._promote(other)
        except TypeError:
            return NotImplemented
        lo = min(self.min_order, other.min_order)
        hi = min(self.max_order, other.max_order)
        coeffs = [
            (self.coeff(n) if n >= self.min_order else mp.zero)
            + (other.coeff(n) if n >= other.min_order else mp.zero)
            for n in range(lo, hi + 1)
        ]
        bounds = [self._bound(n) + other._bound(n) for n in range(lo, hi + 1)]
        return self._new(lo, coeffs, hi, bounds, other)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentSeriesS":
        try:
            other = self._promote(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LaurentSeriesS":
        try:
            other = self._promote(other)
        except TypeError:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "LaurentSeriesS":
        if _is_scalar(other):
            c = _scalar(other)
            return self._new(
                self.min_order,
                [c * x for x in self.coeffs],
                self.max_order,
                [abs(c) * x for x in self.bounds],
            )
        if not isinstance(other, LaurentSeriesS):
            return NotImplemented

        lo = self.min_order + other.min_order
        hi = min(
            self.max_order + other.min_order, other.max_order + self.min_order
        )
        a, b = self.coeffs, other.coeffs
        ea, eb = self.bounds, other.bounds
        coeffs: List = []
        bounds: List = []
        for k in range(hi - lo + 1):
            acc, env = mp.zero, mp.zero
            for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
                acc += a[i] * b[k - i]
                env += ea[i] * eb[k - i]
            coeffs.append(acc)
            bounds.append(env)
        return self._new(lo, coeffs, hi, bounds, other)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeriesS":
        """1/self, after dropping negligible leading terms

        If self = S^m (a_0 + a_1 S + ...) is known to relative order L, the
        inverse is S^-m (b_0 + b_1 S + ...) known to the same relative order.

        """

        s = self.normalized()
        if not s.coeffs:
            raise SeriesError("inverse of a series that vanishes to working precision")

        a, ea = s.coeffs, s.bounds
        a0 = a[0]
        inv_a0 = 1 / a0
        rel0 = ea[0] / abs(a0)
        out = [inv_a0]
        env = [abs(inv_a0) * rel0]
        for n in range(1, len(a)):
            acc, e = mp.zero, mp.zero
            for k in range(1, n + 1):
                acc += a[k] * out[n - k]
                e += ea[k] * env[n - k]
            b = -acc * inv_a0
            out.append(b)
            env.append(e * abs(inv_a0) + abs(b) * rel0)
        length = len(a) - 1
        return s._new(-s.min_order, out, -s.min_order + length, env)

    def __truediv__(self, other) -> "LaurentSeriesS":
        if _is_scalar(other):
            return self * (1 / _scalar(other))
        if not isinstance(other, LaurentSeriesS):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "LaurentSeriesS":
        if not _is_scalar(other):
            return NotImplemented
        return self.inverse() * _scalar(other)

    def __pow__(self, n: int) -> "LaurentSeriesS":
        if not isinstance(n, int):
            raise SeriesError("only integer powers are supported; use sqrt()")
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeriesS.constant(1, self.max_order - self.min_order, self.precision_bits)

        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def sqrt(self) -> "LaurentSeriesS":
        """The square root with a positive leading coefficient

        Requires an even leading order and a positive real leading
        coefficient, so that the branch is the one positive for small
        positive S.

        """

        s = self.normalized()
        if not s.coeffs:
            return s
        if s.min_order % 2:
            raise SeriesError(f"leading order {s.min_order} is odd")
        a, ea = s.coeffs, s.bounds
        if isinstance(a[0], mpc) or a[0] <= 0:
            raise SeriesError("square root needs a positive leading coefficient")

        r0 = mp.sqrt(a[0])
        rel0 = ea[0] / a[0]
        out = [r0]
        env = [r0 * rel0]
        for n in range(1, len(a)):
            acc, e = a[n], ea[n]
            for k in range(1, n):
                acc -= out[k] * out[n - k]
                e += env[k] * env[n - k]
            out.append(acc / (2 * r0))
            env.append(e / (2 * r0) + abs(out[-1]) * rel0)
        half = s.min_order // 2
        return s._new(half, out, half + len(a) - 1, env)
