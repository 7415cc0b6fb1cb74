"""Exact truncated power series

RationalSeries is a dense univariate series over the rationals.  HalfGridSeries
is a sparse bivariate series in (g, h) whose exponents may be half-integers;
its keys are the doubled exponents (2 n1, 2 n2), whose sum is always even.

Both types are immutable.  Binary operations truncate to the smaller of the
two operands' orders and never extend a truncation; bivariate products also
keep the terms that a factor's valuation lets the other factor determine
exactly.  Coefficients are ints whenever possible and Fractions otherwise;
floating-point values are rejected.

"""

from fractions import Fraction
from math import isqrt
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from voronoicells.errors import SeriesError

Coeff = int | Fraction


def _norm(c) -> Coeff:
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    raise SeriesError(f"series coefficients must be exact rationals, got {c!r}")


def _div_exact(x: Coeff, d: Coeff) -> Coeff:
    if d == 1:
        return x
    if d == -1:
        return -x
    return _norm(Fraction(x) / d)


def _rational_sqrt(c: Coeff) -> Coeff:
    c = Fraction(c)
    if c <= 0:
        raise SeriesError(f"constant term {c} has no positive square root")
    num, den = isqrt(c.numerator), isqrt(c.denominator)
    if num * num != c.numerator or den * den != c.denominator:
        raise SeriesError(f"constant term {c} is not the square of a rational")
    return _norm(Fraction(num, den))


def _mul_dense(a: Sequence[Coeff], b: Sequence[Coeff], order: int) -> List[Coeff]:
    out: List[Coeff] = [0] * (order + 1)
    for i in range(min(order, len(a) - 1) + 1):
        ai = a[i]
        if not ai:
            continue
        for j in range(min(order - i, len(b) - 1) + 1):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


class RationalSeries:
    """A truncated power series with exact rational coefficients

    The series is known up to and including x^order, where x is the variable
    named by `var_name`.

    """

    __slots__ = ("var_name", "order", "coeffs")

    var_name: str
    order: int
    coeffs: Tuple[Coeff, ...]

    def __init__(self, var_name: str, coeffs: Sequence, order: Optional[int] = None):
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise SeriesError("series order must be nonnegative")

        cs = [_norm(c) for c in list(coeffs)[: order + 1]]
        cs.extend([0] * (order + 1 - len(cs)))
        object.__setattr__(self, "var_name", var_name)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("RationalSeries is immutable")

    @classmethod
    def constant(cls, var_name: str, value: Coeff, order: int) -> "RationalSeries":
        return cls(var_name, [value], order)

    @classmethod
    def variable(cls, var_name: str, order: int) -> "RationalSeries":
        return cls(var_name, [0, 1], order)

    def __repr__(self) -> str:
        terms = ", ".join(str(c) for c in self.coeffs)
        return f"RationalSeries({self.var_name!r}, [{terms}])"

    def __getitem__(self, n: int) -> Coeff:
        if n < 0:
            return 0
        if n > self.order:
            raise SeriesError(f"[{self.var_name}^{n}] is beyond order {self.order}")
        return self.coeffs[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return (
            self.var_name == other.var_name
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.var_name, self.order, self.coeffs))

    def _promote(self, other) -> "RationalSeries":
        if isinstance(other, RationalSeries):
            if other.var_name != self.var_name:
                raise SeriesError(
                    f"variable mismatch: {self.var_name!r} vs {other.var_name!r}"
                )
            return other
        return RationalSeries.constant(self.var_name, _norm(other), self.order)

    def truncate(self, order: int) -> "RationalSeries":
        if order > self.order:
            raise SeriesError(
                f"cannot extend a series of order {self.order} to {order}"
            )
        return RationalSeries(self.var_name, self.coeffs, order)

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, or None for zero"""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def __neg__(self) -> "RationalSeries":
        return RationalSeries(self.var_name, [-c for c in self.coeffs], self.order)

    def __add__(self, other) -> "RationalSeries":
        other = self._promote(other)
        order = min(self.order, other.order)
        return RationalSeries(
            self.var_name,
            [self.coeffs[n] + other.coeffs[n] for n in range(order + 1)],
            order,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalSeries":
        return self + (-self._promote(other))

    def __rsub__(self, other) -> "RationalSeries":
        return self._promote(other) - self

    def __mul__(self, other) -> "RationalSeries":
        if not isinstance(other, RationalSeries):
            c = _norm(other)
            return RationalSeries(
                self.var_name, [c * x for x in self.coeffs], self.order
            )
        other = self._promote(other)
        order = min(self.order, other.order)
        return RationalSeries(
            self.var_name, _mul_dense(self.coeffs, other.coeffs, order), order
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalSeries":
        other = self._promote(other)
        order = min(self.order, other.order)
        b0 = other.coeffs[0]
        if b0 == 0:
            raise SeriesError("division by a series with zero constant term")

        a, b = self.coeffs, other.coeffs
        out: List[Coeff] = []
        for n in range(order + 1):
            s = a[n]
            for k in range(1, n + 1):
                if b[k]:
                    s -= b[k] * out[n - k]
            out.append(_div_exact(s, b0))
        return RationalSeries(self.var_name, out, order)

    def __rtruediv__(self, other) -> "RationalSeries":
        return self._promote(other) / self

    def __pow__(self, n: int) -> "RationalSeries":
        if not isinstance(n, int):
            raise SeriesError("only integer powers are supported; use sqrt()")
        if n < 0:
            return (1 / self) ** (-n)

        result = RationalSeries.constant(self.var_name, 1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "RationalSeries":
        """Multiply by var^k, dropping terms beyond the order

        A negative k divides by var^(-k), which requires the first -k
        coefficients to vanish and lowers the order accordingly.

        """

        if k >= 0:
            return RationalSeries(
                self.var_name, [0] * k + list(self.coeffs), self.order
            )
        if any(self.coeffs[: -k]):
            raise SeriesError(f"series is not divisible by {self.var_name}^{-k}")
        return RationalSeries(self.var_name, self.coeffs[-k:], self.order + k)

    def scale(self, c: Coeff) -> "RationalSeries":
        """Substitute var -> c * var"""
        c = _norm(c)
        out, p = [], 1
        for x in self.coeffs:
            out.append(x * p)
            p *= c
        return RationalSeries(self.var_name, out, self.order)

    def derivative(self) -> "RationalSeries":
        if self.order == 0:
            return RationalSeries(self.var_name, [0], 0)
        return RationalSeries(
            self.var_name,
            [n * self.coeffs[n] for n in range(1, self.order + 1)],
            self.order - 1,
        )

    def integral(self) -> "RationalSeries":
        return RationalSeries(
            self.var_name,
            [0] + [_div_exact(c, n + 1) for n, c in enumerate(self.coeffs)],
            self.order + 1,
        )

    def log(self) -> "RationalSeries":
        if self.coeffs[0] != 1:
            raise SeriesError("log requires a constant term equal to 1")
        if self.order == 0:
            return RationalSeries(self.var_name, [0], 0)
        return (self.derivative() / self.truncate(self.order - 1)).integral()

    def exp(self) -> "RationalSeries":
        if self.coeffs[0] != 0:
            raise SeriesError("exp requires a zero constant term")

        f = self.coeffs
        e: List[Coeff] = [1]
        for n in range(1, self.order + 1):
            s = 0
            for k in range(1, n + 1):
                if f[k]:
                    s += k * f[k] * e[n - k]
            e.append(_div_exact(s, n))
        return RationalSeries(self.var_name, e, self.order)

    def sqrt(self) -> "RationalSeries":
        f = self.coeffs
        s0 = _rational_sqrt(f[0])
        s: List[Coeff] = [s0]
        for n in range(1, self.order + 1):
            acc = f[n]
            for k in range(1, n):
                acc -= s[k] * s[n - k]
            s.append(_div_exact(acc, 2 * s0))
        return RationalSeries(self.var_name, s, self.order)

    def powers(self, n: int) -> List["RationalSeries"]:
        """The list [1, self, self^2, ..., self^n]"""
        out = [RationalSeries.constant(self.var_name, 1, self.order)]
        for _ in range(n):
            out.append(out[-1] * self)
        return out

    def compose(self, inner: "RationalSeries") -> "RationalSeries":
        """The series self(inner), with inner(0) = 0

        The result is expressed in inner's variable.

        """

        if inner.coeffs[0] != 0:
            raise SeriesError("composition requires an inner series with f(0) = 0")

        order = min(self.order, inner.order)
        inner = inner.truncate(order)
        acc: List[Coeff] = [0] * (order + 1)
        power = RationalSeries.constant(inner.var_name, 1, order)
        for k in range(order + 1):
            c = self.coeffs[k]
            if c:
                for n in range(k, order + 1):
                    if power.coeffs[n]:
                        acc[n] += c * power.coeffs[n]
            if k < order:
                power = power * inner
        return RationalSeries(inner.var_name, acc, order)

    def revert(self, var_name: Optional[str] = None) -> "RationalSeries":
        """The compositional inverse of self

        Requires f(0) = 0 and f'(0) != 0.  Uses Lagrange inversion: the n-th
        coefficient of the inverse is [z^(n-1)] (z / f(z))^n / n.  The result
        is expressed in `var_name`, defaulting to the series' own variable.

        """

        if self.coeffs[0] != 0:
            raise SeriesError("reversion requires f(0) = 0")
        if self.order < 1 or self.coeffs[1] == 0:
            raise SeriesError("reversion requires a nonzero linear coefficient")

        var_name = var_name or self.var_name
        order = self.order
        h = 1 / self.shift(-1)
        out: List[Coeff] = [0]
        power = RationalSeries.constant(self.var_name, 1, order - 1)
        for n in range(1, order + 1):
            power = power * h
            out.append(_div_exact(power.coeffs[n - 1], n))
        return RationalSeries(var_name, out, order)


def _by_degree(coeffs: Mapping[Tuple[int, int], Coeff]) -> Dict[int, Dict]:
    out: Dict[int, Dict] = {}
    for (i, j), c in coeffs.items():
        out.setdefault(i + j, {})[(i, j)] = c
    return out


def _accumulate_product(acc: Dict, a: Mapping, b: Mapping) -> None:
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            acc[key] = acc.get(key, 0) + c1 * c2


class HalfGridSeries:
    """A truncated bivariate series in (g, h) on the half-integer grid

    Keys are doubled exponents (2 n1, 2 n2) with an even sum, nonnegative
    entries, and a sum of at most order2.  Absent keys are zero.

    """

    __slots__ = ("order2", "_coeffs")

    order2: int

    def __init__(self, coeffs: Mapping[Tuple[int, int], Coeff], order2: int):
        if order2 < 0:
            raise SeriesError("order2 must be nonnegative")

        stored: Dict[Tuple[int, int], Coeff] = {}
        for (i, j), c in coeffs.items():
            if i < 0 or j < 0:
                raise SeriesError(f"negative exponent in key {(i, j)}")
            if (i + j) % 2:
                raise SeriesError(f"key {(i, j)} has a half-integer total volume")
            if i + j > order2:
                continue
            c = _norm(c)
            if c:
                stored[(i, j)] = c
        object.__setattr__(self, "order2", order2)
        object.__setattr__(self, "_coeffs", stored)

    def __setattr__(self, name, value):
        raise AttributeError("HalfGridSeries is immutable")

    @classmethod
    def constant(cls, value: Coeff, order2: int) -> "HalfGridSeries":
        return cls({(0, 0): value}, order2)

    @classmethod
    def sqrt_gh(cls, order2: int) -> "HalfGridSeries":
        """The monomial (g h)^(1/2)"""
        return cls({(1, 1): 1}, order2)

    def __repr__(self) -> str:
        return f"HalfGridSeries({dict(sorted(self._coeffs.items()))!r}, {self.order2})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, HalfGridSeries):
            return NotImplemented
        return self.order2 == other.order2 and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.order2, frozenset(self._coeffs.items())))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def items(self) -> Iterator[Tuple[Tuple[int, int], Coeff]]:
        return iter(sorted(self._coeffs.items()))

    def coeff(self, n1_doubled: int, n2_doubled: int) -> Coeff:
        if n1_doubled + n2_doubled > self.order2:
            raise SeriesError(
                f"coefficient ({n1_doubled}, {n2_doubled}) is beyond order2 {self.order2}"
            )
        return self._coeffs.get((n1_doubled, n2_doubled), 0)

    def valuation(self) -> int:
        """Lowest doubled total degree present

        A zero series has no known term up to order2, so its valuation is
        the first even degree beyond the truncation.

        """

        if not self._coeffs:
            return self.order2 + 2 - self.order2 % 2
        return min(i + j for i, j in self._coeffs)

    def truncate(self, order2: int) -> "HalfGridSeries":
        if order2 > self.order2:
            raise SeriesError(f"cannot extend order2 {self.order2} to {order2}")
        return HalfGridSeries(self._coeffs, order2)

    def transpose(self) -> "HalfGridSeries":
        """Exchange the roles of g and h"""
        return HalfGridSeries(
            {(j, i): c for (i, j), c in self._coeffs.items()}, self.order2
        )

    def _promote(self, other) -> "HalfGridSeries":
        if isinstance(other, HalfGridSeries):
            return other
        return HalfGridSeries.constant(_norm(other), self.order2)

    def __neg__(self) -> "HalfGridSeries":
        return HalfGridSeries({k: -c for k, c in self._coeffs.items()}, self.order2)

    def __add__(self, other) -> "HalfGridSeries":
        other = self._promote(other)
        order2 = min(self.order2, other.order2)
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return HalfGridSeries(out, order2)

    __radd__ = __add__

    def __sub__(self, other) -> "HalfGridSeries":
        return self + (-self._promote(other))

    def __rsub__(self, other) -> "HalfGridSeries":
        return self._promote(other) - self

    def __mul__(self, other) -> "HalfGridSeries":
        if not isinstance(other, HalfGridSeries):
            c = _norm(other)
            return HalfGridSeries(
                {k: c * v for k, v in self._coeffs.items()}, self.order2
            )

        # A factor of doubled valuation v only needs the other factor up to
        # order2 - v, so the product is known beyond the smaller order.
        order2 = min(
            self.order2 + other.valuation(), other.order2 + self.valuation()
        )
        rhs = sorted(other._coeffs.items(), key=lambda kv: kv[0][0] + kv[0][1])
        out: Dict[Tuple[int, int], Coeff] = {}
        for (i1, j1), c1 in self._coeffs.items():
            budget = order2 - i1 - j1
            if budget < 0:
                continue
            for (i2, j2), c2 in rhs:
                if i2 + j2 > budget:
                    break
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + c1 * c2
        return HalfGridSeries(out, order2)

    __rmul__ = __mul__

    def inverse(self) -> "HalfGridSeries":
        x0 = self._coeffs.get((0, 0), 0)
        if x0 == 0:
            raise SeriesError("inverse of a series with zero constant term")

        parts = _by_degree(self._coeffs)
        z: Dict[int, Dict] = {0: {(0, 0): _div_exact(1, x0)}}
        for d in range(2, self.order2 + 1, 2):
            acc: Dict = {}
            for e, part in parts.items():
                if e == 0 or e > d or (d - e) not in z:
                    continue
                _accumulate_product(acc, part, z[d - e])
            z[d] = {k: _div_exact(-v, x0) for k, v in acc.items() if v}

        out: Dict = {}
        for part in z.values():
            out.update(part)
        return HalfGridSeries(out, self.order2)

    def __truediv__(self, other) -> "HalfGridSeries":
        return self * self._promote(other).inverse()

    def euler(self) -> "HalfGridSeries":
        """Apply the total-degree Euler operator (multiply by 2 n1 + 2 n2)"""
        return HalfGridSeries(
            {(i, j): (i + j) * c for (i, j), c in self._coeffs.items()}, self.order2
        )

    def log(self) -> "HalfGridSeries":
        """Logarithm of a series with constant term 1

        Uses log X = E^-1 (E(X) / X), where E is the doubled-degree Euler
        operator, inverted degree by degree.

        """

        if self._coeffs.get((0, 0), 0) != 1:
            raise SeriesError("log requires a constant term equal to 1")

        ratio = self.euler() * self.inverse()
        return HalfGridSeries(
            {(i, j): _div_exact(c, i + j) for (i, j), c in ratio._coeffs.items() if i + j},
            self.order2,
        )

    def diagonal(self, var_name: str = "g") -> RationalSeries:
        """Specialise h = g, giving a series in g of order order2 // 2"""
        order = self.order2 // 2
        out: List[Coeff] = [0] * (order + 1)
        for (i, j), c in self._coeffs.items():
            out[(i + j) // 2] += c
        return RationalSeries(var_name, out, order)
