"""Exact generating functions of bi-pointed quadrangulations

All series here are exact.  The well-labelled tree generating function R_s(g)
and the chain generating function X_{s,t}(g, g) are known in closed form in
the variable x, where

    g = x (1 + x + x^2) / (1 + 4 x + x^2)^2,

and are turned into g-series by composing with the reversion x(g).  The
bivariate X_{s,t}(g, h) has no closed form and is solved from the chain
splitting relation

    X_{s,t} = 1 + sqrt(g h) R_s(g) R_t(h) X_{s,t} (1 + sqrt(g h) R_{s+1}(g) R_{t+1}(h) X_{s+1,t+1}).

The Voronoi cell generating function is F(s, g, h), the mixed second
difference of log X_{s,t} at t = s.

"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import logging
from math import comb
from typing import Any, Dict, Iterable, List, Optional, Tuple

from mpmath import mp

from voronoicells.config import (
    DEFAULT_PRECISION_BITS,
    PROFILE_EXTRAPOLATION,
    ExtrapolationConfig,
)
from voronoicells.errors import ConvergenceError, DomainError, SeriesError
from voronoicells.extrapolate import Extrapolated, extrapolate_sequence
from voronoicells.numeric import BigReal, big
from voronoicells.series import Coeff, HalfGridSeries, RationalSeries

logger = logging.getLogger(__name__)


def _check_label(name: str, value: int, minimum: int = 0) -> None:
    if not isinstance(value, int) or value < minimum:
        raise DomainError(f"{name} must be an integer >= {minimum}, got {value!r}")


def _one_minus_power(k: int, order: int, var_name: str = "x") -> RationalSeries:
    coeffs = [1] + [0] * order
    if k <= order:
        coeffs[k] -= 1
    return RationalSeries(var_name, coeffs, order)


def _factor_product(
    numerator: Iterable[int], denominator: Iterable[int], order: int
) -> RationalSeries:
    """prod (1 - x^k) over numerator / prod (1 - x^k) over denominator"""
    result = RationalSeries.constant("x", 1, order)
    for k in numerator:
        result = result * _one_minus_power(k, order)
    for k in denominator:
        result = result / _one_minus_power(k, order)
    return result


def g_of_x(order: int) -> RationalSeries:
    """g as a series in x"""
    quad = RationalSeries("x", [1, 4, 1], order)
    return RationalSeries("x", [0, 1, 1, 1], order) / (quad * quad)


@lru_cache(maxsize=8)
def x_of_g(order: int) -> RationalSeries:
    """The reversion x(g) of g(x), to order g^order"""
    _check_label("order", order, 1)
    return g_of_x(order).revert("g")


@lru_cache(maxsize=4)
def _x_powers(order: int) -> Tuple[RationalSeries, ...]:
    logger.debug("building powers of x(g) to order %d", order)
    return tuple(x_of_g(order).powers(order))


def _in_g(f: RationalSeries) -> RationalSeries:
    """Compose a series in x with x(g)"""
    if f.order == 0:
        return RationalSeries("g", f.coeffs, 0)

    powers = _x_powers(f.order)
    acc: List[Coeff] = [f[0]] + [0] * f.order
    for k in range(1, f.order + 1):
        c = f[k]
        if not c:
            continue
        pk = powers[k].coeffs
        for n in range(k, f.order + 1):
            if pk[n]:
                acc[n] += c * pk[n]
    return RationalSeries("g", acc, f.order)


def R_of_x(s: int, order: int) -> RationalSeries:
    """R_s in the variable x"""
    _check_label("s", s)
    if s == 0:
        return RationalSeries("x", [0], order)

    quad = RationalSeries("x", [1, 4, 1], order)
    r_inf = quad / RationalSeries("x", [1, 1, 1], order)
    return r_inf * _factor_product([s, s + 3], [s + 1, s + 2], order)


@lru_cache(maxsize=512)
def R_series(s: int, order: int) -> RationalSeries:
    """R_s(g) to order g^order

    R_0 vanishes identically and R_s(0) = 1 otherwise.  For s > order the
    series coincides with the s -> infinity limit.

    """

    _check_label("s", s)
    _check_label("order", order)
    if s == 0:
        return RationalSeries("g", [0], order)
    return _in_g(R_of_x(min(s, order + 1), order))


def R_critical(s: int) -> Fraction:
    """R_s at the critical point g = 1/12 (x = 1)"""
    _check_label("s", s)
    return Fraction(2 * s * (s + 3), (s + 1) * (s + 2))


def _x_diag_factors(s: int, t: int) -> Tuple[List[int], List[int]]:
    return [3, s + 1, t + 1, s + t + 3], [1, s + 3, t + 3, s + t + 1]


def X_diag(s: int, t: int, order: int) -> RationalSeries:
    """X_{s,t}(g, g) from its closed form"""
    _check_label("s", s)
    _check_label("t", t)
    if s == 0 or t == 0:
        return RationalSeries.constant("g", 1, order)
    num, den = _x_diag_factors(s, t)
    return _in_g(_factor_product(num, den, order))


def X_critical(s: int, t: int) -> Fraction:
    """X_{s,t}(1/12, 1/12)"""
    _check_label("s", s)
    _check_label("t", t)
    if s == 0 or t == 0:
        return Fraction(1)
    return Fraction(
        3 * (s + 1) * (t + 1) * (s + t + 3), (s + 3) * (t + 3) * (s + t + 1)
    )


class MapGFContext:
    """Memoized R and X tables at a fixed doubled truncation order2

    Labels beyond `cutoff` are aliased to it: R_s agrees with its large-s
    limit up to g^(s-1), so every coefficient within order2 is unchanged.
    X tables are cached per label pair at the highest order computed so far
    and truncated on reuse.

    """

    order2: int
    s: Optional[int]
    cutoff: int

    def __init__(self, order2: int, s: Optional[int] = None):
        _check_label("order2", order2)
        if s is not None:
            _check_label("s", s, 1)
        self.order2 = order2
        self.s = s
        self.cutoff = order2 // 2 + 2
        self._r: Dict[int, RationalSeries] = {}
        self._x: Dict[Tuple[int, int], HalfGridSeries] = {}

    def label(self, s: int) -> int:
        return min(s, self.cutoff)

    def R(self, s: int) -> RationalSeries:
        s = self.label(s)
        if s not in self._r:
            self._r[s] = R_series(s, self.order2 // 2)
        return self._r[s]

    def chain_weight(self, s: int, t: int, order2: int) -> HalfGridSeries:
        """sqrt(g h) R_s(g) R_t(h) to doubled order order2"""
        rs, rt = self.R(s), self.R(t)
        coeffs: Dict[Tuple[int, int], Coeff] = {}
        for i, a in enumerate(rs.coeffs):
            if 2 + 2 * i > order2:
                break
            if not a:
                continue
            for j, b in enumerate(rt.coeffs):
                if 2 + 2 * i + 2 * j > order2:
                    break
                if b:
                    coeffs[(1 + 2 * i, 1 + 2 * j)] = a * b
        return HalfGridSeries(coeffs, order2)

    def _cached(self, s: int, t: int, order2: int) -> Optional[HalfGridSeries]:
        entry = self._x.get((s, t))
        if entry is None or entry.order2 < order2:
            return None
        return entry if entry.order2 == order2 else entry.truncate(order2)

    def _solve(self, s: int, t: int, order2: int) -> None:
        if self._cached(s, t, order2) is not None:
            return

        weight = self.chain_weight(s, t, order2)
        if order2 >= 4:
            inner = self._cached(self.label(s + 1), self.label(t + 1), order2 - 4)
            if inner is None:
                raise SeriesError(f"X_{{{s + 1},{t + 1}}} was not solved first")
            split = 1 + self.chain_weight(s + 1, t + 1, order2 - 2) * inner
        else:
            split = HalfGridSeries.constant(1, max(order2 - 2, 0))

        x = (1 - weight * split).inverse()
        residual = x - 1 - weight * x * split
        if residual:
            raise ConvergenceError(
                f"X_{{{s},{t}}} does not satisfy the chain relation at order2 {order2}"
            )
        self._x[(s, t)] = x

    def X(self, s: int, t: int, order2: Optional[int] = None) -> HalfGridSeries:
        """X_{s,t}(g, h) to doubled order order2 (default: the context's)"""
        _check_label("s", s)
        _check_label("t", t)
        order2 = self.order2 if order2 is None else order2
        if order2 > self.order2:
            raise SeriesError(f"order2 {order2} exceeds the context's {self.order2}")

        s, t = self.label(s), self.label(t)
        if s > t:
            return self.X(t, s, order2).transpose()

        cached = self._cached(s, t, order2)
        if cached is not None:
            return cached

        # X_{s+1,t+1} is only needed four doubled degrees lower, so the chain
        # ends once the order runs out.
        chain = []
        k = 0
        while order2 - 4 * k >= 0:
            chain.append((self.label(s + k), self.label(t + k), order2 - 4 * k))
            k += 1
        logger.debug("solving X_{%d,%d} through a chain of %d", s, t, len(chain))
        for ls, lt, o in reversed(chain):
            self._solve(ls, lt, o)
        return self._cached(s, t, order2)

    def F(self, s: Optional[int] = None) -> HalfGridSeries:
        """F(s, g, h) to doubled order order2"""
        s = self.s if s is None else s
        if s is None:
            raise DomainError("no distance s given for F")
        _check_label("s", s, 1)

        # Solve deeper labels first so the shallower chains reuse them.
        diagonal = self.X(s, s) * self.X(s - 1, s - 1)
        mixed = self.X(s - 1, s) * self.X(s, s - 1)
        return (diagonal * mixed.inverse()).log()


@lru_cache(maxsize=4)
def _context(order2: int) -> MapGFContext:
    return MapGFContext(order2)


def X_rec(s: int, t: int, order2: int) -> HalfGridSeries:
    """X_{s,t}(g, h) solved from the chain splitting relation"""
    return _context(order2).X(s, t)


def F_series(s: int, order2: int) -> HalfGridSeries:
    """F(s, g, h) to doubled total degree order2"""
    _check_label("s", s, 1)
    logger.info("computing F(%d, g, h) to doubled order %d", s, order2)
    return _context(order2).F(s)


def _f_factor_counts(s: int) -> Counter:
    """Exponents c_k with F(s, g, g) = sum_k c_k log(1 - x^k)"""
    counts: Counter = Counter()
    for a, b, sign in ((s, s, 1), (s - 1, s - 1, 1), (s - 1, s, -1), (s, s - 1, -1)):
        num, den = _x_diag_factors(a, b)
        for k in num:
            counts[k] += sign
        for k in den:
            counts[k] -= sign
    return Counter({k: c for k, c in counts.items() if c})


def F_diag_x(s: int, order: int) -> RationalSeries:
    """F(s, g, g) as a series in x"""
    _check_label("s", s, 1)
    coeffs: List[Coeff] = [0] * (order + 1)
    for k, c in _f_factor_counts(s).items():
        for m in range(1, order // k + 1):
            coeffs[k * m] -= Fraction(c, m)
    return RationalSeries("x", coeffs, order)


@lru_cache(maxsize=32)
def F_diag(s: int, order: int) -> RationalSeries:
    """F(s, g, g) as a series in g, from the closed form of X_{s,t}(g, g)"""
    _check_label("order", order, 1)
    return _in_g(F_diag_x(s, order))


def G_of(c: Coeff, eps_order: int) -> RationalSeries:
    """g = (1 / 12) (1 - c^4 eps^4 / 36) as an exact series in eps"""
    coeffs: List[Coeff] = [Fraction(1, 12)]
    if eps_order >= 4:
        coeffs += [0, 0, 0, -Fraction(c) ** 4 / 432]
    return RationalSeries("eps", coeffs, eps_order)


@lru_cache(maxsize=8)
def _y_of_u(order: int) -> RationalSeries:
    # With y = 1 - x, the critical scaling 1 - 12 g = a^4 eps^4 / 36 becomes
    # u = a eps = y / sqrt(1 - y + y^2 / 6).
    u_of_y = RationalSeries("y", [1, -1, Fraction(1, 6)], order).sqrt()
    u_of_y = RationalSeries.variable("y", order) / u_of_y
    return u_of_y.revert("u")


def x_of_eps(a: Coeff, order: int) -> RationalSeries:
    """x at g = G(a, eps), as a series in eps"""
    _check_label("order", order, 1)
    y = _y_of_u(order).scale(a)
    return RationalSeries("eps", (1 - y).coeffs, order)


def F_diag_eps(s: int, a: Coeff, order: int) -> Tuple[Fraction, RationalSeries]:
    """F(s, G(a, eps), G(a, eps)) near the critical point

    Returns (q, f) with F = log(q) + f(eps), where q is exact and f has no
    constant term.  Each factor 1 - x^k equals y p_k(y) with p_k(0) = k, and
    the log y terms cancel because the exponents c_k sum to zero.

    """

    _check_label("order", order, 1)
    counts = _f_factor_counts(s)
    if sum(counts.values()) != 0:
        raise SeriesError("factor exponents of F do not cancel")

    constant = Fraction(1)
    in_y = RationalSeries("y", [0], order)
    for k, c in counts.items():
        constant *= Fraction(k) ** c
        p_k = [
            Fraction((-1) ** (j + 1) * comb(k, j), k)
            for j in range(1, min(k, order + 1) + 1)
        ]
        in_y = in_y + c * RationalSeries("y", p_k, order).log()

    in_u = in_y.compose(_y_of_u(order))
    return constant, RationalSeries("eps", in_u.scale(a).coeffs, order)


@dataclass(frozen=True)
class ProfileConstant:
    """Large-N amplitude f3(s) of the number of maps at distance 2 s"""

    s: int
    f3: Fraction

    def __post_init__(self):
        if self.f3 <= 0:
            raise DomainError("profile constants are positive")


def profile_constant(s: int) -> ProfileConstant:
    _check_label("s", s, 1)
    return ProfileConstant(s, Fraction(4 * (2 * s + 1) * (10 * s * s + 10 * s + 1), 35))


@dataclass(frozen=True)
class ProfileRatio:
    """The normalized ratios F_N(s) sqrt(pi) N^(5/2) / ((3/4) 12^N)"""

    s: int
    ratios: Dict[int, BigReal] = field(repr=False)
    estimate: Extrapolated


def profile_ratio(
    s: int,
    N: int,
    cfg: ExtrapolationConfig = PROFILE_EXTRAPOLATION,
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> ProfileRatio:
    """Normalized counts of maps with N faces, extrapolated in N

    The Richardson weights grow like (2N)^order / order!, so the ratios are
    formed and extrapolated with 8 guard bits per order.

    """

    series = F_diag(s, N)
    with mp.workprec(precision_bits + 8 * cfg.order):
        ratios = {
            n: big(Fraction(series[n])) * mp.sqrt(mp.pi) * mp.mpf(n) ** (mp.mpf(5) / 2)
            / (mp.mpf(3) / 4 * mp.mpf(12) ** n)
            for n in range(1, N + 1)
        }
        estimate = extrapolate_sequence(ratios, cfg)
    return ProfileRatio(s, ratios, estimate)


def total_coeff(series: HalfGridSeries, N: int) -> Coeff:
    """Sum of the coefficients of total volume N"""
    return sum(
        (c for (i, j), c in series.items() if i + j == 2 * N),
        start=0,
    )


def estimate_cell_probability(
    s: int,
    n2_doubled: int,
    order2: int,
    cfg: ExtrapolationConfig = ExtrapolationConfig(),
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> Extrapolated:
    """Probability that the second cell has volume n2 in the local limit

    Extrapolates F_{N - n2, n2}(s) / F_N(s) in N.  The volume n2 is given
    doubled since it may be a half-integer.

    """

    _check_label("n2_doubled", n2_doubled)
    series = F_series(s, order2)

    first = (n2_doubled + 1) // 2
    last = order2 // 2
    with mp.workprec(precision_bits):
        ratios = {}
        for n in range(max(first, 1), last + 1):
            total = total_coeff(series, n)
            if total == 0:
                continue
            part = series.coeff(2 * n - n2_doubled, n2_doubled)
            ratios[n] = big(Fraction(part) / total)
        return extrapolate_sequence(ratios, cfg)


def coeff_table_json(s: int, order2: int) -> dict[str, Any]:
    """The coefficients F_{n1,n2}(s) as a JSON-ready document"""
    series = F_series(s, order2)
    entries = []
    for (i, j), c in series.items():
        c = Fraction(c)
        entries.append([i, j, c.numerator, c.denominator])
    return {"s": s, "order2": order2, "entries": entries}


def load_coeff_table(doc: dict[str, Any]) -> Tuple[int, HalfGridSeries]:
    try:
        s, order2 = int(doc["s"]), int(doc["order2"])
        coeffs = {
            (int(i), int(j)): Fraction(int(num), int(den))
            for i, j, num, den in doc["entries"]
        }
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"malformed coefficient table: {e}") from e
    return s, HalfGridSeries(coeffs, order2)
