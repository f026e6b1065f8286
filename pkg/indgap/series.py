"""
Truncated power series.

IntSeries carries exact integer coefficients (expansions of 1/I and f_u at
the origin); FloatSeries carries mpmath reals at a declared precision
(θ-expansions of majorants).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Any, Dict, List, Sequence, Tuple, Union

import mpmath

from .errors import SeriesError
from .indpoly import IntPoly, Rational

logger = logging.getLogger(__name__)

DEFAULT_FLOAT_PRECISION = 256


@dataclass(frozen=True)
class IntSeries:
    """Exact series truncated at order K = len(coeffs) - 1."""

    coeffs: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k]

    def to_dict(self) -> Dict[str, Any]:
        return {'coeffs': [str(c) for c in self.coeffs], 'order': self.order}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'IntSeries':
        coeffs = tuple(int(c) for c in data['coeffs'])
        if len(coeffs) != int(data['order']) + 1:
            raise SeriesError(f"Series order {data['order']} does not match {len(coeffs)} coefficients")
        return cls(coeffs)


@dataclass(frozen=True)
class FloatSeries:
    """Series with mpf coefficients computed at `precision` bits."""

    coeffs: Tuple[Any, ...]
    precision: int = DEFAULT_FLOAT_PRECISION

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Any:
        return self.coeffs[k]


SeriesLike = Union[IntPoly, IntSeries, Sequence[int]]


def _padded(s: SeriesLike, K: int) -> List[int]:
    coeffs = list(s.coeffs) if isinstance(s, (IntPoly, IntSeries)) else list(s)
    return (coeffs + [0] * (K + 1))[:K + 1]


def series_div(a: SeriesLike, b: SeriesLike, K: int) -> IntSeries:
    """Exact a/b through order K; b must have constant term 1."""
    den = _padded(b, K)
    if den[0] != 1:
        raise SeriesError(f"Divisor constant term must be 1, got {den[0]}")
    num = _padded(a, K)
    q: List[int] = []
    for k in range(K + 1):
        q.append(num[k] - sum(den[i] * q[k - i] for i in range(1, k + 1) if den[i]))
    return IntSeries(tuple(q))


def series_inverse(p: SeriesLike, K: int) -> IntSeries:
    """1/p through order K."""
    return series_div([1], p, K)


def series_mul(s: SeriesLike, t: SeriesLike, K: int) -> IntSeries:
    a, b = _padded(s, K), _padded(t, K)
    return IntSeries(tuple(sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(K + 1)))


def taylor_shift(p: IntPoly, c: Rational) -> List[Fraction]:
    """Coefficients of p(z + c), i.e. p^(k)(c)/k!, exactly."""
    c = Fraction(c)
    powers = [Fraction(1)]
    for _ in range(p.degree):
        powers.append(powers[-1] * c)
    return [
        sum((p[i] * comb(i, k) * powers[i - k] for i in range(k, p.degree + 1)), Fraction(0))
        for k in range(p.degree + 1)
    ]


def taylor_shift_float(p: IntPoly, c: Any, precision: int = DEFAULT_FLOAT_PRECISION) -> List[Any]:
    """p^(k)(c)/k! for an mpmath point c (real or complex)."""
    with mpmath.workprec(precision):
        c = mpmath.mpmathify(c)
        coeffs = [mpmath.mpmathify(a) for a in p.coeffs]
        # repeated synthetic division by (z - c)
        for i in range(len(coeffs)):
            for j in range(len(coeffs) - 2, i - 1, -1):
                coeffs[j] += c * coeffs[j + 1]
        return coeffs


def _precision_of(*series: FloatSeries) -> int:
    return max(s.precision for s in series)


def cos_series(K: int, precision: int = DEFAULT_FLOAT_PRECISION) -> FloatSeries:
    with mpmath.workprec(precision):
        coeffs = []
        for k in range(K + 1):
            if k % 2:
                coeffs.append(mpmath.mpf(0))
            else:
                coeffs.append(mpmath.mpf((-1) ** (k // 2)) / mpmath.factorial(k))
        return FloatSeries(tuple(coeffs), precision)


def binomial_power_series(a: Any, power: int, K: int, precision: int = DEFAULT_FLOAT_PRECISION) -> FloatSeries:
    """(1 - a x)^(-power) through order K, for integer power >= 0."""
    with mpmath.workprec(precision):
        a = mpmath.mpmathify(a)
        return FloatSeries(tuple(comb(power + m - 1, m) * a ** m if power else mpmath.mpf(m == 0)
                                 for m in range(K + 1)), precision)


def float_add(s: FloatSeries, t: FloatSeries) -> FloatSeries:
    K = min(s.order, t.order)
    prec = _precision_of(s, t)
    with mpmath.workprec(prec):
        return FloatSeries(tuple(s[k] + t[k] for k in range(K + 1)), prec)


def float_scale(s: FloatSeries, c: Any) -> FloatSeries:
    with mpmath.workprec(s.precision):
        c = mpmath.mpmathify(c)
        return FloatSeries(tuple(c * x for x in s.coeffs), s.precision)


def float_sub(s: FloatSeries, t: FloatSeries) -> FloatSeries:
    return float_add(s, float_scale(t, -1))


def float_mul(s: FloatSeries, t: FloatSeries, K: int | None = None) -> FloatSeries:
    if K is None:
        K = min(s.order, t.order)
    prec = _precision_of(s, t)
    with mpmath.workprec(prec):
        out = []
        for k in range(K + 1):
            acc = mpmath.mpf(0)
            for i in range(k + 1):
                if i <= s.order and k - i <= t.order:
                    acc += s[i] * t[k - i]
            out.append(acc)
        return FloatSeries(tuple(out), prec)


def float_reciprocal(s: FloatSeries, K: int | None = None) -> FloatSeries:
    if K is None:
        K = s.order
    if s[0] == 0:
        raise SeriesError("Reciprocal of a series needs a nonzero constant term")
    with mpmath.workprec(s.precision):
        q = [1 / s[0]]
        for k in range(1, K + 1):
            acc = sum((s[i] * q[k - i] for i in range(1, min(k, s.order) + 1)), mpmath.mpf(0))
            q.append(-acc / s[0])
        return FloatSeries(tuple(q), s.precision)


def float_compose(outer: FloatSeries, inner: FloatSeries, K: int | None = None) -> FloatSeries:
    """outer(inner(x)) through order K; inner must vanish at 0."""
    if K is None:
        K = min(outer.order, inner.order)
    if inner[0] != 0:
        raise SeriesError("Composition needs an inner series with zero constant term")
    prec = _precision_of(outer, inner)
    with mpmath.workprec(prec):
        result = FloatSeries((outer[min(K, outer.order)],) + (mpmath.mpf(0),) * K, prec)
        for k in range(min(K, outer.order) - 1, -1, -1):
            product = float_mul(result, inner, K)
            result = FloatSeries((product[0] + outer[k],) + product.coeffs[1:], prec)
        return result
