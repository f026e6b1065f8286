"""
Roots of independence polynomials.

β(G) is bracketed with exact rational arithmetic only: a Sturm count
(sympy) isolates the smallest positive root and bisection on exact signs
shrinks the bracket. The full complex root set comes from Aberth
iteration in mpmath and serves as an empirical oracle, never as a
certificate.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Tuple, Union

import mpmath
import sympy

from .errors import BoundViolationError, ConvergenceError, RootMatchError
from .graph import Graph, max_degree, require_connected
from .indpoly import IntPoly, derivative, eval_exact, independence_poly

logger = logging.getLogger(__name__)

MAX_ABERTH_ITERATIONS = 2000


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def _parse_fraction(text: str) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class BetaEnclosure:
    """Rational bracket lo <= β <= hi with I(lo) > 0 > I(hi), or lo == hi == β exactly."""

    lo: Fraction
    hi: Fraction

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x: Any) -> bool:
        if isinstance(x, (int, Fraction)):
            return self.lo <= x <= self.hi
        x = mpmath.mpmathify(x)
        return mpmath.mpmathify(self.lo) <= x <= mpmath.mpmathify(self.hi)

    def to_dict(self) -> Dict[str, str]:
        return {
            'lo': _fraction_str(self.lo),
            'hi': _fraction_str(self.hi),
            'lo_decimal': mpmath.nstr(mpmath.mpmathify(self.lo), 30),
            'hi_decimal': mpmath.nstr(mpmath.mpmathify(self.hi), 30),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'BetaEnclosure':
        return cls(_parse_fraction(data['lo']), _parse_fraction(data['hi']))


def shearer_bound(d: int) -> Fraction:
    """λ_S(d) = (d-1)^(d-1) / d^d; matchings (d = 1) have every root >= 1/2."""
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got {d}")
    if d == 0:
        return Fraction(1)
    if d == 1:
        return Fraction(1, 2)
    return Fraction((d - 1) ** (d - 1), d ** d)


def beta_lower(n: int) -> Fraction:
    """β(H) >= 1/n for every graph on at most n vertices."""
    if n < 1:
        raise ValueError(f"Vertex count must be positive, got {n}")
    return Fraction(1, n)


class _SturmCounter:
    """Distinct real roots of p in closed intervals, via sympy's Sturm sequences."""

    def __init__(self, p: IntPoly):
        z = sympy.Symbol('z')
        self._poly = sympy.Poly(list(reversed(p.coeffs)), z, domain='ZZ')

    def count(self, a: Fraction, b: Fraction) -> int:
        return int(self._poly.count_roots(sympy.Rational(a.numerator, a.denominator),
                                          sympy.Rational(b.numerator, b.denominator)))


def sturm_count(p: IntPoly, a: Union[int, Fraction], b: Union[int, Fraction]) -> int:
    """Number of distinct real roots of p in [a, b]."""
    return _SturmCounter(p).count(Fraction(a), Fraction(b))


def _rational_root_in(p: IntPoly, lo: Fraction, hi: Fraction) -> Fraction | None:
    # a rational root of a polynomial with constant term 1 has the form 1/q with q | lead
    lead = abs(p.coeffs[-1])
    for q in range(max(1, int(1 / hi)), int(1 / lo) + 1):
        candidate = Fraction(1, q)
        if lead % q == 0 and lo <= candidate <= hi and eval_exact(p, candidate) == 0:
            return candidate
    return None


def bracket_smallest_root(p: IntPoly, start: Fraction, tol: Union[str, Fraction]) -> BetaEnclosure:
    """
    Enclose the smallest positive root of p, known to lie in [start, 1] with p > 0 on [0, start).
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}")
    lo, hi = Fraction(start), Fraction(1)
    if eval_exact(p, lo) == 0:
        return BetaEnclosure(lo, lo)
    counter = _SturmCounter(p)
    count = counter.count(lo, hi)
    if count == 0:
        raise BoundViolationError(f"No root of {p} in [{lo}, 1]")
    while True:
        v_hi = eval_exact(p, hi)
        if count == 1 and v_hi == 0:
            return BetaEnclosure(hi, hi)
        if count == 1 and v_hi < 0:
            break
        if count == 1:
            raise BoundViolationError(f"Smallest root of {p} in [{lo}, {hi}] is not simple")
        mid = (lo + hi) / 2
        left = counter.count(lo, mid)
        if left:
            hi, count = mid, left
        else:
            lo = mid
    exact = _rational_root_in(p, lo, hi)
    if exact is not None:
        logger.info(f"Smallest root of {p} is the rational {exact}")
        return BetaEnclosure(exact, exact)
    return refine(p, BetaEnclosure(lo, hi), tol)


def refine(p: IntPoly, enclosure: BetaEnclosure, tol: Union[str, Fraction]) -> BetaEnclosure:
    """Continue sign bisection on an isolating bracket until its width is at most tol."""
    tol = Fraction(tol)
    lo, hi = enclosure.lo, enclosure.hi
    while hi - lo > tol:
        mid = (lo + hi) / 2
        value = eval_exact(p, mid)
        if value == 0:
            return BetaEnclosure(mid, mid)
        if value > 0:
            lo = mid
        else:
            hi = mid
    return BetaEnclosure(lo, hi)


def verify_enclosure(p: IntPoly, enclosure: BetaEnclosure) -> bool:
    """Re-check sign conditions and that no root precedes the bracket."""
    lo, hi = enclosure.lo, enclosure.hi
    if enclosure.exact:
        signs_ok = eval_exact(p, lo) == 0
    else:
        signs_ok = eval_exact(p, lo) > 0 > eval_exact(p, hi)
    before = sturm_count(p, Fraction(0), lo) - (1 if enclosure.exact else 0)
    return signs_ok and before == 0 and 0 < lo <= hi <= 1


def beta_bracket(g: Graph, tol: Union[str, Fraction] = '1e-12', p: IntPoly | None = None) -> BetaEnclosure:
    """Certified rational enclosure of β(G) for a connected graph."""
    require_connected(g)
    if p is None:
        p = independence_poly(g)
    start = max(beta_lower(g.n), shearer_bound(max_degree(g)))
    enclosure = bracket_smallest_root(p, start, tol)
    if not verify_enclosure(p, enclosure):
        raise BoundViolationError(f"β enclosure {enclosure} of {g} failed re-verification")
    logger.debug(f"β({g}) in [{float(enclosure.lo)}, {float(enclosure.hi)}]")
    return enclosure


@dataclass(frozen=True)
class RootSet:
    roots: Tuple[Any, ...]
    residuals: Tuple[Any, ...]
    precision: int
    clusters: Tuple[Tuple[int, int], ...] = field(default=())

    def to_dict(self) -> Dict[str, Any]:
        digits = max(15, int(self.precision * 0.30103) - 5)
        return {
            'roots': [
                {'re': mpmath.nstr(z.real, digits), 'im': mpmath.nstr(z.imag, digits),
                 'residual': mpmath.nstr(r, 5)}
                for z, r in zip(self.roots, self.residuals)
            ],
            'precision': self.precision,
            'clusters': [list(pair) for pair in self.clusters],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RootSet':
        prec = int(data['precision'])
        with mpmath.workprec(prec):
            roots = tuple(mpmath.mpc(r['re'], r['im']) for r in data['roots'])
            residuals = tuple(mpmath.mpf(r['residual']) for r in data['roots'])
        return cls(roots, residuals, prec, tuple(tuple(c) for c in data.get('clusters', [])))


def _horner(coeffs: List[Any], z: Any) -> Any:
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def all_roots(p: IntPoly, precision: int = 256) -> RootSet:
    """All complex roots by Aberth-Ehrlich iteration, Newton-polished, sorted by modulus."""
    if p.degree < 1:
        raise ValueError(f"Root finding needs degree >= 1, got {p}")
    deg = p.degree
    with mpmath.workprec(2 * precision):
        coeffs = [mpmath.mpf(c) for c in p.coeffs]
        dcoeffs = [mpmath.mpf(c) for c in derivative(p).coeffs]
        lead = coeffs[-1]
        cauchy = 1 + max(abs(c / lead) for c in coeffs[:-1])
        zs = [cauchy * mpmath.expj(2 * mpmath.pi * k / deg + mpmath.mpf('0.4')) for k in range(deg)]
        tol = mpmath.mpf(2) ** (-precision)
        loose = mpmath.mpf(2) ** (-(precision // 4))
        best, stalled = None, 0
        for iteration in range(1, MAX_ABERTH_ITERATIONS + 1):
            largest = mpmath.mpf(0)
            for k in range(deg):
                value = _horner(coeffs, zs[k])
                if value == 0:
                    continue
                ratio = value / _horner(dcoeffs, zs[k])
                repulsion = sum(1 / (zs[k] - zs[j]) for j in range(deg) if j != k)
                correction = ratio / (1 - ratio * repulsion)
                zs[k] -= correction
                largest = max(largest, abs(correction) / max(1, abs(zs[k])))
            if largest <= tol:
                break
            # clustered roots only converge to about half the digits
            if best is None or largest < best / 2:
                best, stalled = largest, 0
            else:
                stalled += 1
            if stalled >= 25 and largest <= loose:
                logger.warning(f"Aberth iteration for degree {deg} stalled at correction {mpmath.nstr(largest, 5)}")
                break
        else:
            logger.error(f"Aberth iteration failed to converge for {p} after {MAX_ABERTH_ITERATIONS} steps")
            raise ConvergenceError(
                f"Root iteration did not converge for degree {deg}",
                {'iterations': MAX_ABERTH_ITERATIONS, 'max_correction': mpmath.nstr(largest, 5)},
            )
        for k in range(deg):
            for _ in range(3):
                slope = _horner(dcoeffs, zs[k])
                if slope == 0:
                    break
                zs[k] -= _horner(coeffs, zs[k]) / slope
        zs.sort(key=lambda z: (abs(z), z.imag))
        residuals = [abs(_horner(coeffs, z)) for z in zs]
        spread = mpmath.mpf('1e-10') * cauchy
        clusters = tuple((i, j) for i in range(deg) for j in range(i + 1, deg) if abs(zs[i] - zs[j]) < spread)
    if clusters:
        logger.warning(f"Root clusters {clusters} detected for {p}")
    with mpmath.workprec(precision):
        return RootSet(tuple(+z for z in zs), tuple(+r for r in residuals), precision, clusters)


def match_beta(rs: RootSet, enclosure: BetaEnclosure) -> int:
    """Index of the unique numeric root inside the β enclosure."""
    with mpmath.workprec(rs.precision):
        eps = 4 * max(mpmath.mpmathify(enclosure.width), mpmath.mpf(2) ** (-(rs.precision // 3)))
        lo, hi = mpmath.mpmathify(enclosure.lo), mpmath.mpmathify(enclosure.hi)
        matches = [i for i, z in enumerate(rs.roots)
                   if abs(z.imag) <= eps and lo - eps <= z.real <= hi + eps]
    if not matches:
        raise RootMatchError(f"No numeric root inside the β enclosure [{float(lo)}, {float(hi)}]")
    if len(matches) > 1:
        raise RootMatchError(f"{len(matches)} numeric roots match the β enclosure; β must be simple")
    return matches[0]


def second_smallest_modulus(rs: RootSet, enclosure: BetaEnclosure) -> Any:
    """Smallest modulus among the roots other than β; +inf when β is the only root."""
    index = match_beta(rs, enclosure)
    others = [abs(z) for i, z in enumerate(rs.roots) if i != index]
    with mpmath.workprec(rs.precision):
        return min(others) if others else mpmath.inf


def empirical_gap(g: Graph, precision: int = 256, tol: Union[str, Fraction] = '1e-12') -> Any:
    """|α(G)| - β(G) from the numeric root set."""
    p = independence_poly(g)
    enclosure = beta_bracket(g, tol, p)
    alpha = second_smallest_modulus(all_roots(p, precision), enclosure)
    with mpmath.workprec(precision):
        return alpha - mpmath.mpmathify(enclosure.midpoint)
