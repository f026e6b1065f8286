"""
Closed-form root sets of paths, cycles and the complete bipartite graphs K_{n,n},
with their Fibonacci and Chebyshev descriptions and the ratio |α| / β.
"""
import logging
import random
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List

import mpmath

from . import settings
from .errors import GraphError
from .graph import Graph, make_complete_bipartite, make_cycle, make_path
from .indpoly import ONE, Z, IntPoly, eval_complex, independence_poly

logger = logging.getLogger(__name__)

KINDS = ('path', 'cycle', 'bipartite')


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GraphError(f"Unknown family {self.kind!r}; expected one of {', '.join(KINDS)}")
        minimum = 3 if self.kind == 'cycle' else 1
        if self.n < minimum:
            raise GraphError(f"Family {self.kind} needs n >= {minimum}, got {self.n}")

    def graph(self) -> Graph:
        if self.kind == 'path':
            return make_path(self.n)
        if self.kind == 'cycle':
            return make_cycle(self.n)
        return make_complete_bipartite(self.n, self.n)


def closed_form_roots(spec: FamilySpec, precision: int = settings.PRECISION) -> List[Any]:
    """Every root of I(G, z), sorted by modulus."""
    n = spec.n
    with mpmath.workprec(precision):
        if spec.kind == 'path':
            roots = [1 / (4 * mpmath.cos(k * mpmath.pi / (n + 2)) ** 2) for k in range(1, (n + 1) // 2 + 1)]
        elif spec.kind == 'cycle':
            # for odd n the last index hits cos(π/2) = 0 and yields no root
            roots = [1 / (4 * mpmath.cos((2 * k + 1) * mpmath.pi / (2 * n)) ** 2)
                     for k in range((n - 1) // 2 + 1) if 2 * k + 1 != n]
        else:
            rho = mpmath.mpf(2) ** (mpmath.mpf(-1) / n)
            roots = [1 - rho * mpmath.expj(2 * mpmath.pi * k / n) for k in range(n)]
        return sorted((mpmath.mpc(z) for z in roots), key=lambda z: (abs(z), z.imag))


def fibonacci_poly(n: int) -> IntPoly:
    """F_1 = 1, F_2 = z, F_{k+1} = z F_k + F_{k-1}."""
    if n < 1:
        raise ValueError(f"Fibonacci polynomials start at n = 1, got {n}")
    previous, current = ONE, Z
    if n == 1:
        return previous
    for _ in range(n - 2):
        previous, current = current, current * Z + previous
    return current


def fibonacci_identity_check(n: int) -> bool:
    """z^(n+1) I(P_n, -1/z^2) == F_{n+2}(z) as polynomials."""
    p = independence_poly(make_path(n))
    coeffs = [0] * (n + 2)
    for k, c in enumerate(p.coeffs):
        coeffs[n + 1 - 2 * k] += (-1) ** k * c
    return IntPoly(tuple(coeffs)) == fibonacci_poly(n + 2)


def chebyshev_identity_check(n: int, samples: int = 20, seed: int = 0,
                             precision: int = settings.PRECISION, poly: IntPoly | None = None) -> bool:
    """I(C_n, z) == 2 z^(n/2) T_n(1 / (2 sqrt z)) at random z in (0, 1/4)."""
    if n < 3:
        raise ValueError(f"Cycles need n >= 3, got {n}")
    if poly is None:
        poly = independence_poly(make_cycle(n))
    rng = random.Random(seed)
    with mpmath.workprec(precision):
        for _ in range(samples):
            z = mpmath.mpf(rng.random()) / 4
            if z == 0:
                continue
            expected = 2 * z ** (mpmath.mpf(n) / 2) * mpmath.chebyt(n, 1 / (2 * mpmath.sqrt(z)))
            actual = eval_complex(poly, z, precision).real
            if abs(actual - expected) > mpmath.mpf('1e-20') * max(1, abs(expected)):
                logger.info(f"Chebyshev identity fails for C_{n} at z = {mpmath.nstr(z, 10)}")
                return False
    return True


@dataclass(frozen=True)
class FamilyRatio:
    n: int
    beta: Any
    alpha_modulus: Any
    ratio: Any
    prediction: Any

    def to_row(self) -> Dict[str, str]:
        return {
            'n': str(self.n),
            'beta': mpmath.nstr(self.beta, 20),
            'alpha_modulus': mpmath.nstr(self.alpha_modulus, 20),
            'ratio': mpmath.nstr(self.ratio, 20),
            'predicted_ratio': mpmath.nstr(self.prediction, 20),
        }


def leading_ratio(spec: FamilySpec, precision: int = settings.PRECISION) -> Any:
    """Asymptotic expansion of |α| / β for the family."""
    n = spec.n
    with mpmath.workprec(precision):
        pi = mpmath.pi
        if spec.kind == 'path':
            return 1 + 3 * pi ** 2 / (n + 2) ** 2
        if spec.kind == 'cycle':
            return 1 + 2 * pi ** 2 / n ** 2 + 17 * pi ** 4 / (6 * mpmath.mpf(n) ** 4)
        # exactly sqrt(1 + sin^2(π/n) / sinh^2(ln 2 / 2n)); the 1/n^2 term of its expansion is -π^2/6
        limit = mpmath.sqrt(1 + 4 * pi ** 2 / mpmath.log(2) ** 2)
        return limit * (1 - pi ** 2 / (6 * mpmath.mpf(n) ** 2))


def bipartite_exact_ratio(n: int, precision: int = settings.PRECISION) -> Any:
    """|α| / β of K_{n,n} in closed form, from |1 - ρ e^{2πi/n}|^2 = (1 - ρ)^2 + 4ρ sin^2(π/n), ρ = 2^(-1/n)."""
    with mpmath.workprec(precision):
        return mpmath.sqrt(1 + mpmath.sin(mpmath.pi / n) ** 2 / mpmath.sinh(mpmath.log(2) / (2 * n)) ** 2)


def asymptotic_ratio(spec: FamilySpec, precision: int = settings.PRECISION) -> FamilyRatio:
    """Exact |α| / β from the closed-form roots, beside the asymptotic prediction."""
    roots = closed_form_roots(spec, precision)
    with mpmath.workprec(precision):
        beta = abs(roots[0])
        alpha = abs(roots[1]) if len(roots) > 1 else mpmath.inf
        return FamilyRatio(spec.n, beta, alpha, alpha / beta, leading_ratio(spec, precision))


def family_table(kind: str, ns: Iterable[int], precision: int = settings.PRECISION) -> List[FamilyRatio]:
    rows = [asymptotic_ratio(FamilySpec(kind, n), precision) for n in ns]
    logger.info(f"Built {kind} family table with {len(rows)} rows")
    return rows
