"""
Exact independence polynomials I(G, z) = sum_k (-1)^k a_k(G) z^k.

The engine applies the deletion recursion I(G) = I(G - u) - z I(G - N[u])
on vertex bitsets of the original graph, splitting connected components
first and memoizing per component mask for the lifetime of one engine.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Tuple, Union

import mpmath

from .graph import Graph, VertexSet, closed_neighborhood, component_masks, iter_bits

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class IntPoly:
    """Univariate polynomial with exact integer coefficients, lowest power first."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        end = len(coeffs)
        while end and coeffs[end - 1] == 0:
            end -= 1
        object.__setattr__(self, 'coeffs', coeffs[:end])

    @classmethod
    def of(cls, coeffs: Iterable[int]) -> 'IntPoly':
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: 'IntPoly') -> 'IntPoly':
        size = max(len(self.coeffs), len(other.coeffs))
        return IntPoly(tuple(self[k] + other[k] for k in range(size)))

    def __neg__(self) -> 'IntPoly':
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: 'IntPoly') -> 'IntPoly':
        return self + (-other)

    def __mul__(self, other: 'IntPoly') -> 'IntPoly':
        if self.is_zero or other.is_zero:
            return ZERO
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def shift(self, k: int = 1) -> 'IntPoly':
        """Multiply by z^k."""
        if self.is_zero:
            return self
        return IntPoly((0,) * k + self.coeffs)

    def to_dict(self) -> Dict[str, Any]:
        return {'coeffs': [str(c) for c in self.coeffs or (0,)]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'IntPoly':
        return cls(tuple(int(c) for c in data['coeffs']))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z" if k == 1 else f"{c}*z^{k}")
        return " + ".join(terms).replace("+ -", "- ")


ZERO = IntPoly(())
ONE = IntPoly((1,))
Z = IntPoly((0, 1))


class IndependencePolynomialEngine:
    """Memoized I(G - S, z) for vertex subsets S of one graph."""

    def __init__(self, graph: Graph):
        self.graph = graph
        self._memo: Dict[int, IntPoly] = {}

    def poly(self, mask: Optional[int] = None) -> IntPoly:
        """I of the subgraph induced by mask (all vertices by default)."""
        if mask is None:
            mask = self.graph.full_mask
        result = ONE
        for component in component_masks(self.graph.adj, mask):
            result = result * self._connected(component)
        return result

    def deleted(self, s: VertexSet) -> IntPoly:
        """I(G - S, z)."""
        return self.poly(self.graph.full_mask & ~s.bits)

    def _connected(self, mask: int) -> IntPoly:
        cached = self._memo.get(mask)
        if cached is not None:
            return cached
        adj = self.graph.adj
        if mask & (mask - 1) == 0:
            result = IntPoly((1, -1))
        else:
            # maximum degree inside the component, smallest index on ties
            pivot = max(iter_bits(mask), key=lambda v: ((adj[v] & mask).bit_count(), -v))
            without = self.poly(mask & ~(1 << pivot))
            without_closed = self.poly(mask & ~(adj[pivot] | 1 << pivot))
            result = without - without_closed.shift(1)
        self._memo[mask] = result
        return result

    @property
    def memo_size(self) -> int:
        return len(self._memo)


def independence_poly(g: Graph) -> IntPoly:
    engine = IndependencePolynomialEngine(g)
    result = engine.poly()
    logger.debug(f"I({g}) has degree {result.degree} ({engine.memo_size} memoized components)")
    return result


def brute_force_poly(g: Graph) -> IntPoly:
    """Reference I(G, z) by enumerating all 2^n vertex subsets."""
    counts = [0] * (g.n + 1)
    for subset in range(1 << g.n):
        if all(g.adj[v] & subset == 0 for v in iter_bits(subset)):
            counts[subset.bit_count()] += 1
    return IntPoly(tuple((-1) ** k * a for k, a in enumerate(counts)))


def derivative(p: IntPoly, k: int = 1) -> IntPoly:
    """Exact k-th formal derivative."""
    if k < 0:
        raise ValueError(f"Derivative order must be non-negative, got {k}")
    coeffs = p.coeffs
    for _ in range(k):
        coeffs = tuple(i * c for i, c in enumerate(coeffs))[1:]
    return IntPoly(coeffs)


def neighborhood_derivative(g: Graph) -> IntPoly:
    """I'(G, z) computed as -sum_u I(G - N[u], z)."""
    engine = IndependencePolynomialEngine(g)
    total = ZERO
    for u in range(g.n):
        total = total + engine.deleted(closed_neighborhood(g, u))
    return -total


def deletion_identity_holds(g: Graph, u: int) -> bool:
    """I(G) = I(G - u) - z I(G - N[u]) for the given vertex u."""
    engine = IndependencePolynomialEngine(g)
    lhs = engine.poly()
    rhs = engine.deleted(VertexSet.of([u])) - engine.deleted(closed_neighborhood(g, u)).shift(1)
    return lhs == rhs


def eval_exact(p: IntPoly, q: Rational) -> Fraction:
    """Horner evaluation over the rationals."""
    q = Fraction(q)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * q + c
    return acc


def eval_complex(p: IntPoly, z: Any, precision: int = 256) -> mpmath.mpc:
    """Horner evaluation in mpmath at the given binary precision."""
    if precision < 53:
        raise ValueError(f"Precision must be at least 53 bits, got {precision}")
    with mpmath.workprec(precision):
        z = mpmath.mpmathify(z)
        acc = mpmath.mpc(0)
        for c in reversed(p.coeffs):
            acc = acc * z + c
        return mpmath.mpc(acc)
