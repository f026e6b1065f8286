"""
The ratio f_u(z) = z I(G - N[u], z) / I(G - u, z) and everything built on it.

Telescoping over the neighbors u_1 < ... < u_k of u gives

    f_u(z) = z / ((1 - z)^l * prod_j (1 - g_j(z)))

where each g_j is the same kind of ratio for a neighbor inside a smaller
graph, and neighbors that are isolated at their turn contribute the (1 - z)
factors. Replacing every |1 - z| by 1 - r cos θ and every |g_j| by its own
majorant yields F_{u,r}(θ), an upper envelope of |f_u(r e^{iθ})| that is
symmetric and non-increasing on [0, π].
"""
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import mpmath

from . import settings
from .errors import MajorantDomainError, PoleError
from .graph import Graph, VertexSet, closed_neighborhood, diameter, iter_bits, require_connected
from .indpoly import IndependencePolynomialEngine, IntPoly, derivative, eval_complex, eval_exact
from .series import (
    FloatSeries,
    IntSeries,
    binomial_power_series,
    cos_series,
    float_compose,
    float_mul,
    float_reciprocal,
    float_scale,
    float_sub,
    series_div,
    taylor_shift,
)

logger = logging.getLogger(__name__)

POLE_TOLERANCE = mpmath.mpf('1e-30')


@dataclass(frozen=True)
class Check:
    """Named inequality outcome; margin > 0 means slack, margin < 0 means violation."""

    name: str
    passed: bool
    margin: float

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'pass': self.passed, 'margin': self.margin}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Check':
        return cls(data['name'], bool(data['pass']), float(data['margin']))


def _inequality(name: str, smaller: Any, larger: Any, strict: bool = False) -> Check:
    """Check smaller <= larger (or <), with the margin as larger - smaller."""
    margin = larger - smaller
    return Check(name, bool(margin > 0 if strict else margin >= 0), float(margin))


@dataclass(frozen=True)
class VertexRatio:
    """f_u as numerator z I(G - N[u]) over denominator I(G - u)."""

    numerator: IntPoly
    denominator: IntPoly
    graph_poly: IntPoly


def f_u_polys(g: Graph, u: int, engine: Optional[IndependencePolynomialEngine] = None) -> VertexRatio:
    if engine is None:
        engine = IndependencePolynomialEngine(g)
    numerator = engine.deleted(closed_neighborhood(g, u)).shift(1)
    denominator = engine.deleted(VertexSet.of([u]))
    return VertexRatio(numerator, denominator, engine.poly())


def eval_ratio(ratio: VertexRatio, z: Any, precision: int = settings.PRECISION) -> Any:
    with mpmath.workprec(precision):
        den = eval_complex(ratio.denominator, z, precision)
        if abs(den) < POLE_TOLERANCE:
            raise PoleError(f"I(G - u) vanishes at z = {mpmath.nstr(mpmath.mpmathify(z), 15)}")
        return eval_complex(ratio.numerator, z, precision) / den


def f_u_eval(g: Graph, u: int, z: Any, precision: int = settings.PRECISION) -> Any:
    """f_u(z) at working precision; PoleError where I(G - u, z) vanishes."""
    return eval_ratio(f_u_polys(g, u), z, precision)


def f_u_identity_residual(g: Graph, u: int, z: Any, precision: int = settings.PRECISION) -> Any:
    """|f_u(z) - (1 - I(G, z) / I(G - u, z))|."""
    ratio = f_u_polys(g, u)
    with mpmath.workprec(precision):
        direct = eval_ratio(ratio, z, precision)
        other = 1 - eval_complex(ratio.graph_poly, z, precision) / eval_complex(ratio.denominator, z, precision)
        return abs(direct - other)


def f_u_series(g: Graph, u: int, K: int) -> IntSeries:
    """Exact origin expansion of f_u through order K."""
    ratio = f_u_polys(g, u)
    return series_div(ratio.numerator, ratio.denominator, K)


@dataclass(frozen=True)
class NestedRatio:
    """
    One level of the recursive form of f_v inside the induced subgraph `mask`:
    z / ((1 - z)^power * prod (1 - child)).
    """

    power: int
    children: Tuple['NestedRatio', ...]
    mask: int
    pivot: int

    @property
    def key(self) -> Tuple[int, int]:
        return self.mask, self.pivot

    @property
    def context(self) -> VertexSet:
        return VertexSet(self.mask)

    @property
    def degree(self) -> int:
        """Number of neighbors of the pivot in its context."""
        return self.power + len(self.children)


def _component_of(adj: Tuple[int, ...], mask: int, v: int) -> int:
    seen = frontier = 1 << v
    while frontier:
        grown = 0
        for w in iter_bits(frontier):
            grown |= adj[w]
        frontier = grown & mask & ~seen
        seen |= frontier
    return seen


class _Decomposer:
    """Builds NestedRatio nodes, sharing equal (context, pivot) sub-instances."""

    def __init__(self, g: Graph):
        self.adj = g.adj
        self.nodes: Dict[Tuple[int, int], NestedRatio] = {}

    def build(self, mask: int, pivot: int) -> NestedRatio:
        node = self.nodes.get((mask, pivot))
        if node is not None:
            return node
        power = 0
        children = []
        context = mask & ~(1 << pivot)
        for w in iter_bits(self.adj[pivot] & mask):
            if self.adj[w] & context == 0:
                power += 1
            else:
                # f_w only sees the component of w
                children.append(self.build(_component_of(self.adj, context, w), w))
            context &= ~(1 << w)
        node = NestedRatio(power, tuple(children), mask, pivot)
        self.nodes[(mask, pivot)] = node
        return node


def decompose_f_u(g: Graph, u: int) -> NestedRatio:
    require_connected(g)
    if not 0 <= u < g.n:
        raise ValueError(f"Vertex {u} out of range for graph with {g.n} vertices")
    decomposer = _Decomposer(g)
    root = decomposer.build(g.full_mask, u)
    logger.debug(f"Decomposed f_{u} of {g} into {len(decomposer.nodes)} distinct nodes")
    return root


def _fold(root: NestedRatio, visit: Callable[[NestedRatio, List[Any]], Any]) -> Any:
    """Bottom-up evaluation over the node DAG, each distinct node visited once."""
    memo: Dict[Tuple[int, int], Any] = {}

    def rec(node: NestedRatio) -> Any:
        if node.key not in memo:
            memo[node.key] = visit(node, [rec(child) for child in node.children])
        return memo[node.key]

    return rec(root)


def depth(node: NestedRatio) -> int:
    """Nesting level; a node without children has depth 1."""
    return _fold(node, lambda _, below: 1 + max(below, default=0))


def node_count(node: NestedRatio) -> int:
    keys = set()

    def visit(n: NestedRatio, _: List[Any]) -> None:
        keys.add(n.key)

    _fold(node, visit)
    return len(keys)


def evaluate_nested(node: NestedRatio, z: Any, precision: int = settings.PRECISION) -> Any:
    """Value of the recursive form at z."""
    with mpmath.workprec(precision):
        z = mpmath.mpmathify(z)

        def visit(n: NestedRatio, below: List[Any]) -> Any:
            denominator = (1 - z) ** n.power
            for value in below:
                denominator *= 1 - value
            if denominator == 0:
                raise PoleError(f"Nested ratio at node {n.key} has a pole at {mpmath.nstr(z, 15)}")
            return z / denominator

        return _fold(node, visit)


@dataclass(frozen=True)
class MajorantNode:
    """Mirror of a NestedRatio used for F_{u,r}(θ)."""

    power: int
    children: Tuple['MajorantNode', ...]
    key: Tuple[int, int]

    @property
    def degree(self) -> int:
        return self.power + len(self.children)


def majorant_from(ratio: NestedRatio) -> MajorantNode:
    return _fold(ratio, lambda n, below: MajorantNode(n.power, tuple(below), n.key))


def _fold_majorant(root: MajorantNode, visit: Callable[[MajorantNode, List[Any]], Any]) -> Any:
    memo: Dict[Tuple[int, int], Any] = {}

    def rec(node: MajorantNode) -> Any:
        if node.key not in memo:
            memo[node.key] = visit(node, [rec(child) for child in node.children])
        return memo[node.key]

    return rec(root)


def majorant_eval(m: MajorantNode, r: Any, theta: Any, precision: int = settings.PRECISION) -> Any:
    """F_{u,r}(θ) = r / ((1 - r cos θ)^l prod (1 - G_{j,r}(θ)))."""
    with mpmath.workprec(precision):
        r = mpmath.mpmathify(r)
        if r <= 0:
            raise ValueError(f"Majorant radius must be positive, got {r}")
        base = 1 - r * mpmath.cos(theta)

        def visit(node: MajorantNode, below: List[Any]) -> Any:
            if node.power and base <= 0:
                raise MajorantDomainError(f"Majorant domain error at node {node.key}: 1 - r cos θ <= 0", node.key)
            denominator = base ** node.power
            for child, value in zip(node.children, below):
                if value >= 1:
                    logger.warning(f"Majorant domain error at node {child.key}: G = {mpmath.nstr(value, 10)}")
                    raise MajorantDomainError(
                        f"Majorant domain error at node {child.key}: G = {mpmath.nstr(value, 10)} >= 1", child.key)
                denominator *= 1 - value
            return r / denominator

        return _fold_majorant(m, visit)


def majorant_theta_series(m: MajorantNode, r: Any, K: int, precision: int = settings.PRECISION) -> FloatSeries:
    """Taylor coefficients F^{(k)}(0)/k! of θ -> F_{u,r}(θ) through order K."""
    with mpmath.workprec(precision):
        r = mpmath.mpmathify(r)
        cos_minus_one = FloatSeries((mpmath.mpf(0),) + cos_series(K, precision).coeffs[1:], precision)
        one = FloatSeries((mpmath.mpf(1),) + (mpmath.mpf(0),) * K, precision)
        bases: Dict[int, FloatSeries] = {}

        def base_factor(power: int) -> FloatSeries:
            # (1 - r cos θ)^(-l) = (1 - r)^(-l) (1 - (r / (1 - r)) (cos θ - 1))^(-l)
            if power not in bases:
                if power and r >= 1:
                    raise MajorantDomainError(f"Majorant domain error: r = {mpmath.nstr(r, 10)} >= 1")
                outer = binomial_power_series(r / (1 - r) if power else 0, power, K, precision)
                bases[power] = float_scale(float_compose(outer, cos_minus_one, K), (1 - r) ** (-power))
            return bases[power]

        def visit(node: MajorantNode, below: List[FloatSeries]) -> FloatSeries:
            result = float_scale(base_factor(node.power), r)
            for child, series in zip(node.children, below):
                if series[0] >= 1:
                    raise MajorantDomainError(
                        f"Majorant domain error at node {child.key}: G(0) = {mpmath.nstr(series[0], 10)} >= 1", child.key)
                result = float_mul(result, float_reciprocal(float_sub(one, series), K), K)
            return result

        return _fold_majorant(m, visit)


def theta_grid(size: int = settings.GRID_SIZE, precision: int = settings.PRECISION) -> List[Any]:
    """size equally spaced angles from 0 to π inclusive."""
    with mpmath.workprec(precision):
        return [mpmath.pi * i / (size - 1) for i in range(size)]


def majorant_grid(g: Graph, u: int, r: Any, size: int = settings.GRID_SIZE,
                  precision: int = settings.PRECISION) -> List[Tuple[Any, Any, Any]]:
    """Rows (θ, |f_u(r e^{iθ})|, F_{u,r}(θ)) over the θ grid."""
    ratio = f_u_polys(g, u)
    majorant = majorant_from(decompose_f_u(g, u))
    rows = []
    with mpmath.workprec(precision):
        r = mpmath.mpmathify(r)
        for theta in theta_grid(size, precision):
            actual = abs(eval_ratio(ratio, r * mpmath.expj(theta), precision))
            rows.append((theta, actual, majorant_eval(majorant, r, theta, precision)))
    return rows


def majorant_grid_checks(rows: Sequence[Tuple[Any, Any, Any]], precision: int = settings.PRECISION) -> List[Check]:
    """Domination |f_u| <= F and non-increase of F along the grid."""
    slack = mpmath.mpf(2) ** (-(precision // 2))
    domination = min(F - actual for _, actual, F in rows)
    steps = [rows[i][2] - rows[i + 1][2] for i in range(len(rows) - 1)]
    monotone = min(steps, default=mpmath.mpf(0))
    return [
        Check('majorant_domination', bool(domination >= -slack), float(domination)),
        Check('majorant_monotone', bool(monotone >= -slack), float(monotone)),
    ]


def _truncated_sup(series: FloatSeries, K: int) -> Any:
    """max over 1 <= k <= K of |c_k|^(1/k)."""
    return max((abs(series[k]) ** (mpmath.mpf(1) / k) for k in range(1, min(K, series.order) + 1)),
               default=mpmath.mpf(0))


def inductive_bound_check(m: MajorantNode, r: Any, K: int = 20, precision: int = settings.PRECISION) -> Check:
    """
    Truncated sup of |F^{(k)}(0)/k!|^(1/k) against 2 d Γ / r, with Γ the same sup over the
    children and the cosine factors.
    """
    with mpmath.workprec(precision):
        r = mpmath.mpmathify(r)
        if m.degree == 0:
            return Check('inductive_bound', True, 0.0)
        own = _truncated_sup(majorant_theta_series(m, r, K, precision), K)
        children = [_truncated_sup(majorant_theta_series(child, r, K, precision), K) for child in m.children]
        if m.power:
            # each factor 1 - r cos θ counts as a child G = r cos θ
            children.append(_truncated_sup(float_scale(cos_series(K, precision), r), K))
        bound = 2 * m.degree * max(children) / r
        return _inequality('inductive_bound', own, bound)


def parabola_angle_limit(beta: Any, d: int, depth_: int) -> Any:
    """(β / 2d)^(2Δ), the largest angle the parabola bound is claimed for."""
    return (beta / (2 * d)) ** (2 * depth_)


def parabola_bound_check(m: MajorantNode, beta_lo: Any, beta_hi: Any, d: int, depth_: int,
                    ts: Sequence[Any] = tuple(Fraction(k, 10) for k in range(1, 11)),
                    precision: int = settings.PRECISION) -> List[Check]:
    """F_{u,β_hi}(θ) <= 1 - (β_lo θ)^2 / 4 at θ = t (β_lo / 2d)^(2Δ)."""
    checks = []
    with mpmath.workprec(precision):
        top = parabola_angle_limit(mpmath.mpmathify(beta_lo), d, depth_)
        for t in ts:
            theta = top * mpmath.mpmathify(t)
            value = majorant_eval(m, beta_hi, theta, precision)
            bound = 1 - (mpmath.mpmathify(beta_lo) * theta) ** 2 / 4
            margin = bound - value
            # report the margin relative to the size of the parabola term
            scale = (mpmath.mpmathify(beta_lo) * theta) ** 2
            checks.append(Check(f'parabola_t{float(t):.1f}', bool(margin >= 0), float(margin / scale)))
    return checks


def _random_disc_points(center: Any, radius: Any, samples: int, seed: int, boundary: int) -> List[Any]:
    rng = random.Random(seed)
    points = []
    for _ in range(samples):
        rho = radius * mpmath.sqrt(rng.random())
        points.append(center + rho * mpmath.expj(2 * mpmath.pi * rng.random()))
    points.extend(center + radius * mpmath.expj(2 * mpmath.pi * k / boundary) for k in range(boundary))
    return points


def sample_f_u_bound(g: Graph, u: int, radius: Any, samples: int = 500, seed: int = 0,
                     precision: int = settings.PRECISION) -> Any:
    """Largest sampled |f_u(z)| on D(0, radius), the boundary circle included."""
    ratio = f_u_polys(g, u)
    with mpmath.workprec(precision):
        points = _random_disc_points(mpmath.mpc(0), mpmath.mpmathify(radius), samples, seed, 256)
        return max(abs(eval_ratio(ratio, z, precision)) for z in points)


def iprime_sup_ratio(p: IntPoly, center: Any, radius: Any, samples: int = 200, seed: int = 0,
                     precision: int = settings.PRECISION) -> Any:
    """Sampled sup |p'(z)| on D(center, radius), relative to |p'(center)|."""
    dp = derivative(p)
    with mpmath.workprec(precision):
        center = mpmath.mpmathify(center)
        at_center = abs(eval_complex(dp, center, precision))
        points = _random_disc_points(center, mpmath.mpmathify(radius), samples, seed, 128)
        return max(abs(eval_complex(dp, z, precision)) for z in points) / at_center


@dataclass(frozen=True)
class GammaEstimate:
    """Finite max standing in for a γ-type sup; `order` is the largest k examined."""

    value: Any
    order: int
    certified_upper: Optional[Any] = None
    decay: Optional[Any] = field(default=None, compare=False)

    @property
    def holds(self) -> bool:
        return self.certified_upper is None or self.value <= self.certified_upper

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': mpmath.nstr(self.value, 20),
            'order': self.order,
            'certified_upper': None if self.certified_upper is None else mpmath.nstr(mpmath.mpmathify(self.certified_upper), 20),
            'decay': None if self.decay is None else mpmath.nstr(self.decay, 10),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GammaEstimate':
        upper = data.get('certified_upper')
        decay = data.get('decay')
        with mpmath.workprec(128):
            return cls(mpmath.mpf(data['value']), int(data['order']),
                       None if upper is None else mpmath.mpf(upper),
                       None if decay is None else mpmath.mpf(decay))


def gamma_poly(p: IntPoly, j: int, c: Union[int, Fraction], precision: int = settings.PRECISION,
               certified_upper: Optional[Any] = None) -> GammaEstimate:
    """max over k > j of |j! p^(k)(c) / (k! p^(j)(c))|^(1/(k-j)), exact up to the final root."""
    shifted = taylor_shift(p, c)
    if j >= len(shifted) or shifted[j] == 0:
        raise ValueError(f"Derivative of order {j} of {p} vanishes at {c}")
    with mpmath.workprec(precision):
        terms = [mpmath.mpmathify(abs(shifted[k] / shifted[j])) ** (mpmath.mpf(1) / (k - j))
                 for k in range(j + 1, len(shifted))]
        upper = None if certified_upper is None else mpmath.mpmathify(certified_upper)
        return GammaEstimate(max(terms, default=mpmath.mpf(0)), p.degree, upper)


def _fraction_series_div(a: Sequence[Fraction], b: Sequence[Fraction], K: int) -> List[Fraction]:
    a = list(a) + [Fraction(0)] * (K + 1)
    b = list(b) + [Fraction(0)] * (K + 1)
    q: List[Fraction] = []
    for k in range(K + 1):
        q.append((a[k] - sum((b[i] * q[k - i] for i in range(1, k + 1)), Fraction(0))) / b[0])
    return q


def r_G_at(n: int, dia: int, beta: Union[int, Fraction]) -> Fraction:
    """β^dia / (2n), exact."""
    return Fraction(beta) ** dia / (2 * n)


def gamma_f_u_truncated(g: Graph, u: int, beta_hat: Union[int, Fraction], K: int,
                        precision: int = settings.PRECISION, certified_upper: Optional[Any] = None) -> GammaEstimate:
    """
    max over 1 <= k <= K of |f_u^(k)(β̂) / (k! f_u(β̂))|^(1/k), with the Taylor coefficients of f_u at β̂
    obtained exactly from shifted numerator and denominator.
    """
    if K < 2:
        raise ValueError(f"Truncation order must be at least 2, got {K}")
    ratio = f_u_polys(g, u)
    coeffs = _fraction_series_div(taylor_shift(ratio.numerator, beta_hat), taylor_shift(ratio.denominator, beta_hat), K)
    if certified_upper is None:
        certified_upper = 1 / r_G_at(g.n, diameter(g), beta_hat)
    with mpmath.workprec(precision):
        terms = [mpmath.mpmathify(abs(coeffs[k] / coeffs[0])) ** (mpmath.mpf(1) / k) for k in range(1, K + 1)]
        decay = terms[-1] / terms[-2] if terms[-2] else None
        return GammaEstimate(max(terms), K, mpmath.mpmathify(certified_upper), decay)


def f_prime_at_beta(g: Graph, v: int, beta_hat: Union[int, Fraction]) -> Fraction:
    """f_v'(β) = -I'(G, β) / I(G - v, β), evaluated exactly at β̂."""
    require_connected(g)
    engine = IndependencePolynomialEngine(g)
    numerator = eval_exact(derivative(engine.poly()), beta_hat)
    return -numerator / eval_exact(engine.deleted(VertexSet.of([v])), beta_hat)


def derivative_bounds_check(g: Graph, beta_hat: Union[int, Fraction]) -> Dict[str, Any]:
    """
    Inequalities at β̂: |I^(k)| <= k! C(n, k), I(G - v) >= β^dia, |I'| >= n β^dia and
    1/β < f_v'(β) <= n / β^dia. The sharper |I^(k)| <= C(n, k) is only reported.
    """
    require_connected(g)
    beta_hat = Fraction(beta_hat)
    n = g.n
    dia = diameter(g)
    engine = IndependencePolynomialEngine(g)
    p = engine.poly()
    floor = beta_hat ** dia
    checks: List[Check] = []
    diagnostics: List[Check] = []
    shifted = taylor_shift(p, beta_hat)
    for k in range(1, n + 1):
        value = abs(shifted[k]) * factorial(k) if k < len(shifted) else Fraction(0)
        checks.append(_inequality(f'derivative_order_{k}', value, factorial(k) * comb(n, k)))
        diagnostics.append(_inequality(f'derivative_order_{k}_binomial', value, comb(n, k)))
    for v in range(n):
        deleted = eval_exact(engine.deleted(VertexSet.of([v])), beta_hat)
        checks.append(_inequality(f'deleted_vertex_{v}', floor, deleted))
        slope = -eval_exact(derivative(p), beta_hat) / deleted
        # f_v = z on a single vertex, where the lower bound is attained
        checks.append(_inequality(f'f_prime_lower_{v}', 1 / beta_hat, slope, strict=n > 1))
        checks.append(_inequality(f'f_prime_upper_{v}', slope, n / floor))
    checks.append(_inequality('derivative_lower', n * floor, abs(eval_exact(derivative(p), beta_hat))))
    return {
        'success': all(c.passed for c in checks),
        'checks': checks,
        'diagnostics': diagnostics,
    }
