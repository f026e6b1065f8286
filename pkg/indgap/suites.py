"""
Verification suites run against whole graph populations.

Each suite returns a result dict in the same shape as every other service call:
{'success': True/False, 'suite': name, 'checks': [...], 'failures': [...]},
or {'success': False, 'error': ...} when the suite itself could not run.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from random import Random
from typing import Any, Callable, Dict, Iterable, List, Sequence

import mpmath
import sympy

from . import settings
from .analytic import (
    Check,
    decompose_f_u,
    depth,
    derivative_bounds_check,
    f_u_series,
    gamma_f_u_truncated,
    gamma_poly,
    inductive_bound_check,
    parabola_bound_check,
    majorant_from,
    majorant_grid,
    majorant_grid_checks,
    majorant_theta_series,
    sample_f_u_bound,
)
from .certifier import certified_gap, compute_r_G, soundness_violations
from .combinatorics import (
    bell_bound_holds,
    compose_derivatives,
    composition_count_check,
    ordered_bell,
    ordered_bell_recurrence,
    partial_bell,
    reciprocal_derivatives,
    stirling2,
)
from .enumeration import connected_graphs_upto, random_connected_graphs
from .errors import IndgapError
from .families import (
    FamilySpec,
    asymptotic_ratio,
    chebyshev_identity_check,
    closed_form_roots,
    fibonacci_identity_check,
)
from .graph import Graph, center_vertex, diameter, max_degree
from .indpoly import derivative, independence_poly
from .roots import BetaEnclosure, all_roots, beta_bracket, match_beta, refine, second_smallest_modulus
from .series import series_inverse

logger = logging.getLogger(__name__)

SUITES = ('positivity', 'majorant', 'gamma', 'soundness', 'families', 'combinatorics')


@dataclass(frozen=True)
class SuiteConfig:
    n_max: int = 5
    random_count: int = 0
    seed: int = 0
    precision: int = settings.PRECISION
    grid: int = settings.GRID_SIZE
    tolerance: str = settings.TOLERANCE
    series_order: int = 30
    family_n_max: int = 30
    jobs: int = 1


def _named(g: Graph, checks: Iterable[Check]) -> List[Check]:
    return [Check(f"{g}:{c.name}", c.passed, c.margin) for c in checks]


def _refined_beta(g: Graph, config: SuiteConfig, theta: Fraction) -> BetaEnclosure:
    """β enclosure narrow enough that (β θ)^2 stays visible next to f_u(β_hi) - 1."""
    p = independence_poly(g)
    beta = beta_bracket(g, config.tolerance, p)
    needed = beta.lo ** (diameter(g) + 2) * theta ** 2 / (64 * g.n)
    if not beta.exact and beta.width > needed:
        beta = refine(p, beta, needed)
    return beta


def positivity_checks(g: Graph, config: SuiteConfig) -> List[Check]:
    """Taylor coefficients of 1/I(G, z) and of f_u(z) beyond the constant are positive."""
    K = config.series_order
    inverse = series_inverse(independence_poly(g), K)
    checks = [Check('inverse_positive', min(inverse.coeffs) > 0, float(min(inverse.coeffs)))]
    # on a single vertex f_u(z) = z exactly
    for u in range(g.n if g.n > 1 else 0):
        coeffs = f_u_series(g, u, K).coeffs[1:]
        checks.append(Check(f'f_{u}_positive', min(coeffs) > 0, float(min(coeffs))))
    return _named(g, checks)


def majorant_checks(g: Graph, config: SuiteConfig) -> List[Check]:
    """Domination and monotonicity on the grid, vanishing odd θ-coefficients, the parabola and inductive bounds."""
    u = center_vertex(g)
    ratio = decompose_f_u(g, u)
    majorant = majorant_from(ratio)
    if g.n == 1:
        return _named(g, [Check('majorant_trivial', True, 0.0)])
    d, delta = max_degree(g), depth(ratio)
    beta0 = beta_bracket(g, config.tolerance)
    top = (beta0.lo / (2 * d)) ** (2 * delta)
    beta = _refined_beta(g, config, top / 10)
    tiny = (beta.lo * top / 10) ** 2 / 64
    work = max(config.precision, tiny.denominator.bit_length() - tiny.numerator.bit_length() + 64)
    checks = majorant_grid_checks(majorant_grid(g, u, beta.hi, config.grid, work), work)
    half = majorant_grid_checks(majorant_grid(g, u, beta.lo / 2, config.grid, work), work)
    checks += [Check(f'{c.name}_half_radius', c.passed, c.margin) for c in half]
    series = majorant_theta_series(majorant, beta.lo, 12, work)
    with mpmath.workprec(work):
        odd = max(abs(series[k]) for k in range(1, 13, 2))
        checks.append(Check('theta_odd_coefficients', bool(odd < mpmath.mpf('1e-30')), float(mpmath.mpf('1e-30') - odd)))
        checks.append(Check('theta_second_negative', bool(series[2] < 0), float(-series[2])))
    checks += parabola_bound_check(majorant, beta.lo, beta.hi, d, delta, precision=work)
    checks.append(inductive_bound_check(majorant, beta.lo, 20, work))
    return _named(g, checks)


def gamma_checks(g: Graph, config: SuiteConfig) -> List[Check]:
    """Derivative, γ and |f_u| <= 2 inequalities at the β enclosure midpoint."""
    p = independence_poly(g)
    beta = beta_bracket(g, config.tolerance, p)
    dia = diameter(g)
    report = derivative_bounds_check(g, beta.midpoint)
    checks = list(report['checks'])
    gamma = gamma_poly(derivative(p), 0, beta.midpoint, config.precision,
                       certified_upper=g.n / beta.lo ** dia) if g.n > 1 else None
    if gamma is not None:
        checks.append(Check('gamma_Iprime', gamma.holds, float(gamma.certified_upper - gamma.value)))
    r_G = compute_r_G(g, beta)
    K = max(2, 2 * g.n)
    for u in range(g.n):
        estimate = gamma_f_u_truncated(g, u, beta.midpoint, K, config.precision, certified_upper=1 / r_G)
        checks.append(Check(f'gamma_f_{u}', estimate.holds, float(estimate.certified_upper - estimate.value)))
    sup = sample_f_u_bound(g, center_vertex(g), beta.hi + r_G / 2, precision=config.precision)
    checks.append(Check('f_u_bound', bool(sup <= 2), float(2 - sup)))
    return _named(g, checks)


def soundness_checks(g: Graph, config: SuiteConfig) -> List[Check]:
    """A valid certificate whose disc D(0, β + gap) holds no numeric root but β."""
    certificate = certified_gap(g, config.tolerance, config.precision, config.grid)
    checks = [Check('certificate_valid', certificate.valid, 0.0 if certificate.valid else -1.0)]
    violations = soundness_violations(g, certificate, config.precision)
    checks.append(Check('no_root_in_gap_disc', not violations, float(-len(violations))))
    rs = all_roots(independence_poly(g), config.precision)
    with mpmath.workprec(config.precision):
        residual = max(rs.residuals)
        checks.append(Check('root_residuals', bool(residual < mpmath.mpf('1e-25')), float(mpmath.mpf('1e-25') - residual)))
        alpha = second_smallest_modulus(rs, certificate.beta)
        empirical = alpha - mpmath.mpmathify(certificate.beta.hi)
        certified = mpmath.mpmathify(certificate.certified_gap)
        checks.append(Check('empirical_exceeds_certified', bool(empirical > certified), float(empirical - certified)))
        index = match_beta(rs, certificate.beta)
        center = mpmath.mpmathify(certificate.beta.midpoint)
        inside = [i for i, z in enumerate(rs.roots)
                  if i != index and abs(z - center) < mpmath.mpmathify(certificate.injectivity_radius)]
        checks.append(Check('injectivity_disc_unique', not inside, float(-len(inside))))
    return _named(g, checks)


def _match_roots(expected: Sequence[Any], actual: Sequence[Any]) -> Any:
    """Largest distance from a closed-form root to its nearest unused numeric root."""
    unused = list(actual)
    worst = mpmath.mpf(0)
    for z in expected:
        best = min(range(len(unused)), key=lambda i: abs(unused[i] - z))
        worst = max(worst, abs(unused.pop(best) - z))
    return worst


def family_checks(config: SuiteConfig) -> List[Check]:
    checks = []
    limit = mpmath.mpf('1e-9')
    specs = [FamilySpec('path', n) for n in range(1, config.family_n_max + 1)]
    specs += [FamilySpec('cycle', n) for n in range(3, config.family_n_max + 1)]
    specs += [FamilySpec('bipartite', n) for n in range(1, min(20, config.family_n_max) + 1)]
    for spec in specs:
        p = independence_poly(spec.graph())
        expected = closed_form_roots(spec, config.precision)
        label = f"{spec.kind}:{spec.n}"
        if len(expected) != p.degree:
            checks.append(Check(f'{label}:root_count', False, float(len(expected) - p.degree)))
            continue
        error = _match_roots(expected, all_roots(p, config.precision).roots)
        checks.append(Check(f'{label}:closed_form', bool(error < limit), float(limit - error)))
        if spec.n <= 12:
            beta = beta_bracket(spec.graph(), config.tolerance, p)
            with mpmath.workprec(config.precision):
                # rational β (path:1, path:4, cycle:3) sits on the rounded closed form
                slack = mpmath.mpf(2) ** (-(config.precision // 2))
                smallest = expected[0].real
                gap = min(smallest - mpmath.mpmathify(beta.lo), mpmath.mpmathify(beta.hi) - smallest)
                checks.append(Check(f'{label}:beta_matches', bool(gap >= -slack), float(gap)))
    for n in range(1, 13):
        checks.append(Check(f'fibonacci:{n}', fibonacci_identity_check(n), 0.0))
    for n in range(3, 13):
        checks.append(Check(f'chebyshev:{n}', chebyshev_identity_check(n, precision=config.precision), 0.0))
    for kind, n in (('path', 200), ('cycle', 200)):
        ratio = asymptotic_ratio(FamilySpec(kind, n), config.precision)
        scale = (n + 2) ** 2 / (3 * mpmath.pi ** 2) if kind == 'path' else mpmath.mpf(n) ** 2 / (2 * mpmath.pi ** 2)
        normalized = (ratio.ratio - 1) * scale
        checks.append(Check(f'{kind}:{n}:asymptotic', bool(0.95 <= normalized <= 1.05), float(0.05 - abs(normalized - 1))))
    bipartite = asymptotic_ratio(FamilySpec('bipartite', 100), config.precision)
    spread = abs(bipartite.ratio / mpmath.mpf('9.119') - 1)
    checks.append(Check('bipartite:100:asymptotic', bool(spread <= 0.005), float(0.005 - spread)))
    return checks


def _surjection_count(N: int, K: int) -> int:
    return sum(1 for f in product(range(K), repeat=N) if len(set(f)) == K)


def combinatorics_checks(seed: int = 0) -> List[Check]:
    checks = []
    expected = [1, 1, 3, 13, 75, 541]
    brute = [1] + [sum(_surjection_count(N, K) for K in range(1, N + 1)) for N in range(1, 6)]
    checks.append(Check('ordered_bell_brute_force', brute == expected, 0.0))
    checks.append(Check('ordered_bell_sum', [ordered_bell(N) for N in range(6)] == expected, 0.0))
    checks.append(Check('ordered_bell_recurrence', ordered_bell_recurrence(5) == expected, 0.0))
    for N in range(1, 21):
        checks.append(Check(f'bell_bound:{N}', bell_bound_holds(N), 0.0))
    for N in range(1, 11):
        for K in range(1, N + 1):
            checks.append(Check(f'composition_count:{N}:{K}', composition_count_check(N, K), 0.0))
            checks.append(Check(f'stirling_bell:{N}:{K}', partial_bell(N, K, [1] * (N - K + 1)) == stirling2(N, K), 0.0))

    z = sympy.Symbol('z')
    rng = Random(seed)
    for trial in range(5):
        f = sum(rng.randint(-5, 5) * z ** k for k in range(6))
        g = sum(rng.randint(-5, 5) * z ** k for k in range(6))
        point = sympy.Rational(rng.randint(-4, 4), rng.randint(1, 5))
        inner = g.subs(z, point)
        f_derivs = [Fraction(str(sympy.diff(f, z, k).subs(z, inner))) for k in range(7)]
        g_derivs = [Fraction(str(sympy.diff(g, z, k).subs(z, point))) for k in range(7)]
        composite = f.subs(z, g)
        for N in range(1, 7):
            symbolic = Fraction(str(sympy.diff(composite, z, N).subs(z, point)))
            checks.append(Check(f'faa_di_bruno:{trial}:{N}', compose_derivatives(f_derivs, g_derivs, N) == symbolic, 0.0))
        h = 2 + z ** 2 + g ** 2
        h_derivs = [Fraction(str(sympy.diff(h, z, k).subs(z, point))) for k in range(5)]
        reciprocal = reciprocal_derivatives(h_derivs, 4)
        for j in range(5):
            symbolic = Fraction(str(sympy.diff(1 / h, z, j).subs(z, point)))
            checks.append(Check(f'reciprocal:{trial}:{j}', reciprocal[j] == symbolic, 0.0))
    return checks


GRAPH_SUITES: Dict[str, Callable[[Graph, SuiteConfig], List[Check]]] = {
    'positivity': positivity_checks,
    'majorant': majorant_checks,
    'gamma': gamma_checks,
    'soundness': soundness_checks,
}


def _run_graph_suite(args: tuple) -> List[Check]:
    name, g, config = args
    return GRAPH_SUITES[name](g, config)


class VerificationService:
    """Runs named property suites over enumerated and random connected graphs."""

    def __init__(self, config: SuiteConfig = SuiteConfig()):
        self.config = config

    def population(self, n_min: int = 1) -> List[Graph]:
        graphs = connected_graphs_upto(min(self.config.n_max, 8), n_min)
        if self.config.random_count:
            graphs += random_connected_graphs(self.config.random_count, seed=self.config.seed)
        return graphs

    def _map(self, name: str, graphs: List[Graph]) -> List[Check]:
        tasks = [(name, g, self.config) for g in graphs]
        if self.config.jobs > 1:
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                results = list(pool.map(_run_graph_suite, tasks))
        else:
            results = [_run_graph_suite(task) for task in tasks]
        return [check for checks in results for check in checks]

    def run(self, name: str) -> Dict[str, Any]:
        """Run one suite and summarize its checks."""
        try:
            if name in GRAPH_SUITES:
                checks = self._map(name, self.population(2 if name == 'soundness' else 1))
            elif name == 'families':
                checks = family_checks(self.config)
            elif name == 'combinatorics':
                checks = combinatorics_checks(self.config.seed)
            else:
                raise IndgapError(f"Unknown suite {name!r}; expected one of {', '.join(SUITES)} or all")
            failures = [c for c in checks if not c.passed]
            for c in failures:
                logger.warning(f"Suite {name}: check {c.name} failed with margin {c.margin}")
            logger.info(f"Suite {name}: {len(checks) - len(failures)}/{len(checks)} checks passed")
            return {
                'success': not failures,
                'suite': name,
                'checks': [c.to_dict() for c in checks],
                'failures': [c.to_dict() for c in failures],
            }
        except IndgapError as e:
            logger.error(f"Error during suite {name}: {str(e)}")
            return {
                'success': False,
                'suite': name,
                'error': str(e)
            }
        except Exception as e:
            logger.error(f"Unexpected error during suite {name}: {str(e)}")
            return {
                'success': False,
                'suite': name,
                'error': f"Unexpected error: {str(e)}"
            }

    def run_all(self) -> Dict[str, Any]:
        results = [self.run(name) for name in SUITES]
        return {
            'success': all(r['success'] for r in results),
            'suite': 'all',
            'results': results,
        }
