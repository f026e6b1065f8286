"""
Zero-free gap certificates.

For a connected graph G with n >= 2 the certificate combines
  - a rational enclosure of β(G),
  - the injectivity disc D(β, r_G / 2) that holds no root but β,
  - zero-free discs of radius r_G (β θ_G)^2 / 8 around β e^{iθ} for θ >= θ_G,
into a gap g such that D(0, β + g) holds no root of I(G, z) other than β.
Every bound the composition rests on is re-checked numerically and
recorded; a certificate with a failed check is marked invalid.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import mpmath

from . import settings
from .analytic import (
    Check,
    GammaEstimate,
    decompose_f_u,
    depth,
    eval_ratio,
    f_u_polys,
    gamma_f_u_truncated,
    gamma_poly,
    parabola_bound_check,
    parabola_angle_limit,
    inductive_bound_check,
    iprime_sup_ratio,
    majorant_eval,
    majorant_from,
    majorant_grid,
    majorant_grid_checks,
    r_G_at,
    sample_f_u_bound,
)
from .errors import BoundViolationError, CertificationError, IndgapError
from .graph import Graph, center_vertex, diameter, max_degree, require_connected
from .indpoly import IntPoly, derivative, eval_exact, independence_poly
from .roots import (
    BetaEnclosure,
    all_roots,
    beta_bracket,
    beta_lower,
    match_beta,
    refine,
    shearer_bound,
    verify_enclosure,
)

logger = logging.getLogger(__name__)

__all__ = [
    'GapCertificate', 'compute_r_G', 'compute_theta_G', 'injectivity_radius', 'zero_free_radius_at',
    'plain_zero_free_radius_at', 'corollary_disc_radius', 'gap_formula', 'certified_gap', 'soundness_violations',
    'shearer_bound', 'beta_lower',
]

BetaLike = Union[BetaEnclosure, int, Fraction]


def _beta_down(beta: BetaLike) -> Fraction:
    return beta.lo if isinstance(beta, BetaEnclosure) else Fraction(beta)


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}" if q.denominator != 1 else str(q.numerator)


def compute_r_G(g: Graph, beta: BetaLike) -> Fraction:
    """r_G = β^dia / (2n) at the lower end of the enclosure; r_G grows with β."""
    require_connected(g)
    return r_G_at(g.n, diameter(g), _beta_down(beta))


def compute_theta_G(g: Graph, beta: BetaLike) -> Fraction:
    """θ_G = (β / 4n)^dia at the lower end of the enclosure."""
    require_connected(g)
    return (_beta_down(beta) / (4 * g.n)) ** diameter(g)


def _working_precision(precision: int, beta_lo: Fraction, theta_G: Fraction) -> int:
    """Enough bits to resolve 1 - (β θ_G)^2 / 64 against 1."""
    tiny = (beta_lo * theta_G) ** 2 / 64
    needed = tiny.denominator.bit_length() - tiny.numerator.bit_length() + 64
    return max(precision, needed)


def injectivity_radius(g: Graph, beta: BetaEnclosure, precision: int = settings.PRECISION,
                       p: Optional[IntPoly] = None) -> Fraction:
    """
    r_G / 2, after checking γ_{I'}(β) <= 1/r_G and that sampled |I'| on D(β, r_G) stays
    within twice |I'(β)|, which together give the injectivity radius.
    """
    if p is None:
        p = independence_poly(g)
    r_G = compute_r_G(g, beta)
    gamma = gamma_poly(derivative(p), 0, beta.midpoint, precision)
    if gamma.value > mpmath.mpmathify(1 / r_G):
        raise BoundViolationError(f"γ of I' at β is {mpmath.nstr(gamma.value, 10)} > 1/r_G for {g}")
    ratio = iprime_sup_ratio(p, beta.midpoint, r_G, precision=precision)
    if ratio > 2:
        raise BoundViolationError(f"Sampled |I'| on D(β, r_G) reaches {mpmath.nstr(ratio, 10)} |I'(β)| for {g}")
    return r_G / 2


def _angle(theta: Any, precision: int) -> Any:
    with mpmath.workprec(precision):
        theta = mpmath.mpmathify(theta)
        if not 0 < theta <= mpmath.pi:
            raise ValueError(f"Angle must lie in (0, π], got {theta}")
        return theta


def _abs_f_u_on_circle(g: Graph, u: int, beta: BetaEnclosure, theta: Any, precision: int) -> Any:
    with mpmath.workprec(precision):
        z = mpmath.mpmathify(beta.midpoint) * mpmath.expj(theta)
        return abs(eval_ratio(f_u_polys(g, u), z, precision))


def zero_free_radius_at(g: Graph, u: int, beta: BetaEnclosure, theta: Any,
                        precision: int = settings.PRECISION) -> Any:
    """r_G (1 - |f_u|) / (2 - |f_u|) at β e^{iθ}, floored at zero."""
    theta = _angle(theta, precision)
    value = _abs_f_u_on_circle(g, u, beta, theta, precision)
    with mpmath.workprec(precision):
        return max(mpmath.mpf(0), mpmath.mpmathify(compute_r_G(g, beta)) * (1 - value) / (2 - value))


def plain_zero_free_radius_at(g: Graph, u: int, beta: BetaEnclosure, theta: Any,
                              precision: int = settings.PRECISION) -> Any:
    """The larger stated radius r_G (1 - |f_u|), kept for comparison only."""
    theta = _angle(theta, precision)
    value = _abs_f_u_on_circle(g, u, beta, theta, precision)
    with mpmath.workprec(precision):
        return max(mpmath.mpf(0), mpmath.mpmathify(compute_r_G(g, beta)) * (1 - value))


def corollary_disc_radius(g: Graph, beta: BetaEnclosure, theta: Any) -> Fraction:
    """Uniform zero-free radius r_G (β θ_G)^2 / 8 around β e^{iθ}, valid for every θ >= θ_G."""
    theta_G = compute_theta_G(g, beta)
    if mpmath.mpmathify(theta) < mpmath.mpmathify(theta_G):
        raise ValueError(f"Angle {theta} lies below θ_G = {float(theta_G)}")
    return compute_r_G(g, beta) * (beta.lo * theta_G) ** 2 / 8


def gap_formula(n: int, dia: int, beta_lo: Fraction, constant: Fraction = Fraction(1, 8)) -> Fraction:
    """min(r_G / 4, constant r_G (β θ_G)^2) with r_G and θ_G taken at beta_lo."""
    r_G = r_G_at(n, dia, beta_lo)
    theta_G = (Fraction(beta_lo) / (4 * n)) ** dia
    return min(r_G / 4, constant * r_G * (beta_lo * theta_G) ** 2)


@dataclass(frozen=True)
class GapCertificate:
    graph: str
    n: int
    dia: int
    pivot: int
    beta: BetaEnclosure
    r_G: Fraction
    theta_G: Fraction
    injectivity_radius: Fraction
    certified_gap: Fraction
    quarter_constant_gap: Fraction
    gamma_Iprime: GammaEstimate
    gamma_f_u: GammaEstimate
    precision: int
    checks: Tuple[Check, ...]
    diagnostics: Tuple[Check, ...] = ()
    info: Dict[str, Any] = field(default_factory=dict, compare=False)

    @property
    def valid(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed_checks(self) -> List[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'graph': self.graph,
            'n': self.n,
            'dia': self.dia,
            'pivot': self.pivot,
            'beta': self.beta.to_dict(),
            'r_G': _fraction_str(self.r_G),
            'theta_G': _fraction_str(self.theta_G),
            'injectivity_radius': _fraction_str(self.injectivity_radius),
            'certified_gap': _fraction_str(self.certified_gap),
            'certified_gap_decimal': mpmath.nstr(mpmath.mpmathify(self.certified_gap), 15),
            'paper_gap_quarter_variant': _fraction_str(self.quarter_constant_gap),
            'gamma_Iprime': self.gamma_Iprime.to_dict(),
            'gamma_f_u': self.gamma_f_u.to_dict(),
            'precision': self.precision,
            'valid': self.valid,
            'checks': [c.to_dict() for c in self.checks],
            'diagnostics': [c.to_dict() for c in self.diagnostics],
            'info': dict(self.info),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'GapCertificate':
        return cls(
            graph=data['graph'],
            n=int(data['n']),
            dia=int(data['dia']),
            pivot=int(data['pivot']),
            beta=BetaEnclosure.from_dict(data['beta']),
            r_G=Fraction(data['r_G']),
            theta_G=Fraction(data['theta_G']),
            injectivity_radius=Fraction(data['injectivity_radius']),
            certified_gap=Fraction(data['certified_gap']),
            quarter_constant_gap=Fraction(data['paper_gap_quarter_variant']),
            gamma_Iprime=GammaEstimate.from_dict(data['gamma_Iprime']),
            gamma_f_u=GammaEstimate.from_dict(data['gamma_f_u']),
            precision=int(data['precision']),
            checks=tuple(Check.from_dict(c) for c in data['checks']),
            diagnostics=tuple(Check.from_dict(c) for c in data.get('diagnostics', [])),
            info=dict(data.get('info', {})),
        )


def _guarded(name: str, compute: Callable[[], List[Check]]) -> List[Check]:
    """Run one group of checks; an error inside it becomes a failed check."""
    try:
        return compute()
    except IndgapError as e:
        logger.error(f"Check {name} failed with {type(e).__name__}: {e}")
        return [Check(name, False, float('-inf'))]
    except Exception as e:
        logger.error(f"Unexpected error: check {name} raised {e}")
        return [Check(name, False, float('-inf'))]


def certified_gap(g: Graph, tol: Union[str, Fraction] = settings.TOLERANCE, precision: int = settings.PRECISION,
                  grid: int = settings.GRID_SIZE, order: int = settings.SERIES_ORDER,
                  pivot: Optional[int] = None) -> GapCertificate:
    """Build and self-check the gap certificate of a connected graph."""
    require_connected(g)
    if g.n < 2:
        raise CertificationError(f"Gap certificates need at least two vertices, {g} has {g.n}")
    p = independence_poly(g)
    n, dia, d = g.n, diameter(g), max_degree(g)
    u = center_vertex(g) if pivot is None else pivot
    if not 0 <= u < n:
        raise CertificationError(f"Pivot {u} out of range for {g}")

    beta = beta_bracket(g, tol, p)
    theta_G = compute_theta_G(g, beta)
    # the parabola term (β θ_G)^2 has to dominate the enclosure width
    needed = beta.lo ** (dia + 2) * theta_G ** 2 / (64 * n)
    if not beta.exact and beta.width > needed:
        beta = refine(p, beta, needed)
        logger.info(f"Refined β enclosure of {g} to width {float(beta.width):.3e}")
    r_G = compute_r_G(g, beta)
    theta_G = compute_theta_G(g, beta)
    work = _working_precision(precision, beta.lo, theta_G)
    if work > precision:
        logger.info(f"Raised working precision for {g} from {precision} to {work} bits")
    K = order or 2 * n

    ratio = decompose_f_u(g, u)
    majorant = majorant_from(ratio)
    delta = depth(ratio)
    checks: List[Check] = []
    diagnostics: List[Check] = []

    checks.append(Check('beta_enclosure', verify_enclosure(p, beta), float(eval_exact(p, beta.lo))))
    start = max(beta_lower(n), shearer_bound(d))
    checks.append(Check('beta_lower_bound', beta.lo >= start, float(beta.lo - start)))

    gamma_iprime = gamma_poly(derivative(p), 0, beta.midpoint, work, certified_upper=n / beta.lo ** dia)
    with mpmath.workprec(work):
        checks.append(Check('gamma_Iprime', gamma_iprime.holds,
                            float(gamma_iprime.certified_upper - gamma_iprime.value)))

    def iprime_checks() -> List[Check]:
        sup = iprime_sup_ratio(p, beta.midpoint, r_G, precision=work)
        return [Check('iprime_sup_ratio', bool(sup <= 2), float(2 - sup))]

    checks.extend(_guarded('iprime_sup_ratio', iprime_checks))

    gamma_fu = gamma_f_u_truncated(g, u, beta.midpoint, K, work, certified_upper=1 / r_G)
    with mpmath.workprec(work):
        checks.append(Check('gamma_f_u', gamma_fu.holds, float(gamma_fu.certified_upper - gamma_fu.value)))

    def f_u_checks() -> List[Check]:
        sup = sample_f_u_bound(g, u, beta.hi + r_G / 2, precision=work)
        return [Check('f_u_bound', bool(sup <= 2), float(2 - sup))]

    checks.extend(_guarded('f_u_bound', f_u_checks))
    checks.extend(_guarded('majorant_grid', lambda: majorant_grid_checks(
        majorant_grid(g, u, beta.hi, grid, work), work)))

    hypothesis_top = parabola_angle_limit(beta.lo, d, delta)
    hypothesis = theta_G <= hypothesis_top
    diagnostics.append(Check('parabola_angle_limit', hypothesis, float(hypothesis_top - theta_G)))

    def parabola() -> List[Check]:
        with mpmath.workprec(work):
            value = majorant_eval(majorant, beta.hi, theta_G, work)
            bound = 1 - mpmath.mpmathify(beta.lo * theta_G) ** 2 / 4
            return [Check('corollary_parabola', bool(value <= bound),
                          float((bound - value) / mpmath.mpmathify(beta.lo * theta_G) ** 2))]

    # the angle-limit hypothesis alone does not admit the parabola component
    direct = _guarded('corollary_parabola', parabola)
    checks.extend(direct)
    corollary = direct[0].passed
    if not corollary:
        logger.warning(f"Parabola component not admitted for {g}; certified gap falls back to 0")

    quarter = gap_formula(n, dia, beta.lo, Fraction(1, 4))
    gap = gap_formula(n, dia, beta.lo) if corollary else Fraction(0)
    radius = r_G / 2
    coverage = radius - ((beta.hi + gap) * theta_G + gap)
    checks.append(Check('angular_coverage', coverage >= 0, float(coverage)))
    checks.append(Check('gap_within_injectivity', gap <= radius, float(radius - gap)))

    with mpmath.workprec(work):
        subtended = mpmath.asin(mpmath.mpmathify(r_G) / (2 * mpmath.mpmathify(beta.hi)))
        floor = mpmath.mpmathify(beta.lo ** dia / (4 * n))
        diagnostics.append(Check('subtended_angle', bool(subtended >= floor >= mpmath.mpmathify(theta_G)), float(subtended - floor)))
        diagnostics.append(Check('depth_within_diameter', delta <= dia, float(dia - delta)))
        diagnostics.extend(_guarded('inductive_bound', lambda: [inductive_bound_check(majorant, beta.lo, 20, work)]))
        diagnostics.extend(_guarded('parabola', lambda: parabola_bound_check(majorant, beta.lo, beta.hi, d, delta,
                                                                         precision=work)))
        exponent = None
        if gap > 0:
            exponent = float(mpmath.log(mpmath.mpmathify(gap * n / beta.lo)) / mpmath.log(mpmath.mpmathify(beta.lo / n)))
        info = {
            'depth': delta,
            'max_degree': d,
            'series_order': K,
            'corollary_admitted': corollary,
            'gap_exponent': exponent,
            'gamma_f_u_decay': None if gamma_fu.decay is None else float(gamma_fu.decay),
            'zero_free_radius_variant': 'r_G (1 - |f_u|) / (2 - |f_u|)',
            'gap_constant': '1/8 (stated: 1/4)',
        }

    certificate = GapCertificate(
        graph=str(g), n=n, dia=dia, pivot=u, beta=beta, r_G=r_G, theta_G=theta_G,
        injectivity_radius=radius, certified_gap=gap, quarter_constant_gap=quarter,
        gamma_Iprime=gamma_iprime, gamma_f_u=gamma_fu, precision=work,
        checks=tuple(checks), diagnostics=tuple(diagnostics), info=info,
    )
    if certificate.valid:
        logger.info(f"Certified gap {float(gap):.3e} for {g}")
    else:
        logger.error(f"Certificate for {g} is invalid; failed checks: {', '.join(certificate.failed_checks)}")
    return certificate


def soundness_violations(g: Graph, certificate: GapCertificate,
                         precision: int = settings.PRECISION) -> List[Any]:
    """Numeric roots other than β inside D(0, β_hi + certified gap)."""
    rs = all_roots(independence_poly(g), precision)
    index = match_beta(rs, certificate.beta)
    with mpmath.workprec(precision):
        limit = mpmath.mpmathify(certificate.beta.hi + certificate.certified_gap)
        return [z for i, z in enumerate(rs.roots) if i != index and abs(z) < limit]
