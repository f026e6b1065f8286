"""
Command-line front end.

Exit codes: 0 success, 1 failed verification or unexpected error, 2 unreadable
input or configuration, 3 more than 64 vertices, 4 disconnected graph (or fewer
than two vertices for `certify`), 5 certificate produced but invalid.
"""
import argparse
import csv
import io
import json
import logging
import logging.config
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

import mpmath

from . import settings
from .analytic import majorant_grid
from .certifier import GapCertificate, certified_gap
from .errors import (
    CertificationError,
    ConfigError,
    DisconnectedGraphError,
    GraphError,
    GraphParseError,
    IndgapError,
    VertexCapError,
)
from .families import KINDS, family_table
from .graph import Graph, center_vertex
from .graph_io import load_graph
from .indpoly import independence_poly
from .roots import all_roots, beta_bracket
from .suites import SUITES, SuiteConfig, VerificationService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_DISCONNECTED = 4
EXIT_INVALID = 5

# first entry is the default
FORMATS = {
    'poly': ('json', 'text'),
    'certify': ('json', 'text'),
    'verify': ('json', 'text'),
    'plot-data': ('csv',),
    'roots': ('json',),
    'families': ('csv', 'json'),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: Optional[str] = None
    file: Optional[str] = None
    tol: str = settings.TOLERANCE
    precision: int = settings.PRECISION
    order: int = settings.SERIES_ORDER
    grid: int = settings.GRID_SIZE
    out: Optional[str] = None
    fmt: Optional[str] = None
    seed: int = 0
    nmax: Optional[int] = None
    jobs: int = 1
    pivot: Optional[int] = None
    suite: str = 'all'
    kind: str = 'path'
    random: int = 0

    def __post_init__(self):
        if settings.CONFIG_ERRORS:
            raise ConfigError("; ".join(settings.CONFIG_ERRORS))
        allowed = FORMATS[self.command]
        if self.fmt is None:
            object.__setattr__(self, 'fmt', allowed[0])
        if self.fmt not in allowed:
            raise ConfigError(f"Format {self.fmt!r} is not available for {self.command}; use {' or '.join(allowed)}")
        try:
            tol = Fraction(self.tol)
        except (ValueError, ZeroDivisionError) as e:
            raise ConfigError(f"Tolerance {self.tol!r} is not a number") from e
        if tol <= 0:
            raise ConfigError(f"Tolerance must be positive, got {self.tol}")
        if self.grid < 16:
            raise ConfigError(f"Grid size must be at least 16, got {self.grid}")
        if self.precision < 53:
            raise ConfigError(f"Precision must be at least 53 bits, got {self.precision}")
        if self.order < 0:
            raise ConfigError(f"Series order must be non-negative, got {self.order}")
        if self.jobs < 1:
            raise ConfigError(f"Job count must be positive, got {self.jobs}")

    def load(self) -> Graph:
        return load_graph(self.graph, self.file)


def _render_csv(header: List[str], rows: List[List[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
        logger.info(f"Wrote {cfg.command} output to {cfg.out}")
    else:
        print(text, end='' if text.endswith('\n') else '\n')


def cmd_poly(cfg: RunConfig) -> int:
    g = cfg.load()
    p = independence_poly(g)
    coeffs = list(p.coeffs) or [0]
    if cfg.fmt == 'text':
        _emit(cfg, f"I({g}, z) = {p}\ncoefficients: {coeffs}\n")
    else:
        _emit(cfg, json.dumps({'graph': str(g), 'n': g.n, 'coeffs': coeffs}) + '\n')
    return EXIT_OK


def _certificate_text(c: GapCertificate) -> str:
    lines = [
        f"graph: {c.graph} (n={c.n}, dia={c.dia}, pivot={c.pivot})",
        f"beta in [{float(c.beta.lo):.15g}, {float(c.beta.hi):.15g}]",
        f"r_G = {mpmath.nstr(mpmath.mpmathify(c.r_G), 10)}",
        f"theta_G = {mpmath.nstr(mpmath.mpmathify(c.theta_G), 10)}",
        f"injectivity radius = {mpmath.nstr(mpmath.mpmathify(c.injectivity_radius), 10)}",
        f"certified gap = {mpmath.nstr(mpmath.mpmathify(c.certified_gap), 10)} (constant 1/8)",
        f"stated-constant gap = {mpmath.nstr(mpmath.mpmathify(c.quarter_constant_gap), 10)} (constant 1/4)",
        f"zero-free radius variant: {c.info.get('zero_free_radius_variant')} (stated: r_G (1 - |f_u|))",
        f"valid: {c.valid}",
    ]
    lines += [f"  {'PASS' if ch.passed else 'FAIL'} {ch.name} margin={ch.margin:.6g}" for ch in c.checks]
    lines += [f"  info {ch.name}: {'holds' if ch.passed else 'fails'} margin={ch.margin:.6g}" for ch in c.diagnostics]
    return "\n".join(lines) + "\n"


def cmd_certify(cfg: RunConfig) -> int:
    g = cfg.load()
    certificate = certified_gap(g, cfg.tol, cfg.precision, cfg.grid, cfg.order, cfg.pivot)
    if cfg.fmt == 'text':
        _emit(cfg, _certificate_text(certificate))
    else:
        _emit(cfg, json.dumps(certificate.to_dict(), indent=2) + '\n')
    return EXIT_OK if certificate.valid else EXIT_INVALID


def _suite_config(cfg: RunConfig) -> SuiteConfig:
    return SuiteConfig(
        n_max=cfg.nmax or 5,
        random_count=cfg.random,
        seed=cfg.seed,
        precision=cfg.precision,
        grid=cfg.grid,
        tolerance=cfg.tol,
        family_n_max=cfg.nmax or 30,
        jobs=cfg.jobs,
    )


def cmd_verify(cfg: RunConfig) -> int:
    service = VerificationService(_suite_config(cfg))
    result = service.run_all() if cfg.suite == 'all' else service.run(cfg.suite)
    results = result.get('results', [result])
    if cfg.fmt == 'text':
        lines = []
        for r in results:
            if 'error' in r:
                lines.append(f"{r['suite']}: ERROR {r['error']}")
                continue
            lines.append(f"{r['suite']}: {'PASS' if r['success'] else 'FAIL'} ({len(r['checks'])} checks)")
            lines += [f"  {'PASS' if c['pass'] else 'FAIL'} {c['name']} margin={c['margin']:.6g}" for c in r['checks']]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, json.dumps(result, indent=2) + '\n')
    return EXIT_OK if result['success'] else EXIT_FAILED


def cmd_plot_data(cfg: RunConfig) -> int:
    g = cfg.load()
    u = center_vertex(g) if cfg.pivot is None else cfg.pivot
    if not 0 <= u < g.n:
        raise ConfigError(f"Pivot {u} is not a vertex of {g}")
    beta = beta_bracket(g, cfg.tol)
    rows = majorant_grid(g, u, beta.hi, cfg.grid, cfg.precision)
    _emit(cfg, _render_csv(['theta', 'abs_f_u', 'majorant'],
                           [[mpmath.nstr(t, 20), mpmath.nstr(a, 20), mpmath.nstr(F, 20)] for t, a, F in rows]))
    return EXIT_OK


def cmd_roots(cfg: RunConfig) -> int:
    g = cfg.load()
    rs = all_roots(independence_poly(g), cfg.precision)
    _emit(cfg, json.dumps({'graph': str(g), **rs.to_dict()}, indent=2) + '\n')
    return EXIT_OK


def cmd_families(cfg: RunConfig) -> int:
    start = 3 if cfg.kind == 'cycle' else 1
    rows = [r.to_row() for r in family_table(cfg.kind, range(start, (cfg.nmax or 30) + 1), cfg.precision)]
    header = ['n', 'beta', 'alpha_modulus', 'ratio', 'predicted_ratio']
    if cfg.fmt == 'json':
        _emit(cfg, json.dumps(rows, indent=2) + '\n')
    else:
        _emit(cfg, _render_csv(header, [[row[h] for h in header] for row in rows]))
    return EXIT_OK


COMMANDS = {
    'poly': cmd_poly,
    'certify': cmd_certify,
    'verify': cmd_verify,
    'plot-data': cmd_plot_data,
    'roots': cmd_roots,
    'families': cmd_families,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='indgap', description="Independence polynomial root gaps.")
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p: argparse.ArgumentParser, graph: bool = True) -> None:
        if graph:
            p.add_argument('graph', nargs='?', help="Generator spec such as path:7, cycle:6, star:3, kbip:2x2.")
            p.add_argument('--graph', dest='graph_flag', help="Generator spec (same as the positional argument).")
            p.add_argument('--file', help="Edge-list file: header 'n m', then m lines 'u v'.")
        p.add_argument('--tol', default=settings.TOLERANCE, help="Width of the β enclosure.")
        p.add_argument('--precision', type=int, default=settings.PRECISION, help="Working precision in bits.")
        p.add_argument('--order', type=int, default=settings.SERIES_ORDER, help="Series order (0 means 2n).")
        p.add_argument('--grid', type=int, default=settings.GRID_SIZE, help="Number of θ samples on [0, π].")
        p.add_argument('--out', help="Write output to this file instead of stdout.")
        p.add_argument('--format', dest='fmt', choices=['json', 'csv', 'text'], help="Output format.")
        p.add_argument('--seed', type=int, default=0)

    common(sub.add_parser('poly', help="Print the independence polynomial."))
    certify = sub.add_parser('certify', help="Build a gap certificate.")
    common(certify)
    certify.add_argument('--pivot', type=int, help="Vertex u for the f_u checks (default: a center vertex).")
    verify = sub.add_parser('verify', help="Run property suites.")
    common(verify, graph=False)
    verify.add_argument('suite', nargs='?', default='all', choices=list(SUITES) + ['all'])
    verify.add_argument('--nmax', type=int, help="Largest graph order (families: largest n).")
    verify.add_argument('--random', type=int, default=0, help="Number of extra random connected graphs.")
    verify.add_argument('--jobs', type=int, default=1, help="Worker processes.")
    plot = sub.add_parser('plot-data', help="Emit θ, |f_u(β e^{iθ})|, F_{u,β}(θ) as CSV.")
    common(plot)
    plot.add_argument('--pivot', type=int, help="Vertex u (default: a center vertex).")
    common(sub.add_parser('roots', help="Print all complex roots."))
    families = sub.add_parser('families', help="Closed-form family ratios.")
    common(families, graph=False)
    families.add_argument('--kind', choices=list(KINDS), default='path')
    families.add_argument('--nmax', type=int, help="Largest n (default 30).")
    return parser


def _run_config(args: argparse.Namespace) -> RunConfig:
    values: Dict[str, Any] = vars(args).copy()
    flag = values.pop('graph_flag', None)
    if flag and values.get('graph'):
        raise ConfigError("Give the graph either positionally or with --graph, not both")
    values['graph'] = values.get('graph') or flag
    return RunConfig(**values)


def main(argv: Optional[List[str]] = None) -> int:
    logging.config.dictConfig(settings.LOGGING)
    args = build_parser().parse_args(argv)
    try:
        cfg = _run_config(args)
        return COMMANDS[cfg.command](cfg)
    except VertexCapError as e:
        logger.error(f"Vertex cap exceeded: {str(e)}")
        return EXIT_CAP
    except (DisconnectedGraphError, CertificationError) as e:
        logger.error(f"Cannot certify input: {str(e)}")
        return EXIT_DISCONNECTED
    except (GraphParseError, GraphError, ConfigError) as e:
        logger.error(f"Invalid input: {str(e)}")
        return EXIT_INPUT
    except IndgapError as e:
        logger.error(f"Error during {args.command}: {str(e)}")
        return EXIT_FAILED
    except Exception as e:
        logger.error(f"Unexpected error: {str(e)}")
        return EXIT_FAILED
