"""
Edge-list text format and generator spec strings.

Edge lists: first line "n m", then m lines "u v" (0-based); blank lines and
'#' comments are ignored. Spec strings: "path:7", "cycle:12", "star:5",
"complete:4", "kbip:4x4", "gnp:10:0.4:seed42".
"""
import logging
from pathlib import Path
from typing import List, Tuple

from .errors import GraphParseError
from .graph import (
    Graph,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_random,
    make_star,
)

logger = logging.getLogger(__name__)


def parse_edge_list(text: str, label: str | None = None) -> Graph:
    rows: List[List[str]] = []
    for raw in text.splitlines():
        line = raw.split('#', 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise GraphParseError("Edge list is empty; expected a header line 'n m'")
    try:
        header = [int(tok) for tok in rows[0]]
        if len(header) != 2:
            raise ValueError(f"header has {len(header)} fields")
        n, m = header
        edges: List[Tuple[int, int]] = []
        for row in rows[1:]:
            if len(row) != 2:
                raise ValueError(f"edge line {' '.join(row)!r} needs two fields")
            edges.append((int(row[0]), int(row[1])))
    except ValueError as e:
        raise GraphParseError(f"Malformed edge list: {e}") from e
    if len(edges) != m:
        raise GraphParseError(f"Header announces {m} edges but {len(edges)} were given")
    if len(set(tuple(sorted(e)) for e in edges)) != len(edges):
        raise GraphParseError("Edge list contains a repeated edge")
    return Graph.from_edges(n, edges, label)


def to_edge_list(g: Graph) -> str:
    edges = g.edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_graph_spec(spec: str) -> Graph:
    kind, _, rest = spec.strip().partition(':')
    try:
        if kind == 'path':
            return make_path(int(rest))
        if kind == 'cycle':
            return make_cycle(int(rest))
        if kind == 'star':
            return make_star(int(rest))
        if kind == 'complete':
            return make_complete(int(rest))
        if kind == 'kbip':
            a, b = rest.lower().split('x')
            return make_complete_bipartite(int(a), int(b))
        if kind == 'gnp':
            n, p, seed = rest.split(':')
            return make_random(int(n), float(p), int(seed.removeprefix('seed')))
    except ValueError as e:
        raise GraphParseError(f"Malformed graph spec {spec!r}: {e}") from e
    raise GraphParseError(f"Unknown graph generator {kind!r} in spec {spec!r}")


def load_graph(spec: str | None = None, path: str | None = None) -> Graph:
    """Build a graph from a generator spec or read it from an edge-list file."""
    if spec and path:
        raise GraphParseError("Give either a graph spec or an edge-list file, not both")
    if spec:
        return parse_graph_spec(spec)
    if path:
        file = Path(path)
        try:
            text = file.read_text()
        except OSError as e:
            raise GraphParseError(f"Cannot read edge list {path}: {e}") from e
        logger.info(f"Loaded edge list from {path}")
        return parse_edge_list(text, label=file.name)
    raise GraphParseError("No graph given; pass a spec such as 'cycle:6' or --file")
