"""
Test populations: connected graphs up to isomorphism and seeded random connected graphs.
"""
import logging
import random
from collections import defaultdict
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import networkx as nx

from .graph import Graph, from_networkx, is_connected, make_random

logger = logging.getLogger(__name__)

MAX_ENUMERATED_ORDER = 8


def _atlas_connected(n: int) -> List[nx.Graph]:
    return [h for h in nx.graph_atlas_g() if h.number_of_nodes() == n and nx.is_connected(h)]


def _extend(smaller: Sequence[nx.Graph], n: int) -> List[nx.Graph]:
    """Add vertex n-1 to every graph on n-1 vertices with every nonempty neighbor set."""
    buckets: Dict[str, List[nx.Graph]] = defaultdict(list)
    unique = []
    for base in smaller:
        for subset in range(1, 1 << (n - 1)):
            h = base.copy()
            h.add_edges_from((n - 1, v) for v in range(n - 1) if subset >> v & 1)
            key = nx.weisfeiler_lehman_graph_hash(h)
            if any(nx.is_isomorphic(h, other) for other in buckets[key]):
                continue
            buckets[key].append(h)
            unique.append(h)
    return unique


@lru_cache(maxsize=None)
def _connected(n: int) -> Tuple[Graph, ...]:
    if n <= 7:
        graphs = _atlas_connected(n)
    else:
        graphs = _extend(_atlas_connected(n - 1), n)
    logger.info(f"Enumerated {len(graphs)} connected graphs on {n} vertices")
    return tuple(from_networkx(h, label=f"connected{n}#{i}") for i, h in enumerate(graphs))


def connected_graphs(n: int) -> List[Graph]:
    """All connected graphs on n vertices, one per isomorphism class (1 <= n <= 8)."""
    if not 1 <= n <= MAX_ENUMERATED_ORDER:
        raise ValueError(f"Connected graphs are enumerated for 1 <= n <= {MAX_ENUMERATED_ORDER}, got {n}")
    return list(_connected(n))


def connected_graphs_upto(n_max: int, n_min: int = 1) -> List[Graph]:
    return [g for n in range(n_min, n_max + 1) for g in connected_graphs(n)]


def random_connected_graphs(count: int, n_range: Tuple[int, int] = (9, 12),
                            p_values: Sequence[float] = (0.2, 0.4, 0.6), seed: int = 0) -> List[Graph]:
    """
    count connected G(n, p) samples; each draw picks n and p, then redraws the
    graph seed until the sample is connected.
    """
    rng = random.Random(seed)
    graphs = []
    for _ in range(count):
        n = rng.randint(*n_range)
        p = rng.choice(list(p_values))
        while True:
            g = make_random(n, p, rng.randrange(2 ** 32))
            if is_connected(g):
                break
        graphs.append(g)
    return graphs
