"""
Simple undirected graphs over at most 64 vertices, stored as adjacency bitsets.
"""
import logging
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Tuple, Union

import networkx as nx

from .errors import DisconnectedGraphError, GraphError, VertexCapError
from .settings import MAX_VERTICES

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexSet:
    """Set of vertex indices packed into one integer mask."""

    bits: int = 0

    @classmethod
    def of(cls, vertices: Iterable[int]) -> 'VertexSet':
        bits = 0
        for v in vertices:
            bits |= 1 << v
        return cls(bits)

    def __contains__(self, v: int) -> bool:
        return bool(self.bits >> v & 1)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __or__(self, other: 'VertexSet') -> 'VertexSet':
        return VertexSet(self.bits | other.bits)

    def __sub__(self, other: 'VertexSet') -> 'VertexSet':
        return VertexSet(self.bits & ~other.bits)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the members of a mask in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; adj[v] is the neighbor bitset of v."""

    n: int
    adj: Tuple[int, ...]
    label: Optional[str] = None

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"Vertex count must be non-negative, got {self.n}")
        if self.n > MAX_VERTICES:
            raise VertexCapError(f"Graph has {self.n} vertices; exact mode supports at most {MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError(f"Adjacency has {len(self.adj)} rows for {self.n} vertices")
        full = self.full_mask
        for v, nbrs in enumerate(self.adj):
            if nbrs & ~full:
                raise GraphError(f"Vertex {v} has a neighbor outside range(0, {self.n})")
            if nbrs >> v & 1:
                raise GraphError(f"Self-loop at vertex {v}")
            for w in iter_bits(nbrs):
                if not self.adj[w] >> v & 1:
                    raise GraphError(f"Adjacency is not symmetric between {v} and {w}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]], label: Optional[str] = None) -> 'Graph':
        if n > MAX_VERTICES:
            raise VertexCapError(f"Graph has {n} vertices; exact mode supports at most {MAX_VERTICES}")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"Edge ({u}, {v}) references a vertex outside range(0, {n})")
            if u == v:
                raise GraphError(f"Self-loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), label)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u]) if u < v]

    @property
    def edge_count(self) -> int:
        return sum(nbrs.bit_count() for nbrs in self.adj) // 2

    def degree(self, v: int) -> int:
        _check_vertex(self, v)
        return self.adj[v].bit_count()

    def __str__(self) -> str:
        return self.label or f"Graph(n={self.n}, m={self.edge_count})"


def _check_vertex(g: Graph, v: int) -> None:
    if not 0 <= v < g.n:
        raise GraphError(f"Vertex {v} out of range for graph with {g.n} vertices")


def closed_neighborhood(g: Graph, v: int) -> VertexSet:
    """N[v], the neighbors of v together with v."""
    _check_vertex(g, v)
    return VertexSet(g.adj[v] | 1 << v)


def delete(g: Graph, s: Union[VertexSet, Iterable[int]]) -> Graph:
    """Subgraph induced by V \\ S, re-indexed by ascending original index."""
    removed = s.bits if isinstance(s, VertexSet) else VertexSet.of(s).bits
    kept = list(iter_bits(g.full_mask & ~removed))
    index = {v: i for i, v in enumerate(kept)}
    adj = []
    for v in kept:
        row = 0
        for w in iter_bits(g.adj[v] & ~removed):
            row |= 1 << index[w]
        adj.append(row)
    return Graph(len(kept), tuple(adj), None)


def component_masks(adj: Tuple[int, ...], mask: int) -> List[int]:
    """Connected components of the subgraph induced by mask, by lowest vertex."""
    components = []
    remaining = mask
    while remaining:
        start = remaining & -remaining
        seen = start
        frontier = start
        while frontier:
            grown = 0
            for v in iter_bits(frontier):
                grown |= adj[v]
            frontier = grown & mask & ~seen
            seen |= frontier
        components.append(seen)
        remaining &= ~seen
    return components


def bfs_distances(g: Graph, source: int) -> List[Optional[int]]:
    _check_vertex(g, source)
    dist: List[Optional[int]] = [None] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in iter_bits(g.adj[v]):
            if dist[w] is None:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    return all(d is not None for d in bfs_distances(g, 0))


def require_connected(g: Graph) -> None:
    if g.n == 0 or not is_connected(g):
        raise DisconnectedGraphError(f"{g} is not connected")


def eccentricity(g: Graph, v: int) -> int:
    dist = bfs_distances(g, v)
    if any(d is None for d in dist):
        raise DisconnectedGraphError(f"{g} is not connected")
    return max(dist)


def diameter(g: Graph) -> int:
    """Longest shortest path over all vertex pairs."""
    require_connected(g)
    return max(eccentricity(g, v) for v in range(g.n))


def center_vertex(g: Graph) -> int:
    """Minimum-eccentricity vertex, ties broken by smallest index."""
    require_connected(g)
    return min(range(g.n), key=lambda v: (eccentricity(g, v), v))


def max_degree(g: Graph) -> int:
    return max((nbrs.bit_count() for nbrs in g.adj), default=0)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shifted = [(u + g1.n, v + g1.n) for u, v in g2.edges()]
    return Graph.from_edges(g1.n + g2.n, g1.edges() + shifted)


def make_path(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"Path needs at least one vertex, got {n}")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"path:{n}")


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"Cycle needs at least three vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"cycle:{n}")


def make_star(n: int) -> Graph:
    """Star S_n: center 0 joined to leaves 1..n."""
    if n < 1:
        raise GraphError(f"Star needs at least one leaf, got {n}")
    return Graph.from_edges(n + 1, [(0, i) for i in range(1, n + 1)], f"star:{n}")


def make_complete(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"Complete graph needs at least one vertex, got {n}")
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)], f"complete:{n}")


def make_complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with sides 0..a-1 and a..a+b-1."""
    if a < 1 or b < 1:
        raise GraphError(f"Complete bipartite graph needs non-empty sides, got {a}x{b}")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], f"kbip:{a}x{b}")


def make_random(n: int, p: float, seed: int) -> Graph:
    """G(n, p) drawn from random.Random(seed), scanning pairs i < j in order."""
    if n < 1:
        raise GraphError(f"Random graph needs at least one vertex, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"Edge probability must lie in [0, 1], got {p}")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges, f"gnp:{n}:{p}:seed{seed}")


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def from_networkx(h: nx.Graph, label: Optional[str] = None) -> Graph:
    """Relabel nodes 0..n-1 in sorted order and convert."""
    nodes = sorted(h.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), [(index[u], index[v]) for u, v in h.edges()], label)
