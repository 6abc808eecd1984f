"""Immutable undirected simple graphs over vertices ``0..n-1``.

Adjacency rows are stored as Python ``int`` bitmasks: bit ``u`` of ``adj[v]``
is set iff ``u`` and ``v`` are adjacent.  Python integers are unbounded, so the
same representation serves n <= 64 (single machine word) and larger graphs.
Vertex sets are ``frozenset[int]`` at the API surface and masks internally.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import GraphInputError

VertexSet = frozenset


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def from_mask(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise GraphInputError("adjacency rows must match vertex count")

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def closed_mask(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u]) if u < v]

    @property
    def m(self) -> int:
        return sum(popcount(a) for a in self.adj) // 2

    def degrees(self) -> tuple[int, ...]:
        return tuple(popcount(a) for a in self.adj)

    def relabel(self, perm: list[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        return build_graph(self.n, [(perm[u], perm[v]) for u, v in self.edges()])

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    if n < 0:
        raise GraphInputError(f"negative vertex count {n}")
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphInputError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise GraphInputError(f"self-loop at {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def _check_vertex(G: Graph, v: int) -> None:
    if not 0 <= v < G.n:
        raise GraphInputError(f"vertex {v} out of range for n={G.n}")


def _check_set(G: Graph, S: Iterable[int]) -> int:
    mask = to_mask(S)
    if mask >> G.n:
        raise GraphInputError(f"vertex set {sorted(S)} not contained in 0..{G.n - 1}")
    return mask


def neighbors(G: Graph, v: int) -> frozenset[int]:
    _check_vertex(G, v)
    return from_mask(G.adj[v])


def closed_neighborhood(G: Graph, v: int) -> frozenset[int]:
    _check_vertex(G, v)
    return from_mask(G.closed_mask(v))


def pendant_vertices(G: Graph) -> frozenset[int]:
    return frozenset(v for v in range(G.n) if G.degree(v) == 1)


def induced_subgraph(G: Graph, S: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    members = sorted(set(S))
    _check_set(G, members)
    mapping = {old: new for new, old in enumerate(members)}
    edges = [(mapping[u], mapping[v]) for u, v in G.edges() if u in mapping and v in mapping]
    return build_graph(len(members), edges), mapping


def is_complete_on(G: Graph, S: Iterable[int]) -> bool:
    mask = _check_set(G, S)
    return all(G.closed_mask(v) & mask == mask for v in iter_bits(mask))


def is_stable_on(G: Graph, S: Iterable[int]) -> bool:
    mask = _check_set(G, S)
    return all(G.adj[v] & mask == 0 for v in iter_bits(mask))


def components(G: Graph, within: int | None = None) -> list[int]:
    """Connected components (as masks) of the subgraph induced by ``within``."""
    remaining = G.full_mask if within is None else within
    comps = []
    while remaining:
        start = remaining & -remaining
        comp = frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= G.adj[v]
            frontier = nxt & remaining & ~comp
            comp |= frontier
        comps.append(comp)
        remaining &= ~comp
    return comps


def is_connected(G: Graph) -> bool:
    return len(components(G)) <= 1


def is_forest_on(G: Graph, S: Iterable[int]) -> bool:
    mask = _check_set(G, S)
    edge_count = sum(popcount(G.adj[v] & mask) for v in iter_bits(mask)) // 2
    return edge_count == popcount(mask) - len(components(G, mask))


def two_coloring(G: Graph) -> list[int] | None:
    """Return a proper 2-colouring (lowest vertex of each component gets 0), or None."""
    color = [-1] * G.n
    for s in range(G.n):
        if color[s] != -1:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in iter_bits(G.adj[v]):
                if color[u] == -1:
                    color[u] = 1 - color[v]
                    stack.append(u)
                elif color[u] == color[v]:
                    return None
    return color


# -- edge-list text format ---------------------------------------------------

_COMMENT = re.compile(r"#.*$")


def parse_edge_list(text: str) -> Graph:
    """Parse ``n m`` followed by ``m`` lines ``u v``; ``#`` starts a comment."""
    tokens: list[list[str]] = []
    for line in text.splitlines():
        line = _COMMENT.sub("", line).strip()
        if line:
            tokens.append(line.split())
    if not tokens:
        raise GraphInputError("empty edge-list file")
    header = tokens[0]
    if len(header) != 2:
        raise GraphInputError(f"header must be 'n m', got {' '.join(header)!r}")
    try:
        n, m = int(header[0]), int(header[1])
        edges = [(int(a), int(b)) for a, b in tokens[1:]]
    except ValueError as exc:
        raise GraphInputError(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise GraphInputError(f"header declares {m} edges, found {len(edges)}")
    return build_graph(n, edges)


def read_comment_directives(text: str) -> dict[str, str]:
    """Collect ``# key: value`` comment lines (used for embedded partitions)."""
    out = {}
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#") and ":" in s:
            key, _, value = s[1:].partition(":")
            out[key.strip()] = value.strip()
    return out


def format_edge_list(G: Graph, comments: dict[str, str] | None = None) -> str:
    lines = [f"# {k}: {v}" for k, v in (comments or {}).items()]
    edges = G.edges()
    lines.append(f"{G.n} {len(edges)}")
    lines.extend(f"{u} {v}" for u, v in edges)
    return "\n".join(lines) + "\n"


# -- named families ------------------------------------------------------------

def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphInputError("cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def complete_bipartite(p: int, q: int) -> Graph:
    """K_{p,q} with sides ``0..p-1`` and ``p..p+q-1``."""
    return build_graph(p + q, [(u, p + v) for u in range(p) for v in range(q)])


def star_graph(leaves: int) -> Graph:
    return complete_bipartite(1, leaves)


def empty_graph(n: int) -> Graph:
    return build_graph(n, [])
