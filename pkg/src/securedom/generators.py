"""Seeded instance generators, one per graph class.

Randomness comes from ``random.Random`` (Mersenne Twister) seeded with the
instance's 64-bit seed, so an ``InstanceSpec`` reproduces its graph exactly.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

from .errors import GraphInputError
from .graph import Graph, build_graph, complete_bipartite, cycle_graph, is_connected, path_graph
from .recognition import (
    BisplitPartition,
    ConvexityWitness,
    SplitPartition,
    check_chordal_bisplit,
    check_pi_convexity,
    is_chordal_bipartite,
    recognize_chain,
    verify_bisplit_partition,
    verify_split_partition,
)

CLASSES = (
    "split",
    "bisplit",
    "chain",
    "chordal-bisplit",
    "chordal-bipartite",
    "comb-convex-split",
    "path",
    "cycle",
    "complete-bipartite",
)


@dataclass(frozen=True)
class InstanceSpec:
    cls: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict:
        return {"class": self.cls, "params": dict(self.params), "seed": self.seed}


def generate(spec: InstanceSpec):
    """Return ``(graph, partition)``; the partition type depends on the class."""
    try:
        fn = _GENERATORS[spec.cls]
    except KeyError:
        raise GraphInputError(f"unknown instance class {spec.cls!r}") from None
    rng = random.Random(spec.seed)
    return fn(rng, **spec.params)


def _relabel(rng: random.Random, n: int, edges, groups):
    perm = list(range(n))
    rng.shuffle(perm)
    G = build_graph(n, [(perm[u], perm[v]) for u, v in edges])
    return G, [frozenset(perm[v] for v in g) for g in groups], perm


def _split(rng, k: int = 3, i: int = 3, p: float = 0.5, shuffle: bool = True):
    if k < 1 or i < 0:
        raise GraphInputError("split generator needs k >= 1, i >= 0")
    K = list(range(k))
    I = list(range(k, k + i))
    edges = list(combinations(K, 2))
    for v in I:
        nb = [u for u in K if rng.random() < p] or [rng.choice(K)]
        edges += [(u, v) for u in nb]
    if not shuffle:
        return build_graph(k + i, edges), SplitPartition(frozenset(K), frozenset(I))
    G, (Kp, Ip), _ = _relabel(rng, k + i, edges, [K, I])
    P = SplitPartition(Kp, Ip)
    assert verify_split_partition(G, P) and is_connected(G)
    return G, P


def _bisplit(rng, x: int = 3, y: int = 2, z: int = 2, p: float = 0.5):
    if y < 1 or z < 1 or x < 0:
        raise GraphInputError("bisplit generator needs y, z >= 1")
    X = list(range(x))
    Y = list(range(x, x + y))
    Z = list(range(x + y, x + y + z))
    edges = [(a, b) for a in Y for b in Z]
    for v in X:
        nb = [u for u in Y + Z if rng.random() < p] or [rng.choice(Y + Z)]
        edges += [(v, u) for u in nb]
    G, (Xp, Yp, Zp), _ = _relabel(rng, x + y + z, edges, [X, Y, Z])
    P = BisplitPartition(Xp, Yp, Zp)
    assert verify_bisplit_partition(G, P)
    return G, P


def _chain(rng, x: int = 3, y: int = 3):
    if x < 1 or y < 1:
        raise GraphInputError("chain generator needs x, y >= 1")
    # x-vertex i sees y-vertices 0..t_i-1; the largest threshold is y so the
    # graph is connected
    thresholds = sorted(rng.randint(1, y) for _ in range(x))
    thresholds[-1] = y
    X = list(range(x))
    Y = list(range(x, x + y))
    edges = [(X[i], Y[j]) for i, t in enumerate(thresholds) for j in range(t)]
    G, _, _ = _relabel(rng, x + y, edges, [X, Y])
    P = recognize_chain(G)
    assert P is not None
    return G, P


def _chordal_bisplit(rng, l: int = 3, x: int = 3, max_z: int = 3):
    """Build per the K_{1,l} characterisation: y1 joined to every z; each x is
    either a pendant or joined to y1 plus z's from distinct forest trees."""
    if l < 1 or x < 0:
        raise GraphInputError("chordal-bisplit generator needs l >= 1")
    y1 = 0
    Z = list(range(1, l + 1))
    X = list(range(l + 1, l + 1 + x))
    edges = [(y1, z) for z in Z]
    parent = {v: v for v in Z + X}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for v in X:
        mode = rng.random()
        if mode < 0.3:
            z = rng.choice(Z)
            edges.append((v, z))
            parent[find(v)] = find(z)
        elif mode < 0.4:
            edges.append((v, y1))
        else:
            edges.append((v, y1))
            picks = []
            for z in rng.sample(Z, len(Z)):
                if len(picks) >= rng.randint(1, max_z):
                    break
                if all(find(z) != find(p) for p in picks):
                    picks.append(z)
            for z in picks:
                edges.append((v, z))
                parent[find(z)] = find(v)
    G, (Xp, Yp, Zp), _ = _relabel(rng, 1 + l + x, edges, [X, [y1], Z])
    P = BisplitPartition(Xp, Yp, Zp)
    assert check_chordal_bisplit(G, P) and is_connected(G)
    return G, P


def _chordal_bipartite(rng, x: int = 3, y: int = 3, p: float = 0.5, connected: bool = True, attempts: int = 2000):
    X = list(range(x))
    Y = list(range(x, x + y))
    for _ in range(attempts):
        edges = [(a, b) for a in X for b in Y if rng.random() < p]
        G = build_graph(x + y, edges)
        if connected and not is_connected(G):
            continue
        if is_chordal_bipartite(G):
            return G, (frozenset(X), frozenset(Y))
    raise GraphInputError(f"no chordal bipartite sample found in {attempts} attempts")


def _comb_convex_split(rng, k: int = 3, spine: int = 2, teeth: int = 2, p: float = 0.6):
    """Split graph comb-convex on I: each K-vertex sees a random connected
    subtree of a fixed comb on I."""
    if teeth > spine or spine < 1 or k < 1:
        raise GraphInputError("comb-convex-split needs 1 <= teeth <= spine, k >= 1")
    K = list(range(k))
    sp = list(range(k, k + spine))
    th = {k + spine + j: sp[j] for j in range(teeth)}
    I = sp + sorted(th)
    tree = {v: set() for v in I}
    for a, b in zip(sp, sp[1:]):
        tree[a].add(b)
        tree[b].add(a)
    for t, s in th.items():
        tree[t].add(s)
        tree[s].add(t)
    subs = {}
    for u in K:
        start = rng.choice(I)
        sub = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in tree[v]:
                if w not in sub and rng.random() < p:
                    sub.add(w)
                    frontier.append(w)
        subs[u] = sub
    # every I vertex needs a K neighbour; grow a subtree that touches it
    untouched = set(I).difference(*subs.values())
    while untouched:
        w = min(untouched)
        hosts = [u for u in K if subs[u] & tree[w]]
        if not hosts:
            w = min(v for v in untouched if any(subs[u] & tree[v] for u in K))
            hosts = [u for u in K if subs[u] & tree[w]]
        subs[rng.choice(hosts)].add(w)
        untouched.discard(w)
    edges = list(combinations(K, 2)) + [(u, w) for u in K for w in subs[u]]
    G = build_graph(k + len(I), edges)
    P = SplitPartition(frozenset(K), frozenset(I))
    W = ConvexityWitness("I", "comb", tuple(sp), dict(th))
    assert verify_split_partition(G, P) and check_pi_convexity(G, P, W)
    return G, (P, W)


def _path(rng, n: int = 4):
    G = path_graph(n)
    return G, (frozenset(range(0, n, 2)), frozenset(range(1, n, 2)))


def _cycle(rng, n: int = 4):
    G = cycle_graph(n)
    return G, (frozenset(range(0, n, 2)), frozenset(range(1, n, 2))) if n % 2 == 0 else None


def _complete_bipartite(rng, p: int = 2, q: int = 3):
    return complete_bipartite(p, q), (frozenset(range(p)), frozenset(range(p, p + q)))


_GENERATORS = {
    "split": _split,
    "bisplit": _bisplit,
    "chain": _chain,
    "chordal-bisplit": _chordal_bisplit,
    "chordal-bipartite": _chordal_bipartite,
    "comb-convex-split": _comb_convex_split,
    "path": _path,
    "cycle": _cycle,
    "complete-bipartite": _complete_bipartite,
}


# -- exhaustive families ---------------------------------------------------------

def all_split_structures(max_n: int):
    """Every connected split structure on 2..max_n vertices: clique size k and
    a multiset of non-empty K-neighbourhoods for the I vertices."""
    for n in range(2, max_n + 1):
        for k in range(1, n + 1):
            i = n - k
            subsets = [s for r in range(1, k + 1) for s in combinations(range(k), r)]
            for multiset in combinations_with_replacement(subsets, i):
                edges = list(combinations(range(k), 2))
                for j, nb in enumerate(multiset):
                    edges += [(u, k + j) for u in nb]
                yield build_graph(n, edges), SplitPartition(frozenset(range(k)), frozenset(range(k, n)))


def all_graphs(n: int):
    """Every labelled simple graph on ``n`` vertices."""
    pairs = list(combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        yield build_graph(n, [pr for j, pr in enumerate(pairs) if bits >> j & 1])


def all_bipartite_structures(max_n: int, connected: bool = True):
    """Bipartite graphs with sides ``0..p-1`` / ``p..n-1``, p <= q, every edge
    set; yields ``(graph, (X, Y))``."""
    for n in range(2, max_n + 1):
        for p in range(1, n // 2 + 1):
            q = n - p
            pairs = [(a, p + b) for a in range(p) for b in range(q)]
            for bits in range(1 << len(pairs)):
                G = build_graph(n, [pr for j, pr in enumerate(pairs) if bits >> j & 1])
                if connected and not is_connected(G):
                    continue
                yield G, (frozenset(range(p)), frozenset(range(p, n)))
