"""Graph-class recognizers and certificate checkers.

Each recognizer returns a partition object that its matching verifier accepts,
or ``None`` when the graph is not in the class.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

from .errors import ClassError, DisconnectedError, GraphInputError, PreconditionError, SizeLimitError
from .graph import (
    Graph,
    components,
    from_mask,
    is_complete_on,
    is_connected,
    is_forest_on,
    is_stable_on,
    iter_bits,
    popcount,
    to_mask,
    two_coloring,
)

BISPLIT_MAX_N = 20
CHORDAL_BIPARTITE_MAX_N = 16


@dataclass(frozen=True)
class SplitPartition:
    K: frozenset[int]
    I: frozenset[int]

    def to_json(self) -> dict:
        return {"K": sorted(self.K), "I": sorted(self.I)}


@dataclass(frozen=True)
class BisplitPartition:
    X: frozenset[int]
    Y: frozenset[int]
    Z: frozenset[int]

    def to_json(self) -> dict:
        return {"X": sorted(self.X), "Y": sorted(self.Y), "Z": sorted(self.Z)}


@dataclass(frozen=True)
class ChainPartition:
    """Chain ordering plus the proper ordered chain partition.

    ``x_order`` has non-decreasing neighbourhoods, ``y_order`` non-increasing.
    """

    x_order: tuple[int, ...]
    y_order: tuple[int, ...]
    X_classes: tuple[frozenset[int], ...]
    Y_classes: tuple[frozenset[int], ...]
    X1_pendants: frozenset[int]
    Yk_pendants: frozenset[int]

    @property
    def k(self) -> int:
        return len(self.X_classes)

    @property
    def X(self) -> frozenset[int]:
        return frozenset(self.x_order)

    @property
    def Y(self) -> frozenset[int]:
        return frozenset(self.y_order)

    def to_json(self) -> dict:
        return {
            "x_order": list(self.x_order),
            "y_order": list(self.y_order),
            "X_classes": [sorted(c) for c in self.X_classes],
            "Y_classes": [sorted(c) for c in self.Y_classes],
            "X1_pendants": sorted(self.X1_pendants),
            "Yk_pendants": sorted(self.Yk_pendants),
        }


Side = Literal["K", "I"]
Shape = Literal["star", "comb"]


@dataclass(frozen=True)
class ConvexityWitness:
    """Auxiliary tree on one side of a split graph.

    For a star, ``spine`` holds the single centre.  For a comb, ``spine`` is
    the path in order and ``teeth`` maps each tooth to its spine vertex.
    """

    side: Side
    shape: Shape
    spine: tuple[int, ...]
    teeth: dict[int, int] = field(default_factory=dict)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.spine) | frozenset(self.teeth)

    def tree_edges(self) -> list[tuple[int, int]]:
        if self.shape == "star":
            (c,) = self.spine
            return [(c, t) for t in sorted(self.teeth)]
        path = list(zip(self.spine, self.spine[1:]))
        return path + [(s, t) for t, s in sorted(self.teeth.items())]

    def to_json(self) -> dict:
        return {
            "side": self.side,
            "shape": self.shape,
            "spine": list(self.spine),
            "teeth": {str(t): s for t, s in sorted(self.teeth.items())},
        }


def star_witness(side: Side, center: int, leaves) -> ConvexityWitness:
    return ConvexityWitness(side, "star", (center,), {v: center for v in sorted(leaves) if v != center})


# -- split -----------------------------------------------------------------------

def verify_split_partition(G: Graph, P: SplitPartition) -> bool:
    if P.K & P.I or (P.K | P.I) != frozenset(range(G.n)):
        return False
    return is_complete_on(G, P.K) and is_stable_on(G, P.I)


def recognize_split(G: Graph) -> SplitPartition | None:
    """Degree-sequence test: take the largest prefix of the non-increasing
    degree order that can be a clique, then verify the split equality."""
    order = sorted(range(G.n), key=lambda v: (-G.degree(v), v))
    deg = [G.degree(v) for v in order]
    m = 0
    for i, d in enumerate(deg, start=1):
        if d >= i - 1:
            m = i
    if sum(deg[:m]) != m * (m - 1) + sum(deg[m:]):
        return None
    P = SplitPartition(frozenset(order[:m]), frozenset(order[m:]))
    return P if verify_split_partition(G, P) else None


# -- bisplit ---------------------------------------------------------------------

def verify_bisplit_partition(G: Graph, P: BisplitPartition) -> bool:
    X, Y, Z = P.X, P.Y, P.Z
    if X & Y or X & Z or Y & Z or (X | Y | Z) != frozenset(range(G.n)):
        return False
    if not (is_stable_on(G, X) and is_stable_on(G, Y) and is_stable_on(G, Z)):
        return False
    zmask = to_mask(Z)
    return all(G.adj[y] & zmask == zmask for y in Y)


def recognize_bisplit(G: Graph) -> BisplitPartition | None:
    """Exact backtracking over X/Y/Z labellings (n <= 20).

    A partition with non-empty Y and Z is preferred.  Failing that, a
    bipartite graph gets the degenerate ``(colour 0, colour 1, {})`` and an
    edgeless graph gets ``X = V``.
    """
    if G.n > BISPLIT_MAX_N:
        raise SizeLimitError(
            f"bisplit recognition limited to n <= {BISPLIT_MAX_N}; pass a declared partition instead"
        )
    if G.m == 0:
        return BisplitPartition(frozenset(range(G.n)), frozenset(), frozenset())
    # Orient every bisplit graph so the biclique contains an edge (a, b) with
    # a in Y, b in Z; try each edge as that anchor.
    for a, b in G.edges():
        found = _bisplit_search(G, a, b)
        if found is not None:
            return found
    # only degenerate partitions left: any bipartite graph with Z empty
    color = two_coloring(G)
    if color is None:
        return None
    Y = frozenset(v for v in range(G.n) if color[v] == 1)
    return BisplitPartition(frozenset(range(G.n)) - Y, Y, frozenset())


def _bisplit_search(G: Graph, a: int, b: int) -> BisplitPartition | None:
    n = G.n
    label = [-1] * n  # 0 = X, 1 = Y, 2 = Z
    label[a], label[b] = 1, 2
    members = [0, 1 << a, 1 << b]
    order = sorted((v for v in range(n) if v not in (a, b)), key=lambda v: (-G.degree(v), v))

    def ok(v: int, lab: int) -> bool:
        if G.adj[v] & members[lab]:
            return False
        if lab == 1 and members[2] & ~G.adj[v]:
            return False
        if lab == 2 and members[1] & ~G.adj[v]:
            return False
        return True

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        for lab in (1, 2, 0):
            if ok(v, lab):
                label[v] = lab
                members[lab] |= 1 << v
                if rec(i + 1):
                    return True
                members[lab] &= ~(1 << v)
                label[v] = -1
        return False

    if not rec(0):
        return None
    return BisplitPartition(from_mask(members[0]), from_mask(members[1]), from_mask(members[2]))


# -- chain -----------------------------------------------------------------------

def recognize_chain(G: Graph) -> ChainPartition | None:
    """Chain ordering by degree sort on each side of the bipartition.

    X is the smaller colour class (ties: the class holding vertex 0).
    Vertices with equal neighbourhoods are ordered by id.
    """
    if not is_connected(G):
        raise DisconnectedError("chain recognition requires a connected graph")
    if G.n < 2:
        return None
    color = two_coloring(G)
    if color is None:
        return None
    side0 = [v for v in range(G.n) if color[v] == 0]
    side1 = [v for v in range(G.n) if color[v] == 1]
    X, Y = (side0, side1) if len(side0) <= len(side1) else (side1, side0)
    x_order = sorted(X, key=lambda v: (G.degree(v), v))
    y_order = sorted(Y, key=lambda v: (-G.degree(v), v))
    for u, v in zip(x_order, x_order[1:]):
        if G.adj[u] & ~G.adj[v]:
            return None
    for u, v in zip(y_order, y_order[1:]):
        if G.adj[v] & ~G.adj[u]:
            return None

    X_classes: list[frozenset[int]] = []
    current: list[int] = []
    for v in x_order:
        if current and G.adj[current[0]] != G.adj[v]:
            X_classes.append(frozenset(current))
            current = []
        current.append(v)
    X_classes.append(frozenset(current))
    Y_classes = []
    seen = 0
    for cls in X_classes:
        nb = G.adj[next(iter(cls))]
        Y_classes.append(from_mask(nb & ~seen))
        seen |= nb
    if len(X_classes) != len(Y_classes) or any(not c for c in Y_classes):
        raise AssertionError("proper ordered chain partition must have equal class counts")
    pend = [v for v in range(G.n) if G.degree(v) == 1]
    X1p = frozenset(v for v in pend if v in set(X))
    Ykp = frozenset(v for v in pend if v in set(Y))
    if not (X1p <= X_classes[0] and Ykp <= Y_classes[-1]):
        raise AssertionError("pendant vertices must lie in X_1 and Y_k")
    return ChainPartition(tuple(x_order), tuple(y_order), tuple(X_classes), tuple(Y_classes), X1p, Ykp)


def verify_chain_partition(G: Graph, P: ChainPartition) -> bool:
    if not is_connected(G):
        return False
    try:
        fresh = recognize_chain(G)
    except DisconnectedError:
        return False
    if fresh is None:
        return False
    if set(P.x_order) | set(P.y_order) != set(range(G.n)) or set(P.x_order) & set(P.y_order):
        return False
    if not (is_stable_on(G, P.x_order) and is_stable_on(G, P.y_order)):
        return False
    for u, v in zip(P.x_order, P.x_order[1:]):
        if G.adj[u] & ~G.adj[v]:
            return False
    for u, v in zip(P.y_order, P.y_order[1:]):
        if G.adj[v] & ~G.adj[u]:
            return False
    pend = {v for v in range(G.n) if G.degree(v) == 1}
    return (
        frozenset().union(*P.X_classes) == P.X
        and frozenset().union(*P.Y_classes) == P.Y
        and len(P.X_classes) == len(P.Y_classes)
        and P.X1_pendants == frozenset(pend & P.X)
        and P.Yk_pendants == frozenset(pend & P.Y)
    )


# -- chordality ------------------------------------------------------------------

def maximum_cardinality_search(G: Graph) -> list[int]:
    """Visit order of MCS; its reverse is a PEO iff G is chordal."""
    weight = [0] * G.n
    visited = 0
    order = []
    for _ in range(G.n):
        v = max((u for u in range(G.n) if not visited >> u & 1), key=lambda u: (weight[u], -u))
        order.append(v)
        visited |= 1 << v
        for u in iter_bits(G.adj[v] & ~visited):
            weight[u] += 1
    return order


def is_perfect_elimination_ordering(G: Graph, peo: list[int]) -> bool:
    pos = {v: i for i, v in enumerate(peo)}
    for v in peo:
        later = [u for u in iter_bits(G.adj[v]) if pos[u] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        rest = to_mask(later) & ~(1 << parent)
        if rest & ~G.adj[parent]:
            return False
    return True


def is_chordal(G: Graph) -> bool:
    return is_perfect_elimination_ordering(G, maximum_cardinality_search(G)[::-1])


def induced_cycles(G: Graph, min_length: int = 4):
    """Yield every induced cycle of length >= ``min_length`` once, as a tuple
    starting at its smallest vertex with the smaller of the two neighbours second."""
    n = G.n
    for s in range(n):
        higher = ~((1 << (s + 1)) - 1)
        for second in iter_bits(G.adj[s] & higher):
            # extend induced paths s, second, ...; all interior vertices > s
            stack = [((s, second), (1 << s) | (1 << second))]
            while stack:
                path, pmask = stack.pop()
                last = path[-1]
                for nxt in iter_bits(G.adj[last] & higher & ~pmask):
                    # nxt must not be adjacent to any path vertex except last (and s)
                    inner = pmask & ~(1 << last) & ~(1 << s)
                    if G.adj[nxt] & inner:
                        continue
                    if G.adj[nxt] >> s & 1:
                        cyc = path + (nxt,)
                        if len(cyc) >= min_length and second < nxt:
                            yield cyc
                        continue
                    stack.append((path + (nxt,), pmask | (1 << nxt)))


def is_chordal_bipartite(G: Graph) -> bool:
    if G.n > CHORDAL_BIPARTITE_MAX_N:
        raise SizeLimitError(f"chordal-bipartite check limited to n <= {CHORDAL_BIPARTITE_MAX_N}")
    if two_coloring(G) is None:
        return False
    return next(induced_cycles(G, 6), None) is None


# -- chordal bisplit -------------------------------------------------------------

def check_chordal_bisplit(G: Graph, P: BisplitPartition) -> bool:
    if not verify_bisplit_partition(G, P):
        raise PreconditionError("not a valid bisplit partition")
    if len(P.Y) != 1 or not P.Z:
        return False
    (y1,) = P.Y
    if any(G.degree(x) >= 2 and not G.has_edge(x, y1) for x in P.X):
        return False
    return is_forest_on(G, P.X | P.Z)


def recognize_chordal_bisplit(G: Graph) -> BisplitPartition | None:
    """Find a partition satisfying the K_{1,l} characterisation.

    For a candidate centre ``y1`` the rest must be a forest; each component
    of ``G - y1`` is 2-coloured independently with the Z-class inside N(y1).
    """
    for y1 in sorted(range(G.n), key=lambda v: (-G.degree(v), v)):
        rest = G.full_mask & ~(1 << y1)
        if not is_forest_on(G, from_mask(rest)):
            continue
        sub_color = _forest_coloring(G, rest)
        X = Z = 0
        feasible = True
        for comp in components(G, rest):
            cls = [0, 0]
            for v in iter_bits(comp):
                cls[sub_color[v]] |= 1 << v
            options = []
            for zc in (0, 1):
                zm, xm = cls[zc], cls[1 - zc]
                if zm & ~G.adj[y1]:
                    continue
                if any(popcount(G.adj[x]) >= 2 and not G.has_edge(x, y1) for x in iter_bits(xm)):
                    continue
                options.append((-popcount(zm), zm & -zm, zm, xm))
            if not options:
                feasible = False
                break
            _, _, zm, xm = min(options)
            Z |= zm
            X |= xm
        if feasible and Z:
            P = BisplitPartition(from_mask(X), frozenset({y1}), from_mask(Z))
            if verify_bisplit_partition(G, P) and check_chordal_bisplit(G, P):
                return P
    return None


def _forest_coloring(G: Graph, within: int) -> dict[int, int]:
    color: dict[int, int] = {}
    for s in iter_bits(within):
        if s in color:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for u in iter_bits(G.adj[v] & within):
                if u not in color:
                    color[u] = 1 - color[v]
                    stack.append(u)
    return color


# -- convexity -------------------------------------------------------------------

def _validate_witness(P: SplitPartition, W: ConvexityWitness) -> frozenset[int]:
    side = P.K if W.side == "K" else P.I
    if W.side not in ("K", "I") or W.shape not in ("star", "comb"):
        raise GraphInputError(f"unknown witness tags {W.side!r}/{W.shape!r}")
    spine = list(W.spine)
    if len(set(spine)) != len(spine) or set(spine) & set(W.teeth):
        raise GraphInputError("witness repeats a vertex")
    if W.vertices != side:
        raise GraphInputError("witness tree must span exactly the declared side")
    if W.shape == "star":
        if len(spine) != 1 or any(c != spine[0] for c in W.teeth.values()):
            raise GraphInputError("star witness needs one centre adjacent to every leaf")
    else:
        if not spine and side:
            raise GraphInputError("comb witness needs a non-empty spine")
        attached = list(W.teeth.values())
        if any(s not in spine for s in attached) or len(set(attached)) != len(attached):
            raise GraphInputError("each comb tooth hangs from a distinct spine vertex")
    return side


def _subtree_connected(W: ConvexityWitness, subset: frozenset[int]) -> bool:
    if len(subset) <= 1:
        return True
    adj: dict[int, set[int]] = {v: set() for v in W.vertices}
    for a, b in W.tree_edges():
        adj[a].add(b)
        adj[b].add(a)
    start = next(iter(subset))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in adj[v] & subset:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen == subset


def check_pi_convexity(G: Graph, P: SplitPartition, W: ConvexityWitness) -> bool:
    """Every opposite-side neighbourhood, restricted to the witness side,
    must induce a connected subtree (empty and singleton sets count)."""
    side = _validate_witness(P, W)
    others = P.I if W.side == "K" else P.K
    smask = to_mask(side)
    return all(_subtree_connected(W, from_mask(G.adj[u] & smask)) for u in others)


def find_star_witness(G: Graph, P: SplitPartition, side: Side) -> ConvexityWitness | None:
    """Star on ``side`` rooted at a vertex in every multi-vertex neighbourhood.

    Among valid roots the one of highest degree wins (ties: lowest id).
    """
    if not verify_split_partition(G, P):
        raise PreconditionError("not a valid split partition")
    own = P.K if side == "K" else P.I
    others = P.I if side == "K" else P.K
    smask = to_mask(own)
    required = smask
    for u in others:
        nb = G.adj[u] & smask
        if popcount(nb) >= 2:
            required &= nb
    if not required:
        return None
    root = min(iter_bits(required), key=lambda v: (-G.degree(v), v))
    return star_witness(side, root, own)


def ensure_class(ok: bool, message: str) -> None:
    if not ok:
        raise ClassError(message)
