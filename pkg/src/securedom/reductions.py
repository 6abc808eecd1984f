"""Polynomial-time constructions between domination problems, with solution
lifting in both directions and the approximation wrapper for split graphs.

Target vertex layout: source vertices keep their ids ``0..n-1``.  The
doubling kinds place mirror copies at ``n..2n-1`` (``mirror(v) = n + v``).
Gadget vertices always take the highest ids, in the fixed orders
``x, y`` / ``x, y, z, x'`` / ``k, l, m, n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal

from .domination import (
    epn,
    greedy_secure_dominating,
    is_dominating,
    is_secure,
    min_secure_dominating_bounded,
    not_securely_dominated,
)
from .errors import ClaimViolation, ClassError, DependencyError, GraphInputError, PreconditionError
from .graph import Graph, build_graph, to_mask
from .recognition import (
    BisplitPartition,
    ConvexityWitness,
    SplitPartition,
    find_star_witness,
    is_chordal_bipartite,
    star_witness,
    verify_bisplit_partition,
    verify_split_partition,
)

Kind = Literal["split-dd", "bisplit-dd", "cbip-sdd", "split-sdd"]
Direction = Literal["forward", "backward"]

SOURCE_PROBLEM = {"split-dd": "dd", "bisplit-dd": "dd", "cbip-sdd": "sdd", "split-sdd": "sdd"}
KINDS: tuple[str, ...] = tuple(SOURCE_PROBLEM)


@dataclass
class Reduction:
    source: Graph
    target: Graph
    kind: Kind
    param_map: tuple[int, int]
    provenance: dict[int, str]
    target_partition: SplitPartition | BisplitPartition
    source_partition: object
    gadgets: dict[str, int]
    witnesses: dict[str, ConvexityWitness] = field(default_factory=dict)

    def map_param(self, k: int) -> int:
        a, b = self.param_map
        return a * k + b

    def inverse_budget(self, target_size: int) -> int:
        """Smallest source threshold k with ``a*k + b >= target_size``."""
        a, b = self.param_map
        return -(-(target_size - b) // a)

    @property
    def core(self) -> frozenset[int]:
        """Target vertices that are not gadgets."""
        return frozenset(range(self.target.n)) - frozenset(self.gadgets.values())

    def mirror(self, v: int) -> int:
        return self.source.n + v

    def to_json(self) -> dict:
        a, b = self.param_map
        return {
            "schema": 1,
            "kind": self.kind,
            "param_map": {"a": a, "b": b},
            "source": {"n": self.source.n, "m": self.source.m},
            "target": {"n": self.target.n, "m": self.target.m},
            "gadgets": self.gadgets,
            "provenance": {str(v): p for v, p in sorted(self.provenance.items())},
            "partition": self.target_partition.to_json(),
            "witnesses": {name: w.to_json() for name, w in self.witnesses.items()},
        }


def _provenance(n: int, mirrored: bool, gadgets: dict[str, int]) -> dict[int, str]:
    prov = {v: f"original:{v}" for v in range(n)}
    if mirrored:
        prov.update({n + v: f"mirror:{v}" for v in range(n)})
    prov.update({idx: f"gadget:{name}" for name, idx in gadgets.items()})
    return prov


# -- constructions ---------------------------------------------------------------

def split_dd_to_sdd(
    G: Graph,
    P: SplitPartition,
    star_on_I: ConvexityWitness | None = None,
    comb_on_I: ConvexityWitness | None = None,
) -> Reduction:
    """Attach a path x - y with x universal to V(G).

    Optional star/comb witnesses on I of the source are carried over to I*
    (y joins the star as a leaf, and the comb as a new end of its spine).
    """
    if not verify_split_partition(G, P):
        raise GraphInputError("invalid split partition")
    n = G.n
    x, y = n, n + 1
    edges = G.edges() + [(x, v) for v in range(n)] + [(x, y)]
    T = build_graph(n + 2, edges)
    TP = SplitPartition(P.K | {x}, P.I | {y})
    witnesses = {}
    star_k = find_star_witness(T, TP, "K")
    if star_k is not None:
        witnesses["star_K"] = star_k
    if star_on_I is None and P.I:
        star_on_I = find_star_witness(G, P, "I")
    if star_on_I is not None:
        (c,) = star_on_I.spine
        witnesses["star_I"] = star_witness("I", c, star_on_I.vertices | {y})
    elif not P.I:
        witnesses["star_I"] = star_witness("I", y, ())
    if comb_on_I is not None:
        witnesses["comb_I"] = ConvexityWitness("I", "comb", comb_on_I.spine + (y,), dict(comb_on_I.teeth))
    gadgets = {"x": x, "y": y}
    return Reduction(G, T, "split-dd", (1, 1), _provenance(n, False, gadgets), TP, P, gadgets, witnesses)


def bisplit_dd_to_sdd(G: Graph, P: BisplitPartition) -> Reduction:
    """Attach a path x - y - z - x' with y joined to X and Z, z joined to Y."""
    if not verify_bisplit_partition(G, P):
        raise GraphInputError("invalid bisplit partition")
    n = G.n
    x, y, z, xp = n, n + 1, n + 2, n + 3
    edges = G.edges() + [(x, y), (y, z), (z, xp)]
    edges += [(y, v) for v in sorted(P.X | P.Z)] + [(z, v) for v in sorted(P.Y)]
    T = build_graph(n + 4, edges)
    TP = BisplitPartition(P.X | {x, xp}, P.Y | {y}, P.Z | {z})
    gadgets = {"x": x, "y": y, "z": z, "x'": xp}
    return Reduction(G, T, "bisplit-dd", (1, 2), _provenance(n, False, gadgets), TP, P, gadgets)


def _doubling(G: Graph, side_a: frozenset[int], keep_edges: list[tuple[int, int]], kind: Kind, P) -> Reduction:
    n = G.n
    k, l, m, nn = 2 * n, 2 * n + 1, 2 * n + 2, 2 * n + 3
    edges = list(keep_edges) + [(n + u, n + v) for u, v in keep_edges]
    X1 = sorted(side_a) + [k]
    X2 = [n + v for v in sorted(side_a)] + [m]
    edges += [(a, b) for a in X1 for b in X2]
    edges += [(l, k), (m, nn)]
    T = build_graph(2 * n + 4, edges)
    side_b = frozenset(range(n)) - side_a
    Y1 = side_b | {l}
    Y2 = frozenset(n + v for v in side_b) | {nn}
    TP = BisplitPartition(Y1 | Y2, frozenset(X1), frozenset(X2))
    gadgets = {"k": k, "l": l, "m": m, "n": nn}
    return Reduction(G, T, kind, (2, 2), _provenance(n, True, gadgets), TP, P, gadgets)


def cbip_sdd_to_cbip_bisplit_sdd(G: Graph, bipartition: tuple[Iterable[int], Iterable[int]]) -> Reduction:
    """Doubling construction for chordal bipartite sources; ``bipartition[0]``
    is the side joined into the biclique."""
    X, Y = frozenset(bipartition[0]), frozenset(bipartition[1])
    if X & Y or X | Y != frozenset(range(G.n)):
        raise GraphInputError("bipartition must partition the vertex set")
    if any((u in X) == (v in X) for u, v in G.edges()):
        raise ClassError("edge inside one side of the bipartition")
    if not is_chordal_bipartite(G):
        raise ClassError("source graph is not chordal bipartite")
    return _doubling(G, X, G.edges(), "cbip-sdd", (X, Y))


def split_sdd_to_bisplit_sdd(G: Graph, P: SplitPartition) -> Reduction:
    """Doubling construction for split sources with the clique edges removed."""
    if not verify_split_partition(G, P):
        raise GraphInputError("invalid split partition")
    kept = [(u, v) for u, v in G.edges() if not (u in P.K and v in P.K)]
    return _doubling(G, P.K, kept, "split-sdd", P)


# -- lifting -----------------------------------------------------------------------

def _source_ok(R: Reduction, S: frozenset[int]) -> bool:
    if SOURCE_PROBLEM[R.kind] == "dd":
        return is_dominating(R.source, S)
    return is_secure(R.source, S)


def lift_solution(R: Reduction, direction: Direction, S: Iterable[int], trace: dict | None = None) -> frozenset[int]:
    """Map a verified solution across the reduction.

    forward: (secure) dominating set of the source -> secure dominating set of
    the target of size ``a*|S| + b``.  backward: secure dominating set of the
    target -> solution on the source of size at most ``ceil((|S| - b) / a)``.
    ``trace`` (if given) receives the proof case used.
    """
    S = frozenset(S)
    trace = trace if trace is not None else {}
    if direction == "forward":
        if not _source_ok(R, S):
            raise PreconditionError("source set does not verify")
        g = R.gadgets
        if R.kind == "split-dd":
            out = S | {g["x"]}
        elif R.kind == "bisplit-dd":
            out = S | {g["y"], g["z"]}
        else:
            out = S | {R.mirror(v) for v in S} | {g["k"], g["m"]}
        trace["case"] = "forward"
        if not is_secure(R.target, out) or len(out) != R.map_param(len(S)):
            raise ClaimViolation("forward", f"lifted set {sorted(out)} is not a secure dominating set of size {R.map_param(len(S))}")
        return out
    if direction != "backward":
        raise GraphInputError(f"unknown direction {direction!r}")
    if not is_secure(R.target, S):
        raise PreconditionError("target set is not secure dominating")
    budget = R.inverse_budget(len(S))
    if R.kind == "split-dd":
        case, out = _back_split_dd(R, S)
    elif R.kind == "bisplit-dd":
        case, out = _back_bisplit_dd(R, S)
    else:
        case, out = _back_doubling(R, S, budget)
    trace["case"] = case
    if not _source_ok(R, out):
        raise ClaimViolation(case, f"lifted set {sorted(out)} does not verify on the source")
    if len(out) > budget:
        raise ClaimViolation(case, f"lifted set has size {len(out)} > budget {budget}")
    return out


def _undominated(G: Graph, D: frozenset[int]) -> frozenset[int]:
    covered = to_mask(D)
    for v in D:
        covered |= G.adj[v]
    return frozenset(v for v in range(G.n) if not covered >> v & 1)


def _back_split_dd(R: Reduction, S: frozenset[int]) -> tuple[str, frozenset[int]]:
    x, y = R.gadgets["x"], R.gadgets["y"]
    D = S & frozenset(range(R.source.n))
    W = _undominated(R.source, D)
    if x in S and y in S:
        case = "xy-both"
        if W:
            # W lies in epn(x, S), a clique, so one member covers it
            D = D | {min(W)}
    elif x in S:
        case = "y-defended-by-x"
        if W:
            raise ClaimViolation(case, f"vertices {sorted(W)} undominated although y is defended")
    else:
        case = "x-defended-by-y"
        if W:
            raise ClaimViolation(case, f"vertices {sorted(W)} undominated although every swap stays in V")
    return case, D


def _back_bisplit_dd(R: Reduction, S: frozenset[int]) -> tuple[str, frozenset[int]]:
    g = R.gadgets
    P: BisplitPartition = R.source_partition
    D = S & frozenset(range(R.source.n))
    W = _undominated(R.source, D)
    Wxz = W & (P.X | P.Z)
    Wy = W & P.Y
    yz = len(S & {g["y"], g["z"]})
    xx = len(S & {g["x"], g["x'"]})

    # Each case of the argument names which residue blocks may be non-empty.
    if yz == 2 and xx == 2:
        case, allow_xz, allow_y = "yz2/xx2", True, True
    elif yz == 2 and xx == 1 and g["x"] in S:
        case, allow_xz, allow_y = "yz2/xx1/x", True, False
    elif yz == 2 and xx == 1:
        case, allow_xz, allow_y = "yz2/xx1/x'", False, True
    elif yz == 2:
        case, allow_xz, allow_y = "yz2/xx0", False, False
    elif g["y"] in S:
        if g["x"] in S:
            case, allow_xz, allow_y = "yz1/y/x-in", True, False
        else:
            case, allow_xz, allow_y = "yz1/y/x-out", False, False
    elif g["z"] in S:
        if g["x'"] in S:
            case, allow_xz, allow_y = "yz1/z/x'-in", False, True
        else:
            case, allow_xz, allow_y = "yz1/z/x'-out", False, False
    else:
        case, allow_xz, allow_y = "yz0", False, False

    if Wxz and not allow_xz:
        raise ClaimViolation(case, f"unexpected undominated X/Z vertices {sorted(Wxz)}")
    if Wy and not allow_y:
        raise ClaimViolation(case, f"unexpected undominated Y vertices {sorted(Wy)}")
    if len(Wy) > 1:
        raise ClaimViolation(case, f"epn(z) should be complete but W_y = {sorted(Wy)}")
    if Wxz:
        D = D | {min(Wxz)}
    return case, D | Wy


def _core_graph(R: Reduction) -> tuple[Graph, dict[int, int]]:
    core = sorted(R.core)
    # core occupies ids 0..2n-1 already, so the map is the identity
    return build_graph(len(core), [(u, v) for u, v in R.target.edges() if u in R.core and v in R.core]), {
        v: v for v in core
    }


def _back_doubling(R: Reduction, S: frozenset[int], budget: int) -> tuple[str, frozenset[int]]:
    n = R.source.n
    core_graph, _ = _core_graph(R)
    S_core = S & R.core
    W = not_securely_dominated(core_graph, S_core)
    T = S_core | W
    first = frozenset(v for v in T if v < n)
    second = frozenset(v - n for v in T if v >= n)
    tried = []
    for case, cand in (("project-first", first), ("project-second", second)):
        tried.append((case, sorted(cand)))
        if len(cand) <= budget and is_secure(R.source, cand):
            return (case if not W else case + "+W"), cand
    raise ClaimViolation("doubling-backward", f"no projection verifies within budget {budget}: W={sorted(W)}, tried {tried}")


# -- approximation wrapper -------------------------------------------------------

Approximator = Callable[[Graph], Iterable[int]]


def approx_msd_split(
    G: Graph,
    P: SplitPartition,
    approximator: Approximator,
    threshold: int = 4,
    trace: dict | None = None,
) -> frozenset[int]:
    """Secure dominating set of a split graph via the doubled bisplit graph.

    Sets smaller than ``threshold`` are found by bounded exact search.
    Otherwise the approximator runs on the doubled graph and its answer is
    projected back; a projection that fails to verify is repaired through the
    backward lift, then the greedy heuristic.
    """
    trace = trace if trace is not None else {}
    small = min_secure_dominating_bounded(G, threshold - 1)
    if small is not None:
        trace["branch"] = "small"
        return small
    R = split_sdd_to_bisplit_sdd(G, P)
    S_prime = frozenset(approximator(R.target))
    if not is_secure(R.target, S_prime):
        raise DependencyError("approximator output is not a secure dominating set of the bisplit graph")
    trace["target_size"] = len(S_prime)
    core_graph, _ = _core_graph(R)
    W = not_securely_dominated(core_graph, S_prime & R.core)
    m = R.gadgets["m"]
    epn_m = epn(R.target, m, S_prime) & R.core if m in S_prime else frozenset()
    base = S_prime & frozenset(range(G.n))
    if not W or not epn_m:
        trace["branch"] = "project"
        S = base
    else:
        trace["branch"] = "project+epn"
        S = base | {min(epn_m)}
    trace["W"] = sorted(W)
    if is_secure(G, S):
        return S
    try:
        S = lift_solution(R, "backward", S_prime)
        trace["repair"] = "backward-lift"
    except ClaimViolation:
        S = greedy_secure_dominating(G)
        trace["repair"] = "greedy"
    return S


def build_reduction(kind: Kind, G: Graph, partition) -> Reduction:
    if kind == "split-dd":
        return split_dd_to_sdd(G, partition)
    if kind == "bisplit-dd":
        return bisplit_dd_to_sdd(G, partition)
    if kind == "cbip-sdd":
        return cbip_sdd_to_cbip_bisplit_sdd(G, partition)
    if kind == "split-sdd":
        return split_sdd_to_bisplit_sdd(G, partition)
    raise GraphInputError(f"unknown reduction kind {kind!r}")


def expected_counts(R: Reduction) -> tuple[int, int]:
    """Vertex and edge counts the construction formulas predict."""
    G = R.source
    n, m = G.n, G.m
    if R.kind == "split-dd":
        return n + 2, m + n + 1
    if R.kind == "bisplit-dd":
        return n + 4, m + n + 3
    if R.kind == "cbip-sdd":
        p = len(R.source_partition[0])
        return 2 * n + 4, 2 * m + (p + 1) ** 2 + 2
    P: SplitPartition = R.source_partition
    p = len(P.K)
    clique_edges = p * (p - 1) // 2
    return 2 * n + 4, 2 * (m - clique_edges) + (p + 1) ** 2 + 2
