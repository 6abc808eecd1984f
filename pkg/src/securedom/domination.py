"""Domination and secure-domination verifiers plus the brute-force oracle.

The secure check runs in O(n * |S|) bitmask operations: a vertex ``v`` of
``S`` may be swapped for ``u`` exactly when every vertex dominated *only* by
``v`` lies in ``N[u]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .errors import GraphInputError, PreconditionError, SizeLimitError
from .graph import Graph, _check_set, from_mask, iter_bits, popcount

ORACLE_MAX_N = 24


@dataclass(frozen=True)
class DefenseCertificate:
    """``assignments[u]`` is the defender of ``u`` (lowest admissible id)."""

    assignments: dict[int, int]

    def to_json(self) -> dict[str, int]:
        return {str(u): v for u, v in sorted(self.assignments.items())}


def _coverage(G: Graph, mask: int) -> tuple[int, int]:
    """Masks of vertices covered at least once / at least twice by ``mask``."""
    once = twice = 0
    for v in iter_bits(mask):
        row = G.closed_mask(v)
        twice |= once & row
        once |= row
    return once, twice


def _dominates(G: Graph, mask: int) -> bool:
    covered = mask
    for v in iter_bits(mask):
        covered |= G.adj[v]
    return covered == G.full_mask


def is_dominating(G: Graph, D: Iterable[int]) -> bool:
    return _dominates(G, _check_set(G, D))


def epn(G: Graph, v: int, D: Iterable[int]) -> frozenset[int]:
    """External private neighbours of ``v`` with respect to ``D``."""
    mask = _check_set(G, D)
    if not mask >> v & 1:
        raise PreconditionError(f"vertex {v} is not in D")
    _, twice = _coverage(G, mask)
    return from_mask(G.adj[v] & ~mask & ~twice)


def _private(G: Graph, v: int, twice: int) -> int:
    return G.closed_mask(v) & ~twice


def defenders(G: Graph, u: int, S: Iterable[int]) -> frozenset[int]:
    mask = _check_set(G, S)
    if mask >> u & 1:
        raise PreconditionError(f"vertex {u} is in S")
    once, twice = _coverage(G, mask)
    out = set()
    for v in iter_bits(G.adj[u] & mask):
        # swap keeps domination iff everything outside N[u] stays covered
        swapped_cover = (once & ~_private(G, v, twice)) | G.closed_mask(u)
        if swapped_cover == G.full_mask:
            out.add(v)
    return frozenset(out)


def _secure_certificate(G: Graph, mask: int) -> dict[int, int] | None:
    once, twice = _coverage(G, mask)
    full = G.full_mask
    if once != full:
        return None
    private = {v: _private(G, v, twice) for v in iter_bits(mask)}
    assignments = {}
    for u in iter_bits(full & ~mask):
        closed_u = G.closed_mask(u)
        for v in iter_bits(G.adj[u] & mask):
            if private[v] & ~closed_u == 0:
                assignments[u] = v
                break
        else:
            return None
    return assignments


def is_secure_dominating(G: Graph, S: Iterable[int]) -> DefenseCertificate | None:
    """Return a defence certificate if ``S`` is secure dominating, else ``None``."""
    assignments = _secure_certificate(G, _check_set(G, S))
    return None if assignments is None else DefenseCertificate(assignments)


def is_secure(G: Graph, S: Iterable[int]) -> bool:
    return _secure_certificate(G, _check_set(G, S)) is not None


def not_securely_dominated(G: Graph, S: Iterable[int], within: Iterable[int] | None = None) -> frozenset[int]:
    """Vertices outside ``S`` lacking a defender (undominated ones included)."""
    mask = _check_set(G, S)
    once, twice = _coverage(G, mask)
    full = G.full_mask
    private = {v: _private(G, v, twice) for v in iter_bits(mask)}
    scope = full if within is None else _check_set(G, within)
    bad = set()
    for u in iter_bits(scope & ~mask):
        closed_u = G.closed_mask(u)
        ok = False
        for v in iter_bits(G.adj[u] & mask):
            if ((once & ~private[v]) | closed_u) == full:
                ok = True
                break
        if not ok:
            bad.add(u)
    return frozenset(bad)


# -- exact oracle --------------------------------------------------------------

def _closed_rows(G: Graph) -> np.ndarray:
    return np.array([G.closed_mask(v) for v in range(G.n)], dtype=np.uint32)


def _dominating_masks_by_size(G: Graph) -> tuple[np.ndarray, np.ndarray]:
    """Coverage and popcount for every subset mask, by lowest-bit recurrence."""
    n = G.n
    size = 1 << n
    cover = np.zeros(size, dtype=np.uint32)
    count = np.zeros(size, dtype=np.uint8)
    rows = _closed_rows(G)
    for v in range(n):
        lo, hi = 1 << v, 1 << (v + 1)
        cover[lo:hi] = cover[0:lo] | rows[v]
        count[lo:hi] = count[0:lo] + 1
    return cover, count


def _lex_order(masks: np.ndarray, n: int) -> np.ndarray:
    # Same-cardinality sets in lexicographic order of their sorted tuples are
    # exactly the masks in decreasing order of their bit-reversal.
    rev = np.zeros_like(masks, dtype=np.int64)
    m = masks.astype(np.int64)
    for b in range(n):
        rev |= ((m >> b) & 1) << (n - 1 - b)
    return masks[np.argsort(-rev, kind="stable")]


def _check_cap(G: Graph, cap: int) -> None:
    if G.n > cap:
        raise SizeLimitError(f"exact search limited to n <= {cap}, got n={G.n}")


def _oracle(G: Graph, secure: bool) -> frozenset[int]:
    _check_cap(G, ORACLE_MAX_N)
    if G.n == 0:
        return frozenset()
    cover, count = _dominating_masks_by_size(G)
    full = G.full_mask
    dominating = np.nonzero(cover == full)[0]
    sizes = count[dominating]
    for k in range(1, G.n + 1):
        cands = dominating[sizes == k]
        if cands.size == 0:
            continue
        for mask in _lex_order(cands, G.n):
            mask = int(mask)
            if not secure or _secure_certificate(G, mask) is not None:
                return from_mask(mask)
    raise AssertionError("V itself is always (secure) dominating")


def min_dominating_brute(G: Graph) -> frozenset[int]:
    """Lexicographically least minimum dominating set (n <= 24)."""
    return _oracle(G, secure=False)


def min_secure_dominating_brute(G: Graph) -> frozenset[int]:
    """Lexicographically least minimum secure dominating set (n <= 24)."""
    return _oracle(G, secure=True)


def gamma(G: Graph) -> int:
    return len(min_dominating_brute(G))


def gamma_s(G: Graph) -> int:
    return len(min_secure_dominating_brute(G))


def min_secure_dominating_bounded(G: Graph, max_size: int) -> frozenset[int] | None:
    """Smallest secure dominating set of size <= ``max_size``, or None.

    Plain combinations search, O(n^max_size) candidates; no vertex cap.
    """
    for k in range(0 if G.n == 0 else 1, max_size + 1):
        for combo in combinations(range(G.n), k):
            mask = 0
            for v in combo:
                mask |= 1 << v
            if _secure_certificate(G, mask) is not None:
                return frozenset(combo)
    return None


# -- heuristic -----------------------------------------------------------------

def greedy_secure_dominating(G: Graph) -> frozenset[int]:
    """Greedy secure dominating set: cover, then secure, then prune.

    No optimality claim.  Falls back to ``V`` when no single addition makes
    progress.
    """
    full = G.full_mask
    mask = covered = 0
    while covered != full:
        best = max(range(G.n), key=lambda v: (popcount(G.closed_mask(v) & ~covered), -v))
        mask |= 1 << best
        covered |= G.closed_mask(best)

    def unsecured(m: int) -> int:
        return len(not_securely_dominated(G, from_mask(m)))

    bad = unsecured(mask)
    while bad:
        best_v, best_bad = None, bad
        for v in iter_bits(full & ~mask):
            b = unsecured(mask | 1 << v)
            if b < best_bad:
                best_v, best_bad = v, b
        if best_v is None:
            mask = full
            break
        mask |= 1 << best_v
        bad = best_bad

    for v in sorted(iter_bits(mask), reverse=True):
        trial = mask & ~(1 << v)
        if _secure_certificate(G, trial) is not None:
            mask = trial
    return from_mask(mask)


def require_vertex_set(G: Graph, S: Iterable[int]) -> frozenset[int]:
    members = frozenset(S)
    if any(not 0 <= v < G.n for v in members):
        raise GraphInputError(f"vertex set {sorted(members)} not contained in 0..{G.n - 1}")
    return members
