import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graph_and_subset, graphs
from oracles import atlas_graphs, naive_dominating, naive_epn, naive_min_set, naive_secure, to_nx
from securedom.domination import (
    ORACLE_MAX_N,
    defenders,
    epn,
    gamma,
    gamma_s,
    greedy_secure_dominating,
    is_dominating,
    is_secure,
    is_secure_dominating,
    min_dominating_brute,
    min_secure_dominating_bounded,
    min_secure_dominating_brute,
    not_securely_dominated,
)
from securedom.errors import GraphInputError, PreconditionError, SizeLimitError
from securedom.graph import (
    build_graph,
    complete_bipartite,
    complete_graph,
    empty_graph,
    from_mask,
    is_complete_on,
    path_graph,
    star_graph,
)


class TestExamples:
    def test_is_dominating(self):
        assert is_dominating(complete_graph(5), {3})
        assert not is_dominating(path_graph(4), {1})
        assert is_dominating(path_graph(4), range(4))

    def test_epn(self):
        star = star_graph(3)
        assert epn(star, 0, {0}) == {1, 2, 3}
        assert epn(star, 0, {0, 1}) == {2, 3}
        assert epn(complete_graph(4), 0, {0, 1}) == frozenset()

    def test_defenders(self):
        assert defenders(complete_graph(2), 1, {0}) == {0}
        assert defenders(path_graph(4), 0, {1, 2}) == {1}
        assert defenders(star_graph(3), 1, {0}) == frozenset()

    def test_certificates(self):
        cert = is_secure_dominating(complete_graph(4), {2})
        assert cert is not None and cert.assignments == {0: 2, 1: 2, 3: 2}
        assert is_secure_dominating(star_graph(3), {0}) is None
        assert is_secure_dominating(complete_bipartite(2, 2), {0, 1}) is not None

    def test_certificate_prefers_lowest_defender(self):
        cert = is_secure_dominating(complete_graph(4), {1, 3})
        assert cert.assignments == {0: 1, 2: 1}
        assert cert.to_json() == {"0": 1, "2": 1}

    def test_oracle_values(self):
        star = star_graph(3)
        assert min_dominating_brute(star) == {0}
        assert gamma_s(star) == 3
        assert gamma_s(complete_bipartite(4, 5)) == 4
        assert gamma_s(path_graph(4)) == 2
        assert not any(is_secure(path_graph(4), {v}) for v in range(4))
        assert is_secure(path_graph(4), {1, 2})

    def test_greedy_examples(self):
        assert len(greedy_secure_dominating(complete_graph(6))) == 1
        for q in range(1, 6):
            S = greedy_secure_dominating(star_graph(q))
            assert len(S) <= q + 1 and is_secure(star_graph(q), S)


class TestErrors:
    def test_epn_needs_member(self):
        with pytest.raises(PreconditionError):
            epn(path_graph(3), 0, {1})

    def test_defenders_need_outsider(self):
        with pytest.raises(PreconditionError):
            defenders(path_graph(3), 1, {1})

    def test_out_of_range_set(self):
        with pytest.raises(GraphInputError):
            is_secure(path_graph(3), {5})

    def test_oracle_cap(self):
        G = empty_graph(ORACLE_MAX_N + 1)
        with pytest.raises(SizeLimitError):
            min_secure_dominating_brute(G)
        with pytest.raises(SizeLimitError):
            min_dominating_brute(G)

    def test_empty_graph(self):
        G = empty_graph(0)
        assert is_secure(G, ()) and gamma_s(G) == 0 and gamma(G) == 0


@given(graph_and_subset())
def test_verifier_matches_definition(case):
    G, S = case
    H = to_nx(G)
    assert is_dominating(G, S) == naive_dominating(H, S)
    assert is_secure(G, S) == naive_secure(H, S)


@given(graph_and_subset())
def test_epn_and_defenders_match_definition(case):
    G, S = case
    H = to_nx(G)
    for v in S:
        assert epn(G, v, S) == naive_epn(H, v, S)
    if not is_dominating(G, S):
        return
    for u in set(range(G.n)) - S:
        expected = {v for v in H[u] if v in S and naive_dominating(H, (S - {v}) | {u})}
        assert defenders(G, u, S) == expected


@given(graph_and_subset())
def test_certificate_entries_are_genuine_swaps(case):
    G, S = case
    cert = is_secure_dominating(G, S)
    if cert is None:
        assert not_securely_dominated(G, S) or not is_dominating(G, S)
        return
    assert is_dominating(G, S)
    assert set(cert.assignments) == set(range(G.n)) - S
    for u, v in cert.assignments.items():
        assert v in S and G.has_edge(u, v)
        assert is_dominating(G, (S - {v}) | {u})
        assert v == min(defenders(G, u, S))


@given(graphs(max_n=6))
def test_oracle_matches_naive_lexicographic_minimum(G):
    H = to_nx(G)
    assert min_secure_dominating_brute(G) == naive_min_set(H, secure=True)
    assert min_dominating_brute(G) == naive_min_set(H, secure=False)


@given(graphs(max_n=9))
def test_oracle_consistency(G):
    S = min_secure_dominating_brute(G)
    D = min_dominating_brute(G)
    assert is_secure(G, S) and is_dominating(G, D)
    assert len(S) >= len(D)
    assert min_secure_dominating_bounded(G, len(S)) is not None
    assert min_secure_dominating_bounded(G, len(S) - 1) is None
    assert len(min_secure_dominating_bounded(G, len(S))) == len(S)


@given(graphs(max_n=10))
def test_greedy_is_sound(G):
    S = greedy_secure_dominating(G)
    assert is_secure(G, S)
    assert len(S) >= gamma_s(G)


@given(st.integers(1, 5), st.integers(1, 5))
def test_complete_bipartite_table(p, q):
    p, q = min(p, q), max(p, q)
    want = q if p == 1 else min(p, 4)
    assert gamma_s(complete_bipartite(p, q)) == want


def _secure_masks(G):
    return {m for m in range(1 << G.n) if is_secure(G, from_mask(m))}


def test_superset_closure_exhaustive_up_to_seven_vertices():
    checked = 0
    for G in atlas_graphs(7):
        secure = _secure_masks(G)
        for m in secure:
            for w in range(G.n):
                assert m | 1 << w in secure
            checked += 1
    assert checked > 10_000


def test_private_neighbours_form_cliques_on_every_accepted_set():
    """Exhaustive over all graphs on at most 7 vertices and all accepted sets."""
    accepted = 0
    for G in atlas_graphs(7):
        for m in _secure_masks(G):
            S = from_mask(m)
            for v in S:
                assert is_complete_on(G, epn(G, v, S)), (G.edges(), sorted(S), v)
            accepted += 1
    assert accepted > 10_000


def test_private_neighbours_need_not_be_cliques_for_plain_domination():
    # the clique property is special to secure sets: the star's centre
    # dominates with three pairwise non-adjacent private neighbours
    star = star_graph(3)
    assert is_dominating(star, {0}) and not is_complete_on(star, epn(star, 0, {0}))


def test_not_securely_dominated_scope():
    G = build_graph(4, [(0, 1), (0, 2), (0, 3)])
    assert not_securely_dominated(G, {0}) == {1, 2, 3}
    assert not_securely_dominated(G, {0}, within={1}) == {1}
    assert not_securely_dominated(G, {0, 1}) == {2, 3}
    assert not_securely_dominated(G, {0, 1, 2}) == frozenset()
