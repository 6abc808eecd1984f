import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from securedom.domination import (
    gamma,
    gamma_s,
    greedy_secure_dominating,
    is_secure,
    min_dominating_brute,
    min_secure_dominating_brute,
)
from securedom.errors import ClaimViolation, ClassError, DependencyError, GraphInputError, PreconditionError
from securedom.generators import InstanceSpec, all_split_structures, generate
from securedom.graph import build_graph, complete_graph, cycle_graph, from_mask, is_stable_on, path_graph, star_graph
from securedom.recognition import (
    BisplitPartition,
    SplitPartition,
    check_pi_convexity,
    find_star_witness,
    is_chordal_bipartite,
    verify_bisplit_partition,
    verify_split_partition,
)
from securedom.reductions import (
    approx_msd_split,
    bisplit_dd_to_sdd,
    build_reduction,
    cbip_sdd_to_cbip_bisplit_sdd,
    expected_counts,
    lift_solution,
    split_dd_to_sdd,
    split_sdd_to_bisplit_sdd,
)

fs = frozenset


def _accepted(G):
    for r in range(G.n + 1):
        for S in itertools.combinations(range(G.n), r):
            if is_secure(G, S):
                yield fs(S)


def _split(seed, k=3, i=3, p=0.5):
    return generate(InstanceSpec("split", {"k": k, "i": i, "p": p}, seed))


# -- construction examples ---------------------------------------------------------

class TestSplitDD:
    def test_triangle(self):
        G = complete_graph(3)
        R = split_dd_to_sdd(G, SplitPartition(fs(range(3)), fs()))
        assert R.target.n == 5 and gamma(G) == 1 and gamma_s(R.target) == 2

    def test_star(self):
        G = star_graph(3)
        R = split_dd_to_sdd(G, SplitPartition(fs({0}), fs({1, 2, 3})))
        assert R.target.n == 6 and gamma_s(R.target) == 2

    def test_layout_and_counts(self):
        G, P = _split(5)
        R = split_dd_to_sdd(G, P)
        x, y = R.gadgets["x"], R.gadgets["y"]
        assert (x, y) == (G.n, G.n + 1)
        assert R.target.m == G.m + G.n + 1
        assert R.provenance[x] == "gadget:x" and R.provenance[0] == "original:0"
        assert verify_split_partition(R.target, R.target_partition)

    def test_star_on_k_is_rooted_at_x(self):
        G, P = _split(9)
        R = split_dd_to_sdd(G, P)
        W = find_star_witness(R.target, R.target_partition, "K")
        assert W.spine == (R.gadgets["x"],)
        assert check_pi_convexity(R.target, R.target_partition, W)

    def test_comb_on_i_extends(self):
        G, (P, comb) = generate(InstanceSpec("comb-convex-split", {"k": 2, "spine": 3, "teeth": 2}, 4))
        R = split_dd_to_sdd(G, P, comb_on_I=comb)
        W = R.witnesses["comb_I"]
        assert W.spine[-1] == R.gadgets["y"]
        assert check_pi_convexity(R.target, R.target_partition, W)

    def test_rejects_bad_partition(self):
        with pytest.raises(GraphInputError):
            split_dd_to_sdd(path_graph(4), SplitPartition(fs({0, 1}), fs({2, 3})))


class TestBisplitDD:
    def test_edge(self):
        G = build_graph(2, [(0, 1)])
        R = bisplit_dd_to_sdd(G, BisplitPartition(fs(), fs({0}), fs({1})))
        assert R.target.n == 6 and gamma_s(R.target) == 3
        assert lift_solution(R, "forward", {0}) == {0, R.gadgets["y"], R.gadgets["z"]}

    def test_c4(self):
        G = cycle_graph(4)
        R = bisplit_dd_to_sdd(G, BisplitPartition(fs(), fs({0, 2}), fs({1, 3})))
        assert gamma(G) == 2 and gamma_s(R.target) == 4

    def test_four_labelled_gadgets(self):
        G = cycle_graph(4)
        R = bisplit_dd_to_sdd(G, BisplitPartition(fs(), fs({0, 2}), fs({1, 3})))
        assert sorted(R.gadgets) == sorted(["x", "y", "z", "x'"])
        assert sorted(p for p in R.provenance.values() if p.startswith("gadget")) == [
            "gadget:x", "gadget:x'", "gadget:y", "gadget:z"
        ]
        assert list(R.gadgets.values()) == [4, 5, 6, 7]


class TestDoubling:
    def test_cbip_edge(self):
        G = build_graph(2, [(0, 1)])
        R = cbip_sdd_to_cbip_bisplit_sdd(G, ({0}, {1}))
        assert R.target.n == 8 and gamma_s(R.target) == 4

    def test_cbip_path(self):
        G = path_graph(4)
        R = cbip_sdd_to_cbip_bisplit_sdd(G, ({0, 2}, {1, 3}))
        assert gamma_s(G) == 2 and gamma_s(R.target) == 6
        assert (R.target.n, R.target.m) == (12, 17) == expected_counts(R)
        assert is_chordal_bipartite(R.target)

    def test_cbip_rejects(self):
        with pytest.raises(ClassError):
            cbip_sdd_to_cbip_bisplit_sdd(cycle_graph(6), ({0, 2, 4}, {1, 3, 5}))
        with pytest.raises(ClassError):
            cbip_sdd_to_cbip_bisplit_sdd(path_graph(3), ({0, 1}, {2}))

    def test_split_k2_and_k3(self):
        K2 = complete_graph(2)
        R = split_sdd_to_bisplit_sdd(K2, SplitPartition(fs({0}), fs({1})))
        assert R.target.n == 8 and gamma_s(R.target) == 4
        K3 = complete_graph(3)
        R = split_sdd_to_bisplit_sdd(K3, SplitPartition(fs(range(3)), fs()))
        assert R.target.n == 10 and gamma_s(R.target) == 4

    def test_split_copies_are_stable(self):
        G, P = _split(3, k=4, i=2, p=0.7)
        R = split_sdd_to_bisplit_sdd(G, P)
        X1, X2 = R.target_partition.Y, R.target_partition.Z
        assert is_stable_on(R.target, X1) and is_stable_on(R.target, X2)
        assert verify_bisplit_partition(R.target, R.target_partition)

    def test_forward_lift_on_k2(self):
        K2 = complete_graph(2)
        R = split_sdd_to_bisplit_sdd(K2, SplitPartition(fs({0}), fs({1})))
        out = lift_solution(R, "forward", {0})
        assert out == {0, R.mirror(0), R.gadgets["k"], R.gadgets["m"]}

    def test_mirror_layout(self):
        G = path_graph(4)
        R = cbip_sdd_to_cbip_bisplit_sdd(G, ({0, 2}, {1, 3}))
        assert [R.mirror(v) for v in range(4)] == [4, 5, 6, 7]
        assert R.provenance[5] == "mirror:1"
        assert list(R.gadgets.values()) == [8, 9, 10, 11]


@pytest.mark.parametrize("kind", ["split-dd", "split-sdd"])
def test_build_reduction_dispatch(kind):
    G, P = _split(1)
    assert build_reduction(kind, G, P).kind == kind
    with pytest.raises(GraphInputError):
        build_reduction("nope", G, P)


# -- properties over random sources --------------------------------------------------

@given(st.integers(1, 5), st.integers(0, 4), st.floats(0.1, 0.9), st.integers(0, 2**32))
def test_split_sources(k, i, p, seed):
    G, P = _split(seed, k, i, p)
    for R in (split_dd_to_sdd(G, P), split_sdd_to_bisplit_sdd(G, P)):
        assert (R.target.n, R.target.m) == expected_counts(R)
        verify = verify_split_partition if R.kind == "split-dd" else verify_bisplit_partition
        assert verify(R.target, R.target_partition)
    R = split_dd_to_sdd(G, P)
    assert gamma_s(R.target) == gamma(G) + 1
    D = min_dominating_brute(G)
    assert len(lift_solution(R, "forward", D)) == len(D) + 1


@given(st.integers(0, 5), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32))
def test_bisplit_sources(x, y, z, seed):
    G, P = generate(InstanceSpec("bisplit", {"x": x, "y": y, "z": z, "p": 0.5}, seed))
    R = bisplit_dd_to_sdd(G, P)
    assert (R.target.n, R.target.m) == expected_counts(R)
    assert verify_bisplit_partition(R.target, R.target_partition)
    assert gamma_s(R.target) == gamma(G) + 2
    D = min_dominating_brute(G)
    assert len(lift_solution(R, "forward", D)) == len(D) + 2


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32))
def test_cbip_forward_lift_and_counts(x, y, seed):
    G, (X, Y) = generate(InstanceSpec("chordal-bipartite", {"x": x, "y": y, "p": 0.6}, seed))
    R = cbip_sdd_to_cbip_bisplit_sdd(G, (X, Y))
    assert (R.target.n, R.target.m) == expected_counts(R)
    S = min_secure_dominating_brute(G)
    out = lift_solution(R, "forward", S)
    assert len(out) == 2 * len(S) + 2 and is_secure(R.target, out)
    # the upper bound direction always holds
    assert gamma_s(R.target) <= 2 * gamma_s(G) + 2


# -- backward lifting -------------------------------------------------------------------

def test_split_dd_backward_lift_on_every_accepted_set():
    cases = set()
    for G, P in all_split_structures(4):
        R = split_dd_to_sdd(G, P)
        for S in _accepted(R.target):
            tr = {}
            D = lift_solution(R, "backward", S, tr)
            assert len(D) <= len(S) - 1
            cases.add(tr["case"])
    assert cases == {"xy-both", "y-defended-by-x", "x-defended-by-y"}


def test_bisplit_dd_backward_lift_on_every_accepted_set():
    cases = set()
    for seed in range(25):
        G, P = generate(InstanceSpec("bisplit", {"x": seed % 3, "y": 1 + seed % 2, "z": 1 + seed % 3, "p": 0.5}, seed))
        R = bisplit_dd_to_sdd(G, P)
        for S in _accepted(R.target):
            tr = {}
            D = lift_solution(R, "backward", S, tr)
            assert len(D) <= len(S) - 2
            cases.add(tr["case"])
    assert len(cases) == 9


@pytest.mark.parametrize("seed", range(10))
def test_doubling_round_trip(seed):
    G, P = _split(seed, k=2, i=2)
    R = split_sdd_to_bisplit_sdd(G, P)
    S = min_secure_dominating_brute(G)
    back = lift_solution(R, "backward", lift_solution(R, "forward", S))
    assert len(back) == len(S) and is_secure(G, back)


def test_doubling_backward_lift_fails_on_asymmetric_target_set():
    # K_2 split source; {0, 1, k, m} is secure in the doubled graph with no
    # mirror vertex at all, so the first-copy projection {0, 1} exceeds the
    # budget of 1 and the second copy is empty
    K2 = complete_graph(2)
    R = split_sdd_to_bisplit_sdd(K2, SplitPartition(fs({0, 1}), fs()))
    S = {0, 1, R.gadgets["k"], R.gadgets["m"]}
    assert is_secure(R.target, S) and R.inverse_budget(len(S)) == 1
    with pytest.raises(ClaimViolation) as info:
        lift_solution(R, "backward", S)
    assert info.value.case == "doubling-backward"


def test_lift_preconditions():
    R = split_dd_to_sdd(complete_graph(2), SplitPartition(fs({0, 1}), fs()))
    with pytest.raises(PreconditionError):
        lift_solution(R, "forward", set())
    with pytest.raises(PreconditionError):
        lift_solution(R, "backward", {0})
    with pytest.raises(GraphInputError):
        lift_solution(R, "sideways", {0})


def test_inverse_budget_rounds_up():
    R = split_sdd_to_bisplit_sdd(complete_graph(2), SplitPartition(fs({0}), fs({1})))
    assert [R.inverse_budget(s) for s in (4, 5, 6, 7)] == [1, 2, 2, 3]


# -- equality findings ---------------------------------------------------------------

def test_cbip_doubling_undershoots_on_small_source():
    # X = {0,1,2}, Y = {3,4,5}; nested neighbourhoods
    G = build_graph(6, [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (2, 3)])
    R = cbip_sdd_to_cbip_bisplit_sdd(G, ({0, 1, 2}, {3, 4, 5}))
    assert gamma_s(G) == 3
    S = {0, 1, 6, 7, 12, 14}
    assert is_secure(R.target, S)
    assert gamma_s(R.target) == 6 < 2 * 3 + 2


def test_split_doubling_decision_form_holds():
    """Threshold form: gamma_s(G') <= 2k+2 iff gamma_s(G) <= k for every k."""
    parity_gaps = 0
    for G, P in all_split_structures(5):
        t, s = gamma_s(split_sdd_to_bisplit_sdd(G, P).target), gamma_s(G)
        assert -(-(t - 2) // 2) == s
        parity_gaps += t != 2 * s + 2
    assert parity_gaps > 0


def test_split_doubling_parity_example():
    G = build_graph(3, [(0, 1), (0, 2)])
    R = split_sdd_to_bisplit_sdd(G, SplitPartition(fs({0, 1}), fs({2})))
    assert gamma_s(G) == 2 and gamma_s(R.target) == 5


# -- approximation wrapper --------------------------------------------------------------

def test_approx_short_circuit():
    G = complete_graph(4)
    tr = {}
    S = approx_msd_split(G, SplitPartition(fs(range(4)), fs()), greedy_secure_dominating, trace=tr)
    assert tr["branch"] == "small" and len(S) == 1


@pytest.mark.parametrize("seed", range(15))
def test_approx_with_greedy_is_sound(seed):
    G, P = _split(seed, k=3, i=4, p=0.4)
    S = approx_msd_split(G, P, greedy_secure_dominating, threshold=1)
    assert is_secure(G, S) and len(S) >= gamma_s(G)


def test_approx_rejects_bad_approximator():
    G, P = _split(2, k=3, i=4)
    with pytest.raises(DependencyError):
        approx_msd_split(G, P, lambda T: [], threshold=1)


def test_approx_with_exact_approximator_projects_asymmetric_optimum():
    # triangle 0,1,2 with leaves 3,4,5 on vertex 0: the optimal doubled set
    # is asymmetric, so its first-copy projection is one larger than optimal
    G = build_graph(6, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (0, 5)])
    P = SplitPartition(fs({0, 1, 2}), fs({3, 4, 5}))
    tr = {}
    S = approx_msd_split(G, P, min_secure_dominating_brute, trace=tr)
    assert gamma_s(G) == 4 and tr["target_size"] == 10
    assert is_secure(G, S) and len(S) == 5
