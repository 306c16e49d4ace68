"""Randomised invariants checked with hypothesis."""

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from mbtd import graph as gc
from mbtd.classifiers import classify_cactus, combine_union
from mbtd.hypergraph import open_neighborhood_hypergraph
from mbtd.solver import ClassLabel, Player, outcome_class, solve
from mbtd.structural import (
    PosCnf,
    format_pos_cnf,
    is_total_dominating_set,
    minimum_total_dominating_set,
    parse_pos_cnf,
)
from mbtd.suites import graph_level_class


@st.composite
def graphs(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    return gc.from_edge_list(n, chosen)


@st.composite
def permuted(draw, g_strategy):
    g = draw(g_strategy)
    perm = draw(st.permutations(list(range(g.n))))
    return g, g.relabel(perm)


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_never_staller_then_dominator(g):
    board = open_neighborhood_hypergraph(g)
    d = solve(board, Player.DOMINATOR).winner
    s = solve(board, Player.STALLER).winner
    assert not (d is Player.STALLER and s is Player.DOMINATOR)


@settings(max_examples=60, deadline=None)
@given(permuted(graphs()))
def test_class_invariant_under_relabelling(pair):
    g, h = pair
    assert outcome_class(g) is outcome_class(h)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=6))
def test_solver_agrees_with_plain_minimax(g):
    assert outcome_class(g) is graph_level_class(g)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=4), graphs(max_n=4))
def test_union_follows_table(g, h):
    assert outcome_class(gc.disjoint_union(g, h)) is combine_union(outcome_class(g), outcome_class(h))


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5), graphs(max_n=4))
def test_cartesian_edge_count(g, h):
    p = gc.cartesian_product(g, h)
    assert p.n == g.n * h.n
    assert p.num_edges == g.num_edges * h.n + g.n * h.num_edges


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=6), st.data())
def test_blow_up_by_k1_is_identity(g, data):
    u = data.draw(st.integers(0, g.n - 1))
    assert gc.are_isomorphic(gc.blow_up(g, u, gc.complete(1)), g)


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_text_round_trip(g):
    assert gc.parse_graph_text(gc.format_graph_text(g)).edges() == g.edges()


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=9))
def test_gamma_t_witness_is_minimal(g):
    if not all(g.adj):
        return
    s = minimum_total_dominating_set(g)
    assert is_total_dominating_set(g, s)
    for r in range(1, len(s)):
        assert not any(is_total_dominating_set(g, c) for c in itertools.combinations(range(g.n), r))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(0, 10_000), st.data())
def test_cactus_class_invariant_under_relabelling(n, seed, data):
    g = gc.random_cactus(n, seed)
    perm = data.draw(st.permutations(list(range(n))))
    assert classify_cactus(g.relabel(perm)) is classify_cactus(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_pos_cnf_round_trip(nv, data):
    clauses = data.draw(st.lists(
        st.sets(st.integers(1, nv), min_size=1).map(frozenset), max_size=5))
    f = PosCnf(nv, tuple(clauses))
    assert parse_pos_cnf(format_pos_cnf(f)) == f


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2))
def test_gnk_shape(n_extra, k):
    n = 2 * k + n_extra - 1
    g = gc.gnk(n, k)
    assert g.is_bipartite()
    # every k-subset vertex has degree k
    assert all(g.degree(v) == k for v in range(n, g.n))


def test_labels_cover_three_classes():
    assert {outcome_class(gc.cycle(n)) for n in (3, 4, 5)} == set(ClassLabel)
