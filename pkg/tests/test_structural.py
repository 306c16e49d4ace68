import itertools
import math
import random

import pytest

from mbtd import graph as gc
from mbtd.graph import GraphError
from mbtd.solver import ClassLabel, Player, outcome_class, total_domination_outcome
from mbtd.structural import (
    DISPROVER,
    PROVER,
    PosCnf,
    StructuralError,
    all_small_pos_cnfs,
    d_minimal_check,
    format_pos_cnf,
    gamma_t,
    is_total_dominating_set,
    minimum_total_dominating_set,
    parse_pos_cnf,
    pos_cnf_winner,
    read_pos_cnf,
    reduction_equivalence_check,
    structural_report,
    tdom,
    tdom_implies_staller,
    tdom_with_witness,
    to_bipartite_graph,
    to_split_graph,
    total_domatic_partition,
)
from mbtd.suites import random_graph, random_tree


# ---- brute-force oracles -------------------------------------------------

def brute_gamma_t(g):
    for r in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), r):
            if is_total_dominating_set(g, s):
                return r
    return None


def brute_tdom(g):
    best = 0
    for colours in itertools.product(range(g.n), repeat=g.n):
        k = max(colours) + 1
        if k <= best or sorted(set(colours)) != list(range(k)):
            continue
        if all(is_total_dominating_set(g, [v for v in range(g.n) if colours[v] == c])
               for c in range(k)):
            best = k
    return best


def brute_pos_cnf(f, first):
    def rec(assign, prover):
        free = [x for x in range(1, f.num_vars + 1) if x not in assign]
        if not free:
            return f.satisfied_by([x for x, val in assign.items() if val])
        results = (rec({**assign, x: prover}, not prover) for x in free)
        return any(results) if prover else all(results)
    return PROVER if rec({}, first == PROVER) else DISPROVER


def _connected_random(rng, n):
    while True:
        g = random_graph(n, rng.uniform(0.3, 0.8), rng)
        if all(g.adj):
            return g


# ---- total domination ----------------------------------------------------

def test_is_total_dominating_set():
    c4 = gc.cycle(4)
    assert is_total_dominating_set(c4, [0, 1])
    assert not is_total_dominating_set(c4, [0, 2])
    assert is_total_dominating_set(c4, 0b0011)


def test_gamma_t_known_values():
    assert gamma_t(gc.complete(2)) == 2
    assert gamma_t(gc.cycle(6)) == 4
    assert gamma_t(gc.path(6)) == 4
    assert gamma_t(gc.petersen()) == 4
    assert gamma_t(gc.star(5)) == 2


@pytest.mark.parametrize("n, k", [(2, 1), (3, 1), (4, 1), (4, 2), (5, 2)])
def test_gamma_t_of_gnk(n, k):
    assert gamma_t(gc.gnk(n, k)) == math.ceil(n / k) + n - k + 1


@pytest.mark.parametrize("seed", range(25))
def test_gamma_t_against_brute_force(seed):
    rng = random.Random(seed)
    g = _connected_random(rng, rng.randint(2, 9))
    s = minimum_total_dominating_set(g)
    assert is_total_dominating_set(g, s)
    assert len(s) == brute_gamma_t(g)


def test_isolated_vertex_rejected():
    with pytest.raises(StructuralError):
        gamma_t(gc.complete(1))
    with pytest.raises(StructuralError):
        tdom(gc.disjoint_union(gc.cycle(3), gc.complete(1)))


def test_exhaustive_cap():
    with pytest.raises(StructuralError):
        gamma_t(gc.cycle(8), cap=7)


def test_tdom_known_values():
    assert tdom(gc.heawood()) == 1
    assert tdom(gc.petersen()) == 2
    assert tdom(gc.cycle(4)) == 2
    assert tdom(gc.cycle(5)) == 1
    assert tdom(gc.complete(4)) == 2
    assert tdom(gc.complete_bipartite(3, 3)) == 3


@pytest.mark.parametrize("seed", range(15))
def test_tdom_against_brute_force(seed):
    rng = random.Random(100 + seed)
    g = _connected_random(rng, rng.randint(2, 7))
    k, part = tdom_with_witness(g)
    assert k == brute_tdom(g)
    assert sorted(v for p in part for v in p) == list(range(g.n))
    assert all(is_total_dominating_set(g, p) for p in part)


def test_total_domatic_partition_limits():
    assert total_domatic_partition(gc.cycle(4), 3) is None
    with pytest.raises(ValueError):
        total_domatic_partition(gc.cycle(4), 0)


@pytest.mark.parametrize("seed", range(20))
def test_trees_have_tdom_one(seed):
    rng = random.Random(seed)
    t = random_tree(rng.randint(2, 10), rng)
    assert tdom(t) == 1


def test_structural_report():
    r = structural_report(gc.cycle(4))
    assert (r.gamma_t, r.tdom) == (2, 2)
    assert len(r.tdom_partition) == 2


def test_tdom_implication():
    assert tdom_implies_staller(gc.cycle(5)) is Player.STALLER
    assert tdom_implies_staller(gc.cycle(4)) is None
    assert total_domination_outcome(gc.heawood()).s_game.winner is Player.STALLER


def test_d_minimal():
    assert d_minimal_check(gc.cycle(4))
    assert d_minimal_check(gc.complete_bipartite(2, 3))
    assert d_minimal_check(gc.prism(2, 3))
    assert not d_minimal_check(gc.complete(4))  # K4 minus an edge is still D
    assert not d_minimal_check(gc.cycle(5))
    with pytest.raises(GraphError):
        d_minimal_check(gc.empty_graph(2))


# ---- POS-CNF -------------------------------------------------------------

def test_pos_cnf_validation():
    with pytest.raises(StructuralError):
        PosCnf.of(2, [[]])
    with pytest.raises(StructuralError):
        PosCnf.of(2, [[3]])
    f = PosCnf.of(3, [[1, 2], [3]])
    assert f.satisfied_by([1, 3]) and not f.satisfied_by([1, 2])


def test_pos_cnf_text_round_trip(tmp_path):
    f = PosCnf.of(3, [[1, 2], [2, 3]])
    text = format_pos_cnf(f)
    assert text == "3 2\n1 2 0\n2 3 0\n"
    assert parse_pos_cnf(text) == f
    path = tmp_path / "f.cnf"
    path.write_text("# comment\n3 2\n1 2 0\n\n2 3 0\n")
    assert read_pos_cnf(path) == f
    with pytest.raises(StructuralError):
        read_pos_cnf(tmp_path / "missing.cnf")


@pytest.mark.parametrize("text", ["", "3\n", "2 1\n1 2\n", "2 1\n-1 0\n", "2 2\n1 0\n",
                                  "2 1\n1 x 0\n", "2 1\n0\n"])
def test_pos_cnf_parse_errors(text):
    with pytest.raises(StructuralError):
        parse_pos_cnf(text)


def test_pos_cnf_winner_simple():
    empty = PosCnf.of(2, [])
    assert pos_cnf_winner(empty, DISPROVER) == PROVER
    one = PosCnf.of(1, [[1]])
    assert pos_cnf_winner(one, PROVER) == PROVER
    assert pos_cnf_winner(one, DISPROVER) == DISPROVER
    with pytest.raises(ValueError):
        pos_cnf_winner(one, "nobody")


@pytest.mark.parametrize("f", all_small_pos_cnfs(3, 3)[::3], ids=format_pos_cnf)
def test_pos_cnf_winner_against_brute_force(f):
    for first in (PROVER, DISPROVER):
        assert pos_cnf_winner(f, first) == brute_pos_cnf(f, first)


def test_all_small_pos_cnfs_count():
    fs = all_small_pos_cnfs(3, 3)
    assert len(fs) == 2 + 8 + 64
    assert len(set(fs)) == len(fs)


def test_reduction_shapes():
    f = PosCnf.of(2, [[1, 2], [2]])
    split = to_split_graph(f)
    assert split.n == 4 + 2
    assert list(split.labels[:5]) == ["u1", "u2", "u3", "u4", "v1"]
    assert all(split.has_edge(a, b) for a, b in itertools.combinations(range(4), 2))
    assert split.has_edge(0, 4) and split.has_edge(1, 4) and split.has_edge(1, 5)
    bip = to_bipartite_graph(f)
    assert bip.n == 4 + 2 + 2
    assert bip.is_bipartite()
    assert list(bip.labels[-2:]) == ["w", "w'"]


def test_reduction_equivalence_single_formula():
    report = reduction_equivalence_check(PosCnf.of(3, [[1, 2], [2, 3], [1, 3]]))
    assert report.ok
    assert len(report.cases) == 4


@pytest.mark.parametrize("g", [gc.petersen(), gc.heawood(), gc.cycle(4), gc.complete_bipartite(3, 4),
                               gc.grid(3, 3)], ids=lambda g: g.name)
def test_tdom_is_maximal(g):
    k, _ = tdom_with_witness(g)
    assert total_domatic_partition(g, k + 1) is None
