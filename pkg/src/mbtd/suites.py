"""Property suites run by ``mbtd verify`` and a few shared test catalogs."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

from . import graph as gc
from .classifiers import (
    classify_cactus,
    classify_cycle,
    classify_grid,
    classify_path,
    classify_prism_cycle,
    classify_tree,
    combine_union,
)
from .graph import Graph
from .hypergraph import Hypergraph, erdos_selfridge_breaker_check, open_neighborhood_hypergraph
from .solver import (
    ClassLabel,
    Player,
    c4_pairing_strategy,
    label_from_winners,
    lowest_index_strategy,
    outcome_class,
    prism_cycle_strategy,
    solve,
    solve_with_pass,
    verify_strategy,
)
from .structural import all_small_pos_cnfs, reduction_equivalence_check, tdom


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}{tail}"


# --------------------------------------------------------------------------
# catalogs


def small_catalog() -> list[Graph]:
    """Hand-picked graphs on at most 8 vertices covering D, N and S."""
    gs = [
        gc.complete(1), gc.complete(2), gc.path(3), gc.path(4), gc.path(5),
        gc.complete(3), gc.complete(4), gc.cycle(4), gc.cycle(5), gc.cycle(6),
        gc.cycle(7), gc.cycle(8), gc.star(3), gc.star(4),
        gc.complete_bipartite(2, 3), gc.complete_bipartite(3, 3),
        gc.complete_bipartite(2, 4), gc.grid(2, 2), gc.grid(2, 3), gc.grid(2, 4),
        gc.prism(2, 3), gc.gnk(2, 1), gc.gnk(3, 2),
        gc.disjoint_union(gc.cycle(4), gc.cycle(4)),
        gc.disjoint_union(gc.cycle(3), gc.complete(2)),
        gc.blow_up(gc.cycle(4), 0, gc.complete(2)),
    ]
    gs += [gc.random_cactus(n, seed) for seed, n in ((1, 6), (2, 7), (3, 8), (4, 8), (5, 5))]
    return gs


def d_catalog() -> list[Graph]:
    """Class-D graphs on at most 8 vertices."""
    return [
        gc.cycle(4), gc.complete(4), gc.complete_bipartite(2, 3),
        gc.complete_bipartite(3, 3), gc.prism(2, 3), gc.grid(2, 4),
        gc.disjoint_union(gc.cycle(4), gc.cycle(4)),
    ]


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return gc.from_edge_list(n, edges, f"G({n},{p:.2f})")


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform labelled tree from a random Prüfer sequence."""
    if n <= 2:
        return gc.path(n)
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(n) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [w for w in range(n) if degree[w] == 1]
    edges.append((u, v))
    return gc.from_edge_list(n, edges, f"tree{n}")


def _tree_code(adj: list[list[int]]) -> str:
    """Canonical string of an unlabelled tree: AHU encoding rooted at its centre(s)."""
    n = len(adj)
    degree = [len(a) for a in adj]
    layer = [v for v in range(n) if degree[v] <= 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                degree[w] -= 1
                if degree[w] == 1:
                    nxt.append(w)
        layer = nxt

    def encode(v: int, parent: int) -> str:
        return "(" + "".join(sorted(encode(w, v) for w in adj[v] if w != parent)) + ")"

    return min(encode(c, -1) for c in layer)


def nonisomorphic_trees(n: int) -> list[Graph]:
    """One representative of every unlabelled tree on ``n`` vertices."""
    if n < 1:
        raise ValueError("trees need at least one vertex")
    level = {"()": [[]]}
    for size in range(2, n + 1):
        grown: dict[str, list[list[int]]] = {}
        for adj in level.values():
            for v in range(size - 1):
                bigger = [list(a) for a in adj] + [[v]]
                bigger[v].append(size - 1)
                grown.setdefault(_tree_code(bigger), bigger)
        level = grown
    return [
        gc.from_edge_list(n, [(u, v) for u, a in enumerate(adj) for v in a if u < v], f"tree{n}")
        for _, adj in sorted(level.items())
    ]


def random_hypergraph_board(n: int, num_edges: int, rng: random.Random) -> Hypergraph:
    masks = []
    for _ in range(num_edges):
        size = rng.randint(1, n)
        masks.append(gc.mask_of(rng.sample(range(n), size)))
    return Hypergraph.from_masks(n, masks)


# --------------------------------------------------------------------------
# independent oracle


def graph_level_winner(g: Graph, first: Player) -> Player:
    """Plain minimax straight on the graph, with no hypergraph and no pruning.

    Kept separate from :mod:`mbtd.solver` so the two can check each other.
    """
    n = g.n
    nbrs = [frozenset(a) for a in g.adj]

    @lru_cache(maxsize=None)
    def dominator_wins(dom: frozenset[int], sta: frozenset[int], dom_turn: bool) -> bool:
        if any(nb <= sta for nb in nbrs):
            return False
        if all(nb & dom for nb in nbrs):
            return True
        free = [v for v in range(n) if v not in dom and v not in sta]
        if not free:
            return True
        if dom_turn:
            return any(dominator_wins(dom | {v}, sta, False) for v in free)
        return all(dominator_wins(dom, sta | {v}, True) for v in free)

    won = dominator_wins(frozenset(), frozenset(), first is Player.DOMINATOR)
    return Player.DOMINATOR if won else Player.STALLER


def graph_level_class(g: Graph) -> ClassLabel:
    return label_from_winners(graph_level_winner(g, Player.DOMINATOR),
                              graph_level_winner(g, Player.STALLER))


# --------------------------------------------------------------------------
# suites


TABLE_ONE = {
    (ClassLabel.D, ClassLabel.D): ClassLabel.D,
    (ClassLabel.D, ClassLabel.N): ClassLabel.N,
    (ClassLabel.D, ClassLabel.S): ClassLabel.S,
    (ClassLabel.N, ClassLabel.N): ClassLabel.S,
    (ClassLabel.N, ClassLabel.S): ClassLabel.S,
    (ClassLabel.S, ClassLabel.S): ClassLabel.S,
}


def union_table_entry(a: ClassLabel, b: ClassLabel) -> ClassLabel:
    return TABLE_ONE.get((a, b)) or TABLE_ONE[(b, a)]


def suite_table1(seed: int = 0) -> Iterator[Check]:
    reps = {ClassLabel.D: gc.cycle(4), ClassLabel.N: gc.cycle(3), ClassLabel.S: gc.complete(2)}
    for a, b in itertools.product(reps, repeat=2):
        g = gc.disjoint_union(reps[a], reps[b])
        got = outcome_class(g)
        want = union_table_entry(a, b)
        yield Check(f"{reps[a].name}({a}) + {reps[b].name}({b})",
                    got is want and combine_union(a, b) is want, f"solver {got}, table {want}")


def suite_noskip(seed: int = 0) -> Iterator[Check]:
    for g in small_catalog():
        board = open_neighborhood_hypergraph(g)
        for first in Player:
            plain = solve(board, first).winner
            for passer in Player:
                got = solve_with_pass(board, first, passer).winner
                yield Check(f"{g.name} first={first} pass={passer}", got is plain,
                            f"{got} vs {plain}")


def suite_blowup(seed: int = 0) -> Iterator[Check]:
    hs = [gc.complete(1), gc.complete(2), gc.empty_graph(2), gc.path(3)]
    for g in d_catalog():
        for u in range(g.n):
            for h in hs:
                got = outcome_class(gc.blow_up(g, u, h))
                yield Check(f"{g.name}_{u}[{h.name}]", got is ClassLabel.D, str(got))
    witness = gc.blow_up(gc.cycle(5), 0, gc.cycle(4))
    c5 = outcome_class(gc.cycle(5))
    got = outcome_class(witness)
    yield Check("C5_u[C4] is D while C5 is S", got is ClassLabel.D and c5 is ClassLabel.S,
                f"{got}, {c5}")


def tdom_catalog() -> list[Graph]:
    gs = [g for g in small_catalog() if all(g.adj)]
    gs += [gc.petersen(), gc.heawood(), gc.gnk(4, 2), gc.grid(3, 3)]
    rng = random.Random(7)
    gs += [random_tree(rng.randint(2, 10), rng) for _ in range(10)]
    return gs


def suite_tdom_implication(seed: int = 0) -> Iterator[Check]:
    for g in tdom_catalog():
        k = tdom(g)
        if k != 1:
            yield Check(f"{g.name} tdom={k}", True, "no claim for tdom > 1")
            continue
        winner = solve(open_neighborhood_hypergraph(g), Player.STALLER).winner
        yield Check(f"{g.name} tdom=1", winner is Player.STALLER, f"S-game {winner}")


def suite_reductions(seed: int = 0) -> Iterator[Check]:
    for f in all_small_pos_cnfs(3, 3):
        report = reduction_equivalence_check(f)
        clauses = " ".join("{" + ",".join(map(str, sorted(c))) + "}" for c in f.clauses)
        bad = [f"{c.construction}/{c.order}" for c in report.cases if not c.ok]
        yield Check(f"n={f.num_vars} [{clauses}]", report.ok, ", ".join(bad))


def suite_strategies(seed: int = 0) -> Iterator[Check]:
    g = gc.grid(2, 2)
    yield Check("C4 pairing on P2□P2, Staller first",
                bool(verify_strategy(g, c4_pairing_strategy(g, [[0, 1, 2, 3]]), Player.STALLER)))
    g = gc.grid(2, 4)
    part = [[0, 1, 4, 5], [2, 3, 6, 7]]
    for first in Player:
        yield Check(f"C4 pairing on P2□P4, {first} first",
                    bool(verify_strategy(g, c4_pairing_strategy(g, part), first)))
    for ell in (1, 2, 3):
        g = gc.prism(2, 2 * ell + 1)
        for first in Player:
            yield Check(f"prism strategy on {g.name}, {first} first",
                        bool(verify_strategy(g, prism_cycle_strategy(ell), first)))
    report = verify_strategy(gc.cycle(6), lowest_index_strategy(gc.cycle(6)), Player.DOMINATOR)
    yield Check("lowest-index Dominator on C6 is refuted", not report.ok,
                f"counterexample {report.counterexample}")


def suite_oracle(seed: int = 0) -> Iterator[Check]:
    rng = random.Random(seed)
    for i in range(50):
        n = rng.randint(1, 8)
        g = random_graph(n, rng.uniform(0.2, 0.8), rng)
        a, b = outcome_class(g), graph_level_class(g)
        yield Check(f"random graph #{i} n={n} m={g.num_edges}", a is b, f"{a} vs {b}")
    for n in range(3, 13):
        yield Check(f"cycle C{n}", classify_cycle(n) is outcome_class(gc.cycle(n)))
    for n in range(1, 13):
        yield Check(f"path P{n}", classify_path(n) is outcome_class(gc.path(n)))
    for m, n in itertools.product(range(2, 6), repeat=2):
        if m * n <= 20:
            yield Check(f"grid {m}x{n}", classify_grid(m, n) is outcome_class(gc.grid(m, n)))
    for rows, m in itertools.product(range(2, 7), range(3, 10)):
        if rows * m <= 18:
            part = classify_prism_cycle(rows, m)
            g = gc.prism(rows, m)
            board = open_neighborhood_hypergraph(g)
            d = solve(board, Player.DOMINATOR).winner if part.d_game else None
            s = solve(board, Player.STALLER).winner if part.s_game else None
            yield Check(f"prism {rows},{m}", (d is part.d_game) and (s is part.s_game))
    for n in range(1, 11):
        for i, t in enumerate(nonisomorphic_trees(n)):
            yield Check(f"tree n={n} #{i}", classify_tree(t) is outcome_class(t))
    for s in range(50):
        g = gc.random_cactus(rng.randint(1, 13), seed * 1000 + s)
        yield Check(f"cactus {g.name}", classify_cactus(g) is outcome_class(g))
    for i in range(50):
        board = random_hypergraph_board(rng.randint(2, 8), rng.randint(1, 4), rng)
        if board.has_empty_edge or not erdos_selfridge_breaker_check(board):
            continue
        winner = solve(board, Player.STALLER).winner
        yield Check(f"Erdős–Selfridge board #{i}", winner is Player.DOMINATOR)


SUITES: dict[str, Callable[[int], Iterator[Check]]] = {
    "table1": suite_table1,
    "noskip": suite_noskip,
    "blowup": suite_blowup,
    "tdom-implication": suite_tdom_implication,
    "reductions": suite_reductions,
    "strategies": suite_strategies,
    "oracle": suite_oracle,
}
