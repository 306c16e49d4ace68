"""Total domination parameters, D-minimality and the POS-CNF reductions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable

from .graph import Graph, GraphError, bits, from_edge_list, mask_of
from .solver import ClassLabel, Player, SearchOptions, outcome_class, total_domination_outcome

EXHAUSTIVE_CAP = 20
POS_CNF_CAP = 12


class StructuralError(ValueError):
    pass


def is_total_dominating_set(g: Graph, s: Iterable[int] | int) -> bool:
    """Every vertex, members of ``s`` included, has a neighbour in ``s``."""
    m = s if isinstance(s, int) else mask_of(s)
    return all(nb & m for nb in g.neighbor_masks())


def _check_exhaustive(g: Graph, cap: int) -> None:
    if any(not a for a in g.adj):
        raise StructuralError("graph has an isolated vertex; no total dominating set exists")
    if g.n > cap:
        raise StructuralError(f"{g.n} vertices exceeds the exhaustive cap of {cap}")


@dataclass
class StructuralReport:
    gamma_t: int | None = None
    tdom: int | None = None
    gamma_t_witness: frozenset[int] | None = None
    tdom_partition: list[frozenset[int]] = field(default_factory=list)


def minimum_total_dominating_set(g: Graph, cap: int = EXHAUSTIVE_CAP) -> frozenset[int]:
    _check_exhaustive(g, cap)
    nbrs = g.neighbor_masks()
    # A vertex of degree one forces its neighbour into every TDS.
    forced = 0
    for nb in nbrs:
        if nb & (nb - 1) == 0:
            forced |= nb
    rest = [v for v in range(g.n) if not (forced >> v) & 1]
    base = bin(forced).count("1")
    for size in range(max(base, 2) - base, len(rest) + 1):
        for extra in itertools.combinations(rest, size):
            m = forced | mask_of(extra)
            if all(nb & m for nb in nbrs):
                return frozenset(bits(m))
    raise AssertionError("V(G) is always a total dominating set here")


def gamma_t(g: Graph, cap: int = EXHAUSTIVE_CAP) -> int:
    return len(minimum_total_dominating_set(g, cap))


def total_domatic_partition(g: Graph, k: int) -> list[frozenset[int]] | None:
    """Split V(g) into ``k`` total dominating sets, or ``None`` if impossible.

    Backtracking colour assignment. A partial colouring is abandoned as soon
    as some vertex has fewer uncoloured neighbours than colours still missing
    from its neighbourhood.
    """
    n = g.n
    if k < 1:
        raise ValueError("k must be positive")
    if k > min((len(a) for a in g.adj), default=0):
        return None
    colour = [-1] * n
    nbr_lists = [sorted(a) for a in g.adj]
    seen = [[0] * k for _ in range(n)]  # seen[w][c]: neighbours of w coloured c
    uncoloured = [len(a) for a in g.adj]
    missing = [k] * n

    def feasible(v: int) -> bool:
        return all(missing[w] <= uncoloured[w] for w in nbr_lists[v])

    def assign(v: int, c: int) -> None:
        colour[v] = c
        for w in nbr_lists[v]:
            uncoloured[w] -= 1
            if seen[w][c] == 0:
                missing[w] -= 1
            seen[w][c] += 1

    def unassign(v: int, c: int) -> None:
        colour[v] = -1
        for w in nbr_lists[v]:
            uncoloured[w] += 1
            seen[w][c] -= 1
            if seen[w][c] == 0:
                missing[w] += 1

    def place(v: int, used: int) -> bool:
        if v == n:
            return all(m == 0 for m in missing)
        # new colours are introduced in order, which removes colour symmetry
        for c in range(min(used + 1, k)):
            assign(v, c)
            if feasible(v) and place(v + 1, max(used, c + 1)):
                return True
            unassign(v, c)
        return False

    if not place(0, 0):
        return None
    return [frozenset(v for v in range(n) if colour[v] == c) for c in range(k)]


def tdom_with_witness(g: Graph, cap: int = EXHAUSTIVE_CAP) -> tuple[int, list[frozenset[int]]]:
    _check_exhaustive(g, cap)
    # merging two classes of a partition keeps it a partition into TDSs, so
    # feasibility is monotone in k and we can scan down from the min degree
    for k in range(min(len(a) for a in g.adj), 0, -1):
        part = total_domatic_partition(g, k)
        if part is not None:
            return k, part
    raise AssertionError("k = 1 is always feasible without isolated vertices")


def tdom(g: Graph, cap: int = EXHAUSTIVE_CAP) -> int:
    return tdom_with_witness(g, cap)[0]


def structural_report(g: Graph, cap: int = EXHAUSTIVE_CAP) -> StructuralReport:
    witness = minimum_total_dominating_set(g, cap)
    k, part = tdom_with_witness(g, cap)
    return StructuralReport(len(witness), k, witness, part)


def tdom_implies_staller(g: Graph, cap: int = EXHAUSTIVE_CAP) -> Player | None:
    """Staller as the S-game winner when tdom(g) = 1, otherwise ``None``.

    With a single total dominating class Staller can steal Dominator's
    winning D-game strategy; the leftover vertices cannot totally dominate.
    """
    return Player.STALLER if tdom(g, cap) == 1 else None


def d_minimal_check(g: Graph, options: SearchOptions | None = None) -> bool:
    """``g`` is class D and deleting any single edge leaves a graph that is not."""
    if not g.is_connected():
        raise GraphError("D-minimality is defined for connected graphs")
    if outcome_class(g, options) is not ClassLabel.D:
        return False
    return all(outcome_class(g.remove_edge(u, v), options) is not ClassLabel.D
               for u, v in g.edges())


# --------------------------------------------------------------------------
# POS-CNF


@dataclass(frozen=True)
class PosCnf:
    """Positive CNF over variables ``1..num_vars``; each clause is a frozenset."""

    num_vars: int
    clauses: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise StructuralError("variable count must be non-negative")
        for c in self.clauses:
            if not c:
                raise StructuralError("clauses must be nonempty")
            if not all(1 <= x <= self.num_vars for x in c):
                raise StructuralError(f"clause {sorted(c)} uses an undeclared variable")

    @classmethod
    def of(cls, num_vars: int, clauses: Iterable[Iterable[int]]) -> PosCnf:
        return cls(num_vars, tuple(frozenset(c) for c in clauses))

    def satisfied_by(self, true_vars: Iterable[int]) -> bool:
        t = set(true_vars)
        return all(c & t for c in self.clauses)


def parse_pos_cnf(text: str) -> PosCnf:
    """``nvars nclauses`` header, then one ``0``-terminated clause per line."""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append(line.split())
    if not rows:
        raise StructuralError("missing 'nvars nclauses' header")
    try:
        header = [int(x) for x in rows[0]]
        body = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise StructuralError(f"non-integer token: {exc}") from None
    if len(header) != 2:
        raise StructuralError("header must be 'nvars nclauses'")
    nvars, nclauses = header
    if len(body) != nclauses:
        raise StructuralError(f"header announces {nclauses} clauses, found {len(body)}")
    clauses = []
    for r in body:
        if not r or r[-1] != 0 or 0 in r[:-1]:
            raise StructuralError(f"clause line must end with a single 0: {r}")
        if any(x < 0 for x in r):
            raise StructuralError("negative literals are not allowed in a positive CNF")
        clauses.append(r[:-1])
    return PosCnf.of(nvars, clauses)


def format_pos_cnf(f: PosCnf) -> str:
    lines = [f"{f.num_vars} {len(f.clauses)}"]
    lines += [" ".join(str(x) for x in sorted(c)) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


def read_pos_cnf(path: str | Path) -> PosCnf:
    try:
        return parse_pos_cnf(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise StructuralError(f"cannot read {path}: {exc}") from None


PROVER = "Prover"
DISPROVER = "Disprover"


def pos_cnf_winner(f: PosCnf, first: str) -> str:
    """Optimal-play winner of the POS-CNF game with ``first`` to move."""
    if first not in (PROVER, DISPROVER):
        raise ValueError(f"first player must be {PROVER!r} or {DISPROVER!r}")
    if f.num_vars > POS_CNF_CAP:
        raise StructuralError(f"{f.num_vars} variables exceeds the cap of {POS_CNF_CAP}")
    clause_masks = [mask_of(x - 1 for x in c) for c in f.clauses]
    full = (1 << f.num_vars) - 1

    @lru_cache(maxsize=None)
    def prover_wins(true: int, false: int) -> bool:
        if any(c & ~false == 0 for c in clause_masks):
            return False
        free = full & ~(true | false)
        if free == 0:
            return all(c & true for c in clause_masks)
        lead = bin(true).count("1") - bin(false).count("1")
        prover_to_move = lead == (0 if first == PROVER else -1)
        if prover_to_move:
            return any(prover_wins(true | (1 << v), false) for v in bits(free))
        return all(prover_wins(true, false | (1 << v)) for v in bits(free))

    return PROVER if prover_wins(0, 0) else DISPROVER


def _padded(f: PosCnf) -> int:
    return max(f.num_vars, 4)


def to_split_graph(f: PosCnf) -> Graph:
    """Clique ``u_1..u_n'`` (indices ``0..n'-1``) plus an independent clause
    vertex ``v_j`` (index ``n'+j-1``) joined to the variables of clause j.

    Fewer than four variables are padded with unused ones.
    """
    nv = _padded(f)
    edges = list(itertools.combinations(range(nv), 2))
    edges += [(x - 1, nv + j) for j, c in enumerate(f.clauses) for x in c]
    labels = [f"u{i + 1}" for i in range(nv)] + [f"v{j + 1}" for j in range(len(f.clauses))]
    return from_edge_list(nv + len(f.clauses), edges, "split(F)", labels)


def to_bipartite_graph(f: PosCnf) -> Graph:
    """As :func:`to_split_graph` but the ``u_i`` are independent and two extra
    vertices ``w``, ``w'`` (the last two indices) see every ``u_i``."""
    nv = _padded(f)
    m = len(f.clauses)
    w1, w2 = nv + m, nv + m + 1
    edges = [(x - 1, nv + j) for j, c in enumerate(f.clauses) for x in c]
    edges += [(i, w) for i in range(nv) for w in (w1, w2)]
    labels = [f"u{i + 1}" for i in range(nv)] + [f"v{j + 1}" for j in range(m)] + ["w", "w'"]
    return from_edge_list(nv + m + 2, edges, "bipartite(F)", labels)


@dataclass
class ReductionCase:
    construction: str
    order: str  # "Prover/Dominator first" or "Disprover/Staller first"
    cnf_winner: str
    game_winner: Player

    @property
    def ok(self) -> bool:
        return (self.cnf_winner == PROVER) == (self.game_winner is Player.DOMINATOR)


@dataclass
class ReductionReport:
    formula: PosCnf
    cases: list[ReductionCase]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)


def reduction_equivalence_check(f: PosCnf, options: SearchOptions | None = None) -> ReductionReport:
    """Compare POS-CNF winners with MBTD winners on both constructions.

    Prover moving first is paired with Dominator moving first, Disprover
    first with Staller first.
    """
    prover_first = pos_cnf_winner(f, PROVER)
    disprover_first = pos_cnf_winner(f, DISPROVER)
    cases = []
    for name, build in (("split", to_split_graph), ("bipartite", to_bipartite_graph)):
        outcome = total_domination_outcome(build(f), options)
        cases.append(ReductionCase(name, "Prover/Dominator first", prover_first,
                                   outcome.d_game.winner))
        cases.append(ReductionCase(name, "Disprover/Staller first", disprover_first,
                                   outcome.s_game.winner))
    return ReductionReport(f, cases)


def all_small_pos_cnfs(max_vars: int = 3, max_clauses: int = 3) -> list[PosCnf]:
    """Every formula with 1..max_vars variables and 0..max_clauses distinct clauses."""
    out = []
    for n in range(1, max_vars + 1):
        possible = [frozenset(c) for r in range(1, n + 1)
                    for c in itertools.combinations(range(1, n + 1), r)]
        for m in range(max_clauses + 1):
            for chosen in itertools.combinations(possible, m):
                out.append(PosCnf(n, tuple(chosen)))
    return out
