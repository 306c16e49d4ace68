"""Exact Maker-Breaker solving on hypergraph boards.

The search is a boolean negamax over (Dominator claims, Staller claims,
side to move) with a transposition table. Maker-Breaker games cannot be
drawn, so each table entry is just "does the side to move win".

Pruning used inside the search, all of it exact:

* a hyperedge containing a Dominator vertex is dead and ignored;
* Staller wins on the spot when a live edge has one free vertex left;
* Dominator wins on the spot when one free vertex meets every live edge;
* when the opponent has such an immediate win the mover must block it, and
  two disjoint immediate wins mean the mover has lost;
* vertices in no live edge are never tried while a useful move exists
  (claiming a vertex never hurts its owner, so a useless move is no better
  than any other).
"""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

from .graph import Graph, bits, popcount
from .hypergraph import Hypergraph, closed_neighborhood_hypergraph, open_neighborhood_hypergraph

DEFAULT_MAX_VERTICES = 22
HARD_MAX_VERTICES = 64


class Player(enum.Enum):
    DOMINATOR = "Dominator"
    STALLER = "Staller"

    def opponent(self) -> Player:
        return Player.STALLER if self is Player.DOMINATOR else Player.DOMINATOR

    @classmethod
    def parse(cls, text: str) -> Player:
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown player {text!r}") from None

    def __str__(self) -> str:
        return self.value


class ClassLabel(str, enum.Enum):
    D = "D"
    N = "N"
    S = "S"

    def __str__(self) -> str:
        return self.value


class SolverError(Exception):
    pass


class SizeCapExceeded(SolverError):
    pass


class BudgetExceeded(SolverError):
    """The node budget ran out before the game value was known."""

    def __init__(self, nodes: int) -> None:
        super().__init__(f"node budget exhausted after {nodes} nodes")
        self.nodes = nodes


class InconsistentOutcome(SolverError):
    """Staller won the D-game while Dominator won the S-game; impossible in a correct solve."""


class IllegalMove(SolverError):
    pass


def max_vertices_from_env() -> int:
    raw = os.environ.get("MBTD_MAX_VERTICES")
    if raw is None:
        return DEFAULT_MAX_VERTICES
    try:
        value = int(raw)
    except ValueError:
        raise SolverError(f"MBTD_MAX_VERTICES must be an integer, got {raw!r}") from None
    return min(value, HARD_MAX_VERTICES)


@dataclass
class SearchOptions:
    node_budget: int | None = None
    max_vertices: int | None = None
    workers: int = 1

    def cap(self) -> int:
        cap = self.max_vertices if self.max_vertices is not None else max_vertices_from_env()
        return min(cap, HARD_MAX_VERTICES)


@dataclass(frozen=True)
class Position:
    board: Hypergraph
    dom: int = 0
    sta: int = 0
    to_move: Player = Player.DOMINATOR

    def __post_init__(self) -> None:
        if self.dom & self.sta:
            raise IllegalMove("a vertex is claimed by both players")
        if (self.dom | self.sta) >> self.board.n:
            raise IllegalMove("claimed vertex outside the board")

    @property
    def free(self) -> int:
        return ((1 << self.board.n) - 1) & ~(self.dom | self.sta)

    def play(self, v: int) -> Position:
        if not (self.free >> v) & 1:
            raise IllegalMove(f"vertex {v} is not available")
        if self.to_move is Player.DOMINATOR:
            return Position(self.board, self.dom | (1 << v), self.sta, Player.STALLER)
        return Position(self.board, self.dom, self.sta | (1 << v), Player.DOMINATOR)

    def is_terminal(self) -> bool:
        return staller_won(self) or dominator_won(self) or self.free == 0

    def winner(self) -> Player | None:
        if staller_won(self):
            return Player.STALLER
        if dominator_won(self) or self.free == 0:
            return Player.DOMINATOR
        return None


def staller_won(pos: Position) -> bool:
    """Some hyperedge lies entirely inside Staller's claims."""
    sta = pos.sta
    return any(e & ~sta == 0 for e in pos.board.edges)


def dominator_won(pos: Position) -> bool:
    """Every hyperedge meets Dominator's claims."""
    dom = pos.dom
    return all(e & dom for e in pos.board.edges)


@dataclass
class SolveResult:
    winner: Player
    principal_move: int | None
    nodes_expanded: int
    table_entries: int


@dataclass
class _Search:
    edges: tuple[int, ...]
    full: int
    budget: int | None = None
    nodes: int = 0
    table: dict[tuple[int, int, bool], bool] = field(default_factory=dict)

    def mover_wins(self, dom: int, sta: int, dom_to_move: bool) -> bool:
        key = (dom, sta, dom_to_move)
        hit = self.table.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(self.nodes)
        result = self._expand(dom, sta, dom_to_move)
        self.table[key] = result
        return result

    def _expand(self, dom: int, sta: int, dom_to_move: bool) -> bool:
        free = self.full & ~(dom | sta)
        rems = []
        for e in self.edges:
            if e & dom:
                continue
            r = e & free
            if r == 0:
                return not dom_to_move  # edge inside Staller's set
            rems.append(r)
        if not rems:
            return dom_to_move  # Dominator already meets every edge
        # free == 0 cannot reach here: a live edge with no free vertex was caught above.

        common = free
        singles = 0
        single_count = 0
        for r in rems:
            common &= r
            if r & (r - 1) == 0:
                single_count += 1
                singles |= r

        if dom_to_move:
            if common:
                return True
            if single_count:
                if singles & (singles - 1):
                    return False  # two different vertices to block
                moves = [singles.bit_length() - 1]
            else:
                moves = self._ordered(rems)
            for v in moves:
                if not self.mover_wins(dom | (1 << v), sta, False):
                    return True
            return False

        if single_count:
            return True
        if common:
            if common & (common - 1):
                return False  # Dominator has two separate finishing moves
            moves = [common.bit_length() - 1]
        else:
            moves = self._ordered(rems)
        for v in moves:
            if not self.mover_wins(dom, sta | (1 << v), True):
                return True
        return False

    @staticmethod
    def _ordered(rems: list[int]) -> list[int]:
        score: dict[int, float] = {}
        for r in rems:
            w = 2.0 ** -popcount(r)
            for v in bits(r):
                score[v] = score.get(v, 0.0) + w
        return sorted(score, key=lambda v: (-score[v], v))


def _check_cap(board: Hypergraph, options: SearchOptions) -> None:
    cap = options.cap()
    if board.n > cap:
        raise SizeCapExceeded(f"board has {board.n} vertices, cap is {cap}")


def _child_value(args: tuple[tuple[int, ...], int, int, int, bool, int | None]) -> tuple[bool, int]:
    edges, full, dom, sta, dom_to_move, budget = args
    search = _Search(edges, full, budget)
    return search.mover_wins(dom, sta, dom_to_move), search.nodes


def _position_search(pos: Position, options: SearchOptions) -> _Search:
    return _Search(pos.board.edges, (1 << pos.board.n) - 1, options.node_budget)


def _children(pos: Position) -> Iterator[tuple[int, Position]]:
    for v in bits(pos.free):
        yield v, pos.play(v)


def solve_position(pos: Position, options: SearchOptions | None = None) -> SolveResult:
    """Solve from an arbitrary position. ``principal_move`` follows :func:`best_move`."""
    options = options or SearchOptions()
    _check_cap(pos.board, options)
    if pos.is_terminal():
        winner = pos.winner()
        assert winner is not None
        return SolveResult(winner, None, 0, 0)
    if options.workers > 1:
        return _solve_parallel(pos, options)
    search = _position_search(pos, options)
    mover = pos.to_move
    wins = search.mover_wins(pos.dom, pos.sta, mover is Player.DOMINATOR)
    move = _best_move_with(search, pos, wins)
    winner = mover if wins else mover.opponent()
    return SolveResult(winner, move, search.nodes, len(search.table))


def _best_move_with(search: _Search, pos: Position, mover_wins: bool) -> int:
    free = list(bits(pos.free))
    if not mover_wins:
        return free[0]
    for v, child in _children(pos):
        if not search.mover_wins(child.dom, child.sta, child.to_move is Player.DOMINATOR):
            return v
    raise AssertionError("winning position without a winning move")


def _solve_parallel(pos: Position, options: SearchOptions) -> SolveResult:
    # Each root child is solved in its own worker with a private table. The
    # verdict and the lowest-index tie-break do not depend on scheduling.
    children = list(_children(pos))
    jobs = [
        (pos.board.edges, (1 << pos.board.n) - 1, c.dom, c.sta,
         c.to_move is Player.DOMINATOR, options.node_budget)
        for _, c in children
    ]
    with ProcessPoolExecutor(max_workers=options.workers) as pool:
        results = list(pool.map(_child_value, jobs))
    nodes = sum(n for _, n in results)
    for (v, _), (child_wins, _) in zip(children, results):
        if not child_wins:
            return SolveResult(pos.to_move, v, nodes, 0)
    return SolveResult(pos.to_move.opponent(), children[0][0], nodes, 0)


def solve(board: Hypergraph, first: Player, options: SearchOptions | None = None) -> SolveResult:
    """Optimal-play winner from the empty board with ``first`` to move."""
    return solve_position(Position(board, 0, 0, first), options)


def best_move(pos: Position, options: SearchOptions | None = None) -> int:
    """Lowest-index move that keeps the mover's game value.

    In a lost position every move keeps the value, so this is the lowest
    free vertex.
    """
    if pos.is_terminal():
        raise IllegalMove("no move in a finished game")
    options = options or SearchOptions()
    _check_cap(pos.board, options)
    search = _position_search(pos, options)
    wins = search.mover_wins(pos.dom, pos.sta, pos.to_move is Player.DOMINATOR)
    return _best_move_with(search, pos, wins)


def principal_variation(pos: Position, options: SearchOptions | None = None) -> list[int]:
    """Moves of the game in which both sides always play :func:`best_move`."""
    options = options or SearchOptions()
    _check_cap(pos.board, options)
    search = _position_search(pos, options)
    line = []
    while not pos.is_terminal():
        wins = search.mover_wins(pos.dom, pos.sta, pos.to_move is Player.DOMINATOR)
        v = _best_move_with(search, pos, wins)
        line.append(v)
        pos = pos.play(v)
    return line


# --------------------------------------------------------------------------
# outcome classes


def label_from_winners(d_game: Player, s_game: Player) -> ClassLabel:
    if d_game is Player.DOMINATOR and s_game is Player.DOMINATOR:
        return ClassLabel.D
    if d_game is Player.STALLER and s_game is Player.STALLER:
        return ClassLabel.S
    if d_game is Player.DOMINATOR:
        return ClassLabel.N
    raise InconsistentOutcome("Staller wins the D-game but Dominator wins the S-game")


@dataclass
class GameOutcome:
    d_game: SolveResult
    s_game: SolveResult

    @property
    def label(self) -> ClassLabel:
        return label_from_winners(self.d_game.winner, self.s_game.winner)

    @property
    def nodes(self) -> int:
        return self.d_game.nodes_expanded + self.s_game.nodes_expanded


def solve_both(board: Hypergraph, options: SearchOptions | None = None) -> GameOutcome:
    return GameOutcome(solve(board, Player.DOMINATOR, options), solve(board, Player.STALLER, options))


def total_domination_outcome(g: Graph, options: SearchOptions | None = None) -> GameOutcome:
    return solve_both(open_neighborhood_hypergraph(g), options)


def outcome_class(g: Graph, options: SearchOptions | None = None) -> ClassLabel:
    """D, N or S for the total domination game on ``g``."""
    return total_domination_outcome(g, options).label


def domination_outcome_class(g: Graph, options: SearchOptions | None = None) -> ClassLabel:
    """D, N or S for the ordinary domination game (closed neighbourhoods)."""
    return solve_both(closed_neighborhood_hypergraph(g), options).label


# --------------------------------------------------------------------------
# pass moves


def solve_with_pass(
    board: Hypergraph,
    first: Player,
    pass_allowed_for: Player,
    options: SearchOptions | None = None,
) -> SolveResult:
    """Winner when ``pass_allowed_for`` may skip any turn, at most ``n`` times.

    This search deliberately avoids the pruning rules of :func:`solve` beyond
    the terminal tests, so comparing the two exercises them independently.
    """
    options = options or SearchOptions()
    _check_cap(board, options)
    n = board.n
    full = (1 << n) - 1
    edges = board.edges
    table: dict[tuple[int, int, bool, int], bool] = {}
    nodes = 0
    dom_may_pass = pass_allowed_for is Player.DOMINATOR

    def mover_wins(dom: int, sta: int, dom_to_move: bool, passes: int) -> bool:
        nonlocal nodes
        key = (dom, sta, dom_to_move, passes)
        hit = table.get(key)
        if hit is not None:
            return hit
        nodes += 1
        if options.node_budget is not None and nodes > options.node_budget:
            raise BudgetExceeded(nodes)
        if any(e & ~sta == 0 for e in edges):
            result = not dom_to_move
        elif all(e & dom for e in edges):
            result = dom_to_move
        else:
            free = full & ~(dom | sta)
            if free == 0:
                result = dom_to_move
            else:
                result = False
                for v in bits(free):
                    if dom_to_move:
                        child = mover_wins(dom | (1 << v), sta, False, passes)
                    else:
                        child = mover_wins(dom, sta | (1 << v), True, passes)
                    if not child:
                        result = True
                        break
                if not result and dom_to_move == dom_may_pass and passes < n:
                    result = not mover_wins(dom, sta, not dom_to_move, passes + 1)
        table[key] = result
        return result

    wins = mover_wins(0, 0, first is Player.DOMINATOR, 0)
    winner = first if wins else first.opponent()
    return SolveResult(winner, None, nodes, len(table))


# --------------------------------------------------------------------------
# strategy verification

Strategy = Callable[[int, int, "int | None"], int]
"""Dominator move rule: ``(dom, sta, staller_last_move) -> vertex``."""


@dataclass
class VerificationReport:
    ok: bool
    leaves: int
    counterexample: list[tuple[str, int]] | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_strategy(g: Graph, strategy: Strategy, first: Player,
                    options: SearchOptions | None = None) -> VerificationReport:
    """Play ``strategy`` as Dominator against every Staller move sequence.

    Success means Dominator's claims totally dominate ``g`` at the end of
    every line. A failing line is returned as a list of ``(player, vertex)``.
    """
    options = options or SearchOptions()
    board = open_neighborhood_hypergraph(g)
    _check_cap(board, options)
    full = (1 << g.n) - 1
    seen: set[tuple[int, int, int | None, bool]] = set()
    leaves = 0
    line: list[tuple[str, int]] = []

    def dominated(dom: int) -> bool:
        return all(e & dom for e in board.edges)

    def walk(dom: int, sta: int, last: int | None, dom_to_move: bool) -> bool:
        nonlocal leaves
        key = (dom, sta, last, dom_to_move)
        if key in seen:
            return True
        free = full & ~(dom | sta)
        if any(e & ~sta == 0 for e in board.edges):
            return False
        if free == 0 or dominated(dom):
            leaves += 1
            seen.add(key)
            return dominated(dom)
        if dom_to_move:
            v = strategy(dom, sta, last)
            if not (0 <= v < g.n) or not (free >> v) & 1:
                raise IllegalMove(f"strategy chose unavailable vertex {v}")
            line.append((str(Player.DOMINATOR), v))
            ok = walk(dom | (1 << v), sta, last, False)
            if not ok:
                return False
            line.pop()
        else:
            for v in bits(free):
                line.append((str(Player.STALLER), v))
                if not walk(dom, sta | (1 << v), v, True):
                    return False
                line.pop()
        seen.add(key)
        return True

    ok = walk(0, 0, None, first is Player.DOMINATOR)
    return VerificationReport(ok, leaves, None if ok else list(line))


def lowest_free(dom: int, sta: int, n: int) -> int:
    free = ((1 << n) - 1) & ~(dom | sta)
    if not free:
        raise IllegalMove("board is full")
    return (free & -free).bit_length() - 1


def lowest_index_strategy(g: Graph) -> Strategy:
    def rule(dom: int, sta: int, last: int | None) -> int:
        return lowest_free(dom, sta, g.n)

    return rule


def c4_pairing_strategy(g: Graph, partition: list[list[int]]) -> Strategy:
    """Answer each Staller move inside its 4-cycle with the opposite vertex.

    Every class must induce C4 in ``g``, and the classes must partition V(g).
    Opposite vertices of a 4-cycle together form the open neighbourhood of
    each of the other two, so taking one from each pair totally dominates.
    """
    covered = sorted(v for cls in partition for v in cls)
    if covered != list(range(g.n)):
        raise ValueError("classes must partition the vertex set")
    partner: dict[int, int] = {}
    for cls in partition:
        if len(cls) != 4:
            raise ValueError(f"class {cls} does not have four vertices")
        inside = set(cls)
        for v in cls:
            nbrs = g.adj[v] & inside
            if len(nbrs) != 2:
                raise ValueError(f"class {cls} does not induce a 4-cycle")
            (opposite,) = inside - nbrs - {v}
            partner[v] = opposite
    n = g.n

    def rule(dom: int, sta: int, last: int | None) -> int:
        taken = dom | sta
        if last is not None and not (taken >> partner[last]) & 1:
            return partner[last]
        for v in range(n):
            if (sta >> v) & 1 and not (taken >> partner[v]) & 1:
                return partner[v]
        return lowest_free(dom, sta, n)

    return rule


def prism_cycle_order(ell: int) -> list[tuple[int, int]]:
    """The (4l+2)-cycle through P2 □ C_{2l+1} in 1-based coordinates.

    Each vertex's three neighbours are consecutive on this cycle.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    m = 2 * ell + 1
    first = [(1, i) if i % 2 else (2, i) for i in range(1, m + 1)]
    second = [(2, i) if i % 2 else (1, i) for i in range(1, m + 1)]
    return first + second


def prism_cycle_strategy(ell: int) -> Strategy:
    """Dominator's rule for P2 □ C_{2l+1}: never let Staller own three
    consecutive vertices of :func:`prism_cycle_order`.

    Vertex ``(i, j)`` is index ``(i-1)*(2l+1) + (j-1)``, matching
    :func:`mbtd.graph.prism`.
    """
    m = 2 * ell + 1
    order = [(i - 1) * m + (j - 1) for i, j in prism_cycle_order(ell)]
    where = {v: k for k, v in enumerate(order)}
    size = len(order)
    n = 2 * m

    def rule(dom: int, sta: int, last: int | None) -> int:
        taken = dom | sta
        if last is not None:
            k = where[last]
            for step in (1, -1):
                v = order[(k + step) % size]
                if not (taken >> v) & 1:
                    return v
        return lowest_free(dom, sta, n)

    return rule
