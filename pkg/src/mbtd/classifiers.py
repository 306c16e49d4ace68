"""Closed-form outcome classes for the families whose answer is known.

Where only one of the two games is settled the result is a
:class:`PartialOutcome` with ``None`` for the unknown side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .blocks import block_decomposition, block_edge_count, is_cactus
from .graph import Graph, GraphError, bits, mask_of
from .solver import ClassLabel, InconsistentOutcome, Player, label_from_winners

D, N, S = ClassLabel.D, ClassLabel.N, ClassLabel.S


@dataclass(frozen=True)
class PartialOutcome:
    d_game: Player | None
    s_game: Player | None

    def __post_init__(self) -> None:
        if self.d_game is Player.STALLER and self.s_game is Player.DOMINATOR:
            raise InconsistentOutcome("Staller wins the D-game but Dominator wins the S-game")

    @property
    def label(self) -> ClassLabel | None:
        if self.d_game is None or self.s_game is None:
            return None
        return label_from_winners(self.d_game, self.s_game)

    @classmethod
    def of(cls, label: ClassLabel) -> PartialOutcome:
        return {
            D: cls(Player.DOMINATOR, Player.DOMINATOR),
            N: cls(Player.DOMINATOR, Player.STALLER),
            S: cls(Player.STALLER, Player.STALLER),
        }[label]


# --------------------------------------------------------------------------
# simple families


def classify_cycle(n: int) -> ClassLabel:
    if n < 3:
        raise ValueError("cycles need n >= 3")
    if n == 3:
        return N
    if n == 4:
        return D
    return S


def classify_path(n: int) -> ClassLabel:
    if n < 1:
        raise ValueError("paths need n >= 1")
    return N if n == 3 else S


def classify_grid(m: int, n: int) -> ClassLabel:
    """P_m □ P_n: D when both sides are even, S otherwise."""
    if m < 1 or n < 1:
        raise ValueError("grid sides must be positive")
    if m == 1:
        return classify_path(n)
    if n == 1:
        return classify_path(m)
    return D if m % 2 == 0 and n % 2 == 0 else S


def classify_prism_cycle(rows: int, m: int) -> PartialOutcome:
    """P_rows □ C_m.

    Even ``rows`` and ``m = 4`` are D (the vertex set splits into induced
    4-cycles or even prisms). For three rows only the S-game is settled,
    in Staller's favour. Other odd row counts are open.
    """
    if rows < 2 or m < 3:
        raise ValueError("prism needs rows >= 2 and m >= 3")
    if rows % 2 == 0 or m == 4:
        return PartialOutcome.of(D)
    if rows == 3:
        return PartialOutcome(None, Player.STALLER)
    return PartialOutcome(None, None)


def combine_union(a: ClassLabel, b: ClassLabel) -> ClassLabel:
    """Class of a disjoint union from the classes of its two parts."""
    if a is D:
        return b
    if b is D:
        return a
    return S


def classify_tree(t: Graph) -> ClassLabel:
    """Stars with at least two leaves are N; every other tree is S."""
    if not t.is_tree():
        raise GraphError("classify_tree needs a tree")
    if t.n >= 3 and any(t.degree(v) == t.n - 1 for v in t.vertices):
        return N
    return S


# --------------------------------------------------------------------------
# cacti


def _require_cactus(g: Graph) -> None:
    if not g.is_connected():
        raise GraphError("cactus classification needs a connected graph")
    if not is_cactus(g):
        raise GraphError("graph is not a cactus")


def _block_kinds(g: Graph) -> list[int]:
    """Block sizes, with 2 standing for K2 and k >= 3 for C_k; K1 gives []."""
    if g.n <= 1:
        return []
    return [len(b) for b in block_decomposition(g).blocks]


def is_star_cactus(g: Graph) -> bool:
    _require_cactus(g)
    if g.n == 0:
        return False
    blocks = block_decomposition(g).blocks
    return bool(frozenset.intersection(*blocks))


def is_n_star_cactus(g: Graph) -> bool:
    _require_cactus(g)
    kinds = _block_kinds(g)
    if kinds == [3]:
        return True
    if len(kinds) < 2 or not is_star_cactus(g):
        return False
    if any(k > 5 for k in kinds):
        return False
    return 3 in kinds or 4 in kinds or kinds.count(2) >= 2


@dataclass
class CactusVerdict:
    label: ClassLabel
    # removed end-block 4-cycles, in order; for N the remainder is an N-star cactus
    removals: list[frozenset[int]] = field(default_factory=list)
    remainder: frozenset[int] | None = None


class _CactusSearch:
    """Searches over sets of remaining vertices of a fixed cactus."""

    def __init__(self, g: Graph) -> None:
        self.g = g
        self.full = mask_of(range(g.n))
        self.c4s = lru_cache(maxsize=None)(self._end_c4s)
        self.exhaust = lru_cache(maxsize=None)(self._exhaust)
        self.to_star = lru_cache(maxsize=None)(self._to_star)

    def induced(self, mask: int) -> tuple[Graph, list[int]]:
        keep = list(bits(mask))
        return self.g.induced_subgraph(keep), keep

    def _end_c4s(self, mask: int) -> tuple[int, ...]:
        """End-block 4-cycles of every component of the graph induced on ``mask``."""
        sub, keep = self.induced(mask)
        found = []
        for comp in sub.components():
            piece = sub.induced_subgraph(comp)
            decomp = block_decomposition(piece)
            for i in decomp.end_blocks():
                block = decomp.blocks[i]
                if len(block) == 4 and block_edge_count(piece, block) == 4:
                    found.append(mask_of(keep[comp[v]] for v in block))
        return tuple(sorted(found))

    def _exhaust(self, mask: int) -> tuple[int, ...] | None:
        if mask == 0:
            return ()
        for c in self.c4s(mask):
            rest = self.exhaust(mask & ~c)
            if rest is not None:
                return (c,) + rest
        return None

    def _to_star(self, mask: int) -> tuple[int, ...] | None:
        sub, _ = self.induced(mask)
        if sub.n and sub.is_connected() and is_n_star_cactus(sub):
            return ()
        for c in self.c4s(mask):
            rest = self.to_star(mask & ~c)
            if rest is not None:
                return (c,) + rest
        return None


def _sets(masks: tuple[int, ...]) -> list[frozenset[int]]:
    return [frozenset(bits(m)) for m in masks]


def cactus_verdict(g: Graph) -> CactusVerdict:
    """Class of a connected cactus, with the end-block removals that certify it."""
    _require_cactus(g)
    kinds = _block_kinds(g)
    if len(kinds) <= 1:
        if not kinds or kinds == [2]:
            return CactusVerdict(S)
        return CactusVerdict(classify_cycle(kinds[0]))
    search = _CactusSearch(g)
    cover = search.exhaust(search.full)
    if cover is not None:
        return CactusVerdict(D, _sets(cover), frozenset())
    seq = search.to_star(search.full)
    if seq is not None:
        removed = 0
        for m in seq:
            removed |= m
        return CactusVerdict(N, _sets(seq), frozenset(bits(search.full & ~removed)))
    return CactusVerdict(S)


def classify_cactus(g: Graph) -> ClassLabel:
    return cactus_verdict(g).label


def greedy_cactus_label(g: Graph) -> ClassLabel:
    """Same rule as :func:`classify_cactus` but always stripping the first
    end-block 4-cycle found instead of searching over removal orders."""
    _require_cactus(g)
    kinds = _block_kinds(g)
    if len(kinds) <= 1:
        return classify_cactus(g)
    search = _CactusSearch(g)
    mask = search.full
    saw_star = False
    while True:
        sub, _ = search.induced(mask)
        if mask == 0:
            return D
        if sub.is_connected() and is_n_star_cactus(sub):
            saw_star = True
        options = search.c4s(mask)
        if not options:
            return N if saw_star else S
        mask &= ~options[0]
