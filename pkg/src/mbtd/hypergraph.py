"""Maker-Breaker boards.

In the total domination game Staller plays Maker on the hypergraph of open
neighbourhoods and Dominator plays Breaker. The closed-neighbourhood board
gives the ordinary (non-total) domination game.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph import Graph, bits, mask_of

MAKER = "Staller"
BREAKER = "Dominator"


class HypergraphError(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    """Vertex universe ``0..n-1`` with a family of hyperedges stored as bitmasks.

    Duplicate hyperedges are dropped and the remaining ones are kept in sorted
    order, so two boards with the same edge family compare equal. An empty
    hyperedge means Maker has already won.
    """

    n: int
    edges: tuple[int, ...]

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> Hypergraph:
        full = (1 << n) - 1
        uniq = sorted(set(masks))
        for e in uniq:
            if e & ~full:
                raise HypergraphError(f"hyperedge {e:#x} leaves the universe of size {n}")
        return cls(n, tuple(uniq))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> Hypergraph:
        return cls.from_masks(n, (mask_of(s) for s in sets))

    def edge_sets(self) -> list[frozenset[int]]:
        return [frozenset(bits(e)) for e in self.edges]

    @property
    def has_empty_edge(self) -> bool:
        return 0 in self.edges


def open_neighborhood_hypergraph(g: Graph) -> Hypergraph:
    return Hypergraph.from_masks(g.n, g.neighbor_masks())


def closed_neighborhood_hypergraph(g: Graph) -> Hypergraph:
    return Hypergraph.from_masks(g.n, (m | (1 << v) for v, m in enumerate(g.neighbor_masks())))


def erdos_selfridge_weight(h: Hypergraph) -> Fraction:
    return sum((Fraction(1, 2 ** bin(e).count("1")) for e in h.edges), Fraction(0))


def erdos_selfridge_breaker_check(h: Hypergraph) -> bool:
    """True when sum of 2^-|e| is below 1/2, which guarantees a Breaker win
    with Maker moving first. False says nothing."""
    if h.has_empty_edge:
        raise HypergraphError("board has an empty hyperedge; Maker has already won")
    return erdos_selfridge_weight(h) < Fraction(1, 2)
