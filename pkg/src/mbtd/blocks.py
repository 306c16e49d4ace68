"""Blocks, cut vertices and end-blocks via the DFS lowpoint method."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph, GraphError


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[frozenset[int], ...]
    cut_vertices: frozenset[int]
    # block index -> cut vertices it contains; the block-cut tree incidence
    block_cuts: tuple[frozenset[int], ...]

    def end_blocks(self) -> list[int]:
        """Indices of blocks meeting the rest of the graph in at most one vertex."""
        return [i for i, cuts in enumerate(self.block_cuts) if len(cuts) <= 1]

    def blocks_at(self, v: int) -> list[int]:
        return [i for i, b in enumerate(self.blocks) if v in b]


def block_decomposition(g: Graph) -> BlockDecomposition:
    if not g.is_connected():
        raise GraphError("block decomposition needs a connected graph")
    if g.n == 0:
        return BlockDecomposition((), frozenset(), ())
    if g.n == 1:
        return BlockDecomposition((frozenset({0}),), frozenset(), (frozenset(),))

    disc = [-1] * g.n
    low = [0] * g.n
    blocks: list[frozenset[int]] = []
    cuts: set[int] = set()
    edge_stack: list[tuple[int, int]] = []
    counter = 0
    root = 0
    disc[root] = low[root] = counter
    root_children = 0
    # iterative DFS: frames of (vertex, parent, neighbour iterator)
    stack = [(root, -1, iter(sorted(g.adj[root])))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if disc[w] < 0:
                counter += 1
                disc[w] = low[w] = counter
                edge_stack.append((v, w))
                stack.append((w, v, iter(sorted(g.adj[w]))))
                if v == root:
                    root_children += 1
                advanced = True
                break
            if w != parent and disc[w] < disc[v]:
                edge_stack.append((v, w))
                low[v] = min(low[v], disc[w])
        if advanced:
            continue
        stack.pop()
        if parent >= 0:
            low[parent] = min(low[parent], low[v])
            if low[v] >= disc[parent]:
                if parent != root:
                    cuts.add(parent)
                comp: set[int] = set()
                while True:
                    a, b = edge_stack.pop()
                    comp.update((a, b))
                    if (a, b) == (parent, v):
                        break
                blocks.append(frozenset(comp))
    if root_children > 1:
        cuts.add(root)
    cut_set = frozenset(cuts)
    block_cuts = tuple(b & cut_set for b in blocks)
    return BlockDecomposition(tuple(blocks), cut_set, block_cuts)


def block_edge_count(g: Graph, block: frozenset[int]) -> int:
    return sum(len(g.adj[v] & block) for v in block) // 2


def is_cactus(g: Graph) -> bool:
    """Connected, and every block is a single edge or induces a cycle."""
    decomp = block_decomposition(g)
    for b in decomp.blocks:
        if len(b) == 1:
            continue
        if len(b) == 2:
            continue
        if block_edge_count(g, b) != len(b):
            return False
    return True
