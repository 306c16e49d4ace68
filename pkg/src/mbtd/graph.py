"""Simple undirected graphs on dense integer vertices, plus every construction
the solver and classifiers need.

Vertex sets are plain ``int`` bitmasks (bit ``v`` set iff ``v`` is a member).
They are immutable, hashable and fast to combine, which is all the search code
asks of them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

MAX_GRAPH_VERTICES = 64


class GraphError(ValueError):
    """Raised for malformed graphs, bad vertex indices or unparseable input."""


# --------------------------------------------------------------------------
# bitmask helpers


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Yield the members of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# --------------------------------------------------------------------------
# the graph type


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``labels`` optionally gives a human-readable coordinate per vertex (grid
    cells, product pairs, ...). ``family`` records how a named constructor
    built the graph, e.g. ``("grid", (3, 4))``, so classifiers can dispatch on
    it without re-recognising the structure.
    """

    n: int
    adj: tuple[frozenset[int], ...]
    name: str = ""
    labels: tuple[str, ...] | None = field(default=None, compare=False)
    family: tuple | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if len(self.adj) != self.n:
            raise GraphError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise GraphError(f"self-loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.n:
                    raise GraphError(f"neighbor {u} of {v} out of range")
                if v not in self.adj[u]:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("labels must have one entry per vertex")

    # -- basic queries -----------------------------------------------------

    @property
    def vertices(self) -> range:
        return range(self.n)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def degree(self, v: int) -> int:
        return len(self.adj[self._check(v)])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[self._check(u)]

    def neighbor_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(a) for a in self.adj)

    def label(self, v: int) -> str:
        if self.labels is None:
            return str(v)
        return f"{self.labels[v]}#{v}"

    def _check(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range for n={self.n}")
        return v

    # -- derived graphs ----------------------------------------------------

    def induced_subgraph(self, keep: Iterable[int]) -> Graph:
        """Subgraph induced on ``keep``, relabelled to ``0..k-1`` in sorted order."""
        order = sorted(set(keep))
        index = {v: i for i, v in enumerate(order)}
        adj = [frozenset(index[u] for u in self.adj[v] if u in index) for v in order]
        labels = None if self.labels is None else tuple(self.labels[v] for v in order)
        return Graph(len(order), tuple(adj), self.name, labels)

    def remove_edge(self, u: int, v: int) -> Graph:
        if not self.has_edge(u, v):
            raise GraphError(f"no edge {u}-{v}")
        adj = list(self.adj)
        adj[u] = adj[u] - {v}
        adj[v] = adj[v] - {u}
        return Graph(self.n, tuple(adj), f"{self.name}-e", self.labels)

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Return the graph with vertex ``v`` renamed ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabel needs a permutation of the vertices")
        adj: list[frozenset[int]] = [frozenset()] * self.n
        for v in range(self.n):
            adj[perm[v]] = frozenset(perm[u] for u in self.adj[v])
        return Graph(self.n, tuple(adj), self.name)

    # -- structure ---------------------------------------------------------

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], []
            while stack:
                v = stack.pop()
                comp.append(v)
                for u in self.adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n == 0 or len(self.components()) == 1

    def is_tree(self) -> bool:
        return self.n >= 1 and self.is_connected() and self.num_edges == self.n - 1

    def bipartition(self) -> tuple[list[int], list[int]] | None:
        """Two colour classes, or ``None`` when the graph has an odd cycle."""
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            stack = [s]
            while stack:
                v = stack.pop()
                for u in self.adj[v]:
                    if colour[u] < 0:
                        colour[u] = 1 - colour[v]
                        stack.append(u)
                    elif colour[u] == colour[v]:
                        return None
        return ([v for v in range(self.n) if colour[v] == 0],
                [v for v in range(self.n) if colour[v] == 1])

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    def distances_from(self, s: int) -> list[int]:
        dist = [-1] * self.n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for u in self.adj[v]:
                    if dist[u] < 0:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        return dist

    def diameter(self) -> int:
        if not self.is_connected():
            raise GraphError("diameter of a disconnected graph")
        return max((max(self.distances_from(v)) for v in range(self.n)), default=0)

    def girth(self) -> int | None:
        best = None
        for s in range(self.n):
            dist = [-1] * self.n
            parent = [-1] * self.n
            dist[s] = 0
            queue = [s]
            for v in queue:
                for u in self.adj[v]:
                    if dist[u] < 0:
                        dist[u] = dist[v] + 1
                        parent[u] = v
                        queue.append(u)
                    elif parent[v] != u:
                        cycle = dist[u] + dist[v] + 1
                        if best is None or cycle < best:
                            best = cycle
        return best


def open_neighborhood(g: Graph, v: int) -> int:
    """N(v) as a bitmask."""
    return mask_of(g.adj[g._check(v)])


def closed_neighborhood(g: Graph, v: int) -> int:
    """N[v] as a bitmask."""
    return open_neighborhood(g, v) | (1 << v)


# --------------------------------------------------------------------------
# constructors


def from_edge_list(
    n: int,
    edges: Iterable[tuple[int, int]],
    name: str = "",
    labels: Sequence[str] | None = None,
    family: tuple | None = None,
) -> Graph:
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    if n > MAX_GRAPH_VERTICES:
        raise GraphError(f"{n} vertices exceeds the {MAX_GRAPH_VERTICES}-vertex cap")
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise GraphError(f"self-loop at vertex {u}")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(
        n,
        tuple(frozenset(a) for a in adj),
        name,
        None if labels is None else tuple(labels),
        family,
    )


def empty_graph(n: int = 0) -> Graph:
    """Edgeless graph on ``n`` vertices (``nK1``); ``n=0`` gives the empty graph."""
    return from_edge_list(n, [], f"{n}K1" if n != 1 else "K1")


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return from_edge_list(n, itertools.combinations(range(n), 2), f"K{n}")


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)], f"P{n}",
                          family=("path", (n,)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}",
                          family=("cycle", (n,)))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}: vertices ``0..a-1`` on one side, ``a..a+b-1`` on the other."""
    if a < 1 or b < 1:
        raise GraphError("complete bipartite graph needs a, b >= 1")
    edges = [(i, a + j) for i in range(a) for j in range(b)]
    return from_edge_list(a + b, edges, f"K{a},{b}", family=("kbip", (a, b)))


def star(k: int) -> Graph:
    """K_{1,k} with the centre at vertex 0."""
    if k < 1:
        raise GraphError("star needs k >= 1")
    return from_edge_list(k + 1, [(0, i) for i in range(1, k + 1)], f"K1,{k}",
                          family=("star", (k,)))


def _pair_labels(g: Graph, h: Graph, one_based: bool) -> tuple[str, ...]:
    off = 1 if one_based else 0

    def lab(graph: Graph, v: int) -> str:
        if graph.labels is not None:
            return graph.labels[v]
        return str(v + off)

    return tuple(f"({lab(g, a)},{lab(h, b)})" for a in range(g.n) for b in range(h.n))


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """G □ H with ``(a, b)`` stored at index ``a * |V(H)| + b``."""
    if g.n == 0 or h.n == 0:
        raise GraphError("cartesian product of an empty graph")
    m = h.n
    edges = []
    for a in range(g.n):
        for b in range(m):
            for b2 in h.adj[b]:
                if b < b2:
                    edges.append((a * m + b, a * m + b2))
            for a2 in g.adj[a]:
                if a < a2:
                    edges.append((a * m + b, a2 * m + b))
    return from_edge_list(g.n * m, edges, f"{g.name}□{h.name}",
                          labels=_pair_labels(g, h, one_based=True))


def lexicographic_product(g: Graph, h: Graph) -> Graph:
    """G[H]: ``(a,b) ~ (a',b')`` iff ``aa'`` is an edge, or ``a = a'`` and ``bb'`` is."""
    if g.n == 0 or h.n == 0:
        raise GraphError("lexicographic product of an empty graph")
    m = h.n
    edges = []
    for a in range(g.n):
        for b in range(m):
            for b2 in h.adj[b]:
                if b < b2:
                    edges.append((a * m + b, a * m + b2))
            for a2 in g.adj[a]:
                if a < a2:
                    edges.extend((a * m + b, a2 * m + b2) for b2 in range(m))
    return from_edge_list(g.n * m, edges, f"{g.name}[{h.name}]",
                          labels=_pair_labels(g, h, one_based=True))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    off = g.n
    edges = g.edges() + [(u + off, v + off) for u, v in h.edges()]
    name = f"{g.name}+{h.name}" if g.name or h.name else ""
    return from_edge_list(g.n + h.n, edges, name)


def blow_up(g: Graph, u: int, h: Graph) -> Graph:
    """Replace ``u`` by a copy of ``h`` joined completely to N(u).

    Vertices of ``g`` other than ``u`` keep their relative order and come
    first; the copy of ``h`` occupies the last ``|V(h)|`` indices.
    """
    g._check(u)
    if h.n == 0:
        raise GraphError("blow-up by an empty graph")
    index = {}
    for v in range(g.n):
        if v != u:
            index[v] = len(index)
    base = g.n - 1
    edges = [(index[a], index[b]) for a, b in g.edges() if u not in (a, b)]
    edges += [(base + a, base + b) for a, b in h.edges()]
    edges += [(index[w], base + x) for w in g.adj[u] for x in range(h.n)]
    return from_edge_list(base + h.n, edges, f"{g.name}_{u}[{h.name}]")


def amalgamation(g1: Graph, g2: Graph, iso: Mapping[int, int]) -> Graph:
    """Glue ``g1`` and ``g2`` by identifying ``v`` in ``g1`` with ``iso[v]`` in ``g2``.

    ``iso`` must be injective and adjacency-preserving on the mapped vertices,
    i.e. it is an isomorphism between the shared subgraphs. The result keeps
    ``g1``'s indices and appends the unmapped vertices of ``g2`` in order.
    """
    for v, w in iso.items():
        g1._check(v)
        g2._check(w)
    if len(set(iso.values())) != len(iso):
        raise GraphError("amalgamation map is not injective")
    dom = list(iso)
    for a, b in itertools.combinations(dom, 2):
        if g1.has_edge(a, b) != g2.has_edge(iso[a], iso[b]):
            raise GraphError(f"amalgamation map does not preserve adjacency at {a},{b}")
    inverse = {w: v for v, w in iso.items()}
    index2 = {}
    nxt = g1.n
    for w in range(g2.n):
        if w in inverse:
            index2[w] = inverse[w]
        else:
            index2[w] = nxt
            nxt += 1
    edges = g1.edges() + [(index2[a], index2[b]) for a, b in g2.edges()]
    return from_edge_list(nxt, edges, f"{g1.name}∪{g2.name}")


def grid(m: int, n: int) -> Graph:
    """P_m □ P_n; 1-based coordinate ``(i, j)`` sits at ``(i-1)*n + (j-1)``."""
    if m < 1 or n < 1:
        raise GraphError("grid needs m, n >= 1")
    g = cartesian_product(path(m), path(n))
    return Graph(g.n, g.adj, f"P{m}□P{n}", g.labels, ("grid", (m, n)))


def prism(rows: int, m: int) -> Graph:
    """P_rows □ C_m; 1-based coordinate ``(i, j)`` sits at ``(i-1)*m + (j-1)``."""
    if rows < 1:
        raise GraphError("prism needs rows >= 1")
    g = cartesian_product(path(rows), cycle(m))
    return Graph(g.n, g.adj, f"P{rows}□C{m}", g.labels, ("prism", (rows, m)))


def gnk(n: int, k: int) -> Graph:
    """Incidence graph of ``[n]`` versus its ``k``-subsets.

    Points ``1..n`` are vertices ``0..n-1``; the k-subsets follow in
    lexicographic order.
    """
    if k < 1:
        raise GraphError("gnk needs k >= 1")
    if k > n:
        raise GraphError("gnk needs k <= n")
    subsets = list(itertools.combinations(range(n), k))
    edges = [(i, n + s) for s, sub in enumerate(subsets) for i in sub]
    labels = [str(i + 1) for i in range(n)]
    labels += ["{" + ",".join(str(i + 1) for i in sub) + "}" for sub in subsets]
    return from_edge_list(n + len(subsets), edges, f"G{n},{k}", labels,
                          family=("gnk", (n, k)))


def petersen() -> Graph:
    """Outer 5-cycle ``0..4``, inner pentagram ``5..9``, spokes ``i -- i+5``."""
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return from_edge_list(10, edges, "Petersen", family=("petersen", ()))


def heawood() -> Graph:
    """Incidence graph of the Fano plane, drawn as a 14-cycle with chords ``2i -- 2i+5``."""
    edges = [(i, (i + 1) % 14) for i in range(14)]
    edges += [(i, (i + 5) % 14) for i in range(0, 14, 2)]
    return from_edge_list(14, edges, "Heawood", family=("heawood", ()))


DEFAULT_CACTUS_WEIGHTS: dict[int, float] = {2: 3.0, 3: 2.0, 4: 3.0, 5: 1.0, 6: 1.0}


def random_cactus(
    n: int, seed: int, weights: Mapping[int, float] | None = None
) -> Graph:
    """Random connected cactus on exactly ``n`` vertices, deterministic per seed.

    Blocks are attached one at a time at a uniformly chosen existing vertex.
    ``weights`` maps block size (2 for K2, k for C_k, k <= 6) to a relative
    probability; a drawn block that would overshoot ``n`` is shrunk to fit.
    """
    if n < 1:
        raise GraphError("random_cactus needs n >= 1")
    rng = random.Random(seed)
    weights = dict(DEFAULT_CACTUS_WEIGHTS if weights is None else weights)
    sizes = sorted(weights)
    edges: list[tuple[int, int]] = []
    count = 1
    while count < n:
        size = rng.choices(sizes, weights=[weights[s] for s in sizes])[0]
        size = min(size, n - count + 1)
        anchor = rng.randrange(count)
        if size == 2:
            edges.append((anchor, count))
            count += 1
            continue
        ring = [anchor] + list(range(count, count + size - 1))
        edges += [(ring[i], ring[(i + 1) % size]) for i in range(size)]
        count += size - 1
    return from_edge_list(n, edges, f"cactus:{seed},{n}")


# --------------------------------------------------------------------------
# isomorphism (tests only; brute force)


def are_isomorphic(g: Graph, h: Graph, limit: int = 10) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    if g.n > limit:
        raise GraphError(f"brute-force isomorphism limited to {limit} vertices")
    if sorted(map(len, g.adj)) != sorted(map(len, h.adj)):
        return False
    target = set(h.edges())
    for perm in itertools.permutations(range(g.n)):
        if all(g.degree(v) == h.degree(perm[v]) for v in range(g.n)):
            if all(tuple(sorted((perm[a], perm[b]))) in target for a, b in g.edges()):
                return True
    return False


# --------------------------------------------------------------------------
# text format and family DSL


def parse_graph_text(text: str, name: str = "") -> Graph:
    """Parse the ``n m`` header plus ``u v`` edge-line format."""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(line.split())
    if not rows:
        raise GraphError("missing 'n m' header")
    try:
        header = [int(x) for x in rows[0]]
        body = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"non-integer token: {exc}") from None
    if len(header) != 2:
        raise GraphError("header must be 'n m'")
    n, m = header
    if len(body) != m:
        raise GraphError(f"header announces {m} edges, found {len(body)}")
    edges = []
    for r in body:
        if len(r) != 2:
            raise GraphError(f"edge line must have two entries: {r}")
        u, v = r
        if not (0 <= u < v < n):
            raise GraphError(f"edge line must satisfy 0 <= u < v < n: {u} {v}")
        edges.append((u, v))
    return from_edge_list(n, edges, name)


def format_graph_text(g: Graph) -> str:
    lines = [f"{g.n} {g.num_edges}"] + [f"{u} {v}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


def read_graph(path_: str | Path) -> Graph:
    p = Path(path_)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read {p}: {exc}") from None
    return parse_graph_text(text, p.stem)


def _split_args(body: str) -> list[str]:
    depth, start, out = 0, 0, []
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GraphError(f"unbalanced parentheses in {body!r}")
        elif ch == "," and depth == 0:
            out.append(body[start:i])
            start = i + 1
    if depth:
        raise GraphError(f"unbalanced parentheses in {body!r}")
    out.append(body[start:])
    return [s.strip() for s in out]


def _ints(arg: str, count: int, sep: str = ",") -> list[int]:
    parts = arg.split(sep)
    if len(parts) != count:
        raise GraphError(f"expected {count} integers in {arg!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise GraphError(f"expected integers in {arg!r}") from None


def parse_family(spec: str) -> Graph:
    """Build a graph from a family string such as ``grid:3x4`` or ``lex(cycle:5,path:2)``."""
    spec = spec.strip()
    for op, fn in (("cartesian", cartesian_product), ("lex", lexicographic_product)):
        if spec.startswith(op + "("):
            if not spec.endswith(")"):
                raise GraphError(f"unterminated {op}(...) in {spec!r}")
            args = _split_args(spec[len(op) + 1 : -1])
            if len(args) != 2:
                raise GraphError(f"{op} takes two graph specs")
            return fn(parse_family(args[0]), parse_family(args[1]))
    kind, _, arg = spec.partition(":")
    if kind in ("petersen", "heawood") and not arg:
        return petersen() if kind == "petersen" else heawood()
    if not arg:
        raise GraphError(f"unrecognised graph spec {spec!r}")
    if kind == "path":
        return path(*_ints(arg, 1))
    if kind == "cycle":
        return cycle(*_ints(arg, 1))
    if kind == "star":
        return star(*_ints(arg, 1))
    if kind == "complete":
        return complete(*_ints(arg, 1))
    if kind == "kbip":
        return complete_bipartite(*_ints(arg, 2))
    if kind == "grid":
        return grid(*_ints(arg, 2, sep="x"))
    if kind == "prism":
        return prism(*_ints(arg, 2))
    if kind == "gnk":
        return gnk(*_ints(arg, 2))
    if kind == "cactus":
        seed, n = _ints(arg, 2)
        return random_cactus(n, seed)
    if kind == "file":
        return read_graph(arg)
    if kind == "cactus-file":
        from .blocks import is_cactus

        g = read_graph(arg)
        if not (g.n and g.is_connected() and is_cactus(g)):
            raise GraphError(f"{arg} is not a connected cactus")
        return g
    raise GraphError(f"unrecognised graph spec {spec!r}")
