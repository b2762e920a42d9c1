"""Joins of finite sets, graphs, and their distinguished substructures.

Join coordinates are 0-based positions ``i``; the elements of the ``i``-th
set are the labels ``1..sizes[i]``.  A face is a tuple with one entry per
coordinate, ``None`` where the coordinate is blank.  A vertex of the join is
a pair ``(i, a)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import networkx as nx

Face = tuple  # tuple[int | None, ...]


class ComplexError(ValueError):
    pass


# -- joins ----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Octahedron:
    """The join of one 2-element subset per coordinate."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.pairs) - 1

    def faces(self) -> list[Face]:
        return list(itertools.product(*self.pairs))

    def vertices(self) -> frozenset:
        return frozenset((i, a) for i, p in enumerate(self.pairs) for a in p)

    def __str__(self) -> str:
        return "*".join("{%d,%d}" % p for p in self.pairs)


@dataclass(frozen=True, order=True)
class TripleSubcomplex:
    """The join of one 3-element subset per coordinate (a copy of [3]*...*[3])."""

    triples: tuple[tuple[int, int, int], ...]

    def faces(self) -> list[Face]:
        return list(itertools.product(*self.triples))

    def octahedra(self) -> list[Octahedron]:
        return [Octahedron(p) for p in
                itertools.product(*(list(itertools.combinations(t, 2)) for t in self.triples))]

    def __contains__(self, face: Face) -> bool:
        return len(face) == len(self.triples) and all(a in t for a, t in zip(face, self.triples))

    def __str__(self) -> str:
        return "*".join("{%d,%d,%d}" % t for t in self.triples)


def vertex_disjoint(p: Octahedron, q: Octahedron) -> bool:
    if len(p.pairs) != len(q.pairs):
        raise ComplexError("octahedra from different complexes")
    return all(not set(a) & set(b) for a, b in zip(p.pairs, q.pairs))


def complementary_pairs(x: TripleSubcomplex, e: Face) -> list[tuple[Octahedron, Octahedron]]:
    """The ``2^k`` unordered pairs of octahedra in ``x`` meeting only in ``e``."""
    if e not in x:
        raise ComplexError(f"face {e} is not in {x}")
    others = [tuple(v for v in t if v != a) for t, a in zip(x.triples, e)]
    out = []
    # fix the first coordinate's split to count each unordered pair once
    for choice in itertools.product((0, 1), repeat=len(e) - 1):
        choice = (0, *choice)
        p = tuple(tuple(sorted((a, o[c]))) for a, o, c in zip(e, others, choice))
        q = tuple(tuple(sorted((a, o[1 - c]))) for a, o, c in zip(e, others, choice))
        out.append((Octahedron(p), Octahedron(q)))
    return out


class JoinComplex:
    """The join ``[n_1] * ... * [n_{k+1}]`` (for ``k = 1`` the graph ``K_{n1,n2}``)."""

    def __init__(self, sizes: Sequence[int]):
        sizes = tuple(int(n) for n in sizes)
        if len(sizes) < 1:
            raise ComplexError("a join needs at least one factor")
        if any(n < 3 for n in sizes):
            raise ComplexError(f"every join factor must have at least 3 elements, got {sizes}")
        self.sizes = sizes

    @property
    def k(self) -> int:
        return len(self.sizes) - 1

    def __repr__(self) -> str:
        return f"JoinComplex({list(self.sizes)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, JoinComplex) and self.sizes == other.sizes

    def __hash__(self) -> int:
        return hash(self.sizes)

    @property
    def descriptor(self) -> str:
        return "join:" + ",".join(map(str, self.sizes))

    # faces

    @cached_property
    def top_faces(self) -> list[Face]:
        return list(itertools.product(*(range(1, n + 1) for n in self.sizes)))

    @cached_property
    def top_index(self) -> dict[Face, int]:
        return {f: i for i, f in enumerate(self.top_faces)}

    def faces(self, dim: int) -> list[Face]:
        """All ``dim``-faces, lexicographic with a blank sorting before any label."""
        if not 0 <= dim <= self.k:
            raise ComplexError(f"dimension {dim} out of range 0..{self.k}")
        opts = [(None, *range(1, n + 1)) for n in self.sizes]
        return [f for f in itertools.product(*opts)
                if sum(a is not None for a in f) == dim + 1]

    @staticmethod
    def face_vertices(face: Face) -> frozenset:
        return frozenset((i, a) for i, a in enumerate(face) if a is not None)

    @cached_property
    def vertices(self) -> list[tuple[int, int]]:
        return [(i, a) for i, n in enumerate(self.sizes) for a in range(1, n + 1)]

    # substructures

    @cached_property
    def octahedra(self) -> list[Octahedron]:
        return [Octahedron(p) for p in itertools.product(
            *(list(itertools.combinations(range(1, n + 1), 2)) for n in self.sizes))]

    @cached_property
    def octahedron_index(self) -> dict[Octahedron, int]:
        return {o: i for i, o in enumerate(self.octahedra)}

    @cached_property
    def triple_subcomplexes(self) -> list[TripleSubcomplex]:
        return [TripleSubcomplex(t) for t in itertools.product(
            *(list(itertools.combinations(range(1, n + 1), 3)) for n in self.sizes))]

    def octahedron_count(self) -> int:
        return math.prod(math.comb(n, 2) for n in self.sizes)

    def standard_triple(self) -> TripleSubcomplex:
        return TripleSubcomplex(tuple((1, 2, 3) for _ in self.sizes))


def octahedra(j: JoinComplex) -> list[Octahedron]:
    return j.octahedra


# -- K_n structures -------------------------------------------------------


def kn_structures(n: int) -> tuple[list[tuple], list[tuple], list[tuple]]:
    """3-, 4- and 5-element subsets of ``[n]`` in lexicographic order."""
    ground = range(1, n + 1)
    return tuple(list(itertools.combinations(ground, r)) for r in (3, 4, 5))


def kn_complementary_pairs(f: Iterable[int], v: int) -> list[tuple[tuple, tuple]]:
    """The 3 unordered pairs of 3-subsets ``P, Q`` of ``f`` with ``P & Q == {v}``."""
    f = tuple(sorted(f))
    if v not in f:
        raise ComplexError(f"{v} is not in {f}")
    rest = [x for x in f if x != v]
    out = []
    first = rest[0]
    for mate in rest[1:]:
        p = tuple(sorted((v, first, mate)))
        q = tuple(sorted((v, *(x for x in rest[1:] if x != mate))))
        out.append((p, q))
    return out


# -- graphs ---------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """A simple graph on vertices ``0..n-1``; edges are sorted pairs, sorted."""

    n: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            if u == v:
                raise ComplexError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ComplexError(f"edge ({u},{v}) outside vertex range")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ComplexError("multiple edges are not allowed")
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        if self.labels is not None and len(self.labels) != self.n:
            raise ComplexError("label count does not match vertex count")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n: int | None = None,
                   labels: Sequence[str] | None = None) -> "Graph":
        edges = [tuple(e) for e in edges]
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        return cls(n, tuple(edges), tuple(labels) if labels else None)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    def eid(self, u: int, v: int) -> int:
        return self.edge_index[(min(u, v), max(u, v))]

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for a in adj:
            a.sort()
        return adj

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def edge_subgraph(self, eids: Iterable[int]) -> "Graph":
        """Subgraph on the given edges, keeping vertex numbering."""
        return Graph(self.n, tuple(self.edges[i] for i in eids), self.labels)

    def chain_vertices(self, chain: int) -> set[int]:
        out = set()
        while chain:
            low = chain & -chain
            u, v = self.edges[low.bit_length() - 1]
            out.update((u, v))
            chain ^= low
        return out

    def chain_edges(self, chain: int) -> list[tuple[int, int]]:
        return [self.edges[i] for i in bits_of(chain)]

    def walk_chain(self, walk: Sequence[int]) -> int:
        """Mod-2 edge set of the closed walk ``walk[0] .. walk[-1] walk[0]``."""
        c = 0
        for a, b in zip(walk, (*walk[1:], walk[0])):
            c ^= 1 << self.eid(a, b)
        return c

    def is_cycle(self, chain: int) -> bool:
        deg = [0] * self.n
        for u, v in self.chain_edges(chain):
            deg[u] ^= 1
            deg[v] ^= 1
        return not any(deg)


def bits_of(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(itertools.combinations(range(n), 2)),
                 tuple(str(i + 1) for i in range(n)))


def complete_bipartite(m: int, n: int) -> Graph:
    edges = tuple((i, m + j) for i in range(m) for j in range(n))
    labels = tuple([str(i + 1) for i in range(m)] + [f"{j + 1}'" for j in range(n)])
    return Graph(m + n, edges, labels)


def join_graph(j: JoinComplex) -> Graph:
    """The 1-dimensional join ``[n1] * [n2]`` as a bipartite graph."""
    if j.k != 1:
        raise ComplexError("only 1-dimensional joins are graphs")
    return complete_bipartite(*j.sizes)


def cycle_graph(n: int) -> Graph:
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def wheel_graph(n: int) -> Graph:
    """Hub ``0`` joined to every vertex of the cycle ``1..n-1`` (``n`` vertices total)."""
    rim = n - 1
    if rim < 3:
        raise ComplexError("a wheel needs a rim of at least 3 vertices")
    edges = [(0, i) for i in range(1, n)] + [(i, i % rim + 1) for i in range(1, n)]
    return Graph(n, tuple(edges))


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges += [(u + offset, v + offset) for u, v in g.edges]
        offset += g.n
    return Graph(offset, tuple(edges))


def subdivide(g: Graph, edge: tuple[int, int], times: int = 1) -> Graph:
    """Replace ``edge`` by a path through ``times`` new vertices."""
    u, v = sorted(edge)
    if (u, v) not in g.edge_index:
        raise ComplexError(f"no edge {edge}")
    edges = [e for e in g.edges if e != (u, v)]
    path = [u] + list(range(g.n, g.n + times)) + [v]
    edges += list(zip(path, path[1:]))
    return Graph(g.n + times, tuple(edges))


@dataclass(frozen=True)
class DeletedGraph:
    """``K~_n``: ``K_{n,n}`` minus the diagonal edges ``jj'``, with the part swap ``t``.

    Vertex ``j`` (1-based) is ``j - 1``; vertex ``j'`` is ``n + j - 1``.
    """

    n: int
    graph: Graph

    def v(self, j: int) -> int:
        return j - 1

    def vp(self, j: int) -> int:
        return self.n + j - 1

    def t_vertex(self, x: int) -> int:
        return x + self.n if x < self.n else x - self.n

    def edge(self, i: int, j: int) -> int:
        """Index of the edge ``i j'``."""
        return self.graph.eid(self.v(i), self.vp(j))

    def edge_ends(self, e: int) -> tuple[int, int]:
        """``(i, j)`` for the edge ``i j'``."""
        u, w = self.graph.edges[e]
        return u + 1, w - self.n + 1

    def t_edge(self, e: int) -> int:
        i, j = self.edge_ends(e)
        return self.edge(j, i)

    def t_chain(self, chain: int) -> int:
        out = 0
        for e in bits_of(chain):
            out |= 1 << self.t_edge(e)
        return out

    def walk(self, *labels: str) -> int:
        """Chain of a closed walk given by labels like ``"1", "2'"``."""
        verts = [self.vp(int(s[:-1])) if s.endswith("'") else self.v(int(s)) for s in labels]
        return self.graph.walk_chain(verts)

    def four_cycle(self, a: Sequence[int], d: Sequence[int]) -> int:
        """The 4-cycle ``a0 d0' a1 d1'`` on unprimed ``a`` and primed ``d``."""
        (a0, a1), (d0, d1) = a, d
        return (1 << self.edge(a0, d0)) ^ (1 << self.edge(a1, d0)) ^ \
            (1 << self.edge(a1, d1)) ^ (1 << self.edge(a0, d1))


def deleted_graph(n: int) -> DeletedGraph:
    if n < 3:
        raise ComplexError("K~_n needs n >= 3")
    edges = tuple((i, n + j) for i in range(n) for j in range(n) if i != j)
    labels = tuple([str(i + 1) for i in range(n)] + [f"{j + 1}'" for j in range(n)])
    return DeletedGraph(n, Graph(2 * n, edges, labels))


# -- homeomorphism classification ----------------------------------------

K5 = "K5"
K33 = "K33"
DISJOINT_CYCLE_PAIR = "DisjointCyclePair"
WHEEL = "Wheel"
OTHER = "Other"


def suppress_degree_two(g: Graph) -> nx.MultiGraph:
    """Multigraph with every maximal path through degree-2 vertices contracted."""
    m = nx.MultiGraph()
    m.add_edges_from(g.edges)
    changed = True
    while changed:
        changed = False
        for v in sorted(m.nodes):
            if m.degree(v) != 2 or m.number_of_edges(v, v):
                continue
            nbrs = [w for _, w in m.edges(v)]
            m.remove_node(v)
            m.add_edge(nbrs[0], nbrs[1])
            changed = True
    return m


def homeomorphism_type(g: Graph) -> str:
    m = suppress_degree_two(g)
    m.remove_nodes_from([v for v in list(m.nodes) if m.degree(v) == 0])
    if m.number_of_nodes() == 0:
        return OTHER
    if any(d == 1 for _, d in m.degree()):
        return OTHER
    comps = list(nx.connected_components(m))
    if len(comps) == 2 and all(len(c) == 1 and m.number_of_edges(v := next(iter(c)), v) == 1
                               and m.degree(v) == 2 for c in comps):
        return DISJOINT_CYCLE_PAIR
    simple = nx.Graph(m)
    if simple.number_of_edges() != m.number_of_edges() or nx.number_of_selfloops(m):
        return OTHER
    nv = simple.number_of_nodes()
    if nv == 5 and nx.is_isomorphic(simple, nx.complete_graph(5)):
        return K5
    if nv == 6 and nx.is_isomorphic(simple, nx.complete_bipartite_graph(3, 3)):
        return K33
    if nv >= 4 and nx.is_isomorphic(simple, nx.wheel_graph(nv)):
        return WHEEL
    return OTHER


# -- Kuratowski subdivisions ---------------------------------------------


@dataclass(frozen=True)
class KuratowskiSubgraph:
    """A subdivision of K5 or K33 inside a host graph.

    ``branch`` lists the branch vertices (for K33, the first three form one
    side); ``paths`` maps each branch-vertex pair to its path in the host.
    """

    kind: str
    branch: tuple[int, ...]
    paths: tuple[tuple[tuple[int, int], tuple[int, ...]], ...]
    edges: frozenset[tuple[int, int]]

    def path(self, u: int, v: int) -> tuple[int, ...]:
        for (a, b), p in self.paths:
            if (a, b) == (u, v):
                return p
            if (a, b) == (v, u):
                return p[::-1]
        raise KeyError((u, v))

    def branch_pairs(self) -> list[tuple[int, int]]:
        return [pair for pair, _ in self.paths]

    def cycle_chain(self, host: Graph, cyc: Sequence[int]) -> int:
        """Host chain of the cycle through branch vertices ``cyc`` (in order)."""
        c = 0
        for a, b in zip(cyc, (*cyc[1:], cyc[0])):
            p = self.path(a, b)
            for x, y in zip(p, p[1:]):
                c ^= 1 << host.eid(x, y)
        return c

    def as_graph(self, host: Graph) -> Graph:
        return Graph(host.n, tuple(sorted(self.edges)), host.labels)


@dataclass
class KuratowskiSearch:
    subgraphs: list[KuratowskiSubgraph]
    truncated: bool


DEFAULT_KURATOWSKI_LIMIT = 10**6


def _paths(adj: list[list[int]], src: int, dst: int, blocked: set[int]) -> Iterator[tuple[int, ...]]:
    stack = [(src, (src,))]
    while stack:
        v, path = stack.pop()
        for w in reversed(adj[v]):
            if w == dst:
                yield path + (w,)
            elif w not in blocked and w not in path:
                stack.append((w, path + (w,)))


def kuratowski_subgraphs(g: Graph, limit: int = DEFAULT_KURATOWSKI_LIMIT,
                         kinds: Sequence[str] = (K5, K33)) -> KuratowskiSearch:
    """Enumerate subgraphs of ``g`` homeomorphic to K5 or K33 by brute force.

    Branch vertices are chosen exhaustively and the branch paths are found by
    backtracking over internally disjoint paths.  Each unit of work (branch
    choice or completed path system) counts against ``limit``; on overrun the
    search stops and reports ``truncated=True``.
    """
    adj = g.adjacency
    found: dict[frozenset, KuratowskiSubgraph] = {}
    work = 0

    def systems(kind, branch, pairs):
        bset = set(branch)
        chosen: list[tuple[int, ...]] = []
        used: set[int] = set()

        def rec(i):
            nonlocal work
            if work > limit:
                return
            if i == len(pairs):
                work += 1
                edges = frozenset((min(a, b), max(a, b))
                                  for p in chosen for a, b in zip(p, p[1:]))
                if edges not in found:
                    found[edges] = KuratowskiSubgraph(
                        kind, branch, tuple(zip(pairs, chosen)), edges)
                return
            u, v = pairs[i]
            for p in _paths(adj, u, v, bset | used):
                inner = p[1:-1]
                chosen.append(p)
                used.update(inner)
                rec(i + 1)
                used.difference_update(inner)
                chosen.pop()
                if work > limit:
                    return

        rec(0)

    if K5 in kinds:
        cand = [v for v in range(g.n) if g.degree(v) >= 4]
        for branch in itertools.combinations(cand, 5):
            work += 1
            if work > limit:
                break
            systems(K5, branch, list(itertools.combinations(branch, 2)))
    if K33 in kinds and work <= limit:
        cand = [v for v in range(g.n) if g.degree(v) >= 3]
        for six in itertools.combinations(cand, 6):
            for rest in itertools.combinations(six[1:], 2):
                side_a = (six[0], *rest)
                side_b = tuple(v for v in six if v not in side_a)
                work += 1
                if work > limit:
                    break
                systems(K33, side_a + side_b,
                        [(a, b) for a in side_a for b in side_b])
            if work > limit:
                break
    subs = sorted(found.values(), key=lambda s: (s.kind, sorted(s.edges)))
    return KuratowskiSearch(subs, work > limit)
