"""Mod-2 chains and cycles, and the constructive cycle decompositions.

Chains are bit-packed integers over a face list: bit ``i`` set means the
``i``-th face is in the chain, and addition is XOR.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .complexes import (
    DeletedGraph,
    Face,
    Graph,
    JoinComplex,
    Octahedron,
    bits_of,
    deleted_graph,
)
from .gf2 import Gf2Matrix, row_basis


class ChainError(ValueError):
    pass


@dataclass(frozen=True)
class Chain:
    """A set of ``dim``-faces of a join, as a bitvector over ``complex.faces(dim)``."""

    complex: JoinComplex
    dim: int
    bits: int

    def __add__(self, other: "Chain") -> "Chain":
        if (self.complex, self.dim) != (other.complex, other.dim):
            raise ChainError("chains live in different groups")
        return Chain(self.complex, self.dim, self.bits ^ other.bits)

    def faces(self) -> list[Face]:
        fl = _faces(self.complex, self.dim)
        return [fl[i] for i in bits_of(self.bits)]

    def indices(self) -> list[int]:
        return list(bits_of(self.bits))

    @classmethod
    def from_faces(cls, j: JoinComplex, faces: Iterable[Face], dim: int | None = None) -> "Chain":
        faces = list(faces)
        if dim is None:
            dim = j.k
        idx = _face_index(j, dim)
        bits = 0
        for f in faces:
            bits ^= 1 << idx[tuple(f)]
        return cls(j, dim, bits)

    @classmethod
    def of_octahedron(cls, j: JoinComplex, o: Octahedron) -> "Chain":
        return cls.from_faces(j, o.faces())


_FACE_CACHE: dict[tuple, list] = {}


def _faces(j: JoinComplex, dim: int) -> list[Face]:
    key = (j.sizes, dim)
    if key not in _FACE_CACHE:
        _FACE_CACHE[key] = j.top_faces if dim == j.k else j.faces(dim)
    return _FACE_CACHE[key]


_INDEX_CACHE: dict[tuple, dict] = {}


def _face_index(j: JoinComplex, dim: int) -> dict[Face, int]:
    key = (j.sizes, dim)
    if key not in _INDEX_CACHE:
        _INDEX_CACHE[key] = {f: i for i, f in enumerate(_faces(j, dim))}
    return _INDEX_CACHE[key]


def boundary_matrix(j: JoinComplex, dim: int) -> Gf2Matrix:
    """Rows are ``(dim-1)``-faces, columns ``dim``-faces."""
    if not 1 <= dim <= j.k:
        raise ChainError(f"boundary dimension {dim} out of range 1..{j.k}")
    lower = _face_index(j, dim - 1)
    rows = [0] * len(lower)
    for c, f in enumerate(_faces(j, dim)):
        for i, a in enumerate(f):
            if a is None:
                continue
            g = f[:i] + (None,) + f[i + 1:]
            rows[lower[g]] |= 1 << c
    return Gf2Matrix(len(rows), len(_faces(j, dim)), rows)


def chain_boundary(c: Chain) -> int:
    """Bit-packed boundary of ``c`` over the ``(dim-1)``-faces."""
    if c.dim == 0:
        return 0
    lower = _face_index(c.complex, c.dim - 1)
    out = 0
    for f in c.faces():
        for i, a in enumerate(f):
            if a is not None:
                out ^= 1 << lower[f[:i] + (None,) + f[i + 1:]]
    return out


def is_cycle(c: Chain) -> bool:
    return chain_boundary(c) == 0


# -- rook duality ---------------------------------------------------------


@dataclass(frozen=True)
class RookSet:
    """A subset of the grid ``[n_1] x ... x [n_{k+1}]``."""

    sizes: tuple[int, ...]
    points: frozenset

    def __add__(self, other: "RookSet") -> "RookSet":
        if self.sizes != other.sizes:
            raise ChainError("grids differ")
        return RookSet(self.sizes, self.points ^ other.points)

    def is_rook_cycle(self) -> bool:
        lines: Counter = Counter()
        for p in self.points:
            for i in range(len(p)):
                lines[(i, p[:i] + p[i + 1:])] += 1
        return all(c % 2 == 0 for c in lines.values())


def face_to_rook(c: Chain) -> RookSet:
    if c.dim != c.complex.k:
        raise ChainError("duality is defined for top-dimensional chains")
    return RookSet(c.complex.sizes, frozenset(c.faces()))


def rook_to_face(r: RookSet) -> Chain:
    return Chain.from_faces(JoinComplex(r.sizes), r.points)


def parallelepiped(sizes: Sequence[int], a: Sequence[int]) -> Octahedron:
    """``P(a) = {n_1, a_1} x ... x {n_{k+1}, a_{k+1}}`` for ``a_i < n_i``."""
    return Octahedron(tuple((ai, n) for ai, n in zip(a, sizes)))


def rook_decomposition(c: RookSet) -> list[Octahedron]:
    """The parallelepipeds ``P(a)`` over ``a`` in ``c`` with every ``a_i < n_i``.

    Their mod-2 sum is ``c`` whenever ``c`` is a rook cycle.
    """
    if not c.is_rook_cycle():
        raise ChainError("not a rook cycle")
    return [parallelepiped(c.sizes, a) for a in sorted(c.points)
            if all(ai < n for ai, n in zip(a, c.sizes))]


def cycle_space_basis(j: JoinComplex) -> list[Octahedron]:
    """Basis ``{P(a) : a in [n_1 - 1] x ... x [n_{k+1} - 1]}`` of the top cycles, lexicographic."""
    return [parallelepiped(j.sizes, a)
            for a in itertools.product(*(range(1, n) for n in j.sizes))]


def basis_index(j: JoinComplex) -> dict[tuple, int]:
    """Map ``a`` to the position of ``P(a)`` in :func:`cycle_space_basis`."""
    return {a: i for i, a in enumerate(itertools.product(*(range(1, n) for n in j.sizes)))}


def cycle_coordinates(c: Chain) -> int:
    """Coordinates of a top cycle in the ``P(a)`` basis, bit-packed."""
    j = c.complex
    idx = basis_index(j)
    out = 0
    for f in rook_decomposition(face_to_rook(c)):
        out |= 1 << idx[tuple(p[0] for p in f.pairs)]
    return out


def octahedron_coordinates(j: JoinComplex, o: Octahedron) -> int:
    """Basis coordinates of an octahedron: the points of ``o`` strictly inside the grid."""
    idx = basis_index(j)
    out = 0
    for f in itertools.product(*o.pairs):
        if all(a < n for a, n in zip(f, j.sizes)):
            out |= 1 << idx[f]
    return out


# -- K_{n,n}: relations between 4-cycles ----------------------------------


@dataclass(frozen=True)
class Relation:
    """``alpha(a,b;u,v,w)`` or ``beta(a,b,c;u,v)`` on 4-cycles of ``K_{n,n}``.

    alpha: ``{a,b}*{u,v} + {a,b}*{v,w} + {a,b}*{u,w} = 0``;
    beta:  ``{a,b}*{u,v} + {b,c}*{u,v} + {a,c}*{u,v} = 0``.
    """

    kind: str
    left: tuple[int, ...]
    right: tuple[int, ...]

    def octahedra(self) -> list[Octahedron]:
        def s(x, y):
            return tuple(sorted((x, y)))
        if self.kind == "alpha":
            (a, b), (u, v, w) = self.left, self.right
            return [Octahedron((s(a, b), s(u, v))), Octahedron((s(a, b), s(v, w))),
                    Octahedron((s(a, b), s(u, w)))]
        (a, b, c), (u, v) = self.left, self.right
        return [Octahedron((s(a, b), s(u, v))), Octahedron((s(b, c), s(u, v))),
                Octahedron((s(a, c), s(u, v)))]


def formal_sum(items: Iterable[Octahedron]) -> frozenset:
    out: set = set()
    for o in items:
        out ^= {o}
    return frozenset(out)


def relation_reduction_k1(j: JoinComplex, relation: Iterable[Octahedron]) -> list[Relation]:
    """Write a zero-sum combination of 4-cycles as a sum of alpha/beta relations.

    Every 4-cycle ``{a,b}*{u,v}`` with ``1`` not in ``{u,v}`` is first traded
    for ``{a,b}*{1,u} + {a,b}*{1,v}`` via ``alpha(a,b;1,u,v)``; then every
    ``{a,b}*{1,v}`` with ``1`` not in ``{a,b}`` is traded for
    ``{1,a}*{1,v} + {1,b}*{1,v}`` via ``beta(1,a,b;1,v)``.  What remains uses
    only the independent cycles ``{1,b}*{1,v}`` and must vanish.
    """
    if j.k != 1:
        raise ChainError("relation reduction is for K_{n,n} (k = 1)")
    current = set(formal_sum(relation))
    total = Chain(j, 1, 0)
    for o in current:
        total = total + Chain.of_octahedron(j, o)
    if total.bits:
        raise ChainError("the given combination does not sum to zero")
    used: list[Relation] = []

    def apply(rel: Relation) -> None:
        used.append(rel)
        current.symmetric_difference_update(rel.octahedra())

    for o in sorted(current):
        (a, b), (u, v) = o.pairs
        if 1 not in (u, v) and o in current:
            apply(Relation("alpha", (a, b), (1, u, v)))
    for o in sorted(current):
        (a, b), (u, v) = o.pairs
        if 1 not in (a, b) and o in current:
            apply(Relation("beta", (1, a, b), (u, v)))
    if current:
        raise ChainError(f"reduction left independent cycles {sorted(map(str, current))}")
    return used


# -- K~_n -----------------------------------------------------------------


def tilde_basis_edges(n: int) -> list[tuple[int, int]]:
    """``S = {ij' : i, j >= 2, i != j, (i, j) != (3, 2)}``, lexicographic."""
    return [(i, j) for i in range(2, n + 1) for j in range(2, n + 1)
            if i != j and (i, j) != (3, 2)]


def tilde_tree_edges(n: int) -> list[tuple[int, int]]:
    """Complement of ``S``: ``32'`` plus the stars ``1i'`` and ``i1'``."""
    return sorted({(3, 2)} | {(1, i) for i in range(2, n + 1)} | {(i, 1) for i in range(2, n + 1)})


def tilde_basis_cycle(dg: DeletedGraph, i: int, j: int) -> int:
    """``C_{ij'}``: the closed walk ``1 2' 3 1' i j'`` reduced mod 2."""
    return dg.walk("1", "2'", "3", "1'", str(i), f"{j}'")


def h1_basis_tilde(n: int) -> list[int]:
    """Basis of the cycle space of ``K~_n`` as edge chains.

    For ``n >= 4`` these are the cycles ``C_e`` for ``e`` in
    :func:`tilde_basis_edges`; for ``n = 3`` the single 6-cycle ``K~_3``.
    """
    dg = deleted_graph(n)
    if n == 3:
        return [dg.walk("1", "2'", "3", "1'", "2", "3'")]
    return [tilde_basis_cycle(dg, i, j) for i, j in tilde_basis_edges(n)]


def tilde_coordinates(n: int, chain: int) -> int:
    """Coordinates of a cycle of ``K~_n`` in :func:`h1_basis_tilde`.

    A basis cycle ``C_e`` is the only one containing ``e``, so the coordinates
    are just the restriction of the cycle to ``S`` (to ``12'`` when ``n = 3``).
    """
    dg = deleted_graph(n)
    if n == 3:
        return (chain >> dg.edge(1, 2)) & 1
    out = 0
    for b, (i, j) in enumerate(tilde_basis_edges(n)):
        if (chain >> dg.edge(i, j)) & 1:
            out |= 1 << b
    return out


def tilde_dimension(n: int) -> int:
    return n * n - 3 * n + 1


# -- graph cycle decompositions ------------------------------------------


def simple_cycle_decomposition(g: Graph, chain: int) -> list[list[int]]:
    """Split a 1-cycle into edge-disjoint simple cycles (vertex sequences)."""
    if not g.is_cycle(chain):
        raise ChainError("chain is not a cycle")
    remaining = chain
    out = []
    while remaining:
        adj: dict[int, list[int]] = {}
        for e in bits_of(remaining):
            u, v = g.edges[e]
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        start = min(adj)
        path = [start]
        pos = {start: 0}
        prev = None
        cur = start
        while True:
            nxt = min(w for w in adj[cur] if w != prev or adj[cur].count(w) > 1)
            if nxt in pos:
                cyc = path[pos[nxt]:]
                break
            pos[nxt] = len(path)
            path.append(nxt)
            prev, cur = cur, nxt
        out.append(cyc)
        remaining ^= g.walk_chain(cyc)
    return out


def _split_chordless(g: Graph, cyc: list[int]) -> list[list[int]]:
    if len(cyc) <= 3:
        return [cyc]
    pos = {v: i for i, v in enumerate(cyc)}
    m = len(cyc)
    chords = []
    for e, (u, v) in enumerate(g.edges):
        if u in pos and v in pos:
            d = abs(pos[u] - pos[v])
            if d not in (1, m - 1):
                chords.append(e)
    if not chords:
        return [cyc]
    u, v = g.edges[chords[0]]
    i, j = sorted((pos[u], pos[v]))
    first = cyc[i:j + 1]
    second = cyc[j:] + cyc[:i + 1]
    return _split_chordless(g, first) + _split_chordless(g, second)


def chordless_decomposition(g: Graph, chain: int) -> list[list[int]]:
    """Simple chordless cycles summing to ``chain``; splits on the lowest-index chord."""
    out = []
    for cyc in simple_cycle_decomposition(g, chain):
        out += _split_chordless(g, cyc)
    return out


def four_cycle_decomposition(n: int, chain: int) -> list[list[int]]:
    """4-cycles of ``K~_n`` (``n >= 4``) summing to ``chain``.

    Chordless cycles of ``K~_n`` have length 4 or 6.  A chordless 6-cycle
    ``m1 m2' m3 m1' m2 m3'`` is replaced by ``(m1,m2',m3,a') + (m2,m3',m1,a') +
    (m3,m1',m2,a')`` with ``a`` the least label outside ``{m1, m2, m3}``.
    """
    if n < 4:
        raise ChainError("4-cycle decompositions need n >= 4 (K~_3 is a 6-cycle)")
    dg = deleted_graph(n)
    g = dg.graph
    out = []
    for cyc in chordless_decomposition(g, chain):
        if len(cyc) == 4:
            out.append(cyc)
            continue
        if len(cyc) != 6:
            raise ChainError(f"unexpected chordless cycle of length {len(cyc)}")
        r = 0 if cyc[0] < n else 1
        cyc = cyc[r:] + cyc[:r]
        m1, m2, m3 = cyc[0] + 1, cyc[4] + 1, cyc[2] + 1
        assert [cyc[1], cyc[3], cyc[5]] == [dg.vp(m2), dg.vp(m1), dg.vp(m3)]
        a = min(set(range(1, n + 1)) - {m1, m2, m3})
        for x, y, z in ((m1, m2, m3), (m2, m3, m1), (m3, m1, m2)):
            out.append([dg.v(x), dg.vp(y), dg.v(z), dg.vp(a)])
    return out


def fundamental_cycle_basis(g: Graph) -> tuple[list[int], list[int]]:
    """Fundamental cycles of a BFS spanning forest (roots in increasing order).

    Returns ``(non_tree_edges, cycles)``: the cycle of a non-tree edge ``e``
    is the only basis cycle containing ``e``, so restricting a cycle to the
    non-tree edges gives its coordinates.
    """
    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    tree: set[int] = set()
    for root in range(g.n):
        if root in parent:
            continue
        parent[root] = None
        depth[root] = 0
        queue = [root]
        for v in queue:
            for w in g.adjacency[v]:
                if w not in parent:
                    parent[w] = v
                    depth[w] = depth[v] + 1
                    tree.add(g.eid(v, w))
                    queue.append(w)
    non_tree = [e for e in range(len(g.edges)) if e not in tree]
    cycles = []
    for e in non_tree:
        u, v = g.edges[e]
        c = 1 << e
        while u != v:
            if depth[u] < depth[v]:
                u, v = v, u
            c ^= 1 << g.eid(u, parent[u])
            u = parent[u]
        cycles.append(c)
    return non_tree, cycles


def graph_cycle_coordinates(non_tree: Sequence[int], chain: int) -> int:
    out = 0
    for b, e in enumerate(non_tree):
        if (chain >> e) & 1:
            out |= 1 << b
    return out


def cycle_space_dimension(j: JoinComplex) -> int:
    return math.prod(n - 1 for n in j.sizes)


def span_dimension(chains: Iterable[int]) -> int:
    return len(row_basis(chains))
