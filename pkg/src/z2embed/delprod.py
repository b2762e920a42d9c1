"""Combinatorial deleted products and their symmetric top-dimensional cycles.

A cell of the deleted product is an ordered pair ``(sigma, tau)`` of
vertex-disjoint top faces.  Chains over cells are bit-packed integers; the
swap ``(sigma, tau) -> (tau, sigma)`` has no fixed cells, so symmetric chains
are sums of swap orbits.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from . import chains
from .complexes import (
    DISJOINT_CYCLE_PAIR,
    K5,
    K33,
    ComplexError,
    Graph,
    JoinComplex,
    Octahedron,
    TripleSubcomplex,
    bits_of,
    complementary_pairs,
    deleted_graph,
    homeomorphism_type,
    kuratowski_subgraphs,
    vertex_disjoint,
)
from .gf2 import Gf2Matrix, Gf2Vector, rank, row_basis, solve_affine


class DecompositionError(ValueError):
    pass


class DeletedProduct:
    """The cells ``{(sigma, tau) : sigma and tau vertex-disjoint}`` of a pure complex.

    ``faces`` are the top faces as tuples of vertices; cells are ordered
    lexicographically by ``(index of sigma, index of tau)``.
    """

    def __init__(self, faces: Sequence[tuple], source=None):
        self.faces = list(faces)
        self.source = source
        self.face_index = {f: i for i, f in enumerate(self.faces)}
        sets = [frozenset(f) for f in self.faces]
        cells = []
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and not a & b:
                    cells.append((i, j))
        self.cells = cells
        self.cell_index = {c: n for n, c in enumerate(cells)}
        self.swap = [self.cell_index[(j, i)] for i, j in cells]
        self.orbits = [(c, s) for c, s in enumerate(self.swap) if c < s]

    def __repr__(self) -> str:
        return f"DeletedProduct({self.source!r}, cells={len(self.cells)})"

    @property
    def ncells(self) -> int:
        return len(self.cells)

    @cached_property
    def _boundary_cols(self) -> list[int]:
        """Boundary of each cell over the rows ``(facet, face)`` and ``(face, facet)``."""
        rows: dict = {}
        cols = []
        for i, j in self.cells:
            b = 0
            fi, fj = self.faces[i], self.faces[j]
            for d in range(len(fi)):
                key = ("L", fi[:d] + fi[d + 1:], j)
                b ^= 1 << rows.setdefault(key, len(rows))
            for d in range(len(fj)):
                key = ("R", i, fj[:d] + fj[d + 1:])
                b ^= 1 << rows.setdefault(key, len(rows))
            cols.append(b)
        self._nrows = len(rows)
        return cols

    def boundary(self, bits: int) -> int:
        cols = self._boundary_cols
        out = 0
        for c in bits_of(bits):
            out ^= cols[c]
        return out

    def boundary_matrix(self) -> Gf2Matrix:
        cols = self._boundary_cols
        return Gf2Matrix.from_columns(cols, self._nrows)

    def swap_bits(self, bits: int) -> int:
        out = 0
        for c in bits_of(bits):
            out |= 1 << self.swap[c]
        return out

    @cached_property
    def _orbit_cols(self) -> list[int]:
        cols = self._boundary_cols
        return [cols[c] ^ cols[s] for c, s in self.orbits]

    def orbit_bits(self, orbit_set: int) -> int:
        out = 0
        for o in bits_of(orbit_set):
            c, s = self.orbits[o]
            out |= (1 << c) | (1 << s)
        return out

    def bits_to_orbits(self, bits: int) -> int:
        pos = {c: o for o, (c, _) in enumerate(self.orbits)}
        out = 0
        for c in bits_of(bits):
            if c in pos:
                out |= 1 << pos[c]
        return out

    def full_cycle_dimension(self) -> int:
        return self.ncells - rank(self._boundary_cols)

    def symmetric_cycle_dimension(self) -> int:
        return len(self.orbits) - rank(self._orbit_cols)

    def symmetric_cycle_basis(self, among: Sequence[int] | None = None) -> list[int]:
        """Basis of symmetric cycles supported on the orbits ``among`` (default all), as cell bits."""
        if among is None:
            among = range(len(self.orbits))
        among = list(among)
        kern = _kernel_of_columns([self._orbit_cols[o] for o in among])
        out = []
        for vec in kern:
            orb = 0
            for t in bits_of(vec):
                orb |= 1 << among[t]
            out.append(self.orbit_bits(orb))
        return out

    def cycle_basis(self) -> list[int]:
        return _kernel_of_columns(self._boundary_cols)

    def face_pairs(self, bits: int) -> set[tuple]:
        """Cells of a chain as ``(face, face)`` pairs of vertex tuples."""
        return {(self.faces[self.cells[c][0]], self.faces[self.cells[c][1]]) for c in bits_of(bits)}

    def chain_from_pairs(self, pairs: Iterable[tuple[int, int]]) -> int:
        out = 0
        for p in pairs:
            out ^= 1 << self.cell_index[p]
        return out


def _kernel_of_columns(cols: Sequence[int]) -> list[int]:
    """Kernel of the matrix with the given bit-packed columns; vectors bit-packed over columns."""
    basis: dict[int, tuple[int, int]] = {}
    kern = []
    for t, v in enumerate(cols):
        combo = 1 << t
        while v:
            p = (v & -v).bit_length() - 1
            hit = basis.get(p)
            if hit is None:
                basis[p] = (v, combo)
                break
            v ^= hit[0]
            combo ^= hit[1]
        else:
            kern.append(combo)
    return kern


def join_faces(j: JoinComplex) -> list[tuple]:
    return [tuple((i, a) for i, a in enumerate(f)) for f in j.top_faces]


@lru_cache(maxsize=None)
def join_deleted_product(sizes: tuple[int, ...]) -> DeletedProduct:
    j = JoinComplex(sizes)
    return DeletedProduct(join_faces(j), j)


@lru_cache(maxsize=64)
def graph_deleted_product(g: Graph) -> DeletedProduct:
    return DeletedProduct(list(g.edges), g)


def deleted_product(obj) -> DeletedProduct:
    if isinstance(obj, JoinComplex):
        return join_deleted_product(obj.sizes)
    if isinstance(obj, Graph):
        return graph_deleted_product(obj)
    raise TypeError(f"no deleted product for {type(obj).__name__}")


def deleted_product_cells(j: JoinComplex) -> list[tuple[tuple, tuple]]:
    """All ordered pairs of vertex-disjoint top faces, as face-label tuples."""
    dp = deleted_product(j)
    return [(j.top_faces[a], j.top_faces[b]) for a, b in dp.cells]


# -- symmetric cycles -----------------------------------------------------


@dataclass(frozen=True)
class SymCycle:
    """A chain of cells of a deleted product (intended swap-invariant)."""

    dp: DeletedProduct
    bits: int

    def __add__(self, other: "SymCycle") -> "SymCycle":
        if self.dp is not other.dp:
            raise DecompositionError("chains live in different deleted products")
        return SymCycle(self.dp, self.bits ^ other.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def unordered_pairs(self) -> list[tuple[int, int]]:
        """``C/s``: one ``(sigma, tau)`` face-index pair per swap orbit."""
        return [self.dp.cells[c] for c in bits_of(self.bits) if c < self.dp.swap[c]]

    def to_json(self) -> list[list[int]]:
        return sorted([list(self.dp.cells[c]) for c in bits_of(self.bits)])


def is_symmetric(c: SymCycle) -> bool:
    return c.dp.swap_bits(c.bits) == c.bits


def is_cycle(c: SymCycle) -> bool:
    return c.dp.boundary(c.bits) == 0


def is_symmetric_cycle(c: SymCycle) -> bool:
    return is_symmetric(c) and is_cycle(c)


def _join_cell(j: JoinComplex, s: tuple, t: tuple) -> tuple[int, int]:
    return j.top_index[s], j.top_index[t]


def symmetrized_torus(j: JoinComplex, p: Octahedron, q: Octahedron) -> SymCycle:
    if not vertex_disjoint(p, q):
        raise DecompositionError(f"octahedra {p} and {q} share a vertex")
    dp = deleted_product(j)
    bits = 0
    for s in p.faces():
        for t in q.faces():
            a, b = _join_cell(j, s, t)
            bits ^= (1 << dp.cell_index[(a, b)]) ^ (1 << dp.cell_index[(b, a)])
    return SymCycle(dp, bits)


def triple_deleted_product(j: JoinComplex, x: TripleSubcomplex) -> SymCycle:
    dp = deleted_product(j)
    faces = x.faces()
    bits = 0
    for s in faces:
        for t in faces:
            if all(a != b for a, b in zip(s, t)):
                bits |= 1 << dp.cell_index[_join_cell(j, s, t)]
    return SymCycle(dp, bits)


def cycle_space_dims(j: JoinComplex) -> tuple[int, int]:
    """``(full, symmetric)`` dimensions of the top cycle space of the deleted product."""
    dp = deleted_product(j)
    return dp.full_cycle_dimension(), dp.symmetric_cycle_dimension()


def random_symmetric_cycle(dp: DeletedProduct, rng: np.random.Generator,
                           basis: Sequence[int] | None = None) -> SymCycle:
    if basis is None:
        basis = dp.symmetric_cycle_basis()
    bits = 0
    for b, pick in zip(basis, rng.integers(0, 2, len(basis))):
        if pick:
            bits ^= b
    return SymCycle(dp, bits)


# -- tensor coordinates ---------------------------------------------------


@dataclass(frozen=True)
class TensorElement:
    """An element of ``H_1(K~_{n_1}) (x) ... (x) H_1(K~_{n_{k+1}})``.

    ``bits`` is over the product of the :func:`chains.h1_basis_tilde` bases,
    mixed radix with the first factor most significant.
    """

    sizes: tuple[int, ...]
    bits: int

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(chains.tilde_dimension(n) for n in self.sizes)

    def to_array(self) -> np.ndarray:
        d = math.prod(self.dims)
        flat = np.array([(self.bits >> i) & 1 for i in range(d)], dtype=np.uint8)
        return flat.reshape(self.dims)

    @classmethod
    def from_array(cls, sizes: Sequence[int], arr: np.ndarray) -> "TensorElement":
        bits = 0
        for i in np.flatnonzero(arr.reshape(-1) & 1):
            bits |= 1 << int(i)
        return cls(tuple(sizes), bits)


@lru_cache(maxsize=None)
def _tilde_tables(n: int):
    dg = deleted_graph(n)
    if n == 3:
        sel = [dg.edge(1, 2)]
    else:
        sel = [dg.edge(i, j) for i, j in chains.tilde_basis_edges(n)]
    pos = {e: b for b, e in enumerate(sel)}
    return dg, pos, chains.h1_basis_tilde(n)


def tensor_iso(c: SymCycle) -> TensorElement:
    """Coordinates of a top cycle of a join's deleted product in the tensor basis.

    The cell ``(a, b)`` goes to the product of edges ``a_i b_i'`` of the
    graphs ``K~_{n_i}``; a product cycle is read off by restricting to the
    product of the basis edge sets.
    """
    j = c.dp.source
    if not isinstance(j, JoinComplex):
        raise DecompositionError("tensor coordinates exist for joins only")
    if not is_cycle(c):
        raise DecompositionError("chain is not a cycle")
    tables = [_tilde_tables(n) for n in j.sizes]
    dims = [chains.tilde_dimension(n) for n in j.sizes]
    bits = 0
    for ci in bits_of(c.bits):
        a, b = c.dp.cells[ci]
        fa, fb = j.top_faces[a], j.top_faces[b]
        idx = 0
        for (dg, pos, _), d, x, y in zip(tables, dims, fa, fb):
            p = pos.get(dg.edge(x, y))
            if p is None:
                break
            idx = idx * d + p
        else:
            bits ^= 1 << idx
    return TensorElement(j.sizes, bits)


def tensor_inverse(j: JoinComplex, x: TensorElement) -> SymCycle:
    """The deleted-product cycle whose tensor coordinates are ``x``."""
    dp = deleted_product(j)
    tables = [_tilde_tables(n) for n in j.sizes]
    dims = [chains.tilde_dimension(n) for n in j.sizes]
    edge_lists = [[list(bits_of(cyc)) for cyc in t[2]] for t in tables]
    counts: Counter = Counter()
    for flat in bits_of(x.bits):
        idx = []
        for d in reversed(dims):
            idx.append(flat % d)
            flat //= d
        idx.reverse()
        for edges in itertools.product(*(el[b] for el, b in zip(edge_lists, idx))):
            counts[edges] ^= 1
    bits = 0
    for edges, odd in counts.items():
        if not odd:
            continue
        fa, fb = [], []
        for (dg, _, _), e in zip(tables, edges):
            u, w = dg.edge_ends(e)
            fa.append(u)
            fb.append(w)
        bits |= 1 << dp.cell_index[(j.top_index[tuple(fa)], j.top_index[tuple(fb)])]
    return SymCycle(dp, bits)


@lru_cache(maxsize=None)
def t_matrix(n: int) -> Gf2Matrix:
    """Matrix of the part swap ``t`` on the cycle space of ``K~_n`` (columns = images)."""
    dg, pos, basis = _tilde_tables(n)
    cols = [chains.tilde_coordinates(n, dg.t_chain(c)) for c in basis]
    return Gf2Matrix.from_columns(cols, len(basis))


def kron(a: Gf2Matrix, b: Gf2Matrix) -> Gf2Matrix:
    rows = []
    for ra in a.data:
        js = list(bits_of(ra))
        for rb in b.data:
            v = 0
            for j1 in js:
                v |= rb << (j1 * b.cols)
            rows.append(v)
    return Gf2Matrix(a.rows * b.rows, a.cols * b.cols, rows)


def tensor_swap_matrix(sizes: Sequence[int]) -> Gf2Matrix:
    """``T = t_1 (x) ... (x) t_{k+1}`` in the product basis."""
    m = t_matrix(sizes[0])
    for n in sizes[1:]:
        m = kron(m, t_matrix(n))
    return m


def tilde3_tensor(sizes: Sequence[int]) -> TensorElement:
    """``K~_3 (x) ... (x) K~_3`` (each factor the 6-cycle on labels 1, 2, 3)."""
    coords = []
    for n in sizes:
        dg = deleted_graph(n)
        coords.append(chains.tilde_coordinates(n, dg.walk("1", "2'", "3", "1'", "2", "3'")))
    dims = [chains.tilde_dimension(n) for n in sizes]
    bits = 0
    for idx in itertools.product(*(list(bits_of(c)) for c in coords)):
        flat = 0
        for i, d in zip(idx, dims):
            flat = flat * d + i
        bits |= 1 << flat
    return TensorElement(tuple(sizes), bits)


@dataclass(frozen=True)
class KerImReport:
    ker_dim: int
    im_dim: int
    tilde3_in_im: bool

    @property
    def ok(self) -> bool:
        return self.ker_dim == self.im_dim + 1 and not self.tilde3_in_im


def ker_im_check(sizes: Sequence[int]) -> KerImReport:
    """Kernel and image of ``I + T`` on the tensor product, and whether ``K~_3^(x)`` is in the image."""
    sizes = tuple(sizes)
    if any(n < 3 for n in sizes):
        raise ComplexError("sizes must be >= 3")
    t = tensor_swap_matrix(sizes)
    n = t.rows
    m = t + Gf2Matrix.identity(n)
    r = rank(m)
    img = row_basis(m.T.data)  # rows of M^T are the columns of M
    y0 = tilde3_tensor(sizes).bits
    in_im = len(row_basis([*img.values(), y0])) == len(img)
    return KerImReport(n - r, r, in_im)


# -- generator decomposition ----------------------------------------------


@dataclass
class GeneratorDecomposition:
    tori: list[tuple[Octahedron, Octahedron]]
    triples: list[TripleSubcomplex]

    def total(self, j: JoinComplex) -> SymCycle:
        dp = deleted_product(j)
        out = SymCycle(dp, 0)
        for p, q in self.tori:
            out = out + symmetrized_torus(j, p, q)
        for x in self.triples:
            out = out + triple_deleted_product(j, x)
        return out


@lru_cache(maxsize=None)
def _adapted_basis(n: int):
    """Cycle-space basis of ``K~_n`` permuted by ``t`` with one fixed vector.

    Returns ``(vectors, partner)``: vectors as coordinate bit masks, with
    ``vectors[0] = K~_3`` fixed and ``partner[i]`` the index of ``t vectors[i]``.
    Pairs are ``C_{ij'}`` and ``t C_{ij'}`` for ``i > j >= 2``, ``(i, j) != (3, 2)``.
    """
    dg, pos, basis = _tilde_tables(n)
    fixed = chains.tilde_coordinates(n, dg.walk("1", "2'", "3", "1'", "2", "3'"))
    vecs = [fixed]
    partner = [0]
    if n >= 4:
        edges = chains.tilde_basis_edges(n)
        for b, (i, j) in enumerate(edges):
            if i > j:
                u = 1 << b
                tu = chains.tilde_coordinates(n, dg.t_chain(basis[b]))
                partner += [len(vecs) + 1, len(vecs)]
                vecs += [u, tu]
    if len(row_basis(vecs)) != len(basis):
        raise DecompositionError(f"adapted vectors do not form a basis for n={n}")
    return vecs, partner


def _coords_to_chain(n: int, coords: int) -> int:
    _, _, basis = _tilde_tables(n)
    out = 0
    for b in bits_of(coords):
        out ^= basis[b]
    return out


def _four_cycle_split(n: int, chain: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """4-cycles summing to ``chain`` as ``(unprimed pair, primed pair)`` label sets."""
    out = []
    for cyc in chains.four_cycle_decomposition(n, chain):
        a = tuple(sorted(v + 1 for v in cyc if v < n))
        d = tuple(sorted(v - n + 1 for v in cyc if v >= n))
        out.append((a, d))
    return out


def generator_decomposition(c: SymCycle) -> GeneratorDecomposition:
    """Write a symmetric cycle as a sum of symmetrized tori and triple deleted products.

    Works in tensor coordinates: in the ``t``-adapted product basis the swap
    permutes basis tensors with the single fixed tensor ``K~_3^(x)``.  That
    component becomes the standard triple subcomplex; every other orbit
    ``y + T y`` is expanded through 4-cycle decompositions of its factors into
    tori.  Sizes mixing 3 with larger factors fall back to solving over the
    generator set directly.
    """
    j = c.dp.source
    if not isinstance(j, JoinComplex):
        raise DecompositionError("generator decomposition is for joins")
    if not is_symmetric_cycle(c):
        raise DecompositionError("input is not a symmetric cycle")
    sizes = j.sizes
    if all(n == 3 for n in sizes):
        return GeneratorDecomposition([], [j.standard_triple()] if c.bits else [])
    if any(n == 3 for n in sizes):
        return _solve_over_generators(j, c)

    x = tensor_iso(c).to_array()
    adapted = [_adapted_basis(n) for n in sizes]
    # adapted coordinates: apply the inverse change of basis along each axis
    for axis, (n, (vecs, _)) in enumerate(zip(sizes, adapted)):
        d = len(vecs)
        m = Gf2Matrix.from_columns(vecs, d).inverse()
        mat = np.array(m.to_lists(), dtype=np.int64)
        x = np.moveaxis(np.tensordot(mat, x.astype(np.int64), axes=([1], [axis])) % 2, 0, axis)
    x = x.astype(np.uint8)

    tori: Counter = Counter()
    triples: list[TripleSubcomplex] = []
    for idx in zip(*np.nonzero(x)):
        idx = tuple(int(i) for i in idx)
        mate = tuple(p[1][i] for p, i in zip(adapted, idx))
        if x[mate] != 1:
            raise DecompositionError("tensor coordinates are not swap-invariant")
        if idx == mate:
            triples.append(j.standard_triple())
            continue
        if idx > mate:
            continue
        splits = [_four_cycle_split(n, _coords_to_chain(n, p[0][i]))
                  for n, p, i in zip(sizes, adapted, idx)]
        for combo in itertools.product(*splits):
            p = Octahedron(tuple(a for a, _ in combo))
            q = Octahedron(tuple(d for _, d in combo))
            tori[min((p, q), (q, p))] ^= 1
    dec = GeneratorDecomposition(sorted(k for k, odd in tori.items() if odd), triples)
    if dec.total(j).bits != c.bits:
        raise DecompositionError("internal error: reconstruction does not match input")
    return dec


def all_tori(j: JoinComplex) -> list[tuple[Octahedron, Octahedron]]:
    octs = j.octahedra
    return [(p, q) for a, p in enumerate(octs) for q in octs[a + 1:] if vertex_disjoint(p, q)]


def _solve_over_generators(j: JoinComplex, c: SymCycle) -> GeneratorDecomposition:
    gens: list = [("torus", pq) for pq in all_tori(j)] + [("triple", x) for x in j.triple_subcomplexes]
    cols = []
    for kind, g in gens:
        sc = symmetrized_torus(j, *g) if kind == "torus" else triple_deleted_product(j, g)
        cols.append(tensor_iso(sc).bits)
    dim = math.prod(chains.tilde_dimension(n) for n in j.sizes)
    m = Gf2Matrix.from_columns(cols, dim)
    sol = solve_affine(m, Gf2Vector(tensor_iso(c).bits, dim))
    if sol is None:
        raise DecompositionError(
            f"cycle is not a sum of tori and triple deleted products in join {list(j.sizes)}")
    chosen = [gens[i] for i in bits_of(sol[0].bits)]
    dec = GeneratorDecomposition([g for k, g in chosen if k == "torus"],
                                 [g for k, g in chosen if k == "triple"])
    if dec.total(j).bits != c.bits:
        raise DecompositionError("internal error: reconstruction does not match input")
    return dec


def generator_span_dimension(j: JoinComplex) -> int:
    """Dimension spanned by all tori and triple deleted products, in tensor coordinates."""
    cols = [tensor_iso(symmetrized_torus(j, *pq)).bits for pq in all_tori(j)]
    cols += [tensor_iso(triple_deleted_product(j, x)).bits for x in j.triple_subcomplexes]
    return len(row_basis(cols))


def triple_decomposition_identity(j: JoinComplex, x: TripleSubcomplex, e: tuple) -> bool:
    """Check ``DP(X) = sum of P x Q + Q x P`` over the complementary pairs at ``e``."""
    total = SymCycle(deleted_product(j), 0)
    for p, q in complementary_pairs(x, e):
        total = total + symmetrized_torus_any(j, p, q)
    return total.bits == triple_deleted_product(j, x).bits


def symmetrized_torus_any(j: JoinComplex, p: Octahedron, q: Octahedron) -> SymCycle:
    """``P x Q + Q x P`` restricted to the deleted product (``P``, ``Q`` may share faces)."""
    dp = deleted_product(j)
    bits = 0
    for s in p.faces():
        for t in q.faces():
            if all(a != b for a, b in zip(s, t)):
                a, b = _join_cell(j, s, t)
                bits ^= (1 << dp.cell_index[(a, b)]) ^ (1 << dp.cell_index[(b, a)])
    return SymCycle(dp, bits)


# -- graphs ---------------------------------------------------------------


def branch_structure(g: Graph) -> tuple[list[int], list[tuple[set[int], list[int]]]]:
    """Branch vertices (degree >= 3) and the branches: (vertex set, edge indices)."""
    branch = [v for v in range(g.n) if g.degree(v) >= 3]
    bset = set(branch)
    seen: set[int] = set()
    branches = []
    for b in branch:
        for w in g.adjacency[b]:
            e = g.eid(b, w)
            if e in seen:
                continue
            verts = {b}
            edges = [e]
            prev, cur = b, w
            while cur not in bset:
                verts.add(cur)
                nxt = [x for x in g.adjacency[cur] if x != prev]
                if len(nxt) != 1:
                    raise ComplexError("not a subdivision: path vertex of degree != 2")
                prev, cur = cur, nxt[0]
                edges.append(g.eid(prev, cur))
            verts.add(cur)
            seen.update(edges)
            branches.append((verts, edges))
    return branch, branches


def economic_deleted_product(g: Graph, host: Graph | None = None) -> SymCycle:
    """Pairs of edges whose carrying branches are vertex-disjoint.

    ``g`` must be a subdivision of K5 or K33.  The cycle lives in the deleted
    product of ``host`` (default ``g`` itself); ``g`` must share its vertex
    numbering with ``host``.
    """
    kind = homeomorphism_type(g)
    if kind not in (K5, K33):
        raise DecompositionError(f"economic deleted products need K5 or K33, got {kind}")
    host = host or g
    dp = deleted_product(host)
    _, branches = branch_structure(g)
    owner = {}
    for bi, (_, edges) in enumerate(branches):
        for e in edges:
            owner[g.edges[e]] = bi
    bits = 0
    for s, bs in owner.items():
        for t, bt in owner.items():
            if not branches[bs][0] & branches[bt][0]:
                bits |= 1 << dp.cell_index[(host.edge_index[s], host.edge_index[t])]
    return SymCycle(dp, bits)


def graph_torus(g: Graph, p: int, q: int) -> SymCycle:
    """``P x Q + Q x P`` for vertex-disjoint edge chains ``p``, ``q`` of ``g``."""
    if g.chain_vertices(p) & g.chain_vertices(q):
        raise DecompositionError("cycles share a vertex")
    dp = deleted_product(g)
    bits = 0
    for s in bits_of(p):
        for t in bits_of(q):
            bits ^= (1 << dp.cell_index[(s, t)]) ^ (1 << dp.cell_index[(t, s)])
    return SymCycle(dp, bits)


@dataclass
class GraphSummand:
    kind: str  # "SymTorus" or "EconomicDP"
    cycle: SymCycle
    support: Graph
    shape: str  # homeomorphism type of the support
    tori_cycles: tuple[int, int] | None = None


def support_edges(c: SymCycle) -> list[int]:
    used = set()
    for ci in bits_of(c.bits):
        used.update(c.dp.cells[ci])
    return sorted(used)


def _minimal_pieces(dp: DeletedProduct, orbits: list[int]) -> list[list[int]]:
    """Split a symmetric cycle (given by its orbits) into swap-minimal ones."""
    for o in orbits:
        rest = [x for x in orbits if x != o]
        kern = _kernel_of_columns([dp._orbit_cols[x] for x in rest])
        if kern:
            sub = sorted(rest[t] for t in bits_of(kern[0]))
            other = sorted(set(orbits) - set(sub))
            return _minimal_pieces(dp, sub) + _minimal_pieces(dp, other)
    return [orbits]


def graph_symmetric_decomposition(c: SymCycle) -> list[GraphSummand]:
    """Peel a symmetric 2-cycle of a graph's deleted product into classified minimal pieces.

    Each piece is swap-minimal.  When its support is a subdivided K5 or K33
    the piece is the economic deleted product; when it is two disjoint cycles
    the piece is their torus.  A minimal piece with any other support is
    written over the tori and economic deleted products inside that support.
    """
    g = c.dp.source
    if not isinstance(g, Graph):
        raise DecompositionError("graph decomposition needs a graph's deleted product")
    if not is_symmetric_cycle(c):
        raise DecompositionError("input is not a symmetric cycle")
    dp = c.dp
    pos = {cell: o for o, (cell, _) in enumerate(dp.orbits)}
    orbits = sorted(pos[ci] for ci in bits_of(c.bits) if ci in pos)
    out = []
    for piece in (_minimal_pieces(dp, orbits) if orbits else []):
        orb = 0
        for o in piece:
            orb |= 1 << o
        sc = SymCycle(dp, dp.orbit_bits(orb))
        sup = g.edge_subgraph(support_edges(sc))
        shape = homeomorphism_type(sup)
        if shape in (K5, K33):
            if economic_deleted_product(sup, g).bits != sc.bits:
                raise DecompositionError("minimal piece differs from the economic deleted product")
            out.append(GraphSummand("EconomicDP", sc, sup, shape))
        elif shape == DISJOINT_CYCLE_PAIR:
            p, q = _components(g, sup)
            if graph_torus(g, p, q).bits != sc.bits:
                raise DecompositionError("minimal piece differs from the torus of its support")
            out.append(GraphSummand("SymTorus", sc, sup, shape, (p, q)))
        else:
            # a swap-minimal piece need not be a single generator (e.g. the sum of
            # two overlapping tori in a planar graph); resolve it by linear algebra
            out.extend(_solve_over_graph_generators(g, sc, sup))
    total = 0
    for s in out:
        total ^= s.cycle.bits
    if total != c.bits:
        raise DecompositionError("internal error: pieces do not sum to the input")
    return out


def graph_generators(host: Graph, sub: Graph) -> list[GraphSummand]:
    """Tori of vertex-disjoint simple cycle pairs and economic deleted products inside ``sub``."""
    cycles = []
    for cyc in nx.simple_cycles(sub.to_networkx()):
        if len(cyc) >= 3:
            cycles.append(host.walk_chain(cyc))
    verts = [host.chain_vertices(c) for c in cycles]
    out = []
    for a in range(len(cycles)):
        for b in range(a + 1, len(cycles)):
            if not verts[a] & verts[b]:
                p, q = sorted((cycles[a], cycles[b]))
                t = graph_torus(host, p, q)
                support = host.edge_subgraph(support_edges(t))
                out.append(GraphSummand("SymTorus", t, support, DISJOINT_CYCLE_PAIR, (p, q)))
    for k in kuratowski_subgraphs(sub).subgraphs:
        kg = k.as_graph(host)
        out.append(GraphSummand("EconomicDP", economic_deleted_product(kg, host), kg, k.kind))
    return out


def _solve_over_graph_generators(host: Graph, c: SymCycle, sub: Graph) -> list[GraphSummand]:
    gens = graph_generators(host, sub)
    dp = c.dp
    cols = [dp.bits_to_orbits(s.cycle.bits) for s in gens]
    n = len(dp.orbits)
    sol = solve_affine(Gf2Matrix.from_columns(cols, n), Gf2Vector(dp.bits_to_orbits(c.bits), n))
    if sol is None:
        raise DecompositionError("symmetric cycle is not a sum of tori and economic deleted products")
    return [gens[i] for i in bits_of(sol[0].bits)]


def _components(host: Graph, sub: Graph) -> list[int]:
    """Edge chains (in the host numbering) of the connected components of ``sub``."""
    import networkx as nx

    ng = nx.Graph(list(sub.edges))
    comps = []
    for comp in sorted(nx.connected_components(ng), key=min):
        chain = 0
        for u, v in sub.edges:
            if u in comp:
                chain |= 1 << host.eid(u, v)
        comps.append(chain)
    return comps
