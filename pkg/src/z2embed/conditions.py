"""Independence, additivity and non-triviality of matrices indexed by generating cycles.

Two index flavors share one code path:

* joins: rows and columns are the k-octahedra of the join (for k = 1 these
  are the 4-cycles of ``K_{n,n}``);
* complete graphs ``K_n``: rows and columns are the 3-element subsets of
  ``[n]`` (triangles).

A :class:`BForm` is the same data compressed to a bilinear form on a basis
of the cycle space; additive matrices are exactly the expansions of BForms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Sequence

import networkx as nx

from . import chains
from .complexes import (
    K5,
    K33,
    ComplexError,
    Graph,
    JoinComplex,
    KuratowskiSubgraph,
    Octahedron,
    bits_of,
    complementary_pairs,
    complete_graph,
    kn_complementary_pairs,
    kuratowski_subgraphs,
    vertex_disjoint,
)
from .gf2 import Gf2Error, Gf2Matrix, Gf2Vector


class ConditionError(ValueError):
    pass


class KnComplex:
    """``K_n`` viewed through its triangles; cycle basis = triangles through vertex 1."""

    def __init__(self, n: int):
        if n < 3:
            raise ComplexError("K_n needs n >= 3")
        self.n = n

    def __repr__(self) -> str:
        return f"KnComplex({self.n})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KnComplex) and other.n == self.n

    def __hash__(self) -> int:
        return hash(("Kn", self.n))

    @property
    def descriptor(self) -> str:
        return f"Kn:{self.n}"

    @cached_property
    def triples(self) -> list[tuple[int, int, int]]:
        return list(itertools.combinations(range(1, self.n + 1), 3))

    @cached_property
    def triple_index(self) -> dict[tuple, int]:
        return {t: i for i, t in enumerate(self.triples)}

    @cached_property
    def basis(self) -> list[tuple[int, int, int]]:
        return [t for t in self.triples if t[0] == 1]

    @cached_property
    def graph(self) -> Graph:
        return complete_graph(self.n)

    def triple_coordinates(self, t: Sequence[int]) -> int:
        """``{a,b,c} = {1,a,b} + {1,b,c} + {1,a,c}`` when 1 is not among them."""
        pos = {b: i for i, b in enumerate(self.basis)}
        t = tuple(sorted(t))
        if t[0] == 1:
            return 1 << pos[t]
        a, b, c = t
        return (1 << pos[(1, a, b)]) ^ (1 << pos[(1, b, c)]) ^ (1 << pos[(1, a, c)])

    def triangle_chain(self, t: Sequence[int]) -> int:
        return self.graph.walk_chain([v - 1 for v in t])


Indexed = JoinComplex | KnComplex


# -- index structure per flavor ------------------------------------------


def indices(cx: Indexed) -> list:
    if isinstance(cx, JoinComplex):
        return cx.octahedra
    if isinstance(cx, KnComplex):
        return cx.triples
    raise TypeError(f"unsupported complex {cx!r}")


def index_of(cx: Indexed) -> dict:
    return cx.octahedron_index if isinstance(cx, JoinComplex) else cx.triple_index


def basis_size(cx: Indexed) -> int:
    if isinstance(cx, JoinComplex):
        return chains.cycle_space_dimension(cx)
    return len(cx.basis)


@lru_cache(maxsize=None)
def expansion_columns(cx: Indexed) -> tuple[int, ...]:
    """Basis coordinates of every index cycle, in index order."""
    if isinstance(cx, JoinComplex):
        return tuple(chains.octahedron_coordinates(cx, o) for o in cx.octahedra)
    return tuple(cx.triple_coordinates(t) for t in cx.triples)


@lru_cache(maxsize=None)
def expansion_matrix(cx: Indexed) -> Gf2Matrix:
    return Gf2Matrix.from_columns(expansion_columns(cx), basis_size(cx))


@lru_cache(maxsize=None)
def basis_positions(cx: Indexed) -> tuple[int, ...]:
    """Index positions of the basis cycles (basis order)."""
    if isinstance(cx, JoinComplex):
        return tuple(cx.octahedron_index[b] for b in chains.cycle_space_basis(cx))
    return tuple(cx.triple_index[b] for b in cx.basis)


def _disjoint(cx: Indexed, p, q) -> bool:
    if isinstance(cx, JoinComplex):
        return vertex_disjoint(p, q)
    return not set(p) & set(q)


@lru_cache(maxsize=None)
def disjoint_pairs(cx: Indexed) -> tuple[tuple[int, int], ...]:
    """Index pairs ``i < j`` of vertex-disjoint cycles."""
    idx = indices(cx)
    if isinstance(cx, KnComplex):
        return tuple((i, j) for i, j in itertools.combinations(range(len(idx)), 2)
                     if _disjoint(cx, idx[i], idx[j]))
    pos = cx.octahedron_index
    out = []
    for i, p in enumerate(idx):
        comp = [[q for q in itertools.combinations(range(1, n + 1), 2) if not set(q) & set(pair)]
                for n, pair in zip(cx.sizes, p.pairs)]
        for qs in itertools.product(*comp):
            j = pos[Octahedron(qs)]
            if i < j:
                out.append((i, j))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def additivity_relations(cx: Indexed) -> tuple[tuple[int, ...], ...]:
    """Index tuples whose cycles sum to zero and generate all relations.

    Joins: ``K*{u,v} + K*{v,w} + K*{w,u}`` in one coordinate.
    ``K_n``: the four faces of a 4-subset.
    """
    pos = index_of(cx)
    out = []
    if isinstance(cx, KnComplex):
        for f in itertools.combinations(range(1, cx.n + 1), 4):
            out.append(tuple(pos[tuple(x for x in f if x != a)] for a in f))
        return tuple(out)
    for i, n in enumerate(cx.sizes):
        others = [list(itertools.combinations(range(1, m + 1), 2)) if c != i else [None]
                  for c, m in enumerate(cx.sizes)]
        for u, v, w in itertools.combinations(range(1, n + 1), 3):
            for rest in itertools.product(*others):
                rel = []
                for pair in ((u, v), (v, w), (u, w)):
                    pairs = list(rest)
                    pairs[i] = pair
                    rel.append(pos[Octahedron(tuple(pairs))])
                out.append(tuple(rel))
    return tuple(out)


@dataclass(frozen=True)
class Witness:
    """A Kuratowski-type object ``X`` with a chosen face/vertex ``e`` and its complementary pairs."""

    x: object
    e: object
    pairs: tuple[tuple[int, int], ...]


def nontriviality_witnesses(cx: Indexed, mode: str = "all") -> list[Witness]:
    """All ``(X, e)`` (mode ``all``) or the first ``e`` of each ``X`` (mode ``one_witness``)."""
    if mode not in ("all", "one_witness"):
        raise ValueError(f"unknown mode {mode!r}")
    pos = index_of(cx)
    out = []
    if isinstance(cx, KnComplex):
        for f in itertools.combinations(range(1, cx.n + 1), 5):
            for v in (f[:1] if mode == "one_witness" else f):
                pairs = tuple(tuple(sorted((pos[p], pos[q]))) for p, q in kn_complementary_pairs(f, v))
                out.append(Witness(f, v, pairs))
        return out
    for x in cx.triple_subcomplexes:
        faces = x.faces()
        for e in (faces[:1] if mode == "one_witness" else faces):
            pairs = tuple(tuple(sorted((pos[p], pos[q]))) for p, q in complementary_pairs(x, e))
            out.append(Witness(x, e, pairs))
    return out


# -- matrices -------------------------------------------------------------


@dataclass(frozen=True)
class OctMatrix:
    """Symmetric matrix indexed by the generating cycles of ``complex``."""

    complex: Indexed
    matrix: Gf2Matrix

    def __post_init__(self):
        n = len(indices(self.complex))
        if self.matrix.shape != (n, n):
            raise ConditionError(f"expected a {n}x{n} matrix, got {self.matrix.shape}")
        if not self.matrix.is_symmetric():
            raise ConditionError("matrix is not symmetric")

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.matrix[ij]


@dataclass(frozen=True)
class BForm:
    """Symmetric bilinear form on the cycle-space basis of ``complex``."""

    complex: Indexed
    matrix: Gf2Matrix

    def __post_init__(self):
        h = basis_size(self.complex)
        if self.matrix.shape != (h, h):
            raise ConditionError(f"expected a {h}x{h} matrix, got {self.matrix.shape}")
        if not self.matrix.is_symmetric():
            raise ConditionError("form is not symmetric")


@dataclass
class CheckResult:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def is_independent(a: OctMatrix) -> CheckResult:
    bad = [(i, j) for i, j in disjoint_pairs(a.complex) if a[i, j]]
    return CheckResult(not bad, bad)


def is_additive(a: OctMatrix) -> CheckResult:
    """Violations are ``(relation index tuple, column)`` with a nonzero sum."""
    rows = a.matrix.data
    bad = []
    for rel in additivity_relations(a.complex):
        acc = 0
        for r in rel:
            acc ^= rows[r]
        for q in bits_of(acc):
            bad.append((rel, q))
    return CheckResult(not bad, bad)


def s_sum(a: OctMatrix, x, e) -> int:
    cx = a.complex
    pos = index_of(cx)
    if isinstance(cx, KnComplex):
        pairs = kn_complementary_pairs(x, e)
    else:
        if e not in x:
            raise ConditionError(f"face {e} is not in {x}")
        pairs = complementary_pairs(x, e)
    total = 0
    for p, q in pairs:
        total ^= a[pos[p], pos[q]]
    return total


def is_nontrivial(a: OctMatrix, mode: str = "all") -> CheckResult:
    """True iff every checked ``S_{X,e}`` is 1; the violation is the first failing ``(X, e)``."""
    for w in nontriviality_witnesses(a.complex, mode):
        total = 0
        for i, j in w.pairs:
            total ^= a[i, j]
        if not total:
            return CheckResult(False, [(w.x, w.e)])
    return CheckResult(True, [])


def bform_expand(b: BForm) -> OctMatrix:
    e = expansion_matrix(b.complex)
    return OctMatrix(b.complex, e.T @ b.matrix @ e)


def oct_compress(a: OctMatrix) -> BForm:
    if not is_additive(a):
        raise ConditionError("only additive matrices compress to a bilinear form")
    pos = list(basis_positions(a.complex))
    return BForm(a.complex, a.matrix.submatrix(pos, pos))


def check_all(a: OctMatrix) -> dict[str, CheckResult]:
    return {
        "independent": is_independent(a),
        "additive": is_additive(a),
        "nontrivial": is_nontrivial(a, "all"),
    }


# -- general graphs -------------------------------------------------------

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class GraphCriterionReport:
    independence: str
    k5_nontriviality: str
    k33_nontriviality: str
    violations: dict[str, list] = field(default_factory=dict)
    truncated: bool = False

    @property
    def verdict(self) -> str:
        parts = (self.independence, self.k5_nontriviality, self.k33_nontriviality)
        if FAIL in parts:
            return FAIL
        if INCONCLUSIVE in parts:
            return INCONCLUSIVE
        return PASS

    def to_json(self) -> dict:
        return {
            "independence": self.independence,
            "K5_nontriviality": self.k5_nontriviality,
            "K33_nontriviality": self.k33_nontriviality,
            "verdict": self.verdict,
            "truncated": self.truncated,
            "violations": {k: [list(map(str, v)) for v in vs] for k, vs in self.violations.items()},
        }


def simple_cycles(g: Graph, limit: int) -> tuple[list[int], bool]:
    """Edge chains of simple cycles of ``g``, at most ``limit``; second value flags truncation."""
    out = []
    for cyc in nx.simple_cycles(g.to_networkx()):
        if len(cyc) < 3:
            continue
        if len(out) >= limit:
            return out, True
        out.append(g.walk_chain(cyc))
    return out, False


def kuratowski_pairs(k: KuratowskiSubgraph, host: Graph, witness: str = "all") -> list[tuple[object, list[tuple[int, int]]]]:
    """Per chosen vertex/edge, the complementary pairs of branch cycles as host chains.

    K5: pairs of branch triangles meeting only at the vertex ``v``.
    K33: pairs of branch 4-cycles whose only common edge is ``e``.
    """
    out = []
    if k.kind == K5:
        branch = k.branch
        vs = branch[:1] if witness == "one_witness" else branch
        for v in vs:
            pairs = []
            for p, q in kn_complementary_pairs(branch, v):
                pairs.append((k.cycle_chain(host, p), k.cycle_chain(host, q)))
            out.append((v, pairs))
        return out
    side_a, side_b = k.branch[:3], k.branch[3:]
    edges = [(a, b) for a in side_a for b in side_b]
    for a, b in (edges[:1] if witness == "one_witness" else edges):
        a1, a2 = [x for x in side_a if x != a]
        b1, b2 = [x for x in side_b if x != b]
        pairs = [
            (k.cycle_chain(host, (a, b, a1, b1)), k.cycle_chain(host, (a, b, a2, b2))),
            (k.cycle_chain(host, (a, b, a1, b2)), k.cycle_chain(host, (a, b, a2, b1))),
        ]
        out.append(((a, b), pairs))
    return out


def graph_criterion_check(k: Graph, y: Gf2Matrix, omega: Gf2Matrix,
                          cycle_limit: int = 20000,
                          kuratowski_limit: int = 10**6) -> GraphCriterionReport:
    """Check the graph conditions for ``y: H_1(K) -> GF(2)^beta`` in fundamental-cycle coordinates."""
    non_tree, basis = chains.fundamental_cycle_basis(k)
    if y.cols != len(basis):
        raise ConditionError(f"y has {y.cols} columns, the cycle space has dimension {len(basis)}")
    if omega.rows != y.rows:
        raise Gf2Error("Omega and y disagree on beta")
    form = y.T @ omega @ y

    def pair(p: int, q: int) -> int:
        x = chains.graph_cycle_coordinates(non_tree, p)
        z = chains.graph_cycle_coordinates(non_tree, q)
        return form.bilinear(Gf2Vector(x, len(basis)), Gf2Vector(z, len(basis)))

    cycles, trunc_c = simple_cycles(k, cycle_limit)
    verts = [k.chain_vertices(c) for c in cycles]
    ind_bad = []
    for i, j in itertools.combinations(range(len(cycles)), 2):
        if not verts[i] & verts[j] and pair(cycles[i], cycles[j]):
            ind_bad.append((k.chain_edges(cycles[i]), k.chain_edges(cycles[j])))
    search = kuratowski_subgraphs(k, kuratowski_limit)
    bad = {K5: [], K33: []}
    for sub in search.subgraphs:
        for e, pairs in kuratowski_pairs(sub, k):
            total = 0
            for p, q in pairs:
                total ^= pair(p, q)
            if not total:
                bad[sub.kind].append((sub.branch, e))

    def verdict(violations: list, truncated: bool) -> str:
        if violations:
            return FAIL
        return INCONCLUSIVE if truncated else PASS

    return GraphCriterionReport(
        verdict(ind_bad, trunc_c),
        verdict(bad[K5], search.truncated),
        verdict(bad[K33], search.truncated),
        {"independence": ind_bad, "K5": bad[K5], "K33": bad[K33]},
        trunc_c or search.truncated,
    )

