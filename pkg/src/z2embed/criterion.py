"""Homomorphisms from generator data, face-wise lifts, and the ``v(C) = y^2(C)`` check."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import chains
from .complexes import Graph, JoinComplex, bits_of
from .conditions import KnComplex
from .delprod import (
    DeletedProduct,
    SymCycle,
    all_tori,
    deleted_product,
    graph_symmetric_decomposition,
    symmetrized_torus,
    triple_deleted_product,
)
from .gf2 import Gf2Matrix, Gf2Vector, row_basis, solve_affine
from .vankampen import cocycle_for_seed, van_kampen_number


class CriterionError(ValueError):
    pass


class HypothesisViolation(CriterionError):
    """Generator values are inconsistent with a relation among the generators."""

    def __init__(self, relation: list[int], partner: int):
        self.relation = relation
        self.partner = partner
        super().__init__(f"relation {relation} pairs nontrivially with generator {partner}")


# -- homomorphisms --------------------------------------------------------


def _bilinear(omega: Gf2Matrix, x: int, y: int) -> int:
    n = omega.rows
    return omega.bilinear(Gf2Vector(x, n), Gf2Vector(y, n))


def hom_from_generators(generators: Sequence[int], values: Sequence[Gf2Vector],
                        omega: Gf2Matrix, dim: int) -> Gf2Matrix:
    """A homomorphism ``psi`` on ``GF(2)^dim`` with ``psi P_a . psi P_b = Y_a . Y_b``.

    ``generators`` are coordinate vectors (bit-packed) of cycles ``P_a``.
    The hypothesis is checked on a basis of the relation space: each relation
    ``sum r_a P_a = 0`` must give ``sum r_a Y_a`` orthogonal to every ``Y_b``.
    ``psi`` maps a maximal independent subset of generators to their values
    and a completing set of unit vectors to zero.
    """
    beta = omega.rows
    if len(generators) != len(values):
        raise CriterionError("generator and value counts differ")
    vals = [v.bits for v in values]
    for v in values:
        if v.len != beta:
            raise CriterionError(f"value of length {v.len}, expected {beta}")
    # relations among generators via elimination with combination tracking
    basis: dict[int, tuple[int, int]] = {}
    chosen = []
    for a, g in enumerate(generators):
        combo = 1 << a
        v = g
        while v:
            p = (v & -v).bit_length() - 1
            hit = basis.get(p)
            if hit is None:
                basis[p] = (v, combo)
                chosen.append(a)
                break
            v ^= hit[0]
            combo ^= hit[1]
        else:
            z = 0
            for t in bits_of(combo):
                z ^= vals[t]
            for b, yb in enumerate(vals):
                if _bilinear(omega, z, yb):
                    raise HypothesisViolation(sorted(bits_of(combo)), b)
    # complete the chosen generators to a basis of GF(2)^dim
    cols = [generators[a] for a in chosen]
    images = [vals[a] for a in chosen]
    span = row_basis(cols)
    for i in range(dim):
        if len(row_basis([*span.values(), 1 << i])) > len(span):
            span = row_basis([*span.values(), 1 << i])
            cols.append(1 << i)
            images.append(0)
    change = Gf2Matrix.from_columns(cols, dim)
    psi = Gf2Matrix.from_columns(images, beta) @ change.inverse()
    for a, b in itertools.combinations_with_replacement(range(len(generators)), 2):
        pa = psi.apply(Gf2Vector(generators[a], dim)).bits
        pb = psi.apply(Gf2Vector(generators[b], dim)).bits
        if _bilinear(omega, pa, pb) != _bilinear(omega, vals[a], vals[b]):
            raise CriterionError("internal error: pairing not preserved")
    return psi


# -- face maps ------------------------------------------------------------


def _top_faces(cx) -> list:
    if isinstance(cx, JoinComplex):
        return cx.top_faces
    if isinstance(cx, KnComplex):
        return list(cx.graph.edges)
    if isinstance(cx, Graph):
        return list(cx.edges)
    raise TypeError(f"unsupported complex {cx!r}")


@lru_cache(maxsize=None)
def homology_basis_chains(cx) -> tuple[int, ...]:
    """Basis cycles as face chains, in the basis order used by BForms."""
    if isinstance(cx, JoinComplex):
        idx = cx.top_index
        out = []
        for o in chains.cycle_space_basis(cx):
            c = 0
            for f in o.faces():
                c |= 1 << idx[f]
            out.append(c)
        return tuple(out)
    if isinstance(cx, KnComplex):
        return tuple(cx.triangle_chain(t) for t in cx.basis)
    if isinstance(cx, Graph):
        return tuple(chains.fundamental_cycle_basis(cx)[1])
    raise TypeError(f"unsupported complex {cx!r}")


def substrate(cx) -> JoinComplex | Graph:
    """The complex whose deleted product carries the symmetric cycles."""
    return cx.graph if isinstance(cx, KnComplex) else cx


@dataclass(frozen=True)
class FaceMap:
    """Values ``y(sigma)`` in ``GF(2)^beta`` for every top face, bit-packed, in face order."""

    complex: object
    beta: int
    values: tuple[int, ...]

    def hat(self, chain: int) -> int:
        out = 0
        for f in bits_of(chain):
            out ^= self.values[f]
        return out


def face_map_from_hom(psi: Gf2Matrix, cx) -> FaceMap:
    """Solve for ``y`` with ``y-hat = psi`` on every basis cycle.

    Each coordinate of ``GF(2)^beta`` is one linear system (basis cycles as
    rows, faces as columns); the cycles are independent chains, so it is
    always solvable.  The particular solution of the solver is used.
    """
    basis = homology_basis_chains(cx)
    nfaces = len(_top_faces(cx))
    if psi.cols != len(basis):
        raise CriterionError(f"psi has {psi.cols} columns, homology has dimension {len(basis)}")
    m = Gf2Matrix(len(basis), nfaces, basis)
    values = [0] * nfaces
    for r in range(psi.rows):
        rhs = Gf2Vector(psi.data[r], len(basis))
        sol = solve_affine(m, rhs)
        if sol is None:
            raise CriterionError("internal error: face map system is inconsistent")
        for f in bits_of(sol[0].bits):
            values[f] |= 1 << r
    y = FaceMap(cx, psi.rows, tuple(values))
    for b, c in enumerate(basis):
        if y.hat(c) != psi.col(b).bits:
            raise CriterionError("internal error: face map does not lift psi")
    return y


def face_map_from_Y(y_full: Gf2Matrix, cx) -> FaceMap:
    """Face map for a certificate matrix whose columns are values on the index cycles."""
    from .conditions import basis_positions

    pos = list(basis_positions(cx))
    psi = y_full.submatrix(range(y_full.rows), pos)
    return face_map_from_hom(psi, cx)


def y_squared(c: SymCycle, y: FaceMap, omega: Gf2Matrix) -> int:
    total = 0
    for i, j in c.unordered_pairs():
        total ^= _bilinear(omega, y.values[i], y.values[j])
    return total


# -- the criterion --------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    id: str
    cycle: SymCycle


@lru_cache(maxsize=None)
def symmetric_generators(cx) -> tuple[Generator, ...]:
    """Generators of the symmetric top cycles.

    Joins: symmetrized tori of disjoint octahedra and triple deleted
    products, completed by basis cycles if these do not span (which happens
    for some mixed sizes).  Graphs: the classified minimal pieces of a
    symmetric cycle basis.
    """
    sub = substrate(cx)
    dp = deleted_product(sub)
    gens: list[Generator] = []
    if isinstance(sub, JoinComplex):
        for p, q in all_tori(sub):
            gens.append(Generator(f"torus {p} {q}", symmetrized_torus(sub, p, q)))
        for x in sub.triple_subcomplexes:
            gens.append(Generator(f"triple {x}", triple_deleted_product(sub, x)))
        span = row_basis(dp.bits_to_orbits(g.cycle.bits) for g in gens)
        for n, b in enumerate(dp.symmetric_cycle_basis()):
            o = dp.bits_to_orbits(b)
            grown = row_basis([*span.values(), o])
            if len(grown) > len(span):
                span = grown
                gens.append(Generator(f"extra {n}", SymCycle(dp, b)))
        return tuple(gens)
    seen = set()
    for b in dp.symmetric_cycle_basis():
        for piece in graph_symmetric_decomposition(SymCycle(dp, b)):
            if piece.cycle.bits in seen:
                continue
            seen.add(piece.cycle.bits)
            gid = f"{piece.kind} {sorted(piece.support.edges)}"
            gens.append(Generator(gid, piece.cycle))
    return tuple(gens)


@dataclass
class RPrimeVerdict:
    ok: bool
    entries: list[dict] = field(default_factory=list)

    @property
    def failing(self) -> list[dict]:
        return [e for e in self.entries if not e["ok"]]

    def __bool__(self) -> bool:
        return self.ok


def check_R_prime(cx, y: FaceMap, omega: Gf2Matrix, drawing_seeds: Sequence[int] = (0, 1, 2)) -> RPrimeVerdict:
    """Check ``v(C) = y^2(C)`` on every generator; ``v`` from drawings with the given seeds."""
    sub = substrate(cx)
    cocycles = [cocycle_for_seed(sub, s) for s in drawing_seeds]
    entries = []
    for g in symmetric_generators(cx):
        vs = {van_kampen_number(g.cycle, cc) for cc in cocycles}
        if len(vs) != 1:
            raise CriterionError(f"van Kampen number of {g.id} differs between drawings")
        v = vs.pop()
        y2 = y_squared(g.cycle, y, omega)
        entries.append({"generator_id": g.id, "v": v, "y2": y2, "ok": v == y2})
    return RPrimeVerdict(all(e["ok"] for e in entries), entries)


def torus_identity(c_pairs: Sequence[tuple[int, int]], y: FaceMap, omega: Gf2Matrix, dp: DeletedProduct) -> tuple[int, int]:
    """Both sides of ``y^2(sum P_j x Q_j + Q_j x P_j) = sum y-hat(P_j) . y-hat(Q_j)``.

    ``c_pairs`` lists vertex-disjoint cycle chains ``(P_j, Q_j)`` over the faces of ``dp``.
    """
    bits = 0
    rhs = 0
    for p, q in c_pairs:
        for s in bits_of(p):
            for t in bits_of(q):
                bits ^= (1 << dp.cell_index[(s, t)]) ^ (1 << dp.cell_index[(t, s)])
        rhs ^= _bilinear(omega, y.hat(p), y.hat(q))
    return y_squared(SymCycle(dp, bits), y, omega), rhs
