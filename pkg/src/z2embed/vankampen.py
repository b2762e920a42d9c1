"""Van Kampen numbers from straight-simplex maps into ``R^{2k}``, in exact rationals.

A drawing places every vertex at an integer point.  Two vertex-disjoint
k-simplices in ``R^{2k}`` meet where ``sum l_i p_i = sum m_j q_j`` with
``sum l = sum m = 1``; generically this square system has one solution and
the simplices cross iff all coefficients are positive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .complexes import Graph, JoinComplex
from .delprod import DeletedProduct, SymCycle, deleted_product

DEFAULT_BOX = 10**6
DEFAULT_RETRIES = 100


class DegenerateDrawing(ValueError):
    """Two disjoint simplices touch or overlap in a non-transversal way."""


@dataclass(frozen=True)
class Drawing:
    """Vertex positions in ``Q^dim`` for a complex whose top faces are vertex tuples."""

    dim: int
    points: dict
    seed: int | None = None

    def __post_init__(self):
        for v, p in self.points.items():
            if len(p) != self.dim:
                raise ValueError(f"vertex {v} has {len(p)} coordinates, expected {self.dim}")

    def point(self, v) -> tuple[Fraction, ...]:
        return tuple(Fraction(x) for x in self.points[v])


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Exact solution of a square system, or None when it is singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def _rank_solve(rows: list[list[Fraction]], rhs: list[Fraction], cols: Sequence[int]):
    """Solve using only the unknowns ``cols`` (others fixed at 0); None if inconsistent."""
    sub = [[r[c] for c in cols] for r in rows]
    m = [s + [b] for s, b in zip(sub, rhs)]
    nr, nc = len(m), len(cols)
    piv_cols = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[i][nc] != 0 for i in range(r, nr)):
        return None
    if len(piv_cols) < nc:
        return None  # not a basic solution
    return [m[i][nc] for i in range(nc)]


def _feasible(rows: list[list[Fraction]], rhs: list[Fraction]) -> bool:
    """Exact test for a nonnegative solution, by enumerating basic solutions."""
    n = len(rows[0])
    for size in range(1, len(rows) + 1):
        for cols in itertools.combinations(range(n), size):
            sol = _rank_solve(rows, rhs, cols)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def _system(sigma_pts, tau_pts, dim: int):
    n = len(sigma_pts) + len(tau_pts)
    rows = []
    for c in range(dim):
        rows.append([p[c] for p in sigma_pts] + [-q[c] for q in tau_pts])
    rows.append([Fraction(1)] * len(sigma_pts) + [Fraction(0)] * len(tau_pts))
    rows.append([Fraction(0)] * len(sigma_pts) + [Fraction(1)] * len(tau_pts))
    rhs = [Fraction(0)] * dim + [Fraction(1), Fraction(1)]
    return rows, rhs, n


def segment_parity(sigma_pts, tau_pts, dim: int) -> int:
    """Parity of the intersection of two simplices given by their vertex points."""
    rows, rhs, n = _system(sigma_pts, tau_pts, dim)
    if len(rows) == n:
        sol = _solve(rows, rhs)
        if sol is not None:
            if all(x > 0 for x in sol):
                return 1
            if all(x >= 0 for x in sol):
                raise DegenerateDrawing("simplices touch at a boundary point")
            return 0
    if _feasible(rows, rhs):
        raise DegenerateDrawing("simplices meet non-transversally")
    return 0


def intersection_parity(sigma: Sequence, tau: Sequence, d: Drawing) -> int:
    if set(sigma) & set(tau):
        raise ValueError("faces are not vertex-disjoint")
    return segment_parity([d.point(v) for v in sigma], [d.point(v) for v in tau], d.dim)


def complex_dimension(cx) -> int:
    """Ambient dimension ``2k`` for a complex of dimension ``k``."""
    if isinstance(cx, JoinComplex):
        return 2 * cx.k
    if isinstance(cx, Graph):
        return 2
    raise TypeError(f"unsupported complex {cx!r}")


def complex_vertices(cx) -> list:
    if isinstance(cx, JoinComplex):
        return [(i, a) for i, n in enumerate(cx.sizes) for a in range(1, n + 1)]
    return list(range(cx.n))


def intersection_cocycle(d: Drawing, dp: DeletedProduct) -> dict[tuple[int, int], int]:
    """Parity for every unordered disjoint pair of top faces (keys ``(i, j)``, ``i < j``)."""
    out = {}
    for c, s in dp.orbits:
        i, j = dp.cells[c]
        out[(min(i, j), max(i, j))] = intersection_parity(dp.faces[i], dp.faces[j], d)
    return out


def random_generic_drawing(cx, seed: int, box: int = DEFAULT_BOX,
                           retries: int = DEFAULT_RETRIES) -> Drawing:
    """Integer vertex positions in ``[-box, box]^{2k}``, resampled until generic."""
    rng = np.random.default_rng(seed)
    dim = complex_dimension(cx)
    verts = complex_vertices(cx)
    dp = deleted_product(cx)
    for _ in range(retries):
        coords = rng.integers(-box, box + 1, size=(len(verts), dim))
        d = Drawing(dim, {v: tuple(int(x) for x in row) for v, row in zip(verts, coords)}, seed)
        try:
            intersection_cocycle(d, dp)
        except DegenerateDrawing:
            continue
        return d
    raise DegenerateDrawing(f"no generic drawing found in {retries} tries (box {box})")


@lru_cache(maxsize=256)
def _cached_cocycle(cx, seed: int) -> dict[tuple[int, int], int]:
    return intersection_cocycle(random_generic_drawing(cx, seed), deleted_product(cx))


def cocycle_for_seed(cx, seed: int) -> dict[tuple[int, int], int]:
    """Intersection cocycle of the drawing for ``seed`` (memoized)."""
    return _cached_cocycle(cx, seed)


def van_kampen_number(c: SymCycle, d: Drawing | dict) -> int:
    """Sum of intersection parities over the unordered pairs of ``c``.

    ``d`` is a drawing or a precomputed intersection cocycle.
    """
    total = 0
    for i, j in c.unordered_pairs():
        key = (min(i, j), max(i, j))
        if isinstance(d, dict):
            total ^= d[key]
        else:
            total ^= intersection_parity(c.dp.faces[i], c.dp.faces[j], d)
    return total
