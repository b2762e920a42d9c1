"""Minimal-rank search over the affine space of admissible bilinear forms.

Unknowns are the upper-triangle entries of a symmetric form ``B`` on a
cycle-space basis.  Independence gives homogeneous equations
``x^T B y = 0`` (``x``, ``y`` coordinates of disjoint cycles) and
non-triviality gives ``sum x^T B y = 1`` per Kuratowski-type object.  The
solution coset is searched for a form of small rank and the right type,
exhaustively when it is small enough.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from . import chains
from .complexes import (
    ComplexError,
    Graph,
    JoinComplex,
    bits_of,
    deleted_graph,
    kuratowski_subgraphs,
)
from .conditions import (
    KnComplex,
    OctMatrix,
    basis_size,
    disjoint_pairs,
    expansion_columns,
    expansion_matrix,
    graph_criterion_check,
    is_additive,
    is_independent,
    is_nontrivial,
    kuratowski_pairs,
    nontriviality_witnesses,
    simple_cycles,
)
from .criterion import check_R_prime, face_map_from_hom, face_map_from_Y
from .gf2 import FormType, Gf2Matrix, Gf2Vector, rank, row_basis, solve_affine
from .gram import OmegaKind, OmegaSpec, construct_Y, gram

EXHAUSTIVE_THRESHOLD = 24
FACTOR_THRESHOLD = 24
DEFAULT_RESTARTS = 64
DEFAULT_BUDGET = 200_000
BACKTRACK_NODES = 50_000
DEFAULT_SEED = 0
_CHUNK_BITS = 16
_INFEASIBLE = 1 << 30


class SearchError(ValueError):
    pass


# -- complexes by descriptor ---------------------------------------------


def graph_descriptor(g: Graph) -> str:
    return "edges:" + ",".join(f"{u}-{v}" for u, v in g.edges)


def descriptor(cx) -> str:
    if isinstance(cx, Graph):
        return graph_descriptor(cx)
    return cx.descriptor


def read_graph_file(path: str | Path) -> Graph:
    """Edge list file: one ``u v`` pair of non-negative integers per line, ``#`` comments."""
    edges = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ComplexError(f"bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return Graph.from_edges(edges)


def parse_complex(text: str):
    """``join:n1,n2,...``, ``Kn:n``, ``K5``, ``K33``, ``tildeK:n``, ``graph:FILE`` or ``edges:u-v,...``."""
    kind, _, arg = text.partition(":")
    low = kind.lower()
    try:
        if low == "join":
            return JoinComplex([int(x) for x in arg.split(",") if x.strip()])
        if low == "kn":
            return KnComplex(int(arg))
        if low == "k5" and not arg:
            return KnComplex(5)
        if low == "k33" and not arg:
            return JoinComplex((3, 3))
        if low == "tildek":
            return deleted_graph(int(arg)).graph
        if low == "graph":
            return read_graph_file(arg)
        if low == "edges":
            pairs = [e.split("-") for e in arg.split(",") if e.strip()]
            return Graph.from_edges((int(a), int(b)) for a, b in pairs)
    except ValueError as exc:
        raise ComplexError(f"bad complex descriptor {text!r}: {exc}") from None
    raise ComplexError(f"unknown complex descriptor {text!r}")


# -- the constraint system ------------------------------------------------


@dataclass
class ConstraintSystem:
    """Affine equations on the upper triangle of a symmetric ``h x h`` form."""

    complex: object
    h: int
    equations: list[tuple[int, int]]
    truncated: bool = False
    particular: int | None = None
    kernel: list[int] = field(default_factory=list)

    @property
    def nvars(self) -> int:
        return self.h * (self.h + 1) // 2

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def coset_dimension(self) -> int | None:
        return len(self.kernel) if self.consistent else None

    def var(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return i * self.h - i * (i - 1) // 2 + (j - i)

    def pair_mask(self, x: int, y: int) -> int:
        """Variables of ``x^T B y``."""
        m = 0
        for i in bits_of(x):
            for j in bits_of(y):
                m ^= 1 << self.var(i, j)
        return m

    def to_rows(self, v: int) -> list[int]:
        rows = [0] * self.h
        for i in range(self.h):
            for j in range(i, self.h):
                if (v >> self.var(i, j)) & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        return rows

    def to_matrix(self, v: int) -> Gf2Matrix:
        return Gf2Matrix(self.h, self.h, self.to_rows(v))

    def from_matrix(self, b: Gf2Matrix) -> int:
        v = 0
        for i in range(self.h):
            for j in range(i, self.h):
                if b[i, j]:
                    v |= 1 << self.var(i, j)
        return v

    def satisfied(self, v: int) -> bool:
        return all((m & v).bit_count() % 2 == r for m, r in self.equations)

    def solve(self) -> "ConstraintSystem":
        m = Gf2Matrix(len(self.equations), self.nvars, [e for e, _ in self.equations])
        rhs = 0
        for k, (_, r) in enumerate(self.equations):
            rhs |= r << k
        sol = solve_affine(m, Gf2Vector(rhs, len(self.equations)))
        if sol is None:
            self.particular, self.kernel = None, []
        else:
            self.particular = sol[0].bits
            self.kernel = [k.bits for k in sol[1]]
        return self


def build_system(cx, cycle_limit: int = 20000, kuratowski_limit: int = 10**6) -> ConstraintSystem:
    """Equations for independent, additive (structural), one-witness non-trivial forms."""
    if isinstance(cx, (JoinComplex, KnComplex)):
        h = basis_size(cx)
        sys = ConstraintSystem(cx, h, [])
        cols = expansion_columns(cx)
        for i, j in disjoint_pairs(cx):
            sys.equations.append((sys.pair_mask(cols[i], cols[j]), 0))
        for w in nontriviality_witnesses(cx, "one_witness"):
            m = 0
            for i, j in w.pairs:
                m ^= sys.pair_mask(cols[i], cols[j])
            sys.equations.append((m, 1))
        return sys.solve()
    if isinstance(cx, Graph):
        non_tree, basis = chains.fundamental_cycle_basis(cx)
        sys = ConstraintSystem(cx, len(basis), [])

        def coords(c: int) -> int:
            return chains.graph_cycle_coordinates(non_tree, c)

        cycles, trunc = simple_cycles(cx, cycle_limit)
        verts = [cx.chain_vertices(c) for c in cycles]
        for a in range(len(cycles)):
            for b in range(a + 1, len(cycles)):
                if not verts[a] & verts[b]:
                    sys.equations.append((sys.pair_mask(coords(cycles[a]), coords(cycles[b])), 0))
        search = kuratowski_subgraphs(cx, kuratowski_limit)
        for sub in search.subgraphs:
            for _, pairs in kuratowski_pairs(sub, cx, "one_witness"):
                m = 0
                for p, q in pairs:
                    m ^= sys.pair_mask(coords(p), coords(q))
                sys.equations.append((m, 1))
        sys.truncated = trunc or search.truncated
        return sys.solve()
    raise TypeError(f"unsupported complex {cx!r}")


# -- objectives -----------------------------------------------------------


def _need(kind: OmegaKind, r, alt, zero):
    """Least beta realizing forms with the given rank/type (vectorized)."""
    if kind is OmegaKind.TYPE_H:
        return np.where(alt, r, _INFEASIBLE)
    return np.where(zero, 0, np.where(alt, r + 1, r))


def _rank_objective(type_constraint: FormType | None):
    def obj(r, alt, zero):
        if type_constraint is None:
            return r
        want_alt = type_constraint is FormType.ALTERNATING
        return np.where(alt == want_alt, r, _INFEASIBLE)
    return obj


def _need_objective(kind: OmegaKind):
    return lambda r, alt, zero: _need(kind, r, alt, zero)


# -- vectorized exhaustive enumeration -----------------------------------


def batch_rank(rows: np.ndarray) -> np.ndarray:
    """GF(2) ranks of a batch of ``h x h`` matrices given as ``(N, h)`` uint64 rows."""
    n, h = rows.shape
    basis = np.zeros((n, h), dtype=np.uint64)
    one = np.uint64(1)
    for r in range(h):
        v = rows[:, r].copy()
        for p in range(h):
            bit = ((v >> np.uint64(p)) & one).astype(bool)
            has = basis[:, p] != 0
            v = np.where(bit & has, v ^ basis[:, p], v)
            new = bit & ~has
            basis[:, p] = np.where(new, v, basis[:, p])
            v = np.where(new, np.uint64(0), v)
    return (basis != 0).sum(axis=1)


def _bitrev(x: np.ndarray, h: int) -> np.ndarray:
    out = np.zeros_like(x)
    one = np.uint64(1)
    for j in range(h):
        out |= ((x >> np.uint64(j)) & one) << np.uint64(h - 1 - j)
    return out


def _lex_key(rows: Sequence[int], h: int) -> tuple[int, ...]:
    """Sort key with ``B`` read row by row, column 0 first, 0 before 1."""
    return tuple(int(f"{r:0{h}b}"[::-1], 2) if h else 0 for r in rows)


@dataclass
class SearchResult:
    form: Gf2Matrix | None
    value: int | None
    exact: bool
    evaluations: int
    strategy: str


def _row_arrays(sys: ConstraintSystem):
    part = np.array(sys.to_rows(sys.particular), dtype=np.uint64)
    gens = np.array([sys.to_rows(k) for k in sys.kernel], dtype=np.uint64).reshape(len(sys.kernel), sys.h)
    return part, gens


def _exhaustive(sys: ConstraintSystem, objective: Callable, threads: int = 1) -> SearchResult:
    h = sys.h
    if h > 64:
        raise SearchError("exhaustive search supports bases of size <= 64")
    part, gens = _row_arrays(sys)
    d = len(sys.kernel)
    low = min(d, _CHUNK_BITS)
    table = part.reshape(1, h)
    for g in gens[:low]:
        table = np.concatenate([table, table ^ g])
    high = gens[low:]
    diag = np.array([1 << i for i in range(h)], dtype=np.uint64)

    def chunk(hi: int):
        off = np.zeros(h, dtype=np.uint64)
        for t in bits_of(hi):
            off ^= high[t]
        rows = table ^ off
        r = batch_rank(rows)
        alt = ~((rows & diag) != 0).any(axis=1)
        obj = objective(r, alt, r == 0)
        best = obj.min()
        if best >= _INFEASIBLE:
            return None
        cand = rows[obj == best]
        keys = _bitrev(cand, h)
        order = np.lexsort(keys.T[::-1])
        win = cand[order[0]]
        return int(best), tuple(int(x) for x in keys[order[0]]), [int(x) for x in win]

    n_high = 1 << (d - low)
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(chunk, range(n_high)))
    else:
        results = [chunk(hi) for hi in range(n_high)]
    best = None
    for res in results:
        if res is not None and (best is None or res[:2] < best[:2]):
            best = res
    evals = 1 << d
    if best is None:
        return SearchResult(None, None, True, evals, "exhaustive")
    return SearchResult(Gf2Matrix(h, h, best[2]), best[0], True, evals, "exhaustive")


def _scalar_eval(rows: list[int], h: int, objective: Callable) -> int:
    r = rank(rows)
    alt = not any((rows[i] >> i) & 1 for i in range(h))
    return int(objective(np.array(r), np.array(alt), np.array(r == 0)))


def _greedy(sys: ConstraintSystem, objective: Callable, restarts: int, budget: int,
            seed: int) -> SearchResult:
    """Random restarts of first-improvement descent over single kernel-generator flips."""
    h = sys.h
    rng = random.Random(seed)
    part = sys.to_rows(sys.particular)
    gens = [sys.to_rows(k) for k in sys.kernel]
    best = None
    evals = 0

    def key(rows):
        return _lex_key(rows, h)

    for _ in range(restarts):
        rows = list(part)
        for g in gens:
            if rng.random() < 0.5:
                rows = [a ^ b for a, b in zip(rows, g)]
        cur = (_scalar_eval(rows, h, objective), key(rows))
        evals += 1
        improved = True
        while improved and evals < budget:
            improved = False
            order = list(range(len(gens)))
            rng.shuffle(order)
            for t in order:
                cand = [a ^ b for a, b in zip(rows, gens[t])]
                val = (_scalar_eval(cand, h, objective), key(cand))
                evals += 1
                if val < cur:
                    rows, cur, improved = cand, val, True
                if evals >= budget:
                    break
        if cur[0] < _INFEASIBLE and (best is None or cur < best[0]):
            best = (cur, rows)
        if evals >= budget:
            break
    if best is None:
        return SearchResult(None, None, False, evals, "random_restart_greedy")
    return SearchResult(Gf2Matrix(h, h, best[1]), best[0][0], False, evals, "random_restart_greedy")


def _run(sys: ConstraintSystem, objective: Callable, strategy: str, budget: int,
         seed: int, threshold: int, threads: int, restarts: int) -> SearchResult:
    if not sys.consistent:
        raise SearchError("the constraint system is inconsistent")
    if strategy == "auto":
        strategy = "exhaustive" if len(sys.kernel) <= threshold else "random_restart_greedy"
    if strategy == "exhaustive":
        return _exhaustive(sys, objective, threads)
    if strategy == "random_restart_greedy":
        return _greedy(sys, objective, restarts, budget, seed)
    raise ValueError(f"unknown strategy {strategy!r}")


def min_rank_over_coset(sys: ConstraintSystem, type_constraint: FormType | None = None,
                        strategy: str = "auto", budget: int = DEFAULT_BUDGET,
                        seed: int = DEFAULT_SEED, threshold: int = EXHAUSTIVE_THRESHOLD,
                        threads: int = 1, restarts: int = DEFAULT_RESTARTS) -> SearchResult:
    """Least rank of a coset element of the requested type (lexicographically least form on ties).

    ``form`` is None when no element of that type was found.
    """
    return _run(sys, _rank_objective(type_constraint), strategy, budget, seed, threshold,
                threads, restarts)


def min_need_over_coset(sys: ConstraintSystem, kind: OmegaKind, strategy: str = "auto",
                        budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                        threshold: int = EXHAUSTIVE_THRESHOLD, threads: int = 1,
                        restarts: int = DEFAULT_RESTARTS) -> SearchResult:
    """Least ``beta`` of the given kind realizing some coset element."""
    return _run(sys, _need_objective(OmegaKind.parse(kind)), strategy, budget, seed, threshold,
                threads, restarts)


# -- search over factors Y ------------------------------------------------

_M55 = np.uint64(0x5555555555555555)


def _omega_apply(x: np.ndarray, kind: OmegaKind) -> np.ndarray:
    if kind is OmegaKind.TYPE_I:
        return x
    return ((x & _M55) << np.uint64(1)) | ((x >> np.uint64(1)) & _M55)


@dataclass
class _Equations:
    words: np.ndarray  # (E, W) uint64
    rhs: np.ndarray  # (E,) uint8
    nwords: int


def _reduced_equations(sys: ConstraintSystem) -> _Equations:
    nv = sys.nvars
    basis = row_basis(m | (r << nv) for m, r in sys.equations)
    w = max(1, (nv + 63) // 64)
    words = np.zeros((len(basis), w), dtype=np.uint64)
    rhs = np.zeros(len(basis), dtype=np.uint8)
    full = (1 << 64) - 1
    for k, v in enumerate(basis.values()):
        rhs[k] = (v >> nv) & 1
        m = v & ((1 << nv) - 1)
        for t in range(w):
            words[k, t] = (m >> (64 * t)) & full
    return _Equations(words, rhs, w)


def _vars_from_columns(sys: ConstraintSystem, cols: np.ndarray, kind: OmegaKind,
                       nwords: int) -> np.ndarray:
    """Upper triangle of ``Y^T Omega Y`` as packed variable vectors; ``cols`` is ``(N, h)``."""
    oc = _omega_apply(cols, kind)
    v = np.zeros((cols.shape[0], nwords), dtype=np.uint64)
    for i in range(sys.h):
        for j in range(i, sys.h):
            t = sys.var(i, j)
            bit = (np.bitwise_count(cols[:, i] & oc[:, j]) & 1).astype(np.uint64)
            v[:, t // 64] |= bit << np.uint64(t % 64)
    return v


def _violations(eqs: _Equations, v: np.ndarray) -> np.ndarray:
    par = np.bitwise_count(v[:, None, :] & eqs.words[None, :, :]).sum(axis=2) & 1
    return (par != eqs.rhs[None, :]).sum(axis=1)


def _columns_to_matrix(cols: np.ndarray, beta: int) -> Gf2Matrix:
    """``beta x h`` matrix whose column ``i`` has bits ``cols[i]``."""
    return Gf2Matrix.from_columns([int(c) for c in cols], beta)


def _equations_by_last_column(sys: ConstraintSystem) -> list[list[tuple[list[tuple[int, int]], int, int]]] | None:
    """Echelon form of the equations grouped by the last column they touch.

    Variables are ordered by their larger index, so every combination of
    equations that only involves columns ``<= c`` is spanned by the rows filed
    under columns ``<= c``.  Each row is ``(earlier pairs, mask on column c, rhs)``.
    None means the equations are contradictory.
    """
    h = sys.h
    order = [(i, j) for j in range(h) for i in range(j + 1)]
    pos = {sys.var(i, j): k for k, (i, j) in enumerate(order)}
    n = len(order)
    pivots: dict[int, int] = {}
    for m, r in sys.equations:
        v = r << n
        for t in bits_of(m):
            v |= 1 << pos[t]
        while v & ((1 << n) - 1):
            top = (v & ((1 << n) - 1)).bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                break
            v ^= pivots[top]
        else:
            if v:
                return None
    by_last: list[list] = [[] for _ in range(h)]
    for top, v in pivots.items():
        c = order[top][1]
        const, lin = [], 0
        for k in bits_of(v & ((1 << n) - 1)):
            i, j = order[k]
            if j == c:
                lin |= 1 << i
            else:
                const.append((i, j))
        by_last[c].append((const, lin, v >> n))
    return by_last


def _backtrack(sys: ConstraintSystem, spec: OmegaSpec, nodes: int) -> tuple[list[int] | None, bool, int]:
    """Depth-first search over the columns of ``Y`` with pruning by complete equations.

    Column ``c`` is tried against all ``2^beta`` values at once; an equation is
    checked as soon as its last column is set.  For the identity form the rows
    of ``Y`` are kept in descending order, which loses nothing since permuting
    rows preserves ``Y^T Y``.  Returns ``(columns, exhausted, nodes used)``.
    """
    h, beta, kind = sys.h, spec.beta, spec.kind
    by_last = _equations_by_last_column(sys)
    if by_last is None:
        return None, True, 0
    vals = np.arange(1 << beta, dtype=np.uint64)
    diag = (np.bitwise_count(vals & _omega_apply(vals, kind)) & 1).astype(np.uint64)
    ordered = kind is OmegaKind.TYPE_I
    cols = [0] * h
    b = [[0] * h for _ in range(h)]
    used = 0

    def rows_ok(groups):
        ok = np.ones(len(vals), dtype=bool)
        for lo, hi in groups:
            if hi - lo > 1:
                x = (vals >> np.uint64(lo)) & np.uint64((1 << (hi - lo)) - 1)
                ok &= (x & (x + np.uint64(1))) == 0
        return ok

    def split(groups, v):
        out = []
        for lo, hi in groups:
            k = sum(v >> r & 1 for r in range(lo, hi))
            out += [(lo, lo + k), (lo + k, hi)] if 0 < k < hi - lo else [(lo, hi)]
        return out

    def rec(c, acc, groups):
        nonlocal used
        if c == h:
            return True
        used += 1
        if used > nodes:
            raise TimeoutError
        # bit i of bc[v] is entry (i, c) of the form when column c is v
        bc = acc | (diag << np.uint64(c))
        ok = rows_ok(groups) if ordered else np.ones(len(vals), dtype=bool)
        for const, lin, r in by_last[c]:
            k = r
            for i, j in const:
                k ^= b[i][j]
            ok &= (np.bitwise_count(bc & np.uint64(lin)) & 1) == k
        for v in np.flatnonzero(ok).tolist():
            cols[c] = v
            for i in range(c + 1):
                b[i][c] = int(bc[v]) >> i & 1
            par = (np.bitwise_count(vals & np.uint64(_omega_int(v, kind))) & 1).astype(np.uint64)
            if rec(c + 1, acc | (par << np.uint64(c)), split(groups, v) if ordered else groups):
                return True
        return False

    try:
        found = rec(0, np.zeros(len(vals), dtype=np.uint64), [(0, beta)])
    except TimeoutError:
        return None, False, used
    return (list(cols) if found else None), True, used


def _omega_int(v: int, kind: OmegaKind) -> int:
    if kind is OmegaKind.TYPE_I:
        return v
    m = 0x5555555555555555
    return ((v & m) << 1) | ((v >> 1) & m)


@dataclass
class FactorResult:
    y: Gf2Matrix | None
    exact: bool
    evaluations: int
    strategy: str


def factor_search(sys: ConstraintSystem, spec: OmegaSpec, strategy: str = "auto",
                  budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                  threshold: int = FACTOR_THRESHOLD, nodes: int = BACKTRACK_NODES) -> FactorResult:
    """Look for ``Y`` (``beta x h``) with ``Y^T Omega Y`` in the solution coset.

    ``exhaustive`` enumerates all ``2^(beta h)`` matrices (the first hit in
    enumeration order is returned, and a miss is a proof).  ``backtrack`` is a
    pruned depth-first search limited to ``nodes`` nodes; it is exact when it
    finishes.  ``walk`` is a noisy steepest-descent walk on the number of
    violated equations, restarted until the budget is spent.  ``auto`` picks
    ``exhaustive`` when ``beta h <= threshold`` and ``walk`` otherwise.
    """
    if not sys.consistent:
        return FactorResult(None, True, 0, "none")
    h, beta, kind = sys.h, spec.beta, spec.kind
    if beta > 64:
        raise SearchError("beta > 64 is not supported")
    eqs = _reduced_equations(sys)
    if strategy == "auto":
        strategy = "exhaustive" if beta * h <= threshold else "walk"
    if strategy == "exhaustive":
        total = 1 << (beta * h)
        step = 1 << 16
        mask = np.uint64((1 << beta) - 1)
        for start in range(0, total, step):
            idx = np.arange(start, min(total, start + step), dtype=np.uint64)
            cols = np.stack([(idx >> np.uint64(beta * i)) & mask for i in range(h)], axis=1)
            vio = _violations(eqs, _vars_from_columns(sys, cols, kind, eqs.nwords))
            hits = np.flatnonzero(vio == 0)
            if hits.size:
                return FactorResult(_columns_to_matrix(cols[hits[0]], beta), True,
                                    start + int(hits[0]) + 1, "factor-exhaustive")
        return FactorResult(None, True, total, "factor-exhaustive")
    if strategy == "backtrack":
        found, done, used = _backtrack(sys, spec, nodes)
        y = None if found is None else _columns_to_matrix(np.array(found, dtype=np.uint64), beta)
        return FactorResult(y, done, used, "factor-backtrack")
    if strategy != "walk":
        raise ValueError(f"unknown strategy {strategy!r}")
    if beta == 0:
        return FactorResult(None, False, 0, "factor-walk")
    rng = np.random.default_rng(seed)
    flips = np.array([(r, i) for r in range(beta) for i in range(h)])
    evals = 0
    while evals < budget:
        cols = rng.integers(0, 1 << beta, size=h, dtype=np.uint64)
        cur = _violations(eqs, _vars_from_columns(sys, cols[None], kind, eqs.nwords))[0]
        for _ in range(4 * beta * h + 200):
            if cur == 0:
                return FactorResult(_columns_to_matrix(cols, beta), False, evals, "factor-walk")
            cand = np.repeat(cols[None], len(flips), axis=0)
            cand[np.arange(len(flips)), flips[:, 1]] ^= (np.uint64(1) << flips[:, 0].astype(np.uint64))
            vio = _violations(eqs, _vars_from_columns(sys, cand, kind, eqs.nwords))
            evals += len(flips)
            if rng.random() < 0.2:
                k = int(rng.integers(len(flips)))
            else:
                k = int(rng.choice(np.flatnonzero(vio == vio.min())))
            cols, cur = cand[k], vio[k]
            if evals >= budget:
                break
        if cur == 0:
            return FactorResult(_columns_to_matrix(cols, beta), False, evals, "factor-walk")
    return FactorResult(None, False, evals, "factor-walk")


# -- certificates ---------------------------------------------------------


def columns_label(cx) -> str:
    if isinstance(cx, JoinComplex):
        return "lexicographic-octahedra"
    if isinstance(cx, KnComplex):
        return "lexicographic-triples"
    return "fundamental-cycles"


@dataclass
class Certificate:
    complex: str
    omega: OmegaSpec
    y: Gf2Matrix
    columns: str
    seed: int = DEFAULT_SEED
    strategy: str = ""

    def to_json(self) -> dict:
        return {
            "complex": self.complex,
            "omega": self.omega.to_json(),
            "Y": self.y.row_strings(),
            "columns": self.columns,
            "seed": self.seed,
            "strategy": self.strategy,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        omega = OmegaSpec.from_json(d["omega"])
        cx = parse_complex(d["complex"])
        ncols = _certificate_columns(cx)
        rows = d["Y"]
        if len(rows) != omega.beta:
            raise SearchError(f"Y has {len(rows)} rows, beta is {omega.beta}")
        y = Gf2Matrix.from_strings(rows, ncols) if rows else Gf2Matrix(0, ncols)
        return cls(d["complex"], omega, y, d.get("columns", columns_label(cx)),
                   int(d.get("seed", DEFAULT_SEED)), d.get("strategy", ""))

    @classmethod
    def loads(cls, text: str) -> "Certificate":
        return cls.from_json(json.loads(text))


def _certificate_columns(cx) -> int:
    if isinstance(cx, Graph):
        return len(chains.fundamental_cycle_basis(cx)[1])
    return len(expansion_columns(cx))


@dataclass
class VerifyReport:
    ok: bool
    checks: dict
    first_violation: str | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "first_violation": self.first_violation}


def verify(cert: Certificate, drawing_seeds: Sequence[int] = (0, 1, 2)) -> VerifyReport:
    """Recompute ``A = Y^T Omega Y`` and check every condition, plus ``v = y^2`` on generators."""
    cx = parse_complex(cert.complex)
    omega = cert.omega.matrix()
    if cert.columns != columns_label(cx):
        return VerifyReport(False, {}, f"columns must be {columns_label(cx)}")
    if cert.y.cols != _certificate_columns(cx):
        return VerifyReport(False, {}, "wrong number of columns in Y")
    if isinstance(cx, Graph):
        rep = graph_criterion_check(cx, cert.y, omega)
        y = face_map_from_hom(cert.y, cx)
        rp = check_R_prime(cx, y, omega, drawing_seeds)
        checks = {"graph": rep.to_json(), "R_prime": rp.ok}
        ok = rep.verdict == "pass" and rp.ok
        first = None
        if not ok:
            first = (f"graph criterion {rep.verdict}: {rep.to_json()['violations']}"
                     if rep.verdict != "pass" else f"v != y^2 at {rp.failing[0]['generator_id']}")
        return VerifyReport(ok, checks, first)
    a = OctMatrix(cx, gram(cert.y, cert.omega))
    results = {
        "independent": is_independent(a),
        "additive": is_additive(a),
        "nontrivial": is_nontrivial(a, "all"),
    }
    y = face_map_from_Y(cert.y, cx)
    rp = check_R_prime(cx, y, omega, drawing_seeds)
    checks = {k: v.ok for k, v in results.items()}
    checks["R_prime"] = rp.ok
    first = None
    for name, res in results.items():
        if not res.ok:
            first = f"{name}: {res.violations[0]}"
            break
    if first is None and not rp.ok:
        first = f"R_prime: v != y^2 at {rp.failing[0]['generator_id']}"
    return VerifyReport(all(checks.values()), checks, first)


# -- decisions ------------------------------------------------------------

YES, NO, UNKNOWN = "Yes", "No", "Unknown"


@dataclass
class Decision:
    verdict: str
    spec: OmegaSpec
    certificate: Certificate | None = None
    min_beta: int | None = None
    exact: bool = False
    reason: str = ""
    coset_dimension: int | None = None

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "omega": self.spec.to_json(),
            "min_beta": self.min_beta,
            "exact": self.exact,
            "coset_dimension": self.coset_dimension,
            "reason": self.reason,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def certificate_from_form(cx, b: Gf2Matrix, spec: OmegaSpec, seed: int, strategy: str) -> Certificate:
    return certificate_from_factor(cx, construct_Y(b, spec), spec, seed, strategy)


def certificate_from_factor(cx, y_b: Gf2Matrix, spec: OmegaSpec, seed: int, strategy: str) -> Certificate:
    """Certificate whose columns are the values on every index cycle (basis values for graphs)."""
    y = y_b if isinstance(cx, Graph) else y_b @ expansion_matrix(cx)
    return Certificate(descriptor(cx), spec, y, columns_label(cx), seed, strategy)


def _yes(sys: ConstraintSystem, spec: OmegaSpec, cert: Certificate, value, exact, reason) -> Decision:
    if sys.truncated:
        return Decision(UNKNOWN, spec, min_beta=value, exact=False, coset_dimension=len(sys.kernel),
                        reason="constraint enumeration was truncated")
    report = verify(cert)
    if not report.ok:
        raise SearchError(f"internal error: certificate failed verification: {report.first_violation}")
    return Decision(YES, spec, cert, value, exact, reason, len(sys.kernel))


def decide(cx, spec: OmegaSpec, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
           threshold: int = EXHAUSTIVE_THRESHOLD, threads: int = 1,
           restarts: int = DEFAULT_RESTARTS, system: ConstraintSystem | None = None,
           factor_threshold: int = FACTOR_THRESHOLD, nodes: int = BACKTRACK_NODES) -> Decision:
    """Yes with a verified certificate, No from an exhausted search, or Unknown.

    Small cosets are enumerated completely.  Otherwise all factors ``Y`` are
    enumerated when ``beta h`` is small, or searched by backtracking within
    ``nodes`` nodes.  When that runs out the heuristics run and a miss gives
    Unknown.
    """
    sys = system or build_system(cx)
    if not sys.consistent:
        return Decision(NO, spec, exact=True, reason="NoForAllBeta: non-triviality is unachievable")
    dim = len(sys.kernel)
    if dim <= threshold:
        res = min_need_over_coset(sys, spec.kind, strategy="exhaustive", threads=threads)
        if res.form is not None and res.value <= spec.beta:
            cert = certificate_from_form(cx, res.form, spec, seed, res.strategy)
            return _yes(sys, spec, cert, res.value, True, f"form of rank {rank(res.form)} realized")
        why = ("no coset element is realizable with this kind" if res.form is None
               else f"exhausted coset: least beta is {res.value}")
        return Decision(NO, spec, min_beta=res.value, exact=True, coset_dimension=dim, reason=why)
    if spec.beta * sys.h <= factor_threshold:
        fr = factor_search(sys, spec, "exhaustive")
        if fr.y is not None:
            cert = certificate_from_factor(cx, fr.y, spec, seed, fr.strategy)
            return _yes(sys, spec, cert, None, False, "factor found by enumeration")
        return Decision(NO, spec, exact=True, coset_dimension=dim,
                        reason=f"exhausted all {spec.beta}x{sys.h} factors")
    fr = factor_search(sys, spec, "backtrack", nodes=nodes)
    if fr.y is not None:
        cert = certificate_from_factor(cx, fr.y, spec, seed, fr.strategy)
        return _yes(sys, spec, cert, None, False, "factor found by backtracking")
    if fr.exact:
        return Decision(NO, spec, exact=True, coset_dimension=dim,
                        reason=f"backtracking exhausted all {spec.beta}x{sys.h} factors")
    fr = factor_search(sys, spec, "walk", budget=budget, seed=seed)
    if fr.y is not None:
        cert = certificate_from_factor(cx, fr.y, spec, seed, fr.strategy)
        return _yes(sys, spec, cert, None, False, "factor found by local search")
    res = min_need_over_coset(sys, spec.kind, strategy="random_restart_greedy", budget=budget,
                              seed=seed, restarts=restarts)
    if res.form is not None and res.value <= spec.beta:
        cert = certificate_from_form(cx, res.form, spec, seed, res.strategy)
        return _yes(sys, spec, cert, res.value, False, f"form of rank {rank(res.form)} realized")
    why = ("no realizable element found" if res.form is None
           else f"best upper bound on beta is {res.value}")
    return Decision(UNKNOWN, spec, min_beta=res.value, exact=False, coset_dimension=dim, reason=why)


@dataclass
class TableRow:
    instance: str
    kind: str
    min_beta: int | None
    exact: bool

    def to_json(self) -> dict:
        return {"instance": self.instance, "kind": self.kind, "min_beta": self.min_beta,
                "exact": self.exact}


def min_beta_for(cx, kind: OmegaKind | str, budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                 threshold: int = EXHAUSTIVE_THRESHOLD, factor_threshold: int = FACTOR_THRESHOLD,
                 threads: int = 1, system: ConstraintSystem | None = None,
                 nodes: int = BACKTRACK_NODES) -> tuple[int | None, bool]:
    """Least beta of the given kind and whether it is proven minimal.

    None means no beta was found (always the case for an inconsistent system).
    """
    kind = OmegaKind.parse(kind)
    sys = system or build_system(cx)
    if not sys.consistent:
        return None, True
    if len(sys.kernel) <= threshold:
        res = min_need_over_coset(sys, kind, strategy="exhaustive", threads=threads)
        return res.value, not sys.truncated
    upper = min_need_over_coset(sys, kind, strategy="random_restart_greedy", budget=budget,
                                seed=seed)
    step = 2 if kind is OmegaKind.TYPE_H else 1
    proven = True
    beta = 0
    while upper.value is None or beta < upper.value:
        if upper.value is None and beta > 2 * sys.h + 2:
            return None, False
        spec = OmegaSpec(kind, beta)
        if beta * sys.h <= factor_threshold:
            fr = factor_search(sys, spec, "exhaustive")
        else:
            fr = factor_search(sys, spec, "backtrack", nodes=nodes)
            if fr.y is None and not fr.exact:
                fr = factor_search(sys, spec, "walk", budget=budget, seed=seed)
        if fr.y is not None:
            return beta, proven and not sys.truncated
        proven = proven and fr.exact
        beta += step
    return upper.value, proven and not sys.truncated


def tabulate_min_beta(family: Iterable, kinds: Sequence[str] = ("I", "H"),
                      budget: int = DEFAULT_BUDGET, seed: int = DEFAULT_SEED,
                      threshold: int = EXHAUSTIVE_THRESHOLD, threads: int = 1,
                      nodes: int = BACKTRACK_NODES) -> list[TableRow]:
    """Least beta per instance and kind; ``exact`` is False for heuristic upper bounds."""
    rows = []
    for cx in family:
        if isinstance(cx, str):
            cx = parse_complex(cx)
        sys = build_system(cx)
        for kind in kinds:
            value, exact = min_beta_for(cx, kind, budget, seed, threshold, threads=threads, system=sys,
                                        nodes=nodes)
            rows.append(TableRow(descriptor(cx), OmegaKind.parse(kind).value, value, exact))
    return rows
