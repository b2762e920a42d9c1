"""Dense bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python integers: bit ``j`` of a row is
the entry in column ``j``.  Integers are arbitrary precision, so a row of any
width is a single packed word sequence and XOR of two rows is one operation.
Everything here is exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence


class Gf2Error(ValueError):
    """Raised on shape mismatches and other misuse of the GF(2) routines."""


def _mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class Gf2Vector:
    bits: int
    len: int

    def __post_init__(self):
        if self.len < 0:
            raise Gf2Error("negative length")
        if self.bits < 0 or self.bits >> self.len:
            raise Gf2Error("bits outside vector length")

    @classmethod
    def zeros(cls, n: int) -> "Gf2Vector":
        return cls(0, n)

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "Gf2Vector":
        bits = 0
        for j, x in enumerate(entries):
            if x & 1:
                bits |= 1 << j
        return cls(bits, len(entries))

    @classmethod
    def from_str(cls, s: str) -> "Gf2Vector":
        return cls.from_list([int(c) for c in s.strip()])

    def to_list(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.len)]

    def __str__(self) -> str:
        return "".join(str(x) for x in self.to_list())

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.len:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __add__(self, other: "Gf2Vector") -> "Gf2Vector":
        if self.len != other.len:
            raise Gf2Error("length mismatch")
        return Gf2Vector(self.bits ^ other.bits, self.len)

    __xor__ = __add__

    def dot(self, other: "Gf2Vector") -> int:
        if self.len != other.len:
            raise Gf2Error("length mismatch")
        return (self.bits & other.bits).bit_count() & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0


class Gf2Matrix:
    """A ``rows x cols`` matrix over GF(2) with bit-packed rows.

    Instances are treated as immutable; every operation returns a new matrix.
    """

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: Iterable[int] | None = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = tuple([0] * rows)
        else:
            self.data = tuple(data)
            if len(self.data) != rows:
                raise Gf2Error(f"expected {rows} rows, got {len(self.data)}")
            m = _mask(cols)
            for r in self.data:
                if r < 0 or r & ~m:
                    raise Gf2Error("row has bits outside the column range")

    # -- construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Gf2Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Gf2Matrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def hyperbolic(cls, g: int) -> "Gf2Matrix":
        """``H_g``: ``g`` diagonal copies of [[0, 1], [1, 0]]."""
        data = []
        for i in range(g):
            data.append(1 << (2 * i + 1))
            data.append(1 << (2 * i))
        return cls(2 * g, 2 * g, data)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> "Gf2Matrix":
        if cols is None:
            cols = len(entries[0]) if entries else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise Gf2Error("ragged matrix")
            data.append(Gf2Vector.from_list(row).bits)
        return cls(len(entries), cols, data)

    @classmethod
    def from_strings(cls, rows: Sequence[str], cols: int | None = None) -> "Gf2Matrix":
        return cls.from_lists([[int(c) for c in r.strip()] for r in rows], cols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "Gf2Matrix":
        """Build a matrix whose ``j``-th column has the bits of ``columns[j]``."""
        return cls(len(columns), rows, columns).T

    @classmethod
    def parse(cls, text: str) -> "Gf2Matrix":
        """Parse the text format: a ``rows cols`` header, then one 0/1 string per row."""
        lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not lines:
            raise Gf2Error("empty matrix text")
        try:
            rows, cols = (int(x) for x in lines[0].split())
        except ValueError as exc:
            raise Gf2Error(f"bad header line {lines[0]!r}") from exc
        body = lines[1:]
        if len(body) != rows:
            raise Gf2Error(f"header says {rows} rows, found {len(body)}")
        for ln in body:
            if len(ln) != cols or set(ln) - {"0", "1"}:
                raise Gf2Error(f"bad row {ln!r}")
        return cls.from_strings(body, cols)

    def format(self) -> str:
        return "\n".join([f"{self.rows} {self.cols}", *self.row_strings()]) + "\n"

    def row_strings(self) -> list[str]:
        return [str(Gf2Vector(r, self.cols)) for r in self.data]

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.data[i] >> j) & 1

    def row(self, i: int) -> Gf2Vector:
        return Gf2Vector(self.data[i], self.cols)

    def col(self, j: int) -> Gf2Vector:
        bits = 0
        for i, r in enumerate(self.data):
            if (r >> j) & 1:
                bits |= 1 << i
        return Gf2Vector(bits, self.rows)

    def to_lists(self) -> list[list[int]]:
        return [Gf2Vector(r, self.cols).to_list() for r in self.data]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.data))

    def __repr__(self) -> str:
        return f"Gf2Matrix({self.rows}x{self.cols}, {self.row_strings()})"

    def is_zero(self) -> bool:
        return not any(self.data)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.T

    def diagonal(self) -> list[int]:
        return [(self.data[i] >> i) & 1 for i in range(min(self.rows, self.cols))]

    # -- arithmetic -------------------------------------------------------

    @property
    def T(self) -> "Gf2Matrix":
        cols = [0] * self.cols
        for i, r in enumerate(self.data):
            bit = 1 << i
            while r:
                low = r & -r
                cols[low.bit_length() - 1] |= bit
                r ^= low
        return Gf2Matrix(self.cols, self.rows, cols)

    def __add__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.shape != other.shape:
            raise Gf2Error(f"shape mismatch {self.shape} vs {other.shape}")
        return Gf2Matrix(self.rows, self.cols, [a ^ b for a, b in zip(self.data, other.data)])

    def __matmul__(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.rows:
            raise Gf2Error(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.data:
            acc = 0
            while r:
                low = r & -r
                acc ^= other.data[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return Gf2Matrix(self.rows, other.cols, out)

    def apply(self, v: Gf2Vector) -> Gf2Vector:
        """Matrix-vector product ``M v``."""
        if v.len != self.cols:
            raise Gf2Error("vector length does not match column count")
        bits = 0
        for i, r in enumerate(self.data):
            if (r & v.bits).bit_count() & 1:
                bits |= 1 << i
        return Gf2Vector(bits, self.rows)

    def bilinear(self, x: Gf2Vector, y: Gf2Vector) -> int:
        """``x^T M y``."""
        return x.dot(self.apply(y))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Gf2Matrix":
        out = []
        for i in rows:
            r = self.data[i]
            bits = 0
            for jj, j in enumerate(cols):
                if (r >> j) & 1:
                    bits |= 1 << jj
            out.append(bits)
        return Gf2Matrix(len(rows), len(cols), out)

    def hstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.rows != other.rows:
            raise Gf2Error("row count mismatch")
        return Gf2Matrix(self.rows, self.cols + other.cols,
                         [a | (b << self.cols) for a, b in zip(self.data, other.data)])

    def vstack(self, other: "Gf2Matrix") -> "Gf2Matrix":
        if self.cols != other.cols:
            raise Gf2Error("column count mismatch")
        return Gf2Matrix(self.rows + other.rows, self.cols, self.data + other.data)

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "Gf2Matrix":
        return inverse(self)


# -- elimination ----------------------------------------------------------


def row_basis(rows: Iterable[int]) -> dict[int, int]:
    """Reduce integer rows to an echelon basis keyed by pivot bit.

    The pivot of a stored row is its lowest set bit and pivots are pairwise
    distinct, so the stored rows are independent.  Returns a dict
    ``{pivot_bit_index: row}`` in insertion order.
    """
    basis: dict[int, int] = {}
    for v in rows:
        v = reduce_against(v, basis)
        if v:
            basis[(v & -v).bit_length() - 1] = v
    return basis


def reduce_against(v: int, basis: dict[int, int]) -> int:
    """Clear pivots from the low end of ``v``; stop at the first non-pivot bit.

    The result is 0 iff ``v`` lies in the span of ``basis``.
    """
    while v:
        b = basis.get((v & -v).bit_length() - 1)
        if b is None:
            return v
        v ^= b
    return 0


def rank(m: Gf2Matrix | Sequence[int]) -> int:
    """Dimension of the row space (equivalently the column space)."""
    rows = m.data if isinstance(m, Gf2Matrix) else m
    return len(row_basis(rows))


def rref(m: Gf2Matrix) -> tuple[Gf2Matrix, list[int]]:
    """Reduced row echelon form with pivots at the lowest-index nonzero column.

    Returns the reduced matrix (zero rows at the bottom) and the pivot columns
    in increasing order.
    """
    rows = list(m.data)
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        bit = 1 << c
        piv = next((i for i in range(r, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i] & bit:
                rows[i] ^= pr
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return Gf2Matrix(m.rows, m.cols, rows), pivots


def kernel_basis(m: Gf2Matrix) -> list[Gf2Vector]:
    """Basis of ``{x : M x = 0}``, one vector per free column (ascending)."""
    red, pivots = rref(m)
    pivset = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        bits = 1 << f
        for i, p in enumerate(pivots):
            if (red.data[i] >> f) & 1:
                bits |= 1 << p
        basis.append(Gf2Vector(bits, m.cols))
    return basis


def solve_affine(m: Gf2Matrix, b: Gf2Vector) -> tuple[Gf2Vector, list[Gf2Vector]] | None:
    """Solve ``M x = b``.

    Returns ``None`` when the system is inconsistent, otherwise a particular
    solution (free variables set to 0) and a basis of ``Ker M``.
    """
    if m.rows != b.len:
        raise Gf2Error(f"matrix has {m.rows} rows but right-hand side has length {b.len}")
    aug = Gf2Matrix(m.rows, m.cols + 1,
                    [r | (((b.bits >> i) & 1) << m.cols) for i, r in enumerate(m.data)])
    red, pivots = rref(aug)
    if pivots and pivots[-1] == m.cols:
        return None
    x = 0
    for i, p in enumerate(pivots):
        if (red.data[i] >> m.cols) & 1:
            x |= 1 << p
    coeff = Gf2Matrix(m.rows, m.cols, [r & _mask(m.cols) for r in red.data])
    pivset = set(pivots)
    kernel = []
    for f in range(m.cols):
        if f in pivset:
            continue
        bits = 1 << f
        for i, p in enumerate(pivots):
            if (coeff.data[i] >> f) & 1:
                bits |= 1 << p
        kernel.append(Gf2Vector(bits, m.cols))
    return Gf2Vector(x, m.cols), kernel


def inverse(m: Gf2Matrix) -> Gf2Matrix:
    if m.rows != m.cols:
        raise Gf2Error("only square matrices are invertible")
    n = m.rows
    aug = m.hstack(Gf2Matrix.identity(n))
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise Gf2Error("matrix is singular")
    return Gf2Matrix(n, n, [r >> n for r in red.data])


def in_span(v: int, basis: dict[int, int]) -> bool:
    return reduce_against(v, basis) == 0


# -- symmetric forms ------------------------------------------------------


class FormType(enum.Enum):
    ALTERNATING = "Alternating"
    NON_ALTERNATING = "NonAlternating"


def _require_symmetric(a: Gf2Matrix) -> None:
    if not a.is_symmetric():
        raise Gf2Error("matrix is not symmetric")


def form_type(a: Gf2Matrix) -> FormType:
    _require_symmetric(a)
    if any(a.diagonal()):
        return FormType.NON_ALTERNATING
    return FormType.ALTERNATING


@dataclass(frozen=True)
class NormalForm:
    ones: int
    hyperbolic_pairs: int
    zeros: int

    def matrix(self) -> Gf2Matrix:
        """Block-diagonal ``I_ones (+) H_pairs (+) 0``."""
        n = self.ones + 2 * self.hyperbolic_pairs + self.zeros
        data = [1 << i for i in range(self.ones)]
        base = self.ones
        for p in range(self.hyperbolic_pairs):
            i = base + 2 * p
            data += [1 << (i + 1), 1 << i]
        data += [0] * self.zeros
        return Gf2Matrix(n, n, data)


def congruence_normal_form(a: Gf2Matrix) -> tuple[Gf2Matrix, NormalForm]:
    """Find invertible ``S`` with ``S^T A S`` block diagonal.

    The blocks are ``ones`` copies of [1], then ``hyperbolic_pairs`` copies of
    [[0, 1], [1, 0]], then a zero block.  Works by the symmetric sweep: take a
    diagonal 1 when one remains, otherwise an off-diagonal 1.
    """
    _require_symmetric(a)
    n = a.rows
    # columns of S as bit-packed vectors; the working form is kept as rows
    s_cols = [1 << i for i in range(n)]
    w = [list(row) for row in a.to_lists()]

    def swap(i: int, j: int) -> None:
        if i == j:
            return
        s_cols[i], s_cols[j] = s_cols[j], s_cols[i]
        w[i], w[j] = w[j], w[i]
        for row in w:
            row[i], row[j] = row[j], row[i]

    def add_to(j: int, i: int) -> None:
        # basis change e_j <- e_j + e_i
        s_cols[j] ^= s_cols[i]
        for c in range(n):
            w[j][c] ^= w[i][c]
        for r in range(n):
            w[r][j] ^= w[r][i]

    ones = pairs = 0
    p = 0
    while p < n:
        d = next((i for i in range(p, n) if w[i][i]), None)
        if d is not None:
            swap(p, d)
            for j in range(p + 1, n):
                if w[p][j]:
                    add_to(j, p)
            ones += 1
            p += 1
            continue
        off = next(((i, j) for i in range(p, n) for j in range(i + 1, n) if w[i][j]), None)
        if off is None:
            break
        i, j = off
        swap(p, i)
        swap(p + 1, j)
        for l in range(p + 2, n):
            if w[p][l]:
                add_to(l, p + 1)
            if w[p + 1][l]:
                add_to(l, p)
        pairs += 1
        p += 2
    s = Gf2Matrix.from_columns(s_cols, n)
    return s, NormalForm(ones, pairs, n - ones - 2 * pairs)
