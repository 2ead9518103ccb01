"""Exact dense matrices over a finite field.

Entries are raw ints in [0, q); every matrix owns a Field reference.
Elimination uses the first nonzero entry in column order as the pivot, so
all results are deterministic.
"""

from __future__ import annotations

import struct

from .errors import DimensionMismatch, FieldMismatch, Inconsistent, Singular
from .gf import Fe, Field


class Mat:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: list[list[int]]):
        self.field = field
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        self.data = data

    # -- constructors --

    @classmethod
    def from_rows(cls, field: Field, rows) -> "Mat":
        data = [[int(v) % field.q for v in row] for row in rows]
        if data and any(len(r) != len(data[0]) for r in data):
            raise DimensionMismatch("ragged rows")
        return cls(field, data)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        return cls(field, [[0] * cols for _ in range(rows)])

    # -- basics --

    def copy(self) -> "Mat":
        return Mat(self.field, [row[:] for row in self.data])

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.field == other.field
                and self.data == other.data)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.data[i][j]

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols} over {self.field})"

    def row(self, i: int) -> list[int]:
        return self.data[i][:]

    def col(self, j: int) -> list[int]:
        return [row[j] for row in self.data]

    def _check_field(self, other: "Mat"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    # -- arithmetic --

    def add(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("add: shape mismatch")
        f = self.field
        return Mat(f, [[f.add(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)])

    def sub(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("sub: shape mismatch")
        f = self.field
        return Mat(f, [[f.sub(a, b) for a, b in zip(ra, rb)]
                       for ra, rb in zip(self.data, other.data)])

    def scale(self, x) -> "Mat":
        f = self.field
        if isinstance(x, Fe):
            if x.field != f:
                raise FieldMismatch("scale: foreign element")
            x = x.value
        x %= f.q
        return Mat(f, [[f.mul(x, v) for v in row] for row in self.data])

    def mul(self, other: "Mat") -> "Mat":
        self._check_field(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"mul: {self.cols} vs {other.rows}")
        f = self.field
        bt = [other.col(j) for j in range(other.cols)]
        out = []
        for row in self.data:
            orow = []
            for colv in bt:
                acc = 0
                for a, b in zip(row, colv):
                    if a and b:
                        acc = f.add(acc, f.mul(a, b))
                orow.append(acc)
            out.append(orow)
        return Mat(f, out)

    def mul_vec(self, v: list[int]) -> list[int]:
        if self.cols != len(v):
            raise DimensionMismatch(f"mul_vec: {self.cols} vs {len(v)}")
        f = self.field
        out = []
        for row in self.data:
            acc = 0
            for a, b in zip(row, v):
                if a and b:
                    acc = f.add(acc, f.mul(a, b))
            out.append(acc)
        return out

    def transpose(self) -> "Mat":
        return Mat(self.field, [list(col) for col in zip(*self.data)] if self.rows else [])


def vstack(mats: list[Mat]) -> Mat:
    f = mats[0].field
    cols = mats[0].cols
    for m in mats[1:]:
        if m.field != f:
            raise FieldMismatch("vstack")
        if m.cols != cols:
            raise DimensionMismatch("vstack: column mismatch")
    return Mat(f, [row[:] for m in mats for row in m.data])


def hstack(mats: list[Mat]) -> Mat:
    f = mats[0].field
    rows = mats[0].rows
    for m in mats[1:]:
        if m.field != f:
            raise FieldMismatch("hstack")
        if m.rows != rows:
            raise DimensionMismatch("hstack: row mismatch")
    return Mat(f, [sum((m.data[i] for m in mats), []) for i in range(rows)])


def block(grid: list[list[Mat]]) -> Mat:
    """Assemble a grid of blocks; an r x n grid of N x N blocks gives rN x nN."""
    return vstack([hstack(row) for row in grid])


def _eliminate(data, field, ncols_limit=None, track_det=False):
    """In-place forward+backward elimination.

    Returns (pivot_cols, det_or_None).  Pivoting: first row with a nonzero
    entry in the current column.  Columns beyond ncols_limit are carried
    along (augmented part) but never pivoted on.
    """
    rows = len(data)
    cols = len(data[0]) if rows else 0
    limit = cols if ncols_limit is None else ncols_limit
    f = field
    pivots = []
    det = 1
    rank = 0
    for col in range(limit):
        piv = None
        for i in range(rank, rows):
            if data[i][col]:
                piv = i
                break
        if piv is None:
            if track_det:
                det = 0
            continue
        if piv != rank:
            data[rank], data[piv] = data[piv], data[rank]
            if track_det:
                det = f.neg(det)
        pv = data[rank][col]
        if track_det:
            det = f.mul(det, pv)
        inv = f.inv(pv)
        if pv != 1:
            data[rank] = [f.mul(inv, v) for v in data[rank]]
        for i in range(rows):
            if i != rank and data[i][col]:
                factor = data[i][col]
                ri, rp = data[i], data[rank]
                data[i] = [f.sub(a, f.mul(factor, b)) for a, b in zip(ri, rp)]
        pivots.append(col)
        rank += 1
    return pivots, (det if track_det else None)


def rank(M: Mat) -> int:
    data = [row[:] for row in M.data]
    pivots, _ = _eliminate(data, M.field)
    return len(pivots)


def det(M: Mat) -> int:
    if M.rows != M.cols:
        raise DimensionMismatch("det: non-square")
    data = [row[:] for row in M.data]
    pivots, d = _eliminate(data, M.field, track_det=True)
    return d if len(pivots) == M.rows else 0


def invert(M: Mat) -> Mat:
    if M.rows != M.cols:
        raise DimensionMismatch("invert: non-square")
    n = M.rows
    data = [M.data[i][:] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivots, _ = _eliminate(data, M.field, ncols_limit=n)
    if len(pivots) != n:
        raise Singular(f"matrix of rank {len(pivots)} < {n}")
    return Mat(M.field, [row[n:] for row in data])


def solve(M: Mat, b: list[int]) -> tuple[list[int], bool]:
    """One solution of M x = b with free variables set to zero.

    Returns (x, unique).  Raises Inconsistent when no solution exists.
    """
    x, unique = solve_many(M, Mat(M.field, [[v] for v in b]))
    return x.col(0), unique


def solve_many(M: Mat, B: Mat) -> tuple[Mat, bool]:
    """Solve M X = B column-wise; one elimination for all right-hand sides."""
    if M.rows != B.rows:
        raise DimensionMismatch("solve: rhs height mismatch")
    n = M.cols
    data = [M.data[i][:] + B.data[i][:] for i in range(M.rows)]
    pivots, _ = _eliminate(data, M.field, ncols_limit=n)
    rk = len(pivots)
    for i in range(rk, M.rows):
        if any(data[i][n:]):
            raise Inconsistent("no solution")
    out = [[0] * B.cols for _ in range(n)]
    for rowi, col in enumerate(pivots):
        out[col] = data[rowi][n:]
    return Mat(M.field, out), rk == n


def kernel(M: Mat) -> list[list[int]]:
    """A basis of the right null space (empty list when trivial)."""
    f = M.field
    data = [row[:] for row in M.data]
    pivots, _ = _eliminate(data, f)
    pivset = set(pivots)
    free = [j for j in range(M.cols) if j not in pivset]
    basis = []
    for fv in free:
        vec = [0] * M.cols
        vec[fv] = 1
        for rowi, col in enumerate(pivots):
            vec[col] = f.neg(data[rowi][fv])
        basis.append(vec)
    return basis


# -- serialization: u32le rows, u32le cols, then row-major u16le symbols --

def mat_to_bytes(M: Mat) -> bytes:
    flat = [v for row in M.data for v in row]
    return struct.pack("<II", M.rows, M.cols) + struct.pack(f"<{len(flat)}H", *flat)


def mat_from_bytes(field: Field, buf: bytes) -> Mat:
    rows, cols = struct.unpack_from("<II", buf, 0)
    n = rows * cols
    flat = struct.unpack_from(f"<{n}H", buf, 8)
    if any(v >= field.q for v in flat):
        raise ValueError("symbol out of field range")
    it = iter(flat)
    return Mat(field, [[next(it) for _ in range(cols)] for _ in range(rows)])
