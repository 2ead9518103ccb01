"""Structured N x N block matrices and row-selector shapes.

Parity-check blocks in this code family are (scaled) monomial matrices:
diagonal for the eigenvector constructions, single-digit-shift permutations
for the shift constructions, and genuinely dense only for the long base
code.  Keeping the structure explicit lets verification run on index sets
instead of dense algebra, which is what makes sub-packetization levels in
the hundreds of thousands tractable.

Monomial convention: row a holds `scales[a]` in column `perm[a]`.
"""

from __future__ import annotations

import numpy as np

from . import bulk
from .errors import DimensionMismatch, TooLarge
from .gf import Field
from .linalg import Mat

# largest N that is ever expanded to a dense matrix
DENSE_N_CAP = 4096


def _as_array(values) -> np.ndarray:
    return np.asarray(values, dtype=np.int64)


class DiagonalBlock:
    __slots__ = ("n", "scales")

    def __init__(self, scales):
        self.scales = _as_array(scales)
        self.n = int(self.scales.shape[0])

    perm = property(lambda self: np.arange(self.n, dtype=np.int64))

    def is_diagonal(self) -> bool:
        return True

    def power(self, t: int, field: Field) -> "DiagonalBlock":
        return DiagonalBlock(bulk.np_pow(field, self.scales, t))

    def scaled(self, x: int, field: Field) -> "DiagonalBlock":
        return DiagonalBlock(bulk.np_mul(field, self.scales, np.int64(x)))

    def to_mat(self, field: Field) -> Mat:
        _cap(self.n)
        data = [[0] * self.n for _ in range(self.n)]
        for a, s in enumerate(self.scales.tolist()):
            data[a][a] = s
        return Mat(field, data)

    def __eq__(self, other):
        if isinstance(other, DiagonalBlock):
            return np.array_equal(self.scales, other.scales)
        if isinstance(other, PermutationBlock):
            return other == self
        return NotImplemented


class PermutationBlock:
    """Scaled permutation: row a -> scales[a] at column perm[a].

    `shift_axis` records, when known, that perm substitutes digit
    `shift_axis` of the row index by +`shift_step` (mod r); the structured
    verifier uses it to factor determinants over digit orbits.
    """

    __slots__ = ("n", "perm", "scales", "shift_axis", "shift_step")

    def __init__(self, perm, scales, shift_axis=None, shift_step=0):
        self.perm = _as_array(perm)
        self.scales = _as_array(scales)
        self.n = int(self.perm.shape[0])
        if self.scales.shape[0] != self.n:
            raise DimensionMismatch("permutation/scale length mismatch")
        self.shift_axis = shift_axis
        self.shift_step = shift_step

    def is_diagonal(self) -> bool:
        return bool(np.array_equal(self.perm, np.arange(self.n)))

    def power(self, t: int, field: Field) -> "PermutationBlock":
        perm = np.arange(self.n, dtype=np.int64)
        scales = np.ones(self.n, dtype=np.int64)
        for _ in range(t):
            scales = bulk.np_mul(field, scales, self.scales[perm])
            perm = self.perm[perm]
        axis = self.shift_axis
        return PermutationBlock(perm, scales, axis, (self.shift_step * t) if axis is not None else 0)

    def scaled(self, x: int, field: Field) -> "PermutationBlock":
        return PermutationBlock(self.perm, bulk.np_mul(field, self.scales, np.int64(x)),
                                self.shift_axis, self.shift_step)

    def to_mat(self, field: Field) -> Mat:
        _cap(self.n)
        data = [[0] * self.n for _ in range(self.n)]
        for a, (c, s) in enumerate(zip(self.perm.tolist(), self.scales.tolist())):
            data[a][c] = s
        return Mat(field, data)

    def __eq__(self, other):
        if isinstance(other, PermutationBlock):
            return (np.array_equal(self.perm, other.perm)
                    and np.array_equal(self.scales, other.scales))
        if isinstance(other, DiagonalBlock):
            return self.is_diagonal() and np.array_equal(self.scales, other.scales)
        return NotImplemented


class DenseBlock:
    __slots__ = ("n", "mat")

    def __init__(self, mat: Mat):
        if mat.rows != mat.cols:
            raise DimensionMismatch("blocks are square")
        self.mat = mat
        self.n = mat.rows

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, row in enumerate(self.mat.data)
                   for j, v in enumerate(row) if i != j)

    def power(self, t: int, field: Field) -> "DenseBlock":
        out = Mat.identity(field, self.n)
        for _ in range(t):
            out = out.mul(self.mat)
        return DenseBlock(out)

    def scaled(self, x: int, field: Field) -> "DenseBlock":
        return DenseBlock(self.mat.scale(x))

    def to_mat(self, field: Field) -> Mat:
        return self.mat

    def __eq__(self, other):
        if isinstance(other, DenseBlock):
            return self.mat == other.mat
        if isinstance(other, (DiagonalBlock, PermutationBlock)):
            return self.mat == other.to_mat(self.mat.field)
        return NotImplemented


def identity_block(n: int) -> DiagonalBlock:
    return DiagonalBlock(np.ones(n, dtype=np.int64))


def is_monomial(block) -> bool:
    return isinstance(block, (DiagonalBlock, PermutationBlock))


def _cap(n: int):
    if n > DENSE_N_CAP:
        raise TooLarge(f"refusing to densify an N={n} block (cap {DENSE_N_CAP})")


# -- row selectors used by select/repair rules --------------------------------


class SelectionRows:
    """Rows are standard basis rows for `indices` (ascending)."""

    __slots__ = ("ncols", "indices")

    def __init__(self, ncols: int, indices):
        self.ncols = ncols
        self.indices = _as_array(indices)

    @property
    def nrows(self) -> int:
        return int(self.indices.shape[0])

    def rank(self) -> int:
        return self.nrows

    def to_mat(self, field: Field) -> Mat:
        _cap(self.ncols)
        data = []
        for a in self.indices.tolist():
            row = [0] * self.ncols
            row[a] = 1
            data.append(row)
        return Mat(field, data)

    def __eq__(self, other):
        if isinstance(other, SelectionRows):
            return self.ncols == other.ncols and np.array_equal(self.indices, other.indices)
        return NotImplemented


class IdentityRows:
    """Marker for an identity repair matrix (download the whole column)."""

    __slots__ = ("ncols",)

    def __init__(self, ncols: int):
        self.ncols = ncols

    nrows = property(lambda self: self.ncols)

    def rank(self) -> int:
        return self.ncols

    def to_mat(self, field: Field) -> Mat:
        _cap(self.ncols)
        return Mat.identity(field, self.ncols)

    def __eq__(self, other):
        if isinstance(other, IdentityRows):
            return self.ncols == other.ncols
        return NotImplemented


def rows_to_mat(rows_like, field: Field) -> Mat:
    """Densify a select/repair rule output (Mat passes through)."""
    if isinstance(rows_like, Mat):
        return rows_like
    return rows_like.to_mat(field)


def rows_rank(rows_like, field: Field) -> int:
    from . import linalg

    if isinstance(rows_like, (SelectionRows, IdentityRows)):
        return rows_like.rank()
    return linalg.rank(rows_like)
