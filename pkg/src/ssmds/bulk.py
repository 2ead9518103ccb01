"""Vectorized field arithmetic on numpy arrays.

Prime fields use direct modular arithmetic; extension fields go through
log/antilog gather tables (and an addition table, which exists for every
field this library constructs since q <= 2^16 implies the table fits).
All values stay exact: int64 everywhere, products bounded by q^2 < 2^32.
"""

from __future__ import annotations

import numpy as np

from .errors import DivisionByZero
from .gf import Field


class _NpOps:
    def __init__(self, field: Field):
        self.field = field
        self.q = field.q
        self.prime = field.m == 1
        if not self.prime:
            self.exp = np.array(field._exp, dtype=np.int64)
            self.log = np.array(field._log, dtype=np.int64)
            if field._add_table is not None:
                self.add_table = np.array(field._add_table, dtype=np.int64)
            else:
                self.add_table = None


def _ops(field: Field) -> _NpOps:
    if field._np_cache is None:
        field._np_cache = _NpOps(field)
    return field._np_cache


def np_add(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    o = _ops(field)
    if o.prime:
        return (a + b) % o.q
    if o.add_table is not None:
        return o.add_table[a, b]
    # digit-wise fallback for large extension fields
    p, m = field.p, field.m
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    va, vb, w = np.asarray(a).copy(), np.asarray(b).copy(), 1
    for _ in range(m):
        out += w * ((va + vb) % p)
        va //= p
        vb //= p
        w *= p
    return out


def np_neg(field: Field, a: np.ndarray) -> np.ndarray:
    o = _ops(field)
    if o.prime:
        return (-a) % o.q
    p, m = field.p, field.m
    out = np.zeros(np.asarray(a).shape, dtype=np.int64)
    va, w = np.asarray(a).copy(), 1
    for _ in range(m):
        out += w * ((-(va % p)) % p)
        va //= p
        w *= p
    return out


def np_sub(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np_add(field, a, np_neg(field, b))


def np_mul(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    o = _ops(field)
    if o.prime:
        return (a * b) % o.q
    a = np.asarray(a)
    b = np.asarray(b)
    nz = (a != 0) & (b != 0)
    out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    la = o.log[np.where(a != 0, a, 1)]
    lb = o.log[np.where(b != 0, b, 1)]
    vals = o.exp[(la + lb) % (o.q - 1)]
    np.copyto(out, vals, where=nz)
    return out


def np_pow(field: Field, a: np.ndarray, e: int) -> np.ndarray:
    o = _ops(field)
    a = np.asarray(a)
    if e == 0:
        return np.ones_like(a)
    if e < 0:
        if np.any(a % o.q == 0):
            raise DivisionByZero("negative power of zero")
        e %= o.q - 1  # nonzero base: a^(q-1) = 1
        if e == 0:
            return np.ones_like(a)
    if o.prime:
        return pow_mod(a, e, o.q)
    nz = a != 0
    out = np.zeros(a.shape, dtype=np.int64)
    la = o.log[np.where(nz, a, 1)]
    np.copyto(out, o.exp[(la * e) % (o.q - 1)], where=nz)
    return out


def pow_mod(a: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(a)
    base = a % p
    while e:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def np_matmul(field: Field, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact A @ B over the field; A is (m, k), B is (k, n)."""
    o = _ops(field)
    if o.prime:
        # products < q^2 <= 2^32 and k sums stay well inside int64
        return (A.astype(np.int64) @ B.astype(np.int64)) % o.q
    m, k = A.shape
    _, n = B.shape
    out = np.zeros((m, n), dtype=np.int64)
    for t in range(k):
        out = np_add(field, out, np_mul(field, A[:, t : t + 1], B[t : t + 1, :]))
    return out


def det_nonzero_mod_p(M: np.ndarray, p: int) -> bool:
    """Whether det(M) != 0 over GF(p); M is square int64, destroyed."""
    M = M % p
    n = M.shape[0]
    for col in range(n):
        nz = np.nonzero(M[col:, col])[0]
        if nz.size == 0:
            return False
        piv = col + int(nz[0])
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
        inv = pow(int(M[col, col]), p - 2, p)
        rows = M[col + 1 :, col].nonzero()[0] + col + 1
        if rows.size:
            factors = (M[rows, col] * inv) % p
            M[rows, col:] = (M[rows, col:] - factors[:, None] * M[col, col:]) % p
    return True
