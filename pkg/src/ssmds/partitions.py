"""r-ary index machinery: digit expansions, the eigenvector partitions, and
their realization as selection matrices.

An index a in [0, r^m) has digits (a_0, ..., a_{m-1}) with a_0 the most
significant, i.e. a = sum_j r^(m-1-j) a_j.  The partition subset V(i, t)
collects the indices whose i-th digit equals t; V("*", t) collects those
whose digit sum is t mod r.  Axis indices i >= m wrap around mod m.
"""

from __future__ import annotations

import numpy as np

from .errors import OutOfRange, SameAxis
from .gf import Field
from .linalg import Mat

STAR = "*"


def digits(a: int, r: int, m: int) -> tuple[int, ...]:
    """The r-ary expansion of a, most significant digit first."""
    if not 0 <= a < r**m:
        raise OutOfRange(f"a={a} not in [0, {r**m})")
    out = [0] * m
    for j in range(m - 1, -1, -1):
        out[j] = a % r
        a //= r
    return tuple(out)


def undigits(ds, r: int) -> int:
    a = 0
    for d in ds:
        a = a * r + d
    return a


def v_subset(i, t: int, r: int, m: int) -> tuple[int, ...]:
    """Members of V(i, t) in ascending order; i is an axis in [0, m), any
    integer (reduced mod m), or "*" for the digit-sum partition."""
    if not 0 <= t < r:
        raise OutOfRange(f"t={t} not in [0, {r})")
    N = r**m
    if i == STAR:
        return tuple(a for a in range(N) if sum(digits(a, r, m)) % r == t)
    if not isinstance(i, int) or i < 0:
        raise OutOfRange(f"axis {i!r}")
    i %= m
    w = r ** (m - 1 - i)
    return tuple(a for a in range(N) if (a // w) % r == t)


def v_indices_np(i, t: int, r: int, m: int) -> np.ndarray:
    """Same as v_subset but as an int64 array; used on large index spaces."""
    if not 0 <= t < r:
        raise OutOfRange(f"t={t} not in [0, {r})")
    N = r**m
    a = np.arange(N, dtype=np.int64)
    if i == STAR:
        total = np.zeros(N, dtype=np.int64)
        v = a.copy()
        for _ in range(m):
            total += v % r
            v //= r
        return np.nonzero(total % r == t)[0]
    if not isinstance(i, int) or i < 0:
        raise OutOfRange(f"axis {i!r}")
    i %= m
    w = r ** (m - 1 - i)
    return np.nonzero((a // w) % r == t)[0]


def v_intersect(i1, i2, t1: int, t2: int, r: int, m: int) -> tuple[int, ...]:
    """V(i1, t1) intersected with V(i2, t2); the axes must differ mod m."""
    a1 = i1 % m if isinstance(i1, int) else i1
    a2 = i2 % m if isinstance(i2, int) else i2
    if a1 == a2:
        raise SameAxis(f"axes {i1} and {i2} coincide mod {m}")
    s2 = set(v_subset(i2, t2, r, m))
    return tuple(a for a in v_subset(i1, t1, r, m) if a in s2)


def selection_matrix(subset, N: int, f: Field) -> Mat:
    """|subset| x N matrix whose row j is the standard basis row for
    subset[j] (ascending order assumed, as v_subset produces)."""
    rows = []
    for a in subset:
        if not 0 <= a < N:
            raise OutOfRange(f"index {a} not in [0, {N})")
        row = [0] * N
        row[a] = 1
        rows.append(row)
    return Mat(f, rows)


def digit_sub(a: int, i: int, u: int, r: int, m: int) -> int:
    """The index whose expansion replaces digit i of a with u (mod r)."""
    ds = list(digits(a, r, m))
    if not 0 <= i < m:
        raise OutOfRange(f"digit position {i} not in [0, {m})")
    ds[i] = u % r
    return undigits(ds, r)


def digit_sub2(a: int, i: int, j: int, u: int, v: int, r: int, m: int) -> int:
    """Replace digit i with u and digit j with v (positions i < j)."""
    if not (0 <= i < j < m):
        raise OutOfRange(f"digit positions ({i}, {j}) need 0 <= i < j < m")
    ds = list(digits(a, r, m))
    ds[i] = u % r
    ds[j] = v % r
    return undigits(ds, r)


def digit_at(a: int, i: int, r: int, m: int) -> int:
    """Digit i of a without building the full expansion."""
    return (a // r ** (m - 1 - i % m)) % r
