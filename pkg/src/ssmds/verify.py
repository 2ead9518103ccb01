"""Brute-force verification of every claimed code property.

Every check returns a VerifyReport; failures become witness entries, never
exceptions.  Two oracle styles exist for the MDS property: the determinant
route (primary) and the reconstruction route (slower, run in acceptance
suites).  For codes whose blocks are monomial matrices acting by digit
shifts, the determinant of a sub-block matrix factors over orbits of the
shift group, so the determinant route also runs at sub-packetization
levels where dense elimination is hopeless.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from . import bulk, codec, linalg
from .blocks import (DiagonalBlock, IdentityRows, PermutationBlock,
                     SelectionRows, is_monomial)
from .codes import ConstructedCode
from .errors import TooLarge
from .gf import Field

WITNESS_CAP = 32


@dataclass
class VerifyReport:
    prop: str
    passed: bool
    witnesses: list
    failures: int
    checked: int
    elapsed: float

    def to_dict(self) -> dict:
        return {"property": self.prop, "passed": self.passed,
                "witnesses": [list(w) if isinstance(w, tuple) else w
                              for w in self.witnesses],
                "failures": self.failures, "checked": self.checked,
                "elapsed": round(self.elapsed, 6)}


class _Collector:
    def __init__(self, prop: str):
        self.prop = prop
        self.witnesses = []
        self.failures = 0
        self.checked = 0
        self.start = time.monotonic()

    def bump(self, n: int = 1):
        self.checked += n

    def fail(self, witness):
        self.failures += 1
        if len(self.witnesses) < WITNESS_CAP:
            self.witnesses.append(witness)

    def report(self) -> VerifyReport:
        return VerifyReport(self.prop, self.failures == 0, self.witnesses,
                            self.failures, self.checked,
                            time.monotonic() - self.start)


# -- MDS: determinant oracle ---------------------------------------------------


def check_mds(code: ConstructedCode, max_subsets: int = 10**6,
              max_block_dim: int = 128) -> VerifyReport:
    """Every r-subset of block columns must stack to a nonsingular matrix."""
    n, r = code.n, code.r
    if math.comb(n, r) > max_subsets:
        raise TooLarge(f"{math.comb(n, r)} subsets exceed the cap {max_subsets}; "
                       "use sampling or a larger cap")
    col = _Collector("mds")
    if r * code.N <= max_block_dim:
        for J in itertools.combinations(range(n), r):
            col.bump()
            if linalg.det(code.sub_block_mat(J)) == 0:
                col.fail(J)
        return col.report()
    info = _monomial_node_info(code)
    if info is None:
        raise TooLarge(f"dense block dimension {r * code.N} exceeds the cap "
                       f"{max_block_dim} and the code has no digit-shift structure")
    return _structured_mds(code, info, col)


def check_mds_by_reconstruction(code: ConstructedCode, seed: int = 0,
                                max_subsets: int = 10**6) -> VerifyReport:
    """Independent oracle: a random codeword must survive every k-subset."""
    import random

    n, k = code.n, code.spec.k
    if math.comb(n, k) > max_subsets:
        raise TooLarge(f"{math.comb(n, k)} subsets exceed the cap {max_subsets}")
    rng = random.Random(seed)
    data = [[rng.randrange(code.field.q) for _ in range(code.N)] for _ in range(k)]
    cw = codec.encode(code, data)
    col = _Collector("mds-reconstruction")
    for keep in itertools.combinations(range(n), k):
        col.bump()
        try:
            got = codec.reconstruct(code, [(i, cw.columns[i]) for i in keep])
        except Exception:
            col.fail(keep)
            continue
        if got.columns != cw.columns:
            col.fail(keep)
    return col.report()


# -- structured determinant factorization ---------------------------------------


class _NodeInfo:
    __slots__ = ("kind", "axis", "table", "const")

    def __init__(self, kind, axis=None, table=None, const=None):
        self.kind = kind      # "shift" or "const"
        self.axis = axis      # digit position for shift nodes
        self.table = table    # scale per class (digit * r + prefix)
        self.const = const    # scalar for constant-diagonal nodes


def _monomial_node_info(code: ConstructedCode):
    """Classify node blocks for the orbit-factored determinant.

    Supported shapes: constant-diagonal blocks, and digit-shift blocks
    whose scales depend only on (own digit, digit prefix sum) -- verified
    numerically, not assumed.
    """
    if not code.power_form:
        return None
    r, m, N = code.r, code.spec.m, code.N
    idx = np.arange(N, dtype=np.int64)
    prefix_cache: dict[int, np.ndarray] = {}

    def prefix(axis):
        if axis not in prefix_cache:
            total = np.zeros(N, dtype=np.int64)
            for p in range(axis + 1):
                total += (idx // r ** (m - 1 - p)) % r
            prefix_cache[axis] = total % r
        return prefix_cache[axis]

    out = []
    for blk in code.node_blocks:
        if isinstance(blk, DiagonalBlock):
            vals = np.unique(blk.scales)
            if vals.size != 1:
                return None
            out.append(_NodeInfo("const", const=int(vals[0])))
            continue
        if not isinstance(blk, PermutationBlock):
            return None
        if blk.is_diagonal():
            vals = np.unique(blk.scales)
            if vals.size != 1:
                return None
            out.append(_NodeInfo("const", const=int(vals[0])))
            continue
        if blk.shift_axis is None or blk.shift_step != 1:
            return None
        p = blk.shift_axis
        digit = (idx // r ** (m - 1 - p)) % r
        cls = digit * r + prefix(p)
        table = [None] * (r * r)
        for c in range(r * r):
            mask = cls == c
            if not mask.any():
                continue
            vals = np.unique(blk.scales[mask])
            if vals.size != 1:
                return None
            table[c] = int(vals[0])
        out.append(_NodeInfo("shift", axis=p, table=table))
    return out


def _structured_mds(code: ConstructedCode, info, col: _Collector) -> VerifyReport:
    f = code.field
    q = f.q
    r, n = code.r, code.n
    for J in itertools.combinations(range(n), r):
        col.bump()
        if not _subset_nonsingular_structured(f, r, [info[j] for j in J]):
            col.fail(J)
    return col.report()


def _subset_nonsingular_structured(f: Field, r: int, nodes) -> bool:
    axes = sorted({nd.axis for nd in nodes if nd.kind == "shift"})
    w = len(axes)
    slot = {p: s for s, p in enumerate(axes)}
    points = list(itertools.product(range(r), repeat=w))
    pindex = {d: x for x, d in enumerate(points)}
    dim = r * len(points)

    # realizable prefix offsets at each axis for a representative whose
    # orbit digits are zero: one free choice per nonempty run of positions
    # below/between the axes
    choice_sets = []
    prev = -1
    for p in axes:
        gap = p - prev - 1
        choice_sets.append(range(r) if gap > 0 else (0,))
        prev = p
    consts_pow = [[f.pow(nd.const, t) for t in range(r)] if nd.kind == "const" else None
                  for nd in nodes]

    for deltas in itertools.product(*choice_sets) if w else [()]:
        offsets = []
        acc = 0
        for d in deltas:
            acc = (acc + d) % r
            offsets.append(acc)
        M = np.zeros((dim, dim), dtype=np.int64)
        for ell, nd in enumerate(nodes):
            if nd.kind == "const":
                for t in range(r):
                    for d in points:
                        row = t * len(points) + pindex[d]
                        colx = ell * len(points) + pindex[d]
                        M[row, colx] = consts_pow[ell][t]
                continue
            s_ax = slot[nd.axis]
            base = offsets[s_ax]
            for d in points:
                dgt = d[s_ax] if w else 0
                pre = (base + sum(d[s] for s, p in enumerate(axes) if p <= nd.axis)) % r
                val = 1
                cd, cp = dgt, pre
                for t in range(r):
                    row = t * len(points) + pindex[d]
                    target = list(d)
                    target[s_ax] = (dgt + t) % r
                    colx = ell * len(points) + pindex[tuple(target)]
                    M[row, colx] = val
                    val = f.mul(val, nd.table[cd * r + cp])
                    cd = (cd + 1) % r
                    cp = (cp + 1) % r
        if f.m == 1:
            if not bulk.det_nonzero_mod_p(M, f.q):
                return False
        elif linalg.det(linalg.Mat(f, M.tolist())) == 0:
            return False
    return True


# -- repair rank conditions --------------------------------------------------------


def check_repair(code: ConstructedCode) -> VerifyReport:
    """Rank conditions at every node: the stacked useful-data matrix must
    have rank N, and every interference image must lie inside the
    corresponding download."""
    if _repair_structured_eligible(code):
        return _check_repair_structured(code)
    return _check_repair_dense(code)


def _repair_structured_eligible(code: ConstructedCode) -> bool:
    if not code.power_form:
        return False
    if not all(is_monomial(b) for b in code.node_blocks):
        return False
    for t in range(code.r):
        if not isinstance(code.select_matrix(0, t), SelectionRows):
            return False
    return True


def _perm_of(code: ConstructedCode, t: int, j: int) -> np.ndarray:
    blk = code.block(t, j)
    if isinstance(blk, DiagonalBlock):
        return np.arange(code.N, dtype=np.int64)
    return blk.perm


def _check_repair_structured(code: ConstructedCode) -> VerifyReport:
    col = _Collector("repair")
    n, r, N = code.n, code.r, code.N
    for i in range(n):
        sel_idx = [code.select_matrix(i, t) for t in range(r)]
        if not all(isinstance(s, SelectionRows) for s in sel_idx):
            return _check_repair_dense(code)
        col.bump()
        covered = np.concatenate([_perm_of(code, t, i)[sel_idx[t].indices]
                                  for t in range(r)])
        if np.unique(covered).size != N:
            col.fail((i, "useful-data-rank"))
        for j in range(n):
            if j == i:
                continue
            proj = code.repair_matrix(i, j)
            if isinstance(proj, IdentityRows):
                col.bump(r)
                continue
            rset = np.zeros(N, dtype=bool)
            rset[proj.indices] = True
            for t in range(r):
                col.bump()
                image = _perm_of(code, t, j)[sel_idx[t].indices]
                if not rset[image].all():
                    col.fail((i, j, t))
    return col.report()


def _check_repair_dense(code: ConstructedCode) -> VerifyReport:
    from .blocks import rows_rank, rows_to_mat

    col = _Collector("repair")
    f = code.field
    n, r, N = code.n, code.r, code.N
    for i in range(n):
        selects = [rows_to_mat(code.select_matrix(i, t), f) for t in range(r)]
        col.bump()
        stacked = linalg.vstack([selects[t].mul(code.block_mat(t, i))
                                 for t in range(r)])
        if linalg.rank(stacked) != N:
            col.fail((i, "useful-data-rank"))
        for j in range(n):
            if j == i:
                continue
            proj = code.repair_matrix(i, j)
            if isinstance(proj, IdentityRows):
                col.bump(r)
                continue
            proj = rows_to_mat(proj, f)
            base = rows_rank(proj, f)
            for t in range(r):
                col.bump()
                aug = linalg.vstack([proj, selects[t].mul(code.block_mat(t, j))])
                if linalg.rank(aug) != base:
                    col.fail((i, j, t))
    return col.report()


# -- optimal update ------------------------------------------------------------------


def check_optimal_update(code: ConstructedCode) -> VerifyReport:
    """Passes iff every parity-check block is diagonal."""
    col = _Collector("optimal-update")
    if code.power_form:
        for i, blk in enumerate(code.node_blocks):
            col.bump()
            if not blk.is_diagonal():
                col.fail((1, i) + _offdiag_witness(code, 1, i))
        return col.report()
    for t in range(code.r):
        for i in range(code.n):
            col.bump()
            if not code.block(t, i).is_diagonal():
                col.fail((t, i) + _offdiag_witness(code, t, i))
    return col.report()


def _offdiag_witness(code: ConstructedCode, t: int, i: int) -> tuple:
    blk = code.block(t, i)
    if isinstance(blk, PermutationBlock):
        rows = np.nonzero(blk.perm != np.arange(blk.n))[0]
        a = int(rows[0])
        return (a, int(blk.perm[a]))
    mat = blk.to_mat(code.field)
    for a, row in enumerate(mat.data):
        for b, v in enumerate(row):
            if v and a != b:
                return (a, b)
    return ()


# -- pairwise commutation and difference nonsingularity -------------------------------


def check_lemma1(code: ConstructedCode) -> VerifyReport:
    """For power-form codes: A_i A_j = A_j A_i and A_i - A_j nonsingular
    over all node pairs (a sufficient condition for the MDS property)."""
    if not code.power_form:
        raise ValueError("pairwise block conditions need a power-form code")
    if all(is_monomial(b) for b in code.node_blocks):
        return _check_lemma1_monomial(code)
    return _check_lemma1_dense(code)


def _mono_parts(blk, N):
    if isinstance(blk, DiagonalBlock):
        return np.arange(N, dtype=np.int64), blk.scales
    return blk.perm, blk.scales


def _check_lemma1_monomial(code: ConstructedCode) -> VerifyReport:
    col = _Collector("lemma1")
    f = code.field
    N = code.N
    ident = np.arange(N, dtype=np.int64)
    for i, j in itertools.combinations(range(code.n), 2):
        pi, si = _mono_parts(code.node_blocks[i], N)
        pj, sj = _mono_parts(code.node_blocks[j], N)
        col.bump()
        # products in both orders: permutation composes, scales gather
        if not (np.array_equal(pj[pi], pi[pj])
                and np.array_equal(bulk.np_mul(f, si, sj[pi]),
                                   bulk.np_mul(f, sj, si[pj]))):
            col.fail((i, j, "commute"))
        col.bump()
        if np.array_equal(pi, pj):
            if np.any(si == sj):
                a = int(np.nonzero(si == sj)[0][0])
                col.fail((i, j, "difference-singular", a))
            continue
        # B = A_j^{-1} A_i is a scaled permutation; A_i - A_j is singular
        # exactly when some cycle of B has scale product 1
        inv_pj = np.empty(N, dtype=np.int64)
        inv_pj[pj] = ident
        pi_b = pi[inv_pj]
        mu = bulk.np_mul(f, si[inv_pj], bulk.np_pow(f, sj[inv_pj], -1))
        if not _cycle_products_avoid_one(f, pi_b, mu, code.r):
            col.fail((i, j, "difference-singular"))
    return col.report()


def _cycle_products_avoid_one(f: Field, perm: np.ndarray, mu: np.ndarray,
                              r: int) -> bool:
    """True iff no cycle of the scaled permutation has product 1."""
    N = perm.shape[0]
    ident = np.arange(N, dtype=np.int64)
    cur = ident
    free = True
    prod = np.ones(N, dtype=np.int64)
    for _ in range(r):
        prod = bulk.np_mul(f, prod, mu[cur])
        cur = perm[cur]
        if free and not np.array_equal(cur, ident):
            if np.any(cur == ident):
                free = False
    if free and np.array_equal(cur, ident):
        # every cycle has length exactly r (or the loop closed early and
        # uniformly); prod is the per-cycle product at each start
        return not np.any(prod == 1)
    # general fallback: walk each cycle once
    seen = np.zeros(N, dtype=bool)
    for start in range(N):
        if seen[start]:
            continue
        p, x = 1, start
        while True:
            seen[x] = True
            p = f.mul(p, int(mu[x]))
            x = int(perm[x])
            if x == start:
                break
        if p == 1:
            return False
    return True


def _check_lemma1_dense(code: ConstructedCode) -> VerifyReport:
    col = _Collector("lemma1")
    f = code.field
    mats = [code.node_blocks[i].to_mat(f) for i in range(code.n)]
    for i, j in itertools.combinations(range(code.n), 2):
        col.bump()
        if mats[i].mul(mats[j]) != mats[j].mul(mats[i]):
            col.fail((i, j, "commute"))
        col.bump()
        if linalg.det(mats[i].sub(mats[j])) == 0:
            col.fail((i, j, "difference-singular"))
    return col.report()


# -- assignment constraints --------------------------------------------------------


def check_assignment(code: ConstructedCode) -> VerifyReport:
    """Family-specific coefficient constraints, straight off the tables."""
    col = _Collector("assignment")
    q = code.field.q
    fam = code.spec.family
    asg = code.assignment
    lam = asg.lambdas

    def nonzero(table, name):
        for where, v in _walk(table):
            col.bump()
            if v % q == 0:
                col.fail((name, "zero") + where)

    if fam in ("YB1", "C1"):
        nonzero(lam, "lambda")
        flat = [v % q for row in lam for v in row]
        col.bump()
        if len(set(flat)) != len(flat):
            dup = _first_duplicate_coords(lam, q)
            col.fail(("lambda", "repeat") + dup)
    elif fam in ("LongC4p", "C4"):
        nonzero(lam, "lambda")
        for i, row in enumerate(lam):
            col.bump()
            if len({v % q for v in row}) != len(row):
                col.fail(("lambda", "node-repeat", i))
        if asg.ys is not None:
            nonzero(asg.ys, "y")
        if asg.zs is not None:
            nonzero(asg.zs, "z")
    elif fam == "C5":
        nonzero(lam, "lambda")
        n, n_prime, r = code.n, code.n_prime, code.r
        for i, row in enumerate(lam):
            col.bump()
            if len({v % q for v in row}) != len(row):
                col.fail(("lambda", "node-repeat", i))
        for i, j in itertools.combinations(range(n), 2):
            col.bump()
            if (j - i) % n_prime:
                shared = {v % q for v in lam[i]} & {v % q for v in lam[j]}
                if shared:
                    col.fail(("lambda", "cross-residue-collision", i, j,
                              sorted(shared)[0]))
            else:
                for u in range(r):
                    if lam[i][u] % q == lam[j][u] % q:
                        col.fail(("lambda", "group-collision", i, j, u))
    else:  # YB2 / iYB2 / C2 / C3
        nonzero(lam, "lambda")
    if asg.xs is not None:
        nonzero(asg.xs, "x")
    return col.report()


def _walk(table, prefix=()):
    if isinstance(table, (list, tuple)):
        for i, sub in enumerate(table):
            yield from _walk(sub, prefix + (i,))
    else:
        yield prefix, table


def _first_duplicate_coords(lam, q):
    seen = {}
    for i, row in enumerate(lam):
        for t, v in enumerate(row):
            v %= q
            if v in seen:
                return seen[v] + (i, t)
            seen[v] = (i, t)
    return ()


# -- bandwidth audit -------------------------------------------------------------------


def audit_bandwidth(code: ConstructedCode) -> VerifyReport:
    """Sum of repair-matrix ranks per node must equal the closed form."""
    from .blocks import rows_rank

    col = _Collector("bandwidth")
    f = code.field
    for i in range(code.n):
        col.bump()
        gamma = sum(rows_rank(code.repair_matrix(i, j), f)
                    for j in range(code.n) if j != i)
        expect, _ = codec.bandwidth_formula(code.spec, i)
        if gamma != expect:
            col.fail((i, gamma, expect))
    return col.report()
