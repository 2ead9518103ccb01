"""Systematic encoding, any-k reconstruction, and single-node repair.

Repair never touches raw helper columns: helpers hand over taps carrying
exactly the projected data R_{i,j} f_j, and the solver consumes nothing
else.  Interference terms are rewritten onto the deliveries through
transfer matrices computed once per plan, which is what makes the
download-accounting contract enforceable by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import linalg
from .blocks import IdentityRows, rows_rank, rows_to_mat
from .codes import CodeSpec, ConstructedCode
from .errors import (DimensionMismatch, Inconsistent, InterferenceNotResolvable,
                     RepairInfeasible, Singular, SingularParityBlock,
                     SingularSubBlock, SystemSingular)
from .linalg import Mat, vstack


@dataclass
class Codeword:
    """n columns of N symbols satisfying every parity-check group."""

    columns: list[list[int]]

    def column(self, i: int) -> list[int]:
        return self.columns[i][:]


def parity_residuals(code: ConstructedCode, cw: Codeword) -> list[list[int]]:
    """The r residual vectors sum_i A_{t,i} f_i; all zero for a codeword."""
    f = code.field
    out = []
    for t in range(code.r):
        acc = [0] * code.N
        for i in range(code.n):
            contrib = code.block_mat(t, i).mul_vec(cw.columns[i])
            acc = [f.add(a, b) for a, b in zip(acc, contrib)]
        out.append(acc)
    return out


def encode(code: ConstructedCode, data: list[list[int]]) -> Codeword:
    """Systematic encode: data fills nodes 0..k-1, parities solve the
    block system."""
    k, N = code.spec.k, code.N
    if len(data) != k or any(len(col) != N for col in data):
        raise DimensionMismatch(f"need {k} columns of {N} symbols")
    f = code.field
    data = [[v % f.q for v in col] for col in data]
    rhs = []
    for t in range(code.r):
        acc = [0] * N
        for i in range(k):
            contrib = code.block_mat(t, i).mul_vec(data[i])
            acc = [f.add(a, b) for a, b in zip(acc, contrib)]
        rhs.extend(f.neg(v) for v in acc)
    parity_block = code.sub_block_mat(range(k, code.n))
    try:
        inv = linalg.invert(parity_block)
    except Singular as exc:
        raise SingularParityBlock("parity sub-block is singular; code is not MDS") from exc
    stacked = inv.mul_vec(rhs)
    columns = data + [stacked[p * N:(p + 1) * N] for p in range(code.r)]
    return Codeword(columns)


def reconstruct(code: ConstructedCode, available) -> Codeword:
    """Rebuild the full codeword from any k (index, column) pairs."""
    k, N = code.spec.k, code.N
    pairs = {int(i): [v % code.field.q for v in col] for i, col in available}
    if len(pairs) != k:
        raise DimensionMismatch(f"need exactly {k} distinct columns")
    missing = sorted(set(range(code.n)) - set(pairs))
    f = code.field
    rhs = []
    for t in range(code.r):
        acc = [0] * N
        for i, col in pairs.items():
            contrib = code.block_mat(t, i).mul_vec(col)
            acc = [f.add(a, b) for a, b in zip(acc, contrib)]
        rhs.extend(f.neg(v) for v in acc)
    sub = code.sub_block_mat(missing)
    try:
        inv = linalg.invert(sub)
    except Singular as exc:
        raise SingularSubBlock(missing) from exc
    stacked = inv.mul_vec(rhs)
    columns = []
    for i in range(code.n):
        if i in pairs:
            columns.append(pairs[i])
        else:
            p = missing.index(i)
            columns.append(stacked[p * N:(p + 1) * N])
    return Codeword(columns)


@dataclass
class RepairPlan:
    failed: int
    selects: list[Mat]                 # S_{i,t}, each N/r x N, dense
    repairs: dict                      # helper -> Mat or IdentityRows
    betas: dict                        # helper -> download in symbols
    gamma: int
    gamma_star: int
    transfers: dict = dc_field(repr=False, default=None)  # (t, j) -> Mat
    system: Mat = dc_field(repr=False, default=None)      # stacked S_t A_{t,i}
    system_inv: Mat = dc_field(repr=False, default=None)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.gamma, self.gamma_star)


@dataclass
class HelperTap:
    """What one helper contributes: only the projected column."""

    helper: int
    delivered: list[int]

    @property
    def access_count(self) -> int:
        return len(self.delivered)


def collect_tap(code: ConstructedCode, plan: RepairPlan, helper: int,
                column: list[int]) -> HelperTap:
    """What helper j sends for this plan: R_{i,j} f_j, nothing more."""
    proj = plan.repairs[helper]
    if isinstance(proj, IdentityRows):
        return HelperTap(helper, [v % code.field.q for v in column])
    return HelperTap(helper, proj.mul_vec(column))


def _transfer_matrices(code: ConstructedCode, i: int, selects: list[Mat],
                       repairs: dict) -> dict:
    """T with T R_{i,j} = S_{i,t} A_{t,j}, one per (t, helper)."""
    f = code.field
    transfers = {}
    for j, proj in repairs.items():
        if isinstance(proj, IdentityRows):
            for t in range(code.r):
                transfers[(t, j)] = selects[t].mul(code.block_mat(t, j))
            continue
        rt = proj.transpose()
        targets = [selects[t].mul(code.block_mat(t, j)).transpose() for t in range(code.r)]
        try:
            sol, _ = linalg.solve_many(rt, linalg.hstack(targets))
        except Inconsistent as exc:
            raise InterferenceNotResolvable(
                f"interference of helper {j} at node {i} exceeds its delivery") from exc
        width = code.N // code.r
        for t in range(code.r):
            cols = [[sol.data[row][t * width + c] for c in range(width)]
                    for row in range(sol.rows)]
            transfers[(t, j)] = Mat(f, cols).transpose()
    return transfers


def plan_repair(code: ConstructedCode, failed: int) -> RepairPlan:
    """Materialize select/repair matrices for one failure, check the two
    rank conditions, and precompute the interference transfer matrices."""
    i = failed
    if not 0 <= i < code.n:
        raise DimensionMismatch(f"node {i} out of range")
    f = code.field
    N = code.N
    selects = [rows_to_mat(code.select_matrix(i, t), f) for t in range(code.r)]
    repairs = {}
    betas = {}
    for j in range(code.n):
        if j == i:
            continue
        proj = code.repair_matrix(i, j)
        if not isinstance(proj, IdentityRows):
            proj = rows_to_mat(proj, f)
        repairs[j] = proj
        betas[j] = rows_rank(proj, f)

    system = vstack([selects[t].mul(code.block_mat(t, i)) for t in range(code.r)])
    if linalg.rank(system) != N:
        raise RepairInfeasible(i, "useful-data coefficient matrix is rank deficient")
    for j, proj in repairs.items():
        if isinstance(proj, IdentityRows):
            continue
        base_rank = betas[j]
        for t in range(code.r):
            stacked = vstack([proj, selects[t].mul(code.block_mat(t, j))])
            if linalg.rank(stacked) != base_rank:
                raise RepairInfeasible(i, "interference not covered by download",
                                       at=(j, t))
    try:
        transfers = _transfer_matrices(code, i, selects, repairs)
    except InterferenceNotResolvable as exc:
        raise RepairInfeasible(i, str(exc)) from exc
    gamma = sum(betas.values())
    gamma_star = (code.n - 1) * N // code.r
    try:
        system_inv = linalg.invert(system)
    except Singular as exc:  # rank N already established; defensive
        raise RepairInfeasible(i, "repair system singular") from exc
    return RepairPlan(failed=i, selects=selects, repairs=repairs, betas=betas,
                      gamma=gamma, gamma_star=gamma_star, transfers=transfers,
                      system=system, system_inv=system_inv)


def repair(code: ConstructedCode, failed: int, taps,
           plan: RepairPlan | None = None) -> list[int]:
    """Regenerate column `failed` from helper taps alone.

    `taps` is an iterable of HelperTap covering every other node; each must
    deliver exactly its declared beta symbols.
    """
    if plan is None:
        plan = plan_repair(code, failed)
    by_helper = {tap.helper: tap for tap in taps}
    expected = set(plan.repairs)
    if set(by_helper) != expected:
        missing = sorted(expected - set(by_helper))
        raise DimensionMismatch(f"taps missing for helpers {missing}")
    f = code.field
    width = code.N // code.r
    rhs = []
    for t in range(code.r):
        acc = [0] * width
        for j, tap in by_helper.items():
            if tap.access_count != plan.betas[j]:
                raise DimensionMismatch(
                    f"helper {j} delivered {tap.access_count} symbols, "
                    f"declared {plan.betas[j]}")
            transfer = plan.transfers[(t, j)]
            contrib = transfer.mul_vec(tap.delivered)
            acc = [f.add(a, b) for a, b in zip(acc, contrib)]
        rhs.extend(f.neg(v) for v in acc)
    if plan.system_inv is None:
        raise SystemSingular("repair system unavailable")
    return plan.system_inv.mul_vec(rhs)


def bandwidth_formula(spec: CodeSpec, i: int) -> tuple[int, Fraction]:
    """Closed-form repair bandwidth of node i and its ratio to the optimum.

    The branch follows the node residue: residues below n mod n' see one
    extra full-download helper group.
    """
    n, r, N, n_prime = spec.n, spec.r, spec.N, spec.n_prime
    if i % n_prime < n % n_prime:
        s = math.ceil(n / n_prime)
    else:
        s = n // n_prime
    gamma_star = (n - 1) * N // r
    gamma = gamma_star + (s - 1) * (r - 1) * N // r
    return gamma, Fraction(gamma, gamma_star)
