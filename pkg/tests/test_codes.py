import json

import numpy as np
import pytest

from ssmds import codes
from ssmds.blocks import DiagonalBlock, IdentityRows, rows_to_mat
from ssmds.codes import (Assignment, CodeSpec, build_c1, build_c2, build_c3,
                         build_c4, build_c4_r2, build_c5, build_iyb2,
                         build_long_c4p, build_yb1, build_yb2, load_code,
                         search_coefficients, transform)
from ssmds.errors import (BadField, BadLambdas, CoefficientZero, CoverageGap,
                          FieldTooSmall, UnsupportedR)
from ssmds.gf import field_new, rth_root_of_unity
from ssmds.linalg import Mat
from ssmds.partitions import selection_matrix, v_subset


def gf13_yb1():
    f = field_new(13)
    return build_yb1(3, 2, f, codes.yb1_standard_lambdas(3, 2, f))


def all_base_codes():
    f, ys, lam = codes.long_c4p_standard(2, 2)
    return [
        ("YB1", gf13_yb1()),
        ("YB2", build_yb2(4, 2, field_new(5))),
        ("iYB2", build_iyb2(4, 2, field_new(3))),
        ("LongC4p", build_long_c4p(2, 2, f, ys, lam)),
    ]


# -- base code shapes ----------------------------------------------------------


def test_yb1_first_block_is_the_expected_diagonal():
    code = gf13_yb1()
    delta = rth_root_of_unity(code.field, 2).value
    assert code.block(1, 0).scales.tolist() == [1, 1, 1, 1] + [delta] * 4


def test_zeroth_power_blocks_are_identity():
    for name, code in all_base_codes():
        f = code.field
        for i in range(code.n):
            assert code.block_mat(0, i) == Mat.identity(f, code.N), name


def test_yb1_rejects_bad_lambda_tables():
    f = field_new(13)
    good = codes.yb1_standard_lambdas(3, 2, f)
    with pytest.raises(BadLambdas):
        build_yb1(3, 2, f, [row[:1] for row in good])
    bad = [row[:] for row in good]
    bad[1][0] = bad[0][0]
    with pytest.raises(BadLambdas):
        build_yb1(3, 2, f, bad)
    bad = [row[:] for row in good]
    bad[2][1] = 0
    with pytest.raises(BadLambdas):
        build_yb1(3, 2, f, bad)


def test_yb1_standard_lambdas_need_admissible_field():
    with pytest.raises(BadField):
        codes.yb1_standard_lambdas(3, 2, field_new(8))  # 2 does not divide 7
    with pytest.raises(FieldTooSmall):
        codes.yb1_standard_lambdas(3, 2, field_new(5))


def test_yb2_needs_q_above_base_length():
    with pytest.raises(BadField):
        build_yb2(4, 2, field_new(3))
    code = build_yb2(4, 2, field_new(5))
    # one nonzero per row in the shift blocks, identity at the tail
    for i in range(3):
        mat = code.block_mat(1, i)
        assert all(sum(1 for v in row if v) == 1 for row in mat.data)
    assert code.block_mat(1, 3) == Mat.identity(code.field, 8)


def test_iyb2_scale_rule_on_the_first_axis():
    code = build_iyb2(4, 2, field_new(3))
    lam0 = code.assignment.lambdas[0]
    # scale c=2 exactly where the leading digit vanishes
    assert lam0 == [2, 2, 2, 2, 1, 1, 1, 1]
    assert code.block_mat(1, 3) == Mat.identity(code.field, 8)


def test_iyb2_field_admissibility():
    with pytest.raises(BadField):
        build_iyb2(4, 2, field_new(2))  # q-1 divides r-1
    with pytest.raises(BadField):
        build_iyb2(4, 3, field_new(3))


def test_long_code_blocks():
    f, ys, lam = codes.long_c4p_standard(2, 2)
    code = build_long_c4p(2, 2, f, ys, lam)
    assert code.spec.n == 6 and code.N == 4
    for i in range(6):
        assert code.block_mat(0, i) == Mat.identity(f, 4)
    # nodes in [rm, n') act diagonally
    for i in (4, 5):
        assert code.block(1, i).is_diagonal()
    bad = [row[:] for row in lam]
    bad[3][1] = bad[3][0]
    with pytest.raises(BadLambdas):
        build_long_c4p(2, 2, f, ys, bad)


# -- transformation ------------------------------------------------------------


def test_transform_with_unit_coefficients_is_identity():
    for name, base in all_base_codes():
        ones = [[1] * base.n for _ in range(base.r)]
        out = transform(base, base.n, ones)
        for t in range(base.r):
            for i in range(base.n):
                assert out.block_mat(t, i) == base.block_mat(t, i), name


def test_transform_validates_coefficients():
    base = gf13_yb1()
    with pytest.raises(CoefficientZero):
        transform(base, 3, [[1, 0, 1], [1, 1, 1]])
    with pytest.raises(CoverageGap):
        transform(base, 6, [[1] * 3, [1] * 3])
    with pytest.raises(CoverageGap):
        transform(base, 2, [[1] * 2, [1] * 2])


def test_transform_repair_rule_wraps_residues():
    code = build_c1(3, 2, 12)
    for j in range(12):
        proj = code.repair_matrix(0, j) if j else None
        if j == 0:
            continue
        if j % 3 == 0:
            assert isinstance(proj, IdentityRows)
        else:
            assert rows_to_mat(proj, code.field).rows == 4


# -- explicit families -----------------------------------------------------------


def test_c1_field_bound_and_example_field():
    assert codes._c1_bound(3, 2, 12) == 12
    assert build_c1(3, 2, 12).spec.q == 13
    with pytest.raises(FieldTooSmall):
        build_c1(3, 2, 12, field_new(11))


def test_c1_node7_twist_decomposition():
    code = build_c1(3, 2, 12)
    f = code.field
    base = gf13_yb1()
    # node 7 = 1*(r n') + 0*n' + 1: twist c^{n'} on base node 1
    expect = base.block(1, 1).scaled(f.pow(2, 3), f)
    assert code.block(1, 7) == expect


def test_c1_blocks_are_diagonal_and_power_form():
    code = build_c1(3, 2, 12)
    assert code.power_form
    for i in range(12):
        assert code.block(1, i).is_diagonal()


@pytest.mark.parametrize("builder,args", [
    (build_c1, (3, 2, 12)),
    (build_c3, (4, 2, 8)),
    (build_c5, (3, 2, 12)),
    (build_c4_r2, (2, 12)),
])
def test_power_form_blocks(builder, args):
    code = builder(*args)
    for t in range(code.r):
        for i in range(code.n):
            want = code.block_mat(1, i) if t else Mat.identity(code.field, code.N)
            for _ in range(t - 1):
                want = want.mul(code.block_mat(1, i))
            assert code.block_mat(t, i) == want


@pytest.mark.parametrize("build,n_prime", [("c1", 3), ("c5", 3)])
def test_eigen_structure_of_diagonal_families(build, n_prime):
    code = {"c1": build_c1, "c5": build_c5}[build](n_prime, 2, 12)
    f = code.field
    lam = code.assignment.lambdas
    for i in range(code.n):
        for t in range(code.r):
            sel = selection_matrix(v_subset(i, t, code.r, code.spec.m), code.N, f)
            left = sel.mul(code.block_mat(1, i))
            if build == "c1":
                x = code.assignment.xs[1][i]
                lam_val = f.mul(x, lam[i % n_prime][t])
            else:
                lam_val = lam[i][t]
            assert left == sel.scale(lam_val)


def test_c2_field_bound_and_degenerate_length():
    code = build_c2(4, 2, 8)
    assert code.spec.q == 9  # bound 2*2*1+4 = 8
    base = build_yb2(4, 2, code.field)
    degen = build_c2(4, 2, 4, code.field)
    for t in range(2):
        for i in range(4):
            assert degen.block_mat(t, i) == base.block_mat(t, i)


def test_c3_field_rule():
    assert build_c3(12, 3, 24).spec.q == 7
    assert build_c3(4, 2, 8).spec.q == 3
    with pytest.raises(FieldTooSmall):
        build_c3(4, 2, 8, field_new(2))


def test_c4_explicit_instances():
    code = build_c4_r2(2, 24)
    f = code.field
    assert code.spec.q == 17 and f.primitive == 3
    assert code.assignment.zs[1] == [f.pow(3, 4 * (i // 6)) for i in range(24)]
    assert build_c4_r2(2, 12).spec.q == 9
    for i in range(12):
        assert build_c4_r2(2, 12).block_mat(0, i) == Mat.identity(field_new(9), 4)
    with pytest.raises(UnsupportedR):
        build_c4_r2(2, 12, r=3)


def test_c4_search_route_records_seed():
    code = build_c4(2, 3, 12, seed=5)
    assert code.spec.seed == 5
    assert code.spec.q == 499  # smallest prime power above 9*C(11,2)+1
    assert all(v for row in code.assignment.zs for v in row)


def test_c5_schedule_distinctness():
    code = build_c5(3, 2, 12)
    assert code.spec.q == 13
    lam = code.assignment.lambdas
    q = code.spec.q
    # per-node distinctness
    assert all(lam[i][0] % q != lam[i][1] % q for i in range(12))
    # same slot across groups never collides
    for i in range(3):
        for g in range(1, 4):
            for u in range(2):
                assert lam[i][u] != lam[i + 3 * g][u]
    # the xi pool is pairwise distinct by construction
    flat = [v for tab in code.assignment.xis for row in tab for v in row]
    assert len(set(flat)) == len(flat) == 12


def test_search_on_unextended_base_accepts_all_ones():
    base = build_iyb2(4, 2, field_new(3))
    found = search_coefficients(base, 4, base.field, budget=10)
    assert found.xs == [[1] * 4, [1] * 4]


def test_search_rejects_gf2():
    base = build_iyb2(4, 2, field_new(3))
    with pytest.raises(FieldTooSmall):
        search_coefficients(base, 4, field_new(2))


# -- spec and assignment plumbing ---------------------------------------------------


def test_spec_canonical_json_is_stable():
    spec = build_c1(3, 2, 12).spec
    doc = json.loads(spec.canonical_json())
    assert doc == {"family": "C1", "n": 12, "r": 2, "n_prime": 3, "m": 3, "q": 13}
    assert CodeSpec.from_json(spec.canonical_json()) == spec


@pytest.mark.parametrize("make", [
    lambda: build_c1(3, 2, 12),
    lambda: build_c2(4, 2, 8),
    lambda: build_c3(4, 2, 8),
    lambda: build_c4_r2(2, 12),
    lambda: build_c5(3, 2, 12),
    lambda: gf13_yb1(),
    lambda: build_yb2(4, 2, field_new(5)),
    lambda: build_iyb2(4, 2, field_new(3)),
    lambda: build_long_c4p(2, 2, *
                           (lambda t: (t[0], t[1], t[2]))(codes.long_c4p_standard(2, 2))),
])
def test_reload_from_persisted_tables(make):
    code = make()
    spec2 = CodeSpec.from_json(code.spec.canonical_json())
    asg2 = Assignment.from_json(code.assignment.to_json())
    clone = load_code(spec2, asg2)
    for t in range(code.r):
        for i in range(code.n):
            assert clone.block_mat(t, i) == code.block_mat(t, i)
