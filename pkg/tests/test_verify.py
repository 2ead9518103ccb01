import numpy as np
import pytest

from ssmds import codes, verify
from ssmds.codes import (build_c1, build_c2, build_c3, build_c4_r2, build_c5,
                         build_iyb2, build_long_c4p, build_yb1, build_yb2)
from ssmds.errors import TooLarge
from ssmds.gf import field_new
from ssmds.verify import (audit_bandwidth, check_assignment, check_lemma1,
                          check_mds, check_mds_by_reconstruction,
                          check_optimal_update, check_repair)


def gf13_yb1(lambdas=None):
    f = field_new(13)
    lam = lambdas or codes.yb1_standard_lambdas(3, 2, f)
    return build_yb1(3, 2, f, lam)


# -- MDS ------------------------------------------------------------------------


def test_mds_passes_on_the_reference_instance():
    rep = check_mds(build_c1(3, 2, 12))
    assert rep.passed and rep.checked == 66


def test_mds_fails_with_a_witness_on_duplicated_columns():
    code = build_c1(3, 2, 12)
    code.node_blocks[1] = code.node_blocks[0]
    rep = check_mds(code)
    assert not rep.passed
    assert (0, 1) in rep.witnesses


def test_mds_subset_cap():
    code = build_c1(3, 2, 12)
    with pytest.raises(TooLarge):
        check_mds(code, max_subsets=10)


def test_mds_block_cap_without_structure():
    code = build_c5(4, 2, 8)  # N = 16, diagonal blocks with varying scales
    with pytest.raises(TooLarge):
        check_mds(code, max_block_dim=8)


@pytest.mark.parametrize("make", [
    lambda: build_c3(4, 2, 8),
    lambda: build_c2(4, 2, 8),
    lambda: build_c2(3, 2, 9),
    lambda: build_c3(4, 3, 8),
    lambda: build_yb2(4, 2, field_new(5)),
])
def test_structured_determinants_agree_with_dense(make):
    code = make()
    dense = check_mds(code)
    info = verify._monomial_node_info(code)
    assert info is not None
    col = verify._Collector("mds")
    structured = verify._structured_mds(code, info, col)
    assert structured.passed == dense.passed
    assert sorted(structured.witnesses) == sorted(dense.witnesses)


def test_structured_determinants_agree_on_a_broken_code():
    code = build_c3(4, 2, 8)
    code.node_blocks[2] = code.node_blocks[6]
    dense = check_mds(code)
    col = verify._Collector("mds")
    structured = verify._structured_mds(code, verify._monomial_node_info(code), col)
    assert not dense.passed
    assert sorted(structured.witnesses) == sorted(dense.witnesses)


def test_reconstruction_oracle_matches_determinants():
    code = build_c1(3, 2, 12)
    rep = check_mds_by_reconstruction(code)
    assert rep.passed and rep.checked == 66


# -- repair ---------------------------------------------------------------------


def test_repair_conditions_across_all_families():
    f, ys, lam = codes.long_c4p_standard(2, 2)
    instances = [
        gf13_yb1(),
        build_yb2(4, 2, field_new(5)),
        build_iyb2(4, 2, field_new(3)),
        build_long_c4p(2, 2, f, ys, lam),
        build_c1(3, 2, 12),
        build_c2(4, 2, 8),
        build_c3(4, 2, 8),
        build_c4_r2(2, 12),
        build_c5(3, 2, 12),
    ]
    for code in instances:
        rep = check_repair(code)
        assert rep.passed, (code.spec, rep.witnesses[:3])


def test_repair_fails_when_a_node_has_a_repeated_eigenvalue():
    f = field_new(13)
    lam = codes.yb1_standard_lambdas(3, 2, f)
    lam[1][1] = lam[1][0]  # degenerate: both parts of node 1 scale alike
    code = codes._assemble_yb1(3, 2, f, lam)
    rep = check_repair(code)
    assert not rep.passed
    assert (1, "useful-data-rank") in rep.witnesses


def test_structured_repair_agrees_with_dense():
    code = build_c3(4, 2, 8)
    structured = verify._check_repair_structured(code)
    dense = verify._check_repair_dense(code)
    assert structured.passed == dense.passed == True  # noqa: E712
    assert structured.checked == dense.checked


# -- optimal update -------------------------------------------------------------


def test_optimal_update_pass_and_fail():
    assert check_optimal_update(build_c1(3, 2, 12)).passed
    assert check_optimal_update(build_c5(3, 2, 12)).passed
    rep = check_optimal_update(build_c3(4, 2, 8))
    assert not rep.passed
    t, i, row, colx = rep.witnesses[0]
    # a concrete off-diagonal nonzero coordinate
    assert (t, i) == (1, 0) and row != colx
    mat = build_c3(4, 2, 8).block_mat(t, i)
    assert mat.data[row][colx] != 0


# -- pairwise block conditions ----------------------------------------------------


def test_lemma1_passes_for_the_diagonal_families():
    for code in (build_c1(3, 2, 12), build_c5(3, 2, 12)):
        rep = check_lemma1(code)
        assert rep.passed and rep.checked == 2 * 66


def test_lemma1_flags_equal_blocks():
    code = build_c1(3, 2, 12)
    code.node_blocks[4] = code.node_blocks[2]
    rep = check_lemma1(code)
    assert not rep.passed
    assert any(w[:2] == (2, 4) and w[2] == "difference-singular"
               for w in rep.witnesses)


def test_lemma1_flags_cross_residue_eigenvalue_collisions():
    code = build_c5(3, 2, 12)
    # force a collision violating the cross-residue condition: nodes 0 and 1
    # act on different axes, so a shared eigenvalue meets on some index
    lam = [row[:] for row in code.assignment.lambdas]
    lam[1] = lam[0][:]
    broken = codes._assemble_c5(3, 2, 12, code.field, lam)
    rep = check_lemma1(broken)
    assert not rep.passed
    assert any(w[2] == "difference-singular" for w in rep.witnesses)


def test_lemma1_monomial_agrees_with_dense():
    code = build_c3(4, 2, 8)
    mono = verify._check_lemma1_monomial(code)
    dense = verify._check_lemma1_dense(code)
    assert mono.passed == dense.passed
    assert sorted(mono.witnesses) == sorted(w for w in dense.witnesses)


def test_lemma1_pass_implies_mds_pass():
    instances = [build_c1(3, 2, 12), build_c5(3, 2, 12), build_c3(4, 2, 8),
                 gf13_yb1()]
    for code in instances:
        if check_lemma1(code).passed:
            assert check_mds(code).passed


def test_lemma1_requires_power_form():
    f, ys, lam = codes.long_c4p_standard(2, 2)
    ys = [[2, 1, 1, 1, 1, 1], [1, 1, 1, 1, 1, 1]]  # t=0 blocks not identity
    code = build_long_c4p(2, 2, f, ys, lam)
    assert not code.power_form
    with pytest.raises(ValueError):
        check_lemma1(code)


# -- assignment constraints ----------------------------------------------------------


def test_assignment_passes_for_explicit_schedules():
    for code in (build_c1(3, 2, 12), build_c5(3, 2, 12), build_c3(4, 2, 8),
                 build_c4_r2(2, 12)):
        assert check_assignment(code).passed


def test_assignment_rejects_reused_pool_values_across_groups():
    code = build_c5(3, 2, 12)
    lam = [row[:] for row in code.assignment.lambdas]
    lam[6] = lam[0][:]  # same slot values repeat one group later
    broken = codes._assemble_c5(3, 2, 12, code.field, lam)
    rep = check_assignment(broken)
    assert not rep.passed
    assert any(w[1] == "group-collision" for w in rep.witnesses)


def test_assignment_rejects_equal_eigenvalues_at_a_long_code_node():
    f, ys, lam = codes.long_c4p_standard(2, 2)
    lam = [row[:] for row in lam]
    lam[2][0] = lam[2][1]
    code = codes._assemble_long_c4p(2, 2, f, ys, lam)
    rep = check_assignment(code)
    assert not rep.passed
    assert any(w[1] == "node-repeat" and w[2] == 2 for w in rep.witnesses)


def test_assignment_rejects_zero_coefficients():
    code = build_c1(3, 2, 12)
    code.assignment.xs[1][5] = 0
    rep = check_assignment(code)
    assert not rep.passed
    assert any(w[0] == "x" and w[1] == "zero" for w in rep.witnesses)


# -- bandwidth audit ---------------------------------------------------------------


def test_bandwidth_audit():
    assert audit_bandwidth(build_c1(3, 2, 12)).passed
    assert audit_bandwidth(build_c4_r2(2, 12)).passed
    assert audit_bandwidth(gf13_yb1()).passed
    assert audit_bandwidth(build_iyb2(4, 2, field_new(3))).passed
