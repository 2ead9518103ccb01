import random
from fractions import Fraction

import pytest

from ssmds import codec, codes
from ssmds.codec import (Codeword, bandwidth_formula, collect_tap, encode,
                         parity_residuals, plan_repair, reconstruct, repair)
from ssmds.codes import build_c1, build_c3, build_c4_r2, build_c5, build_yb1
from ssmds.errors import DimensionMismatch, SingularSubBlock
from ssmds.gf import field_new
from ssmds.linalg import Mat


def example_code():
    return build_c1(3, 2, 12)


def rand_data(code, seed):
    rng = random.Random(seed)
    return [[rng.randrange(code.spec.q) for _ in range(code.N)]
            for _ in range(code.spec.k)]


def test_encode_zero_data():
    code = example_code()
    cw = encode(code, [[0] * 8 for _ in range(10)])
    assert all(col == [0] * 8 for col in cw.columns)


def test_encode_satisfies_every_parity_group():
    code = example_code()
    cw = encode(code, rand_data(code, 1))
    assert parity_residuals(code, cw) == [[0] * 8, [0] * 8]


def test_encode_is_linear_in_the_data():
    code = example_code()
    f = code.field
    data = rand_data(code, 2)
    cw = encode(code, data)
    scaled = encode(code, [[f.mul(5, v) for v in col] for col in data])
    assert scaled.columns == [[f.mul(5, v) for v in col] for col in cw.columns]


def test_encode_shape_validation():
    code = example_code()
    with pytest.raises(DimensionMismatch):
        encode(code, [[0] * 8 for _ in range(9)])


def test_reconstruct_from_systematic_nodes():
    code = example_code()
    cw = encode(code, rand_data(code, 3))
    got = reconstruct(code, [(i, cw.columns[i]) for i in range(10)])
    assert got.columns == cw.columns


def test_reconstruct_from_a_mixed_subset():
    code = example_code()
    cw = encode(code, rand_data(code, 4))
    keep = [0, 2, 3, 4, 6, 7, 8, 9, 10, 11]
    got = reconstruct(code, [(i, cw.columns[i]) for i in keep])
    assert got.columns == cw.columns


def test_reconstruct_reports_the_singular_subset():
    code = example_code()
    code.node_blocks[1] = code.node_blocks[0]  # break the MDS property
    cw = Codeword([[0] * 8 for _ in range(12)])
    with pytest.raises(SingularSubBlock) as err:
        reconstruct(code, [(i, cw.columns[i]) for i in range(2, 12)])
    assert err.value.subset == (0, 1)


def test_plan_for_node0_matches_the_published_rule():
    code = example_code()
    plan = plan_repair(code, 0)
    f = code.field
    expected = Mat(f, [[1 if c in (j, j + 4) else 0 for c in range(8)]
                       for j in range(4)])
    for j in range(1, 12):
        if j in (3, 6, 9):
            assert plan.betas[j] == 8
            assert plan.repairs[j].ncols == 8  # identity marker
        else:
            assert plan.betas[j] == 4
            assert plan.repairs[j] == expected
    assert plan.selects[0] == expected and plan.selects[1] == expected
    assert plan.gamma == 56 and plan.gamma_star == 44
    assert plan.ratio == Fraction(14, 11)


def test_repair_every_node_with_exact_download():
    code = example_code()
    cw = encode(code, rand_data(code, 5))
    for i in range(12):
        plan = plan_repair(code, i)
        taps = [collect_tap(code, plan, j, cw.columns[j])
                for j in range(12) if j != i]
        got = repair(code, i, taps, plan)
        assert got == cw.columns[i]
        assert sum(t.access_count for t in taps) == plan.gamma == 56


def test_repair_zero_codeword():
    code = example_code()
    plan = plan_repair(code, 2)
    taps = [collect_tap(code, plan, j, [0] * 8) for j in range(12) if j != 2]
    assert repair(code, 2, taps, plan) == [0] * 8


def test_repair_is_linear_in_the_codeword():
    code = example_code()
    f = code.field
    a = encode(code, rand_data(code, 6))
    b = encode(code, rand_data(code, 7))
    summed = Codeword([[f.add(x, y) for x, y in zip(ca, cb)]
                       for ca, cb in zip(a.columns, b.columns)])
    plan = plan_repair(code, 5)

    def run(cw):
        taps = [collect_tap(code, plan, j, cw.columns[j])
                for j in range(12) if j != 5]
        return repair(code, 5, taps, plan)

    assert run(summed) == [f.add(x, y) for x, y in zip(run(a), run(b))]


def test_repair_requires_full_tap_coverage():
    code = example_code()
    cw = encode(code, rand_data(code, 8))
    plan = plan_repair(code, 0)
    taps = [collect_tap(code, plan, j, cw.columns[j]) for j in range(2, 12)]
    with pytest.raises(DimensionMismatch):
        repair(code, 0, taps, plan)


def test_repair_rejects_wrong_delivery_size():
    code = example_code()
    cw = encode(code, rand_data(code, 9))
    plan = plan_repair(code, 0)
    taps = [collect_tap(code, plan, j, cw.columns[j]) for j in range(1, 12)]
    taps[0].delivered.append(0)
    with pytest.raises(DimensionMismatch):
        repair(code, 0, taps, plan)


def test_bandwidth_formula_examples():
    c1 = build_c1(3, 2, 12).spec
    for i in range(12):
        assert bandwidth_formula(c1, i) == (56, Fraction(14, 11))
    base = codes.CodeSpec("YB1", 3, 2, 3, 3, 8, 13)
    assert bandwidth_formula(base, 0) == (8, Fraction(1))
    c4 = build_c4_r2(2, 12).spec
    assert bandwidth_formula(c4, 3) == (24, Fraction(12, 11))
    c3 = build_c3(4, 2, 8).spec
    for i in range(8):
        assert bandwidth_formula(c3, i)[0] == 32


def test_bandwidth_formula_ragged_length_branches():
    # n = 14, n' = 3: residues 0,1 see ceil(14/3)=5 repeats, residue 2 sees 4
    spec = codes.CodeSpec("C5", 14, 2, 3, 3, 8, 43)
    assert bandwidth_formula(spec, 0)[0] == 13 * 4 + 4 * 4
    assert bandwidth_formula(spec, 2)[0] == 13 * 4 + 3 * 4


def test_base_codes_repair_at_the_optimum():
    f = field_new(13)
    base = build_yb1(3, 2, f, codes.yb1_standard_lambdas(3, 2, f))
    cw = encode(base, [[7, 3, 0, 1, 12, 5, 2, 9]])
    for i in range(3):
        plan = plan_repair(base, i)
        assert plan.gamma == plan.gamma_star == 8
        taps = [collect_tap(base, plan, j, cw.columns[j])
                for j in range(3) if j != i]
        assert repair(base, i, taps, plan) == cw.columns[i]


def test_c5_repair_roundtrip():
    code = build_c5(3, 2, 12)
    cw = encode(code, rand_data(code, 10))
    plan = plan_repair(code, 11)
    taps = [collect_tap(code, plan, j, cw.columns[j]) for j in range(11)]
    assert repair(code, 11, taps, plan) == cw.columns[11]
    assert plan.gamma == 56
