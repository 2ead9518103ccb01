import random

import pytest

from ssmds import linalg
from ssmds.errors import DimensionMismatch, Inconsistent, Singular
from ssmds.gf import field_new, rth_root_of_unity
from ssmds.linalg import Mat, block, hstack, mat_from_bytes, mat_to_bytes, vstack


def rand_mat(field, rows, cols, rng):
    return Mat(field, [[rng.randrange(field.q) for _ in range(cols)]
                       for _ in range(rows)])


def test_identity_law():
    f = field_new(13)
    rng = random.Random(0)
    m = rand_mat(f, 4, 6, rng)
    assert Mat.identity(f, 4).mul(m) == m


def test_block_assembly_shape():
    f = field_new(13)
    grid = [[Mat.zeros(f, 8, 8) for _ in range(2)] for _ in range(2)]
    big = block(grid)
    assert (big.rows, big.cols) == (16, 16)


def test_scale_by_root_of_unity():
    f = field_new(13)
    delta = rth_root_of_unity(f, 2)
    m = Mat.identity(f, 2).scale(delta)
    assert m.data == [[12, 0], [0, 12]]


def test_det_identity():
    f = field_new(13)
    assert linalg.det(Mat.identity(f, 5)) == 1


def test_vandermonde_rank():
    f = field_new(13)
    lams = [1, 2, 3, 5]
    v = Mat(f, [[f.pow(l, t) for l in lams] for t in range(4)])
    assert linalg.rank(v) == 4
    assert linalg.det(v) != 0


def test_invert_roundtrip_and_singular():
    f = field_new(7)
    rng = random.Random(1)
    for _ in range(20):
        m = rand_mat(f, 5, 5, rng)
        try:
            inv = linalg.invert(m)
        except Singular:
            assert linalg.det(m) == 0
            continue
        assert inv.mul(m) == Mat.identity(f, 5)
    with pytest.raises(Singular):
        linalg.invert(Mat.zeros(f, 3, 3))


def test_solve_unique_and_free_variables():
    f = field_new(7)
    m = Mat(f, [[1, 0], [0, 1]])
    x, unique = linalg.solve(m, [3, 4])
    assert x == [3, 4] and unique
    wide = Mat(f, [[1, 1, 0]])
    x, unique = linalg.solve(wide, [5])
    assert not unique
    assert x == [5, 0, 0]  # free variables pinned to zero
    with pytest.raises(Inconsistent):
        linalg.solve(Mat(f, [[1, 0], [1, 0]]), [1, 2])


def test_kernel_dimension():
    f = field_new(7)
    rng = random.Random(2)
    for _ in range(20):
        m = rand_mat(f, 4, 6, rng)
        basis = linalg.kernel(m)
        assert len(basis) + linalg.rank(m) == m.cols
        for vec in basis:
            assert m.mul_vec(vec) == [0] * m.rows


@pytest.mark.parametrize("q", [7, 13, 9])
def test_rank_transpose_and_det_multiplicative(q):
    f = field_new(q)
    rng = random.Random(q)
    for _ in range(15):
        m = rand_mat(f, 5, 5, rng)
        n = rand_mat(f, 5, 5, rng)
        assert linalg.rank(m) == linalg.rank(m.transpose())
        assert linalg.det(m.mul(n)) == f.mul(linalg.det(m), linalg.det(n))


def test_stack_and_dimension_errors():
    f = field_new(7)
    a = Mat.zeros(f, 2, 3)
    b = Mat.zeros(f, 1, 3)
    assert vstack([a, b]).rows == 3
    assert hstack([a, Mat.zeros(f, 2, 2)]).cols == 5
    with pytest.raises(DimensionMismatch):
        a.mul(b)
    with pytest.raises(DimensionMismatch):
        vstack([a, Mat.zeros(f, 1, 4)])


def test_serialization_roundtrip():
    f = field_new(13)
    rng = random.Random(3)
    m = rand_mat(f, 3, 5, rng)
    buf = mat_to_bytes(m)
    assert buf[:8] == (3).to_bytes(4, "little") + (5).to_bytes(4, "little")
    assert len(buf) == 8 + 2 * 15
    assert mat_from_bytes(f, buf) == m
