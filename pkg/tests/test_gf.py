import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssmds.errors import (DivisionByZero, FieldMismatch, NotPrimePower,
                          OrderNotDivisible)
from ssmds.gf import arith, field_new, prime_power, rth_root_of_unity


def test_prime_power_factoring():
    assert prime_power(13) == (13, 1)
    assert prime_power(9) == (3, 2)
    assert prime_power(16) == (2, 4)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_field_new_primitives():
    assert field_new(13).primitive == 2
    assert field_new(17).primitive == 3


def test_field_new_rejects_non_prime_power():
    with pytest.raises(NotPrimePower):
        field_new(12)


def test_gf9_is_built_from_the_canonical_polynomial():
    f = field_new(9)
    # x^2 + 1 is the first monic irreducible in constant-term-first order
    assert f.reduction_polynomial == (1, 0, 1)
    # exhaust the multiplicative group: the primitive element has order 8
    c = f.primitive
    powers = {f.pow(c, e) for e in range(8)}
    assert len(powers) == 8
    assert f.pow(c, 8) == 1
    assert f.pow(c, 4) != 1


def test_pow_examples():
    assert field_new(13).pow(2, 6) == 12  # delta = c^6 = -1
    assert field_new(7).pow(2, 0) == 1


def test_pow_negative_exponent():
    f = field_new(13)
    assert f.mul(f.pow(5, -1), 5) == 1
    assert f.pow(5, -3) == f.inv(f.pow(5, 3))
    with pytest.raises(DivisionByZero):
        f.pow(0, -1)


@pytest.mark.parametrize("q", [5, 7, 9, 13, 16, 17])
def test_field_axioms_exhaustive(q):
    f = field_new(q)
    els = range(q)
    for a, b in itertools.product(els, els):
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
        if a:
            assert f.mul(a, f.inv(a)) == 1
    for a, b, c in itertools.product(els, els, els):
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", [13, 64, 81, 128, 251, 256])
def test_primitive_generates_the_whole_group(q):
    f = field_new(q)
    seen = {f.pow(f.primitive, e) for e in range(q - 1)}
    assert len(seen) == q - 1
    assert 0 not in seen


@given(st.integers(0, 250), st.integers(0, 250), st.integers(0, 250))
@settings(max_examples=200)
def test_axioms_sampled_gf251(a, b, c):
    f = field_new(251)
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.sub(f.add(a, b), b) == a
    assert f.add(a, f.neg(a)) == 0


@given(st.integers(1, 255), st.integers(1, 255))
@settings(max_examples=200)
def test_mul_div_roundtrip_gf256(a, b):
    f = field_new(256)
    assert f.div(f.mul(a, b), b) == a


def test_rth_root_of_unity():
    f = field_new(13)
    assert rth_root_of_unity(f, 2).value == 12
    assert rth_root_of_unity(f, 1).value == 1
    with pytest.raises(OrderNotDivisible):
        rth_root_of_unity(f, 5)


@pytest.mark.parametrize("q,r", [(13, 2), (13, 3), (13, 4), (9, 2), (17, 4), (43, 2)])
def test_rth_root_has_exact_order(q, r):
    f = field_new(q)
    d = rth_root_of_unity(f, r).value
    assert f.pow(d, r) == 1
    for t in range(1, r):
        assert f.pow(d, t) != 1


def test_element_wrapper_operators():
    f = field_new(13)
    a, b = f.elem(7), f.elem(5)
    assert (a + b).value == 12
    assert (a - b).value == 2
    assert (a * b).value == 9
    assert (a / b * b) == a
    assert (-a).value == 6
    assert (a**3).value == f.pow(7, 3)
    assert arith(a, b, "mul") == a * b
    assert a + 6 == 0


def test_element_field_mismatch():
    a = field_new(13).elem(1)
    b = field_new(7).elem(1)
    with pytest.raises(FieldMismatch):
        _ = a + b


def test_division_by_zero():
    f = field_new(13)
    with pytest.raises(DivisionByZero):
        f.inv(0)
    with pytest.raises(DivisionByZero):
        _ = f.elem(3) / f.elem(0)


def test_fields_are_cached_and_immutable_values():
    assert field_new(13) is field_new(13)
    f = field_new(9)
    assert f == field_new(9)
    assert f != field_new(3)
