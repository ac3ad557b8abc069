import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from supercoh.errors import DivisionByZero, FieldMismatch
from supercoh.gf import GF, embed, field_arith, fp_linear_independent, frobenius, parse_field_spec

FIELDS = [GF(3), GF(5), GF(7), GF(3, 2), GF(3, 3), GF(5, 2)]


def naive_poly_mul(a, b, modulus, p):
    """Schoolbook product of coefficient lists modulo a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    m = len(modulus) - 1
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for i, mc in enumerate(modulus):
                prod[k - m + i] = (prod[k - m + i] - c * mc) % p
    return (prod + [0] * m)[:m]


def test_prime_field_examples():
    F = GF(3)
    assert F(2) + F(2) == F(1)
    assert F(2).inverse() == F(2)


def test_f9_modulus_w_squared():
    F = GF(3, 2)
    assert list(F.modulus) == [1, 0, 1]
    w = F.gen
    assert w * w == F(2)


@pytest.mark.parametrize("F", [f for f in FIELDS if f.m > 1], ids=repr)
def test_multiplication_table_matches_polynomial_oracle(F):
    for a, b in itertools.product(range(F.q), repeat=2):
        ca, cb = list(F.coeffs(a)), list(F.coeffs(b))
        expected = naive_poly_mul(ca, cb, list(F.modulus), F.p)
        assert list(F.coeffs(int(F.mul_table[a, b]))) == expected


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_inverse_table(F):
    for a in range(1, F.q):
        assert F.mul_table[a, F.inv_table[a]] == 1


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_division_by_zero(F):
    with pytest.raises(DivisionByZero):
        F.zero.inverse()
    with pytest.raises(ZeroDivisionError):
        _ = F.one / F.zero


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        _ = GF(3)(1) + GF(5)(1)
    with pytest.raises(FieldMismatch):
        field_arith(GF(3)(1), GF(3, 2)(1), "add")


def test_field_arith_ops():
    F = GF(5)
    assert field_arith(F(2), F(4), "add") == F(1)
    assert field_arith(F(2), F(4), "sub") == F(3)
    assert field_arith(F(2), F(4), "mul") == F(3)
    assert field_arith(F(2), F(4), "div") == F(3)


def test_frobenius_examples():
    F3, F9 = GF(3), GF(3, 2)
    for a in F3.elements():
        assert frobenius(a, 1) == a
    w = F9.gen
    assert frobenius(w, 1) == -w
    for a in F9.elements():
        assert frobenius(a, F9.m) == a


def test_fp_linear_independence_examples():
    F3, F9 = GF(3), GF(3, 2)
    assert fp_linear_independent([F3(1)])
    assert not fp_linear_independent([F3(1), F3(2)])
    assert fp_linear_independent([F9.one, F9.gen])
    assert fp_linear_independent([])
    assert not fp_linear_independent([F9.zero])


def test_parse_and_spec():
    F = parse_field_spec("3^2")
    assert F == GF(3, 2)
    assert F.parse("1+2w") == F.one + F(2) * F.gen
    assert F.parse("w^2") == F(-1)
    assert parse_field_spec("5") == GF(5)
    with pytest.raises(ValueError):
        parse_field_spec("4")
    with pytest.raises(ValueError):
        parse_field_spec("x")


def test_embed_prime_field_into_extension():
    F3, F9 = GF(3), GF(3, 2)
    for a in F3.elements():
        assert embed(a, F9) == F9(a.code)


def test_embed_is_a_ring_map():
    F9, F81 = GF(3, 2), GF(3, 4)
    for a, b in itertools.product(F9.elements(), repeat=2):
        assert embed(a * b, F81) == embed(a, F81) * embed(b, F81)
        assert embed(a + b, F81) == embed(a, F81) + embed(b, F81)


@pytest.mark.parametrize("F", FIELDS, ids=repr)
def test_vectorised_matmul_matches_scalar(F):
    rng = np.random.default_rng(1)
    A = rng.integers(0, F.q, size=(4, 5)).astype(np.uint8)
    B = rng.integers(0, F.q, size=(5, 3)).astype(np.uint8)
    C = F.matmul(A, B)
    for i, j in itertools.product(range(4), range(3)):
        total = F.zero
        for k in range(5):
            total = total + F.element(A[i, k]) * F.element(B[k, j])
        assert C[i, j] == total.code


elements = st.sampled_from(FIELDS).flatmap(
    lambda F: st.tuples(*[st.integers(0, F.q - 1).map(F.element)] * 3)
)


@given(elements)
def test_field_axioms(abc):
    a, b, c = abc
    F = a.field
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + F.zero == a and a * F.one == a
    assert a - a == F.zero
    if not a.is_zero():
        assert a * a.inverse() == F.one
    assert (a + b) ** F.p == a**F.p + b**F.p


def test_characteristic_two_rejected():
    with pytest.raises(ValueError):
        GF(2)
