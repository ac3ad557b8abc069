import itertools

import numpy as np
import pytest

from supercoh.errors import NotFaithful
from supercoh.gf import GF
from supercoh.module import check_module, fixed_points, is_projective_kH
from supercoh.sympow import (
    HContext,
    frobenius_twist_subspace,
    invariant_generator,
    is_invariant,
    monomial,
    orbit_product_phi,
    periodicity_decomposition,
    poly_mul,
    rank_variety_matrix,
    rank_variety_scan,
    steinberg_check,
    sym_power,
    sympower_suite,
)

F3, F9 = GF(3), GF(3, 2)
w = F9.gen

CONTEXTS = {
    "r1": HContext.create(F3, 1, 0),
    "s1": HContext.create(F3, 0, 1, [1]),
    "r2": HContext.create(F3, 2, 0),
    "r1s1": HContext.create(F3, 1, 1, [1]),
    "r1s1w": HContext.create(F9, 1, 1, [w]),
    "s2": HContext.create(F9, 0, 2, [1, w]),
}


def test_faithfulness_required():
    with pytest.raises(NotFaithful):
        HContext.create(F3, 0, 2, [1, 2])
    with pytest.raises(ValueError):
        HContext.create(F3, 1, 1, [])


@pytest.mark.parametrize("name", CONTEXTS)
def test_symmetric_powers_are_modules(name):
    ctx = CONTEXTS[name]
    for n in range(0, 2 * ctx.order + 1, 3):
        S = sym_power(ctx, n)
        assert S.dim == n + 1
        assert check_module(S.module)


def test_s1_action_on_monomials():
    ctx = CONTEXTS["r2"]
    n = 2
    S = sym_power(ctx, n).module
    for i in range(n + 1):
        out = S.action("s_1") @ monomial(n, i) % 3
        expected = (i * monomial(n, i - 1)) % 3 if i else np.zeros(n + 1, int)
        assert np.array_equal(out, expected)
        assert not np.any(S.action("s_2") @ monomial(n, i) % 3)


def test_grouplike_action_on_monomials():
    # (g - 1)(X^i) = (X - mu Y)^i - X^i; leading correction -i mu X^(i-1) Y
    ctx = CONTEXTS["r1s1w"]
    mu = ctx.mus[0]
    S = sym_power(ctx, 2).module
    col = S.action("t_1")[:, 2]
    assert col[2] == 0
    assert F9.element(col[1]) == F9(-2) * mu
    assert F9.element(col[0]) == mu * mu


def test_orbit_product():
    assert np.array_equal(orbit_product_phi(CONTEXTS["r1"]), monomial(1, 1))
    phi = orbit_product_phi(CONTEXTS["s1"])
    # X(X + Y)(X + 2Y) = X^3 - X Y^2 over F_3
    assert phi.tolist() == [0, 2, 0, 1]
    for ctx in CONTEXTS.values():
        assert is_invariant(ctx, orbit_product_phi(ctx)) == (ctx.r == 0)
        assert is_invariant(ctx, invariant_generator(ctx))


def test_poly_mul_matches_expansion():
    F = F3
    a = np.array([1, 1], dtype=np.uint8)  # Y + X
    assert poly_mul(F, a, a).tolist() == [1, 2, 1]


@pytest.mark.parametrize("name", CONTEXTS)
def test_periodicity_range(name):
    ctx = CONTEXTS[name]
    P = ctx.order
    for n in range(P, 2 * P + 1):
        cert = periodicity_decomposition(ctx, n)
        assert cert.dims == (n + 1, P, n + 1 - P)
        assert cert.free_summand_projective


def test_periodicity_examples():
    assert periodicity_decomposition(CONTEXTS["r1"], 3).dims == (4, 3, 1)
    assert periodicity_decomposition(CONTEXTS["r1s1"], 9).dims == (10, 9, 1)
    cert = periodicity_decomposition(CONTEXTS["r1"], 5)
    assert cert.dims == (6, 3, 3)
    # 5 = -1 mod 3: both summands Y^3 S^2 and X^3 S^2 are free
    assert is_projective_kH(sym_power(CONTEXTS["r1"], 5).module)
    assert not is_projective_kH(sym_power(CONTEXTS["r1"], 4).module)
    with pytest.raises(ValueError):
        periodicity_decomposition(CONTEXTS["r1"], 2)


def test_frobenius_twists():
    ctx = CONTEXTS["r1"]
    T0 = frobenius_twist_subspace(ctx, 0, 2)
    S2 = sym_power(ctx, 2).module
    assert all(np.array_equal(a, b) for a, b in zip(T0.matrices, S2.matrices))
    T1 = frobenius_twist_subspace(ctx, 1, 2)
    assert T1.dim == 3
    assert not np.any(T1.action("s_1"))


@pytest.mark.parametrize("name", CONTEXTS)
def test_twists_are_submodules(name):
    # (X - mu Y)^(p^j a) = (X^(p^j) - mu^(p^j) Y^(p^j))^a stays in the span of p^j-th powers
    ctx = CONTEXTS[name]
    for j, base in itertools.product((1, 2), (1, 2)):
        assert check_module(frobenius_twist_subspace(ctx, j, base))


@pytest.mark.parametrize("name", CONTEXTS)
def test_steinberg(name):
    ctx = CONTEXTS[name]
    for i in range(1, ctx.r + ctx.s + 1):
        assert steinberg_check(ctx, i)


def test_rank_variety_examples():
    scan = rank_variety_scan(CONTEXTS["r1s1"], 1)
    assert scan.non_free == [(1, 1), (2, 2)]
    assert scan.agrees and scan.codimension == 1
    scan = rank_variety_scan(CONTEXTS["r1s1"], 2)
    assert scan.non_free == [] and scan.agrees
    scan = rank_variety_scan(CONTEXTS["r2"], 1)
    assert scan.non_free == [(0, 1), (0, 2)]
    assert scan.agrees


def test_rank_variety_over_extension():
    scan = rank_variety_scan(CONTEXTS["r1s1"], 1, F9)
    assert scan.agrees
    assert len(scan.non_free) == 9 - 1


def test_rank_variety_matrix_rows_independent():
    from supercoh.linalg import rank

    for ctx in CONTEXTS.values():
        R = np.array([[c.code for c in row] for row in rank_variety_matrix(ctx)], dtype=np.uint8)
        assert rank(ctx.field, R) == ctx.r + ctx.s


def test_suite_passes():
    out = sympower_suite(CONTEXTS["r1s1"])
    assert out["passed"]
    assert [row["fixed"] for row in out["rows"]] == [n // 9 + 1 for n in range(19)]


def test_low_degree_fixed_points_one_dimensional():
    for ctx in CONTEXTS.values():
        for n in range(ctx.order):
            assert fixed_points(sym_power(ctx, n).module).shape[0] == 1
