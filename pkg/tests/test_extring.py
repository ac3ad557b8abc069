import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from supercoh.algebra import make_exterior1_kH, make_kH, make_semidirect, quotient_to_factor, quotient_to_kH
from supercoh.errors import RelationFailed
from supercoh.extring import (
    ExtRing,
    Inflation,
    RingPresentationReport,
    annihilator_check_sympowers,
    commutativity_failures,
    duality_quotient_check,
    ext_coeffs,
    ext_dims,
    factor_classes,
    factor_ring,
    main_theorem_check,
    verify_Ga1_presentation,
)
from supercoh.gf import GF
from supercoh.module import regular_module, trivial_module
from supercoh.sympow import HContext, sym_power

F3, F9 = GF(3), GF(3, 2)


@pytest.fixture(scope="module")
def kg3():
    return ExtRing.of(make_semidirect(F3, 1, 0), 8)


def presentation_parity_dims(p, maxdeg):
    """Bigraded series of the presentation: basis {zeta^i, lambda_i} over k[kappa, x + zeta^2]."""
    num = {}
    for i in range(p + 1):
        num[(i, i % 2)] = num.get((i, i % 2), 0) + 1
    for i in range(1, p):
        num[(i, (i + 1) % 2)] = num.get((i, (i + 1) % 2), 0) + 1
    out = {(n, j): 0 for n in range(maxdeg + 1) for j in (0, 1)}
    for (n0, j0), c in num.items():
        for a in range(maxdeg + 1):  # kappa^a in degree (p a, a)
            for b in range(maxdeg + 1):  # (x + zeta^2)^b in degree (2 b, 0)
                n = n0 + p * a + 2 * b
                if n <= maxdeg:
                    out[(n, (j0 + a) % 2)] += c
    return out


def test_ext_dims_degree_one(kg3):
    dims = kg3.dims(8)
    assert dims[(1, 1)] == 1 and dims[(1, 0)] == 1
    assert dims == presentation_parity_dims(3, 8)
    for n in range(9):
        assert dims[(n, 0)] + dims[(n, 1)] == n + 1


def test_ext_dims_exterior_times_kh():
    dims = ext_dims(make_exterior1_kH(F3, 1, 1), 3)
    assert [dims[(n, 0)] + dims[(n, 1)] for n in range(4)] == [1, 3, 6, 10]


def test_cup_unit_and_powers(kg3):
    one = kg3.one
    for b in kg3.basis(3):
        assert one * b == b and b * one == b
    zeta = kg3.basis(1, parity=1)[0]
    for n in range(1, 9):
        assert not (zeta**n).is_zero()
    lam = kg3.basis(1, parity=0)[0]
    assert (lam * lam).is_zero()
    assert (zeta * zeta).j == 0


def test_inflation_of_degree_one_class(kg3):
    fr = factor_ring(F3, 2)
    infl = Inflation(quotient_to_factor(kg3.algebra, "s_1", fr.algebra), kg3, fr)
    lam1 = infl(fr.basis(1)[0])
    keys = kg3.resolution.gen_keys[1]
    support = [keys[g] for g in np.nonzero(lam1.functional)[0]]
    assert support == [(0, 0, 1)]
    # zero on the odd generator dual to u
    odd = [g for g, k in enumerate(keys) if k[0] == 1]
    assert all(lam1.functional[g] == 0 for g in odd)


def test_factor_ring_is_periodic():
    fr = factor_ring(F3, 4)
    assert fr.poincare() == [1, 1, 1, 1, 1]


def test_inflation_is_a_ring_map():
    A = make_semidirect(F3, 2, 0)
    ring = ExtRing.of(A, 4)
    kh = ExtRing.of(make_kH(F3, 2, 0, with_coproduct=False), 4)
    infl = Inflation(quotient_to_kH(A, kh.algebra), ring, kh)
    for a in kh.basis(1) + kh.basis(2):
        for b in kh.basis(1) + kh.basis(2):
            assert infl(kh.cup(a, b)) == ring.cup(infl(a), infl(b))


def test_inflation_rejects_mismatched_rings(kg3):
    fr = factor_ring(F3, 2)
    other = factor_ring(F3, 2)
    with pytest.raises(ValueError):
        Inflation(quotient_to_factor(kg3.algebra, "s_1", fr.algebra), kg3, other)


@pytest.mark.parametrize(
    "A",
    [make_semidirect(F3, 1, 0), make_semidirect(F3, 2, 0), make_kH(F3, 1, 1, with_coproduct=False)],
    ids=["ga1", "r2", "kh"],
)
def test_graded_commutativity(A):
    ring = ExtRing.of(A, 5)
    assert commutativity_failures(ring, 5) == []


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_cup_associative(seed):
    ring = ExtRing.of(make_semidirect(F3, 1, 0), 7)
    rng = np.random.default_rng(seed)
    degs = rng.integers(1, 3, size=3)
    a, b, c = (ring.element(int(n), rng.integers(0, 3, ring.resolution.ranks[n])) for n in degs)
    assert (a * b) * c == a * (b * c)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_cup_bilinear(seed):
    ring = ExtRing.of(make_semidirect(F9, 0, 1, [F9.gen]), 4)
    rng = np.random.default_rng(seed)
    a1, a2 = (ring.element(1, rng.integers(0, 9, ring.resolution.ranks[1])) for _ in range(2))
    b = ring.element(2, rng.integers(0, 9, ring.resolution.ranks[2]))
    c = F9.element(int(rng.integers(1, 9)))
    assert (a1 + a2) * b == a1 * b + a2 * b
    assert (a1 * c) * b == (a1 * b) * c


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("variant", ["Ga1", "grouplike"])
def test_ga1_presentation(p, variant):
    rep = verify_Ga1_presentation(p, variant)
    assert rep.passed, [r.name for r in rep.failures()]
    assert rep.poincare == list(range(1, {3: 10, 5: 13}[p]))


def test_ga1_presentation_dims_agree_between_variants():
    a = verify_Ga1_presentation(3, "Ga1")
    b = verify_Ga1_presentation(3, "grouplike")
    assert a.dims == b.dims


def test_lambda_products_p3():
    rep = verify_Ga1_presentation(3)
    named = rep.named
    ring = named.ring
    prod = ring.cup(named.lambdas[1], named.lambdas[2])
    target = ring.cup(named.x, named.zeta)
    assert not prod.is_zero()
    # prod = alpha * x zeta with alpha != 0
    nz = int(np.nonzero(target.functional)[0][0])
    alpha = F3.element(prod.functional[nz]) / F3.element(target.functional[nz])
    assert prod == target.scale(alpha)


def test_report_json_and_failure():
    rep = verify_Ga1_presentation(3)
    data = json.loads(rep.to_json())
    for key in ("dims", "relations", "poincare", "generators", "version", "algebra"):
        assert key in data
    bad = RingPresentationReport("{}", {}, [])
    ring = ExtRing.of(make_kH(F3, 1, 0, with_coproduct=False), 2)
    bad.add("impossible", False, ring.basis(2)[0])
    with pytest.raises(RelationFailed) as exc:
        bad.raise_on_failure()
    assert exc.value.witness == [[1]]


def test_duality_quotient():
    out = duality_quotient_check(3)
    assert out["passed"]
    assert out["dims"][:4] == [1, 2, 2, 1]
    for i, P in out["pairings"].items():
        assert len(P) == len(P[0])


def test_main_theorem_examples():
    rep = main_theorem_check(F3, 1, 0)
    assert rep.passed and rep.extra["N"] == 2
    rep = main_theorem_check(F3, 1, 1, [1])
    assert rep.passed and rep.extra["N"] == 6


def test_ext_coefficients_trivial_and_free():
    ring = ExtRing.of(make_kH(F3, 1, 1), 5)
    E = ext_coeffs(ring, trivial_module(ring.algebra), 4)
    assert E.dims(4) == ring.poincare(4)
    R = ext_coeffs(ring, regular_module(ring.algebra), 4)
    assert R.dims(4) == [1, 0, 0, 0, 0]


def test_annihilating_line_both_coordinates():
    ctx = HContext.create(F3, 1, 1, [1])
    ring = ExtRing.of(ctx.algebra, 6)
    E = ext_coeffs(ring, sym_power(ctx, 2).module, 5)
    base = factor_classes(ring, ["s_1", "t_1"])
    ann = E.annihilator([base["s_1"], base["t_1"]], 4)
    assert ann.shape[0] >= 1
    assert all(np.all(row != 0) for row in ann)


@pytest.mark.parametrize(
    "ctx",
    [HContext.create(F3, 2, 0), HContext.create(F3, 1, 1, [1]), HContext.create(F9, 1, 1, [F9.gen])],
    ids=["r2", "r1s1", "r1s1w"],
)
def test_annihilator_checks(ctx):
    for i in range(1, ctx.r + ctx.s + 1):
        out = annihilator_check_sympowers(ctx, i)
        assert out["passed"], out
    top = annihilator_check_sympowers(ctx, ctx.r + ctx.s)
    assert top["ext_dims"][1:] == [0, 0, 0, 0]


def test_x1_annihilates_for_r2():
    out = annihilator_check_sympowers(HContext.create(F3, 2, 0), 1)
    assert out["annihilator"] == [[[1], [0]]]
