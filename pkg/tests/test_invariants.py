import csv
import io
import itertools
import json
import math

import numpy as np
import pytest

from supercoh.gf import GF
from supercoh.invariants import (
    invariant_basis,
    invariant_table,
    predicted_invariants,
    table_to_csv,
    table_to_json,
    verify_invariant_generators,
)
from supercoh.sympow import HContext, format_poly, sym_power

F3, F9 = GF(3), GF(3, 2)


def brute_force_dim(ctx, n):
    """Count every invariant vector of S^n and take log_q."""
    F = ctx.field
    mats = sym_power(ctx, n).module.matrices
    count = 0
    for vec in itertools.product(range(F.q), repeat=n + 1):
        v = np.array(vec, dtype=np.uint8)
        if all(not np.any(F.matmul(G, v)) for G in mats):
            count += 1
    return round(math.log(count, F.q))


@pytest.mark.parametrize(
    "ctx",
    [HContext.create(F3, 1, 0), HContext.create(F3, 0, 1, [1])],
    ids=["r1", "s1"],
)
def test_dims_against_brute_force(ctx):
    for n in range(8):
        assert invariant_basis(ctx, n).dim == brute_force_dim(ctx, n)


def test_examples():
    r1 = HContext.create(F3, 1, 0)
    assert invariant_basis(r1, 0).dim == 1
    rep = invariant_basis(r1, 3)
    assert sorted(format_poly(F3, b) for b in rep.basis) == ["X^3", "Y^3"]
    assert invariant_basis(r1, 2).dim == 1
    s1 = HContext.create(F3, 0, 1, [1])
    rep = invariant_basis(s1, 3)
    assert rep.dim == 2
    phi = predicted_invariants(s1, 3)[1]
    assert format_poly(F3, phi) == "X^3 + 2*X*Y^2"
    assert invariant_basis(HContext.create(F3, 1, 1, [1]), 9).dim == 2


@pytest.mark.parametrize(
    "ctx",
    [
        HContext.create(F3, 1, 0),
        HContext.create(F3, 0, 1, [1]),
        HContext.create(F3, 2, 0),
        HContext.create(F3, 1, 1, [1]),
        HContext.create(F9, 0, 2, [1, F9.gen]),
    ],
    ids=["r1", "s1", "r2", "r1s1", "s2"],
)
def test_floor_formula_and_generators(ctx):
    P = ctx.order
    for n in range(2 * P + 1):
        assert invariant_basis(ctx, n).dim == n // P + 1
    assert verify_invariant_generators(ctx, 2 * P)


def test_table_outputs():
    ctx = HContext.create(F3, 1, 0)
    rows = invariant_table(ctx, 9)
    assert [r["dim"] for r in rows] == [1, 1, 1, 2, 2, 2, 3, 3, 3, 4]
    parsed = list(csv.reader(io.StringIO(table_to_csv(rows))))
    assert parsed[0] == ["degree", "dim", "predicted_dim", "basis"]
    assert len(parsed) == 11
    assert json.loads(table_to_json(rows))[3]["dim"] == 2
