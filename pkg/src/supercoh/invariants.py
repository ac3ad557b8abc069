"""Invariant polynomials k[X, Y]^H computed degree by degree by linear algebra."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from .linalg import rank, row_basis
from .module import fixed_points
from .sympow import HContext, format_poly, invariant_generator, monomial, poly_mul, poly_pow, sym_power


@dataclass
class InvariantReport:
    degree: int
    basis: list  # coefficient vectors, entry i multiplies X^i Y^(n-i)
    dim: int
    predicted_dim: int

    def as_row(self, ctx: HContext) -> dict:
        F = ctx.field
        return {
            "degree": self.degree,
            "dim": self.dim,
            "predicted_dim": self.predicted_dim,
            "basis": [format_poly(F, b) for b in self.basis],
            "basis_coeffs": [[list(F.coeffs(int(c))) for c in b] for b in self.basis],
        }


def invariant_basis(ctx: HContext, n: int) -> InvariantReport:
    """Common kernel of the s_i and t_j actions on S^n (RREF basis)."""
    S = sym_power(ctx, n)
    basis = row_basis(ctx.field, fixed_points(S.module))
    return InvariantReport(n, [np.array(b) for b in basis], len(basis), n // ctx.order + 1)


def predicted_invariants(ctx: HContext, n: int) -> list[np.ndarray]:
    """(phi^(p^r))^a Y^b with a p^(r+s) + b = n."""
    F = ctx.field
    f = invariant_generator(ctx)
    P = ctx.order
    out = []
    for a in range(n // P + 1):
        out.append(poly_mul(F, poly_pow(F, f, a), monomial(n - a * P, 0)))
    return out


def verify_invariant_generators(ctx: HContext, maxdeg: int) -> bool:
    """The predicted monomials span exactly the invariants in each degree up to maxdeg."""
    F = ctx.field
    for n in range(maxdeg + 1):
        report = invariant_basis(ctx, n)
        cand = np.array(predicted_invariants(ctx, n), dtype=np.uint8)
        if rank(F, cand) != report.dim:
            return False
        both = np.concatenate([cand, np.array(report.basis, dtype=np.uint8)], axis=0)
        if rank(F, both) != report.dim:
            return False
    return True


def invariant_table(ctx: HContext, maxdeg: int) -> list[dict]:
    return [invariant_basis(ctx, n).as_row(ctx) for n in range(maxdeg + 1)]


def table_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["degree", "dim", "predicted_dim", "basis"])
    for row in rows:
        writer.writerow([row["degree"], row["dim"], row["predicted_dim"], "; ".join(row["basis"])])
    return buf.getvalue()


def table_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, sort_keys=True, indent=2)
