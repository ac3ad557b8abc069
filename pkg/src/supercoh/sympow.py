"""Symmetric powers S^n(V^#) of the two-dimensional kH-module as explicit modules.

A degree-n homogeneous polynomial in X, Y is a coefficient vector of
length n+1 whose entry i multiplies X^i Y^(n-i).  On these, s_j lowers the
X-degree by p^(j-1) with a binomial coefficient and g_j = 1 + t_j
substitutes X -> X - mu_j Y.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .algebra import PresentedSuperalgebra, make_kH
from .errors import DecompositionFailed, NotInvariant
from .gf import FieldElement, GaloisField, embed, fp_linear_independent
from .errors import NotFaithful
from .linalg import nullspace, rank, rref
from .module import (
    ShiftedPoint,
    SuperModule,
    fixed_points,
    is_equivariant,
    is_free_restriction,
    is_projective_kH,
    is_uniserial,
    tensor,
    verify_direct_sum,
)


@functools.lru_cache(maxsize=None)
def _kh(field: GaloisField, r: int, s: int) -> PresentedSuperalgebra:
    return make_kH(field, r, s, with_coproduct=True)


@dataclass(frozen=True)
class HContext:
    """The group H = G_{a(r)} x (Z/p)^s acting on V^# through parameters mu."""

    field: GaloisField
    r: int
    s: int
    mus: tuple

    @classmethod
    def create(cls, field: GaloisField, r: int, s: int, mus: Sequence = ()) -> "HContext":
        mus = tuple(field(m) for m in mus)
        if len(mus) != s:
            raise ValueError(f"expected {s} mu parameters, got {len(mus)}")
        if not fp_linear_independent(mus):
            raise NotFaithful("mu parameters are linearly dependent over the prime field")
        if r < 0 or s < 0 or r + s < 1:
            raise ValueError("need r + s >= 1")
        return cls(field, r, s, mus)

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def order(self) -> int:
        return self.p ** (self.r + self.s)

    @property
    def algebra(self) -> PresentedSuperalgebra:
        return _kh(self.field, self.r, self.s)

    def over(self, target: GaloisField) -> "HContext":
        """Same action with mu embedded into a larger field."""
        return HContext(target, self.r, self.s, tuple(embed(m, target) for m in self.mus))


@dataclass(frozen=True)
class SymPower:
    n: int
    module: SuperModule
    context: HContext = field(repr=False)

    @property
    def dim(self) -> int:
        return self.module.dim


def _binom_mod(a: int, b: int, p: int) -> int:
    return comb(a, b) % p if 0 <= b <= a else 0


def sym_power_matrices(ctx: HContext, n: int) -> dict:
    F = ctx.field
    p = ctx.p
    mats = {}
    for j in range(1, ctx.r + 1):
        step = p ** (j - 1)
        M = np.zeros((n + 1, n + 1), dtype=np.uint8)
        for a in range(step, n + 1):
            M[a - step, a] = _binom_mod(a, step, p)
        mats[f"s_{j}"] = M
    for j, mu in enumerate(ctx.mus, start=1):
        neg_mu = -mu
        M = np.zeros((n + 1, n + 1), dtype=np.uint8)
        for a in range(n + 1):
            # (X - mu Y)^a Y^(n-a) = sum_c binom(a, c) (-mu)^(a-c) X^c Y^(n-c)
            for c in range(a + 1):
                coeff = F(_binom_mod(a, c, p)) * neg_mu ** (a - c)
                M[c, a] = coeff.code
        M[np.arange(n + 1), np.arange(n + 1)] = F.sub(M[np.arange(n + 1), np.arange(n + 1)], 1)
        mats[f"t_{j}"] = M
    return mats


def sym_power(ctx: HContext, n: int) -> SymPower:
    if n < 0:
        raise ValueError("degree must be non-negative")
    module = SuperModule(ctx.algebra, sym_power_matrices(ctx, n))
    return SymPower(n, module, ctx)


# -- polynomials --------------------------------------------------------------


def poly_mul(F: GaloisField, a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    out = np.zeros(len(a) + len(b) - 1, dtype=np.uint8)
    for i, c in enumerate(a):
        if c:
            out[i : i + len(b)] = F.add(out[i : i + len(b)], F.scale(int(c), b))
    return out


def poly_pow(F: GaloisField, a, e: int) -> np.ndarray:
    out = np.array([1], dtype=np.uint8)
    for _ in range(e):
        out = poly_mul(F, out, a)
    return out


def monomial(n: int, i: int) -> np.ndarray:
    """X^i Y^(n-i)."""
    v = np.zeros(n + 1, dtype=np.uint8)
    v[i] = 1
    return v


def format_poly(F: GaloisField, coeffs) -> str:
    n = len(coeffs) - 1
    terms = []
    for i in range(n, -1, -1):
        c = int(coeffs[i])
        if not c:
            continue
        parts = []
        if i:
            parts.append("X" if i == 1 else f"X^{i}")
        if n - i:
            parts.append("Y" if n - i == 1 else f"Y^{n - i}")
        mono = "*".join(parts)
        cs = repr(F.element(c))
        if not mono:
            terms.append(cs)
        elif cs == "1":
            terms.append(mono)
        else:
            terms.append(f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
    return " + ".join(terms) or "0"


def orbit_product_phi(ctx: HContext) -> np.ndarray:
    """phi(X, Y) = prod over a in F_p^s of (X + (a_1 mu_1 + ... + a_s mu_s) Y)."""
    F = ctx.field
    out = np.array([1], dtype=np.uint8)
    for a in itertools.product(range(ctx.p), repeat=ctx.s):
        c = F.zero
        for ai, mu in zip(a, ctx.mus):
            c = c + mu * ai
        # linear form c*Y + X in the X-exponent indexing: [Y coeff, X coeff]
        out = poly_mul(F, out, np.array([c.code, 1], dtype=np.uint8))
    return out


def invariant_generator(ctx: HContext) -> np.ndarray:
    """phi^(p^r), the invariant of degree p^(r+s)."""
    return poly_pow(ctx.field, orbit_product_phi(ctx), ctx.p**ctx.r)


def multiplication_map(ctx: HContext, f, source_degree: int) -> np.ndarray:
    """Matrix of S^source_degree -> S^(source_degree + deg f), m -> f * m."""
    f = np.asarray(f, dtype=np.uint8)
    d = len(f) - 1
    M = np.zeros((source_degree + d + 1, source_degree + 1), dtype=np.uint8)
    for i in range(source_degree + 1):
        M[i : i + d + 1, i] = f
    return M


def is_invariant(ctx: HContext, poly) -> bool:
    S = sym_power(ctx, len(poly) - 1)
    F = ctx.field
    return all(not np.any(F.matmul(G, np.asarray(poly, dtype=np.uint8))) for G in S.module.matrices)


# -- periodicity, twists and the Steinberg map ------------------------------------


@dataclass
class DecompositionCertificate:
    n: int
    free_part: np.ndarray
    complement_part: np.ndarray
    dims: tuple
    free_summand_projective: bool


def periodicity_decomposition(ctx: HContext, n: int) -> DecompositionCertificate:
    """S^n = Y^(n+1-P) S^(P-1) + phi^(p^r) S^(n-P) with P = p^(r+s), checked as modules."""
    P = ctx.order
    if n < P:
        raise ValueError(f"need n >= {P}")
    F = ctx.field
    Sn = sym_power(ctx, n)
    top = sym_power(ctx, P - 1)
    rest = sym_power(ctx, n - P)
    y_power = monomial(n + 1 - P, 0)
    f_free = multiplication_map(ctx, y_power, P - 1)
    f_rest = multiplication_map(ctx, invariant_generator(ctx), n - P)
    try:
        ok = verify_direct_sum(Sn.module, [(f_free, top.module), (f_rest, rest.module)])
    except Exception as exc:
        raise DecompositionFailed(str(exc)) from exc
    if not ok:
        raise DecompositionFailed(f"S^{n} is not the direct sum of the two images")
    projective = is_projective_kH(top.module)
    if not projective:
        raise DecompositionFailed(f"S^{P - 1} is not free")
    return DecompositionCertificate(n, f_free, f_rest, (Sn.dim, top.dim, rest.dim), projective)


def frobenius_twist_subspace(ctx: HContext, j: int, base_degree: int) -> SuperModule:
    """Span of p^j-th powers of S^base_degree inside S^(p^j base_degree), with its action."""
    q = ctx.p**j
    S = sym_power(ctx, q * base_degree)
    idx = np.arange(base_degree + 1) * q
    inside = np.zeros(S.dim, dtype=bool)
    inside[idx] = True
    action = {}
    for name, G in zip(ctx.algebra.names, S.module.matrices):
        block = G[:, idx]
        if np.any(block[~inside]):
            raise NotInvariant(f"{name} moves the p^{j}-th powers out of their span")
        action[name] = block[idx]
    return SuperModule(ctx.algebra, action)


def twist_embedding(ctx: HContext, j: int, base_degree: int) -> np.ndarray:
    q = ctx.p**j
    E = np.zeros((q * base_degree + 1, base_degree + 1), dtype=np.uint8)
    E[np.arange(base_degree + 1) * q, np.arange(base_degree + 1)] = 1
    return E


def steinberg_map(ctx: HContext, i: int) -> tuple[SuperModule, SuperModule, np.ndarray]:
    """(T, S^(p^i - 1), multiplication matrix T -> S^(p^i - 1))."""
    p = ctx.p
    T = frobenius_twist_subspace(ctx, 0, p - 1)
    for j in range(1, i):
        T = tensor(T, frobenius_twist_subspace(ctx, j, p - 1))
    target = sym_power(ctx, p**i - 1)
    # basis of T: digits (a_0, .., a_{i-1}) in row-major order; product is X^(sum a_j p^j) Y^(...)
    M = np.zeros((target.dim, T.dim), dtype=np.uint8)
    for col, digits in enumerate(itertools.product(range(p), repeat=i)):
        M[sum(a * p**j for j, a in enumerate(digits)), col] = 1
    return T, target.module, M


def steinberg_check(ctx: HContext, i: int) -> bool:
    if not 1 <= i <= ctx.r + ctx.s:
        raise ValueError("need 1 <= i <= r + s")
    T, target, M = steinberg_map(ctx, i)
    if T.dim != target.dim:
        return False
    return is_equivariant(M, T, target) and rank(ctx.field, M) == target.dim


# -- rank varieties ------------------------------------------------------------------


def rank_variety_matrix(ctx: HContext) -> list[list[FieldElement]]:
    """(r+s) x (r+s) matrix whose first i rows cut out the rank variety of S^(p^i - 1)."""
    F = ctx.field
    r, s = ctx.r, ctx.s
    rows = []
    for k in range(r + s):
        row = [F.zero] * r
        if k < r:
            row[k] = -F.one
        row += [mu.frobenius(k) for mu in ctx.mus]
        rows.append(row)
    return rows


@dataclass
class RankVarietyScan:
    i: int
    field: GaloisField
    free: list
    non_free: list
    predicted_non_free: list
    codimension: int

    @property
    def agrees(self) -> bool:
        return self.non_free == self.predicted_non_free

    def table(self) -> list[dict]:
        pred = set(self.predicted_non_free)
        rows = []
        for pt in sorted(self.free + self.non_free):
            rows.append(
                {
                    "point": [repr(self.field.element(c)) for c in pt],
                    "observed": "free" if pt in set(self.free) else "non-free",
                    "predicted": "non-free" if pt in pred else "free",
                }
            )
        return rows


def rank_variety_scan(ctx: HContext, i: int, sample_field: GaloisField | None = None) -> RankVarietyScan:
    """Classify every nonzero rational point by freeness of S^(p^i - 1) restricted to it."""
    if not 1 <= i <= ctx.r + ctx.s:
        raise ValueError("need 1 <= i <= r + s")
    sample = sample_field or ctx.field
    lifted = ctx.over(sample) if sample != ctx.field else ctx
    F = sample
    M = sym_power(lifted, ctx.p**i - 1).module
    rows = rank_variety_matrix(lifted)[:i]
    R = np.array([[c.code for c in row] for row in rows], dtype=np.uint8)
    nvar = ctx.r + ctx.s
    free, non_free, predicted = [], [], []
    for pt in itertools.product(range(F.q), repeat=nvar):
        if not any(pt):
            continue
        point = ShiftedPoint(tuple(F.element(c) for c in pt))
        if is_free_restriction(M, point):
            free.append(pt)
        else:
            non_free.append(pt)
        if not np.any(F.matmul(R, np.array(pt, dtype=np.uint8))):
            predicted.append(pt)
    codim = rank(F, R)
    return RankVarietyScan(i, F, free, non_free, predicted, codim)


# -- summaries used by the command line and tests -----------------------------------


def sympower_suite(ctx: HContext, max_n: int | None = None) -> dict:
    """Fixed points, projectivity, periodicity, uniseriality and Steinberg checks."""
    P = ctx.order
    p = ctx.p
    max_n = 2 * P if max_n is None else max_n
    rows = []
    ok = True
    for n in range(max_n + 1):
        S = sym_power(ctx, n)
        fixed = fixed_points(S.module).shape[0]
        proj = is_projective_kH(S.module)
        entry = {
            "n": n,
            "dim": S.dim,
            "fixed": fixed,
            "fixed_predicted": n // P + 1,
            "projective": proj,
            "projective_predicted": n % P == P - 1,
        }
        if n >= P:
            try:
                periodicity_decomposition(ctx, n)
                entry["periodicity"] = True
            except DecompositionFailed:
                entry["periodicity"] = False
        if 1 <= n <= p - 1:
            entry["uniserial"] = is_uniserial(S.module)
        ok &= entry["fixed"] == entry["fixed_predicted"]
        ok &= entry["projective"] == entry["projective_predicted"]
        ok &= entry.get("periodicity", True) and entry.get("uniserial", True)
        rows.append(entry)
    steinberg = {i: steinberg_check(ctx, i) for i in range(1, ctx.r + ctx.s + 1)}
    ok &= all(steinberg.values())
    return {"rows": rows, "steinberg": steinberg, "passed": bool(ok)}
