"""Presented finite-dimensional superalgebras with a PBW monomial basis.

An algebra is given by ordered generators (name, parity, nilpotency
exponent) and rewriting rules ``g h -> sum c * word`` for generators
``g > h``.  Words in nondecreasing generator order with every run shorter
than its exponent are normal; the normal words form the PBW basis.
Structure constants are computed once by rewriting and then frozen.
"""

from __future__ import annotations

import functools
import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import NoCoproduct, NotAlgebraMap, NotFaithful, UnknownGenerator
from .gf import FieldElement, GaloisField, fp_linear_independent
from .linalg import row_basis
from .witt import WittPolynomials, witt_sum_polys


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int
    exponent: int
    weight: tuple = ()


class PresentedSuperalgebra:
    """A Z/2-graded local algebra presented by a confluent rewriting system."""

    def __init__(
        self,
        field: GaloisField,
        generators: Sequence[Generator],
        rules: Mapping[tuple[str, str], Sequence[tuple[object, Sequence[str]]]],
        descriptor: dict | None = None,
    ):
        self.field = field
        self.generators = tuple(generators)
        self.names = tuple(g.name for g in self.generators)
        self.index = {name: i for i, name in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate generator names")
        self.rules = {}
        for (g, h), rhs in rules.items():
            gi, hi = self._gen_index(g), self._gen_index(h)
            if gi <= hi:
                raise ValueError(f"rule {g}{h} must have its left generator later in the order")
            terms = []
            for coeff, word in rhs:
                code = field(coeff).code
                if code:
                    terms.append((code, tuple(self._gen_index(x) for x in word)))
            self.rules[(gi, hi)] = tuple(terms)
        self.descriptor = dict(descriptor or {"kind": "custom"})
        self.coproduct = None
        self._nf_cache = {}
        self._build_basis()
        self._build_structure_constants()
        self._check_grading()

    # -- generators and words ------------------------------------------------

    def _gen_index(self, name) -> int:
        if isinstance(name, (int, np.integer)):
            return int(name)
        try:
            return self.index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def _parse_word(self, word) -> tuple[int, ...]:
        """Accept 'u', ['s_1', 'u'], [('s_1', 2), 'u'] or a space separated string."""
        if isinstance(word, str):
            word = word.split()
        out = []
        for item in word:
            if isinstance(item, tuple):
                name, e = item
            else:
                name, e = item, 1
            out.extend([self._gen_index(name)] * int(e))
        return tuple(out)

    def is_normal(self, word: tuple[int, ...]) -> bool:
        return self._first_violation(word) is None

    def _first_violation(self, word):
        run = 1
        for i in range(len(word)):
            if i:
                if word[i] < word[i - 1]:
                    return ("swap", i - 1)
                run = run + 1 if word[i] == word[i - 1] else 1
            if run >= self.generators[word[i]].exponent:
                return ("power", i - run + 1)
        return None

    def _apply(self, word, step):
        """One rewriting step at a violation; returns list of (code, word)."""
        kind, i = step
        if kind == "power":
            return []
        g, h = word[i], word[i + 1]
        rhs = self.rules.get((g, h))
        if rhs is None:
            raise ValueError(f"no rewriting rule for {self.names[g]}{self.names[h]}")
        return [(c, word[:i] + w + word[i + 2 :]) for c, w in rhs]

    def _nf_word(self, word: tuple[int, ...]) -> dict:
        cached = self._nf_cache.get(word)
        if cached is not None:
            return cached
        step = self._first_violation(word)
        if step is None:
            result = {word: 1}
        else:
            result = self._combine(self._apply(word, step))
        self._nf_cache[word] = result
        return result

    def _combine(self, terms) -> dict:
        F = self.field
        out = {}
        for c, w in terms:
            for w2, c2 in self._nf_word(w).items():
                v = int(F.add_table[out.get(w2, 0), F.mul_table[c, c2]])
                if v:
                    out[w2] = v
                else:
                    out.pop(w2, None)
        return out

    def rewrite_with_first_step(self, word, position: int) -> dict:
        """Normal form after forcing the first rewrite at ``position``.

        ``position`` may point at any out-of-order adjacent pair or at the start
        of a run reaching the nilpotency exponent.
        """
        word = self._parse_word(word) if not isinstance(word, tuple) else word
        if position + 1 < len(word) and word[position] > word[position + 1]:
            return self._combine(self._apply(word, ("swap", position)))
        g = word[position]
        e = self.generators[g].exponent
        if word[position : position + e] == (g,) * e:
            return {}
        raise ValueError("no rewriting step applies at that position")

    # -- basis ---------------------------------------------------------------

    def _build_basis(self):
        ranges = [range(g.exponent) for g in self.generators]
        monos = sorted(itertools.product(*ranges), key=lambda e: (sum(e), e))
        self.basis = tuple(monos)
        self.dim = len(monos)
        self.basis_index = {m: i for i, m in enumerate(monos)}
        self.basis_parity = np.array(
            [sum(e * g.parity for e, g in zip(m, self.generators)) % 2 for m in monos], dtype=np.int64
        )
        nw = len(self.generators[0].weight) if self.generators else 0
        self.weight_rank = nw
        if nw:
            gw = np.array([g.weight for g in self.generators], dtype=np.int64)
            self.basis_weight = np.array(monos, dtype=np.int64) @ gw
        else:
            self.basis_weight = np.zeros((self.dim, 0), dtype=np.int64)

    def word_of(self, mono) -> tuple[int, ...]:
        return tuple(itertools.chain.from_iterable([i] * e for i, e in enumerate(mono)))

    def mono_of_word(self, word) -> tuple[int, ...]:
        mono = [0] * len(self.generators)
        for g in word:
            mono[g] += 1
        return tuple(mono)

    def _vector_of(self, nf: dict) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=np.uint8)
        for w, c in nf.items():
            vec[self.basis_index[self.mono_of_word(w)]] = c
        return vec

    def _build_structure_constants(self):
        d = self.dim
        C = np.zeros((d, d, d), dtype=np.uint8)
        words = [self.word_of(m) for m in self.basis]
        for i, wi in enumerate(words):
            for j, wj in enumerate(words):
                C[i, j] = self._vector_of(self._nf_word(wi + wj))
        self.structure = C
        self.structure.setflags(write=False)
        self.gen_vectors = []
        for gi in range(len(self.generators)):
            self.gen_vectors.append(self._vector_of(self._nf_word((gi,))))

    def _check_grading(self):
        if not self.weight_rank:
            return
        for (g, h), rhs in self.rules.items():
            lhs_w = self._word_weight((g, h))
            for _, w in rhs:
                if self._word_weight(w) != lhs_w:
                    raise ValueError(
                        f"rule {self.names[g]}{self.names[h]} is not homogeneous for the declared weights"
                    )

    def _word_weight(self, word) -> tuple:
        total = np.zeros(self.weight_rank, dtype=np.int64)
        for g in word:
            total += np.array(self.generators[g].weight, dtype=np.int64)
        return tuple(int(x) for x in total)

    # -- elements ------------------------------------------------------------

    def element(self, coeffs) -> "AlgebraElement":
        return AlgebraElement(self, coeffs)

    def from_terms(self, terms: Mapping) -> "AlgebraElement":
        vec = np.zeros(self.dim, dtype=np.uint8)
        for mono, c in terms.items():
            vec[self.basis_index[tuple(mono)]] = self.field(c).code
        return AlgebraElement(self, vec)

    @property
    def one(self) -> "AlgebraElement":
        vec = np.zeros(self.dim, dtype=np.uint8)
        vec[0] = 1
        return AlgebraElement(self, vec)

    @property
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim, dtype=np.uint8))

    def gen(self, name) -> "AlgebraElement":
        return AlgebraElement(self, self.gen_vectors[self._gen_index(name)])

    def basis_element(self, i: int) -> "AlgebraElement":
        vec = np.zeros(self.dim, dtype=np.uint8)
        vec[i] = 1
        return AlgebraElement(self, vec)

    def normal_form(self, word) -> "AlgebraElement":
        return AlgebraElement(self, self._vector_of(self._nf_word(self._parse_word(word))))

    def multiply(self, a, b) -> np.ndarray:
        """Product of coefficient vectors."""
        return self.field.matmul(np.asarray(b, dtype=np.uint8), self.right_factor_matrix(a))

    def right_factor_matrix(self, a) -> np.ndarray:
        """Matrix R with b @ R = a*b (row-vector convention)."""
        a = np.asarray(a, dtype=np.uint8)
        return self.field.einsum("i,ijk->jk", a, self.structure, length=self.dim)

    def left_mult_matrix(self, a) -> np.ndarray:
        """dim x dim matrix of b -> a*b acting on column vectors."""
        if isinstance(a, AlgebraElement):
            a = a.coeffs
        return np.ascontiguousarray(self.right_factor_matrix(a).T)

    def right_mult_matrix(self, a) -> np.ndarray:
        """dim x dim matrix of b -> b*a acting on column vectors."""
        if isinstance(a, AlgebraElement):
            a = a.coeffs
        a = np.asarray(a, dtype=np.uint8)
        return np.ascontiguousarray(self.field.einsum("j,ijk->ki", a, self.structure, length=self.dim))

    @functools.cached_property
    def basis_left_mult(self) -> np.ndarray:
        """Array L with L[i] = left multiplication by basis element i (column convention)."""
        return np.ascontiguousarray(np.transpose(self.structure, (0, 2, 1)))

    def augmentation(self, a) -> int:
        return int(np.asarray(a)[0])

    # -- structural checks ---------------------------------------------------

    def is_local(self) -> bool:
        return self.nilpotency_index() is not None

    def nilpotency_index(self, limit: int | None = None):
        """Smallest N with J^N = 0, or None if J is not nilpotent within ``limit``.

        J^(n+1) is spanned by g*x for generators g and x in J^n.
        """
        limit = limit or self.dim + 1
        F = self.field
        gens = [self.left_mult_matrix(v) for v in self.gen_vectors]
        power = np.eye(self.dim, dtype=np.uint8)[1:]
        n = 1
        while power.shape[0]:
            if np.any(power[:, 0]) or n >= limit:
                return None
            power = row_basis(F, np.concatenate([F.matmul(power, G.T) for G in gens], axis=0))
            n += 1
        return n

    def confluence_failures(self) -> list:
        """Critical overlaps whose two rewriting orders disagree."""
        failures = []
        n = len(self.generators)
        words = []
        for g, h, k in itertools.product(range(n), repeat=3):
            if g > h > k:
                words.append(((g, h, k), 0, 1))
        for g, h in itertools.product(range(n), repeat=2):
            if g > h:
                eg = self.generators[g].exponent
                eh = self.generators[h].exponent
                words.append(((g,) * eg + (h,), 0, eg - 1))
                words.append(((g,) + (h,) * eh, 0, 1))
        for word, pos_a, pos_b in words:
            a = self._first_step_variant(word, pos_a)
            b = self._first_step_variant(word, pos_b)
            if a != b:
                failures.append(tuple(self.names[x] for x in word))
        return failures

    def _first_step_variant(self, word, position):
        # position 0 on a power word means "apply the power rule first"
        g = word[position]
        e = self.generators[g].exponent
        if word[position : position + e] == (g,) * e and not (
            position + 1 < len(word) and word[position] > word[position + 1]
        ):
            return {}
        return self.rewrite_with_first_step(word, position)

    def is_confluent(self) -> bool:
        return not self.confluence_failures()

    # -- descriptors ---------------------------------------------------------

    def canonical_text(self) -> str:
        d = dict(self.descriptor)
        d["field"] = {"p": self.field.p, "m": self.field.m, "modulus": list(self.field.modulus)}
        return json.dumps(d, sort_keys=True, separators=(",", ":"))

    def __repr__(self):
        return f"PresentedSuperalgebra({self.descriptor.get('kind')}, dim={self.dim}, field={self.field!r})"

    def basis_name(self, i: int) -> str:
        parts = []
        for g, e in zip(self.generators, self.basis[i]):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) or "1"


class AlgebraElement:
    """Immutable linear combination of PBW basis monomials."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: PresentedSuperalgebra, coeffs):
        coeffs = np.array(coeffs, dtype=np.uint8)
        if coeffs.shape != (algebra.dim,):
            raise ValueError("coefficient vector has the wrong length")
        coeffs.setflags(write=False)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @property
    def terms(self) -> dict:
        F = self.algebra.field
        return {self.algebra.basis[i]: F.element(int(c)) for i, c in enumerate(self.coeffs) if c}

    def _other(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise ValueError("elements of different algebras")
            return other
        if isinstance(other, (int, FieldElement, np.integer)):
            return self.algebra.one * self.algebra.field(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.algebra, self.algebra.field.add(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.algebra, self.algebra.field.sub(self.coeffs, other.coeffs))

    def __neg__(self):
        return AlgebraElement(self.algebra, self.algebra.field.neg(self.coeffs))

    def __mul__(self, other):
        F = self.algebra.field
        if isinstance(other, (int, np.integer, FieldElement)):
            c = F(other).code
            return AlgebraElement(self.algebra, F.mul_table[c, self.coeffs])
        other = self._other(other)
        if other is NotImplemented:
            return other
        return AlgebraElement(self.algebra, self.algebra.multiply(self.coeffs, other.coeffs))

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer, FieldElement)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        result = self.algebra.one
        for _ in range(int(e)):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer, FieldElement)):
            other = self.algebra.one * self.algebra.field(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return other.algebra is self.algebra and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(self.coeffs.tobytes())

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def parity(self):
        """Parity if homogeneous, else None (zero counts as even)."""
        support = np.nonzero(self.coeffs)[0]
        if len(support) == 0:
            return 0
        pars = set(self.algebra.basis_parity[support].tolist())
        return pars.pop() if len(pars) == 1 else None

    def __repr__(self):
        alg = self.algebra
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                coeff = repr(alg.field.element(int(c)))
                name = alg.basis_name(i)
                if name == "1":
                    parts.append(coeff)
                elif coeff == "1":
                    parts.append(name)
                else:
                    parts.append(f"({coeff})*{name}" if "+" in coeff else f"{coeff}*{name}")
        return " + ".join(parts) or "0"


# -- constructors -------------------------------------------------------------


def _mu_list(field, mus):
    return [field(mu) for mu in mus]


def make_exterior2(field: GaloisField) -> PresentedSuperalgebra:
    """Exterior algebra on two odd primitive generators u, v."""
    gens = [Generator("u", 1, 2, (1, 0)), Generator("v", 1, 2, (0, 1))]
    rules = {("v", "u"): [(-1, ["u", "v"])]}
    return PresentedSuperalgebra(field, gens, rules, {"kind": "exterior2"})


def make_exterior1(field: GaloisField) -> PresentedSuperalgebra:
    """Exterior algebra on one odd generator (the group algebra of G_a^-)."""
    gens = [Generator("u", 1, 2, (1,))]
    return PresentedSuperalgebra(field, gens, {}, {"kind": "exterior1"})


def _kh_generators(p, r, s, offset=0):
    n = r + s
    gens = []
    for i in range(r):
        w = [0] * n
        w[i] = 1
        gens.append(Generator(f"s_{i + 1}", 0, p, tuple([0] * offset + w)))
    for j in range(s):
        w = [0] * n
        w[r + j] = 1
        gens.append(Generator(f"t_{j + 1}", 0, p, tuple([0] * offset + w)))
    return gens


def _commuting_rules(names):
    rules = {}
    for i, a in enumerate(names):
        for b in names[:i]:
            rules[(a, b)] = [(1, [b, a])]
    return rules


def make_kH(field: GaloisField, r: int, s: int, with_coproduct: bool = True) -> PresentedSuperalgebra:
    """Group algebra of G_{a(r)} x (Z/p)^s: k[s_1..s_r, t_1..t_s]/(p-th powers)."""
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0 and r + s >= 1")
    p = field.p
    gens = _kh_generators(p, r, s)
    names = [g.name for g in gens]
    A = PresentedSuperalgebra(field, gens, _commuting_rules(names), {"kind": "kH", "r": r, "s": s})
    if with_coproduct:
        A.coproduct = KHCoproduct(A, r, s)
    return A


def make_exterior1_kH(field: GaloisField, r: int, s: int) -> PresentedSuperalgebra:
    """Group algebra of G_a^- x G_{a(r)} x (Z/p)^s: u odd, u^2 = 0, everything commuting."""
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0 and r + s >= 1")
    gens = [Generator("u", 1, 2, (1,) + (0,) * (r + s))] + _kh_generators(field.p, r, s, offset=1)
    names = [g.name for g in gens]
    return PresentedSuperalgebra(field, gens, _commuting_rules(names), {"kind": "exterior1_kH", "r": r, "s": s})


def make_semidirect(field: GaloisField, r: int, s: int, mus: Sequence = ()) -> PresentedSuperalgebra:
    """Group algebra of (G_a^- x G_a^-) semidirect (G_{a(r)} x (Z/p)^s) with generic faithful action."""
    if r < 0 or s < 0 or r + s < 1:
        raise ValueError("need r, s >= 0 and r + s >= 1")
    mus = _mu_list(field, mus)
    if len(mus) != s:
        raise ValueError(f"expected {s} mu parameters, got {len(mus)}")
    if not fp_linear_independent(mus):
        raise NotFaithful("mu parameters are linearly dependent over the prime field")
    p = field.p
    if s == 0:
        # bigrading: exterior degree and an s-weight making every relation homogeneous
        u = Generator("u", 1, 2, (1, 0))
        v = Generator("v", 1, 2, (1, 1))
        gens = [u, v] + [Generator(f"s_{i + 1}", 0, p, (0, p**i)) for i in range(r)]
    else:
        u = Generator("u", 1, 2, (1,))
        v = Generator("v", 1, 2, (1,))
        gens = [u, v] + [Generator(g.name, 0, p, (0,)) for g in _kh_generators(p, r, s)]
    hnames = [g.name for g in gens[2:]]
    rules = _commuting_rules(hnames)
    rules[("v", "u")] = [(-1, ["u", "v"])]
    for i in range(1, r + 1):
        correction = [(f"s_{j}", p - 1) for j in range(1, i)]
        rules[(f"s_{i}", "u")] = [(1, ["u", f"s_{i}"]), (1, [name for name, e in correction for _ in range(e)] + ["v"])]
        rules[(f"s_{i}", "v")] = [(1, ["v", f"s_{i}"])]
    for j, mu in enumerate(mus, start=1):
        rules[(f"t_{j}", "u")] = [(1, ["u", f"t_{j}"]), (mu, ["v"]), (mu, ["v", f"t_{j}"])]
        rules[(f"t_{j}", "v")] = [(1, ["v", f"t_{j}"])]
    desc = {"kind": "semidirect", "r": r, "s": s, "mus": [list(mu.coeffs) for mu in mus]}
    return PresentedSuperalgebra(field, gens, rules, desc)


def make_semidirect_grouplike(field: GaloisField, s: int, mus: Sequence) -> PresentedSuperalgebra:
    """(G_a^- x G_a^-) semidirect (Z/p)^s written with t_i = g_i - 1, where g_i u = (u + mu_i v) g_i."""
    A = make_semidirect(field, 0, s, mus)
    A.descriptor = dict(A.descriptor, kind="semidirect_grouplike")
    return A


def from_descriptor(desc: Mapping, field: GaloisField) -> PresentedSuperalgebra:
    kind = desc["kind"]
    if kind == "exterior2":
        return make_exterior2(field)
    if kind == "exterior1":
        return make_exterior1(field)
    if kind == "kH":
        return make_kH(field, desc["r"], desc["s"])
    mus = [field.from_coeffs(c) for c in desc.get("mus", [])]
    if kind == "semidirect":
        return make_semidirect(field, desc["r"], desc["s"], mus)
    if kind == "exterior1_kH":
        return make_exterior1_kH(field, desc["r"], desc["s"])
    if kind == "semidirect_grouplike":
        return make_semidirect_grouplike(field, desc["s"], mus)
    raise ValueError(f"unknown algebra kind {kind!r}")


# -- coproduct on kH ----------------------------------------------------------


class KHCoproduct:
    """Coproduct on kH: Witt polynomials for the s_i, group-like for g_j = 1 + t_j.

    ``table[i]`` is a dim x dim array D with Delta(b_i) = sum D[a, b] b_a (x) b_b.
    """

    def __init__(self, A: PresentedSuperalgebra, r: int, s: int):
        self.algebra = A
        self.r, self.s = r, s
        self.witt: WittPolynomials | None = witt_sum_polys(A.field.p, r) if r else None
        d = A.dim
        F = A.field
        gen_tables = []
        for i in range(r):
            gen_tables.append(self._witt_delta(i))
        for j in range(s):
            t = A.gen_vectors[r + j]
            D = np.zeros((d, d), dtype=np.uint8)
            ti = int(np.nonzero(t)[0][0])
            D[ti, 0] = 1
            D[0, ti] = 1
            D[ti, ti] = 1
            gen_tables.append(D)
        self.generator_tables = gen_tables
        table = np.zeros((d, d, d), dtype=np.uint8)
        table[0, 0, 0] = 1
        for idx in range(1, d):
            mono = A.basis[idx]
            D = table[0]
            for g, e in enumerate(mono):
                for _ in range(e):
                    D = self.product(D, gen_tables[g])
            table[idx] = D
        self.table = table
        self.field = F

    def _witt_delta(self, i):
        A = self.algebra
        d = A.dim
        r = self.r
        D = np.zeros((d, d), dtype=np.uint8)
        p = A.field.p
        for mono, c in self.witt.polys[i].items():
            left = tuple(mono[:r]) + (0,) * self.s
            right = tuple(mono[r:]) + (0,) * self.s
            if max(left) >= p or max(right) >= p:
                continue
            a = A.basis_index[left]
            b = A.basis_index[right]
            D[a, b] = A.field.add_table[D[a, b], c % p]
        return D

    def product(self, D1, D2):
        """Multiply two elements of kH (x) kH given as coefficient matrices."""
        A = self.algebra
        F = A.field
        C = A.structure
        tmp = F.einsum("ij,ikm->jkm", D1, C, length=A.dim)  # sum_i D1[i,j] C[i,k,m]
        tmp = F.einsum("jkm,kl->jlm", tmp, D2, length=A.dim)
        return F.einsum("jlm,jln->mn", tmp, C, length=A.dim * A.dim)

    def delta(self, a) -> np.ndarray:
        a = np.asarray(a.coeffs if isinstance(a, AlgebraElement) else a, dtype=np.uint8)
        return self.field.einsum("i,iab->ab", a, self.table, length=self.algebra.dim)

    def is_coassociative(self) -> bool:
        F = self.field
        T = self.table
        for g in range(len(self.algebra.generators)):
            D = self.generator_tables[g]
            left = F.einsum("ab,aij->ijb", D, T, length=self.algebra.dim)
            right = F.einsum("ab,bjk->ajk", D, T, length=self.algebra.dim)
            if not np.array_equal(left, right):
                return False
        return True

    def is_counital(self) -> bool:
        A = self.algebra
        for g in range(len(A.generators)):
            D = self.generator_tables[g]
            if not (np.array_equal(D[0, :], A.gen_vectors[g]) and np.array_equal(D[:, 0], A.gen_vectors[g])):
                return False
        return True

    def is_algebra_map(self) -> bool:
        A = self.algebra
        F = self.field
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.delta(A.structure[i, j])
                if not np.array_equal(lhs, self.product(self.table[i], self.table[j])):
                    return False
        return True


def divided_power_delta(A: PresentedSuperalgebra, r: int, j: int) -> np.ndarray:
    """Delta(s_j) computed independently as the divided-power coproduct of gamma_{p^(j-1)}.

    The s_i are identified with gamma_{p^(i-1)}, so gamma_n equals the product of
    s_{i+1}^{n_i} / n_i! over the base-p digits n_i of n.
    """
    F = A.field
    p = F.p
    d = A.dim
    n = p ** (j - 1)

    def gamma(k):
        digits = []
        coeff = F.one
        for _ in range(r):
            digits.append(k % p)
            coeff = coeff / F(_factorial(k % p))
            k //= p
        if k:
            return None, None
        mono = tuple(digits) + (0,) * (len(A.generators) - r)
        return A.basis_index[mono], coeff

    D = np.zeros((d, d), dtype=np.uint8)
    for a in range(n + 1):
        ia, ca = gamma(a)
        ib, cb = gamma(n - a)
        D[ia, ib] = F.add_table[D[ia, ib], (ca * cb).code]
    return D


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# -- algebra maps -------------------------------------------------------------


class AlgebraMap:
    """Algebra homomorphism determined by generator images, checked on relations."""

    def __init__(self, source: PresentedSuperalgebra, target: PresentedSuperalgebra, images: Mapping):
        if source.field != target.field:
            raise NotAlgebraMap("source and target must share the field")
        self.source = source
        self.target = target
        F = source.field
        gen_img = []
        for name in source.names:
            img = images.get(name, 0)
            if isinstance(img, AlgebraElement):
                vec = img.coeffs
            elif img == 0:
                vec = np.zeros(target.dim, dtype=np.uint8)
            else:
                vec = target.normal_form(img).coeffs
            gen_img.append(np.array(vec, dtype=np.uint8))
        self.gen_images = gen_img
        matrix = np.zeros((source.dim, target.dim), dtype=np.uint8)
        for idx, mono in enumerate(source.basis):
            vec = target.one.coeffs
            for g, e in enumerate(mono):
                for _ in range(e):
                    vec = target.multiply(vec, gen_img[g])
            matrix[idx] = vec
        self.matrix = matrix  # row i = image of source basis element i
        self._verify()

    def _verify(self):
        S, T = self.source, self.target
        for (g, h), rhs in S.rules.items():
            lhs = T.multiply(self.gen_images[g], self.gen_images[h])
            total = np.zeros(T.dim, dtype=np.uint8)
            for c, w in rhs:
                vec = T.one.coeffs
                for x in w:
                    vec = T.multiply(vec, self.gen_images[x])
                total = T.field.add(total, T.field.scale(c, vec))
            if not np.array_equal(lhs, total):
                raise NotAlgebraMap(f"relation {S.names[g]}{S.names[h]} is not preserved")
        for g, gen in enumerate(S.generators):
            vec = T.one.coeffs
            for _ in range(gen.exponent):
                vec = T.multiply(vec, self.gen_images[g])
            if np.any(vec):
                raise NotAlgebraMap(f"{gen.name}^{gen.exponent} does not map to zero")
            if np.any(self.gen_images[g]) and T.basis_parity[np.nonzero(self.gen_images[g])[0]].tolist() != [
                gen.parity
            ] * len(np.nonzero(self.gen_images[g])[0]):
                raise NotAlgebraMap(f"image of {gen.name} has the wrong parity")

    def __call__(self, a):
        a = a.coeffs if isinstance(a, AlgebraElement) else a
        return AlgebraElement(self.target, self.source.field.matmul(np.asarray(a, dtype=np.uint8), self.matrix))

    def is_multiplicative(self) -> bool:
        S, T = self.source, self.target
        for i in range(S.dim):
            for j in range(S.dim):
                lhs = self.source.field.matmul(S.structure[i, j], self.matrix)
                rhs = T.multiply(self.matrix[i], self.matrix[j])
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def compose(self, other: "AlgebraMap") -> "AlgebraMap":
        """self after other."""
        images = {name: self(other.gen_images[i]) for i, name in enumerate(other.source.names)}
        return AlgebraMap(other.source, self.target, images)


def quotient_to_kH(A: PresentedSuperalgebra, kH: PresentedSuperalgebra | None = None) -> AlgebraMap:
    """kG -> kH killing u and v."""
    r, s = A.descriptor["r"], A.descriptor["s"]
    kH = kH or make_kH(A.field, r, s, with_coproduct=False)
    images = {name: kH.gen(name) for name in kH.names}
    return AlgebraMap(A, kH, images)


def quotient_to_factor(A: PresentedSuperalgebra, name: str, factor: PresentedSuperalgebra | None = None) -> AlgebraMap:
    """Map onto k[x]/(x^p) sending generator ``name`` to x and every other generator to 0."""
    gen = A.generators[A._gen_index(name)]
    if gen.parity != 0:
        raise ValueError("only even generators have truncated polynomial quotients")
    factor = factor or make_kH(A.field, 1, 0, with_coproduct=False)
    return AlgebraMap(A, factor, {name: factor.gen(factor.names[0])})
