"""Finite fields F_{p^m} with table-driven, vectorised arithmetic.

Elements are encoded as integers ``0 <= code < q`` where the base-``p``
digits of ``code`` are the coefficients (low to high) of the residue
class modulo the field's defining polynomial.  Arrays of codes are the
currency of the linear algebra layer; :class:`FieldElement` wraps a single
code for scalar work.
"""

from __future__ import annotations

import functools
import itertools
import re
from typing import Iterable, Sequence

import numpy as np

from .errors import DivisionByZero, FieldMismatch

_FLOAT_EXACT = 2**52


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# -- polynomials over F_p as coefficient lists, low to high -----------------

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    a = _ptrim(a)
    b = _ptrim(b)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _ptrim(a)
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pgcd(a, b, p):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility over F_p via gcd(f, x^{p^d} - x) = 1 for 1 <= d < deg f."""
    f = _ptrim([c % p for c in poly])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    xpow = [0, 1]
    for _ in range(1, m):
        xpow = _ppowmod(xpow, p, f, p)
        diff = list(xpow) + [0] * max(0, 2 - len(xpow))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m in lexicographic (low-to-high) order."""
    if m == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=m):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")


class GaloisField:
    """The field F_{p^m} = F_p[w]/(modulus)."""

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p) or p == 2:
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = smallest_irreducible(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.modulus = modulus
        self.q = p**m
        if self.q > 256:
            raise ValueError("only fields with at most 256 elements are supported")
        self._build_tables()

    # -- construction -------------------------------------------------------

    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        digits = np.array([self._digits(c) for c in range(q)], dtype=np.int64)
        self._digit_table = digits
        self._place = p ** np.arange(m, dtype=np.int64)
        add = (digits[:, None, :] + digits[None, :, :]) % p
        self.add_table = (add @ self._place).astype(np.uint8)
        neg = (-digits) % p
        self.neg_table = (neg @ self._place).astype(np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            for b in range(a, q):
                prod = _pmod(_pmul(list(digits[a]), list(digits[b]), p), self.modulus, p)
                code = sum(int(c) * p**i for i, c in enumerate(prod))
                mul[a, b] = mul[b, a] = code
        self.mul_table = mul
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv
        self.sub_table = self.add_table[:, self.neg_table].copy()

    def _digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(code % self.p)
            code //= self.p
        return out

    # -- identity -----------------------------------------------------------

    @property
    def spec(self) -> str:
        return str(self.p) if self.m == 1 else f"{self.p}^{self.m}"

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def __eq__(self, other):
        return (
            isinstance(other, GaloisField)
            and self.p == other.p
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m}, modulus={list(self.modulus)})"

    # -- elements -----------------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self!r}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        return FieldElement(self, int(value) % self.p)

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code))

    def from_coeffs(self, coeffs: Sequence[int]) -> "FieldElement":
        coeffs = list(coeffs) + [0] * (self.m - len(coeffs))
        if len(coeffs) > self.m:
            raise ValueError("too many coefficients")
        return FieldElement(self, sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs)))

    def parse(self, text: str) -> "FieldElement":
        """Parse expressions such as ``"2"``, ``"w"``, ``"1+2w"``, ``"w^2-1"``."""
        text = text.replace(" ", "").replace("*", "")
        if not text:
            raise ValueError("empty field element")
        if text[0] not in "+-":
            text = "+" + text
        term_re = r"([+-])(\d*)(w?)(?:\^(\d+))?"
        if not re.fullmatch(f"(?:{term_re})+", text):
            raise ValueError(f"cannot parse field element {text!r}")
        total = self.zero
        for sign, coef, var, exp in re.findall(term_re, text):
            if not coef and not var:
                raise ValueError(f"cannot parse field element {text!r}")
            term = self(int(coef) if coef else 1)
            if var:
                term = term * self.gen ** (int(exp) if exp else 1)
            elif exp:
                term = term ** int(exp)
            total = total + term if sign == "+" else total - term
        return total

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    @property
    def gen(self) -> "FieldElement":
        """The class of w, the root of the defining polynomial."""
        if self.m == 1:
            raise ValueError(f"{self!r} is a prime field and has no generator w")
        return FieldElement(self, self.p)

    def elements(self) -> list["FieldElement"]:
        return [FieldElement(self, c) for c in range(self.q)]

    def coeffs(self, code: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self._digit_table[code])

    # -- vectorised arithmetic on code arrays --------------------------------

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.sub_table[a, b]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise DivisionByZero("inverse of zero")
        return self.inv_table[a]

    def from_ints(self, a):
        """Map integer arrays into the prime subfield (codes)."""
        return (np.asarray(a, dtype=np.int64) % self.p).astype(np.uint8)

    def planes(self, a) -> np.ndarray:
        """Coefficient planes: shape (m, *a.shape), integer entries in [0, p)."""
        a = np.asarray(a, dtype=np.int64)
        return np.moveaxis(self._digit_table[a], -1, 0)

    def from_planes(self, planes) -> np.ndarray:
        planes = np.asarray(planes, dtype=np.int64) % self.p
        return np.tensordot(self._place, planes, axes=(0, 0)).astype(np.uint8)

    def bilinear(self, a, b, op, length: int):
        """Apply an integer bilinear map ``op`` (e.g. matmul) over the field.

        ``length`` bounds the number of products summed into a single
        output entry; it decides whether float64 BLAS is exact.
        """
        a = np.asarray(a)
        b = np.asarray(b)
        p = self.p
        use_float = max(length, 1) * (p - 1) ** 2 < _FLOAT_EXACT
        dtype = np.float64 if use_float else np.int64
        if self.m == 1:
            out = op(a.astype(dtype), b.astype(dtype))
            return (np.asarray(out).astype(np.int64) % p).astype(np.uint8)
        pa = self.planes(a).astype(dtype)
        pb = self.planes(b).astype(dtype)
        m = self.m
        prod = [None] * (2 * m - 1)
        for i in range(m):
            for j in range(m):
                term = np.asarray(op(pa[i], pb[j])).astype(np.int64) % p
                prod[i + j] = term if prod[i + j] is None else (prod[i + j] + term) % p
        mod = self.modulus
        for k in range(2 * m - 2, m - 1, -1):
            top = prod[k]
            for i in range(m):
                if mod[i]:
                    prod[k - m + i] = (prod[k - m + i] - mod[i] * top) % p
        return self.from_planes(np.stack(prod[:m]))

    def matmul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        return self.bilinear(a, b, np.matmul, a.shape[-1])

    def einsum(self, spec: str, a, b, length: int | None = None):
        if length is None:
            length = int(np.prod(np.asarray(a).shape))
        return self.bilinear(a, b, lambda x, y: np.einsum(spec, x, y, optimize=True), length)

    def scale(self, c: int, a):
        return self.mul_table[int(c), np.asarray(a)]


@functools.lru_cache(maxsize=None)
def GF(p: int, m: int = 1, modulus: tuple[int, ...] | None = None) -> GaloisField:
    """Cached field constructor; identical arguments give the identical object."""
    return GaloisField(p, m, modulus)


def parse_field_spec(spec: str) -> GaloisField:
    """Parse ``"p"`` or ``"p^m"`` into a field."""
    spec = spec.strip()
    match = re.fullmatch(r"(\d+)(?:\^(\d+))?", spec)
    if not match:
        raise ValueError(f"invalid field spec {spec!r}; expected 'p' or 'p^m'")
    p = int(match.group(1))
    m = int(match.group(2) or 1)
    return GF(p, m)


class FieldElement:
    """Immutable element of a :class:`GaloisField`."""

    __slots__ = ("field", "code")

    def __init__(self, field: GaloisField, code: int):
        if not 0 <= code < field.q:
            raise ValueError(f"code {code} out of range for {field!r}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "code", int(code))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.code)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine elements of {self.field!r} and {other.field!r}")
            return other
        if isinstance(other, (int, np.integer)):
            return FieldElement(self.field, int(other) % self.field.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, int(self.field.add_table[self.code, other.code]))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, int(self.field.sub_table[self.code, other.code]))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.code]))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, int(self.field.mul_table[self.code, other.code]))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.code == 0:
            raise DivisionByZero("division by zero in " + repr(self.field))
        return FieldElement(self.field, int(self.field.inv_table[self.code]))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, i: int = 1) -> "FieldElement":
        return frobenius(self, i)

    def is_zero(self) -> bool:
        return self.code == 0

    def __bool__(self):
        return self.code != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.code == other.code
        if isinstance(other, (int, np.integer)):
            return self.code == int(other) % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.modulus, self.code))

    def __int__(self):
        if self.field.m != 1:
            raise TypeError("only prime-field elements convert to int")
        return self.code

    def __repr__(self):
        if self.field.m == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "w" if i == 1 else f"w^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(reversed(terms)) or "0"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
        raise TypeError("field_arith expects FieldElement operands")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field!r} vs {b.field!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def frobenius(a: FieldElement, i: int = 1) -> FieldElement:
    """Return a^(p^i)."""
    if i < 0:
        raise ValueError("Frobenius power must be non-negative")
    field = a.field
    result = a
    for _ in range(i % field.m if field.m > 1 else 0):
        result = result**field.p
    return result


def fp_linear_independent(mus: Iterable[FieldElement]) -> bool:
    """True iff the elements are linearly independent over the prime field."""
    from .linalg import rank

    mus = list(mus)
    if not mus:
        return True
    field = mus[0].field
    for mu in mus:
        if mu.field != field:
            raise FieldMismatch("all elements must lie in one field")
    prime = GF(field.p)
    mat = np.array([mu.coeffs for mu in mus], dtype=np.uint8).T
    return rank(prime, mat) == len(mus)


def embed(a: FieldElement, target: GaloisField) -> FieldElement:
    """Embed ``a`` into an extension ``target`` of its field (same characteristic)."""
    src = a.field
    if src == target:
        return a
    if src.p != target.p or target.m % src.m:
        raise FieldMismatch(f"{src!r} does not embed in {target!r}")
    if src.m == 1:
        return target(a.code)
    root = _root_of(src.modulus, target)
    total = target.zero
    for i, c in enumerate(a.coeffs):
        total = total + root**i * c
    return total


@functools.lru_cache(maxsize=None)
def _root_of(modulus: tuple[int, ...], target: GaloisField) -> FieldElement:
    for x in target.elements():
        val = target.zero
        for c in reversed(modulus):
            val = val * x + c
        if val.is_zero():
            return x
    raise FieldMismatch("no root of the defining polynomial in the target field")
