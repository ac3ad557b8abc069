"""Witt vector addition polynomials S_0, S_1, ... reduced mod p.

Polynomials are dicts mapping exponent tuples over the variables
``x_1..x_r, y_1..y_r`` to integer coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import HeightTooLarge

MAX_HEIGHT = 3


def _padd(a, b, scale=1):
    out = dict(a)
    for mono, c in b.items():
        v = out.get(mono, 0) + scale * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def _pmul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
            v = out.get(mono, 0) + c1 * c2
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


def _ppow(a, e, nvars):
    result = {(0,) * nvars: 1}
    base = a
    while e:
        if e & 1:
            result = _pmul(result, base)
        base = _pmul(base, base)
        e >>= 1
    return result


def _var(i, nvars, e=1):
    mono = [0] * nvars
    mono[i] = e
    return {tuple(mono): 1}


@dataclass(frozen=True)
class WittPolynomials:
    p: int
    r: int
    polys: tuple  # S_0..S_{r-1}, each a dict exponent-tuple -> coefficient in [0, p)

    @property
    def nvars(self) -> int:
        return 2 * self.r

    def weight(self, mono) -> int:
        """Witt weight: x_i and y_i have weight p^(i-1)."""
        r, p = self.r, self.p
        return sum(e * p**(i % r) for i, e in enumerate(mono))

    def evaluate(self, i, xs, ys, add, mul, one, zero):
        """Evaluate S_i on values from any ring given by its operations."""
        values = list(xs) + list(ys)
        total = zero
        for mono, c in sorted(self.polys[i].items()):
            term = one
            for v, e in zip(values, mono):
                for _ in range(e):
                    term = mul(term, v)
            for _ in range(c):
                total = add(total, term)
        return total


def ghost(p: int, n: int, var_offset: int, nvars: int):
    """Ghost component w_n = sum_j p^j X_j^(p^(n-j)) over variables starting at var_offset."""
    out = {}
    for j in range(n + 1):
        out = _padd(out, _var(var_offset + j, nvars, p ** (n - j)), p**j)
    return out


def witt_sum_polys(p: int, r: int) -> WittPolynomials:
    """Addition polynomials of length-r Witt vectors, computed over Z then reduced mod p.

    Solves w_n(S) = w_n(X) + w_n(Y) recursively; every division by p^n must
    be exact, which is asserted.
    """
    if r > MAX_HEIGHT:
        raise HeightTooLarge(f"height {r} exceeds the supported maximum {MAX_HEIGHT}")
    if r < 1:
        raise ValueError("height must be at least 1")
    nvars = 2 * r
    integral = []
    for n in range(r):
        rhs = _padd(ghost(p, n, 0, nvars), ghost(p, n, r, nvars))
        for j, sj in enumerate(integral):
            rhs = _padd(rhs, _ppow(sj, p ** (n - j), nvars), -(p**j))
        denom = p**n
        sn = {}
        for mono, c in rhs.items():
            assert c % denom == 0, "Witt polynomial denominators failed to cancel"
            sn[mono] = c // denom
        integral.append(sn)
    reduced = []
    for sn in integral:
        reduced.append({mono: c % p for mono, c in sn.items() if c % p})
    return WittPolynomials(p, r, tuple(reduced))


def witt_add(wp: WittPolynomials, a, b):
    """Add two Witt vectors with F_p entries using the reduced polynomials."""
    p = wp.p
    out = []
    for i in range(wp.r):
        val = wp.evaluate(
            i,
            list(a) + [0] * (wp.r - len(a)),
            list(b) + [0] * (wp.r - len(b)),
            lambda s, t: (s + t) % p,
            lambda s, t: (s * t) % p,
            1,
            0,
        )
        out.append(val)
    return tuple(out)
