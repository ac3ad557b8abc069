"""Minimal free resolutions of the trivial module and a bar-complex oracle.

A free module F_n = A^{b_n} is stored through the images of its generators.
``diffs[n]`` has shape ``(b_{n-1}, b_n, dim A)``: entry ``[h, g]`` is the
algebra coefficient of ``e_h`` in ``d(e_g)``.  Flattened vectors of F_n are
indexed by ``g * dim + i`` (generator ``g``, basis monomial ``i``).

Every algebra here carries a grading by parity and integer weights that all
rewriting rules respect.  Differentials preserve it, so kernels, complements
and lifts are computed block by block; this is both faster and fixes the
order of generators.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

import numpy as np
from numba import njit

from . import __version__
from .algebra import PresentedSuperalgebra
from .errors import LiftingFailed, NotLocal
from .linalg import Solver, complement_basis, nullspace, rank, rref

CACHE_ENV = "SUPERCOH_CACHE"


def basis_keys(A: PresentedSuperalgebra) -> list[tuple]:
    return [
        (int(A.basis_parity[i]),) + tuple(int(w) for w in A.basis_weight[i]) for i in range(A.dim)
    ]


def add_keys(a: tuple, b: tuple) -> tuple:
    return ((a[0] + b[0]) % 2,) + tuple(x + y for x, y in zip(a[1:], b[1:]))


class MinimalResolution:
    """Minimal free resolution F_* -> k over a local presented algebra."""

    def __init__(self, algebra: PresentedSuperalgebra, maxdeg: int = 0, check_local: bool = True):
        if check_local and not algebra.is_local():
            raise NotLocal("augmentation ideal is not nilpotent")
        self.algebra = algebra
        self.field = algebra.field
        self.dim = algebra.dim
        self._bkeys = basis_keys(algebra)
        zero_key = (0,) + (0,) * algebra.weight_rank
        self.gen_keys: list[list[tuple]] = [[zero_key]]
        self.diffs: list[np.ndarray | None] = [None]
        self._flat = {}
        self._solvers = {}
        self._positions = {}
        self._gen_left = [algebra.left_mult_matrix(v) for v in algebra.gen_vectors]
        self._gen_keys_alg = [self._key_of_vector(v) for v in algebra.gen_vectors]
        self.extend(maxdeg)

    # -- bookkeeping ---------------------------------------------------------

    def _key_of_vector(self, v) -> tuple:
        keys = {self._bkeys[i] for i in np.nonzero(v)[0]}
        if len(keys) != 1:
            raise ValueError("generator is not homogeneous")
        return keys.pop()

    @property
    def maxdeg(self) -> int:
        return len(self.gen_keys) - 1

    @property
    def ranks(self) -> list[int]:
        return [len(k) for k in self.gen_keys]

    @property
    def gen_parity(self) -> list[list[int]]:
        return [[k[0] for k in keys] for keys in self.gen_keys]

    def positions(self, n: int) -> dict:
        """Block key -> flattened coordinates of F_n carrying that key."""
        if n not in self._positions:
            blocks = {}
            d = self.dim
            for g, gk in enumerate(self.gen_keys[n]):
                for i, bk in enumerate(self._bkeys):
                    blocks.setdefault(add_keys(gk, bk), []).append(g * d + i)
            self._positions[n] = {k: np.array(v, dtype=np.int64) for k, v in blocks.items()}
        return self._positions[n]

    def flat(self, n: int) -> np.ndarray:
        """Vector-space matrix of d_n : F_n -> F_{n-1} (columns are sources)."""
        if n not in self._flat:
            if n == 0:
                M = np.zeros((1, self.dim), dtype=np.uint8)
                M[0, 0] = 1
            else:
                M = diff_to_flat(self.algebra, self.diffs[n])
            M.setflags(write=False)
            self._flat[n] = M
        return self._flat[n]

    def left_action(self, gen_index: int, vectors: np.ndarray, n: int) -> np.ndarray:
        """Apply the algebra generator to flattened vectors of F_n (rows)."""
        b = len(self.gen_keys[n])
        V = vectors.reshape(-1, b, self.dim)
        return self.field.matmul(V, self._gen_left[gen_index].T).reshape(-1, b * self.dim)

    # -- construction --------------------------------------------------------

    def extend(self, maxdeg: int):
        while self.maxdeg < maxdeg:
            self._next_degree()
        return self

    def _kernel_blocks(self, n: int) -> dict:
        """Block key -> rows spanning ker d_n restricted to that block (flattened coordinates)."""
        F = self.field
        M = self.flat(n)
        src = self.positions(n)
        tgt = self.positions(n - 1) if n else {self.gen_keys[0][0]: np.array([0])}
        out = {}
        width = M.shape[1]
        for key, cols in sorted(src.items()):
            rows = tgt.get(key)
            sub = M[np.ix_(rows, cols)] if rows is not None else np.zeros((0, len(cols)), dtype=np.uint8)
            N = nullspace(F, sub, ncols=len(cols))
            if N.shape[0]:
                full = np.zeros((N.shape[0], width), dtype=np.uint8)
                full[:, cols] = N
                out[key] = full
        return out

    def _next_degree(self):
        F = self.field
        n = self.maxdeg  # build F_{n+1} covering ker d_n
        kernel = self._kernel_blocks(n)
        moved = {}
        for key, K in kernel.items():
            for g, gkey in enumerate(self._gen_keys_alg):
                tk = add_keys(key, gkey)
                if tk in kernel:
                    moved.setdefault(tk, []).append(self.left_action(g, K, n))
        new_keys, new_vectors = [], []
        for key in sorted(kernel):
            K = kernel[key]
            cols = self.positions(n)[key]
            sub = np.concatenate(moved[key], axis=0)[:, cols] if key in moved else np.zeros((0, len(cols)), np.uint8)
            comp = complement_basis(F, sub, K[:, cols])
            for row in comp:
                vec = np.zeros(K.shape[1], dtype=np.uint8)
                vec[cols] = row
                new_keys.append(key)
                new_vectors.append(vec)
        b_prev = len(self.gen_keys[n])
        D = np.zeros((b_prev, len(new_vectors), self.dim), dtype=np.uint8)
        for g, vec in enumerate(new_vectors):
            D[:, g, :] = vec.reshape(b_prev, self.dim)
        self.gen_keys.append(new_keys)
        self.diffs.append(D)

    # -- lifting -------------------------------------------------------------

    def _solver(self, n: int, key) -> tuple[Solver, np.ndarray, np.ndarray] | None:
        sk = (n, key)
        if sk not in self._solvers:
            src = self.positions(n).get(key)
            tgt = self.positions(n - 1).get(key) if n else None
            if src is None or tgt is None:
                self._solvers[sk] = None
            else:
                self._solvers[sk] = (Solver(self.field, self.flat(n)[np.ix_(tgt, src)]), tgt, src)
        return self._solvers[sk]

    def lift(self, n: int, targets: np.ndarray) -> np.ndarray:
        """Rows X with d_n(X) = targets (rows of flattened F_{n-1}); raises LiftingFailed."""
        targets = np.atleast_2d(np.asarray(targets, dtype=np.uint8))
        out = np.zeros((targets.shape[0], len(self.gen_keys[n]) * self.dim), dtype=np.uint8)
        if not np.any(targets):
            return out
        for key, rows in self.positions(n - 1).items():
            part = targets[:, rows]
            if not np.any(part):
                continue
            entry = self._solver(n, key)
            if entry is None:
                raise LiftingFailed(f"no source block for degree {n} key {key}")
            solver, tgt, src = entry
            out[:, src] = solver.solve(part.T).T
        return out

    # -- checks --------------------------------------------------------------

    def is_minimal(self) -> bool:
        return all(not np.any(D[:, :, 0]) for D in self.diffs[1:])

    def d_squared_zero(self) -> bool:
        """d_{n-1} d_n = 0 computed with algebra multiplication."""
        A = self.algebra
        for n in range(2, self.maxdeg + 1):
            D1, D2 = self.diffs[n - 1], self.diffs[n]
            # (d_{n-1} d_n)(e_g) = sum_h D2[h, g] * d_{n-1}(e_h)
            if not (D1.size and D2.size):
                continue
            T = A.field.einsum("hgi,ijk->hgjk", D2, A.structure, length=self.dim)
            prod = A.field.einsum("hgjk,fhj->fgk", T, D1, length=D2.shape[0] * self.dim)
            if np.any(prod):
                return False
        # augmentation after d_1
        return self.maxdeg < 1 or not np.any(self.diffs[1][0, :, 0])

    def is_exact(self) -> bool:
        """dim ker d_n = rank d_{n+1} on underlying vector spaces, n < maxdeg."""
        F = self.field
        for n in range(0, self.maxdeg):
            Mn = self.flat(n)
            ker = Mn.shape[1] - rank(F, Mn)
            if ker != rank(F, self.flat(n + 1)):
                return False
        return True

    def is_homogeneous(self) -> bool:
        for n in range(1, self.maxdeg + 1):
            D = self.diffs[n]
            for g, gk in enumerate(self.gen_keys[n]):
                for h, hk in enumerate(self.gen_keys[n - 1]):
                    for i in np.nonzero(D[h, g])[0]:
                        if add_keys(hk, self._bkeys[i]) != gk:
                            return False
        return True

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "algebra": json.loads(self.algebra.canonical_text()),
            "version": __version__,
            "ranks": self.ranks,
            "gen_keys": [[list(k) for k in keys] for keys in self.gen_keys],
            "diffs": [None] + [D.tolist() for D in self.diffs[1:]],
        }

    @classmethod
    def from_dict(cls, algebra: PresentedSuperalgebra, data: dict) -> "MinimalResolution":
        if data["algebra"] != json.loads(algebra.canonical_text()):
            raise ValueError("cached resolution belongs to a different algebra")
        res = cls(algebra, 0, check_local=False)
        res.gen_keys = [[tuple(k) for k in keys] for keys in data["gen_keys"]]
        res.diffs = [None]
        for n, D in enumerate(data["diffs"][1:], start=1):
            shape = (len(res.gen_keys[n - 1]), len(res.gen_keys[n]), algebra.dim)
            res.diffs.append(np.array(D, dtype=np.uint8).reshape(shape))
        res._flat.clear()
        res._positions.clear()
        res._solvers.clear()
        return res


def diff_to_flat(A: PresentedSuperalgebra, D: np.ndarray) -> np.ndarray:
    """Flatten algebra-valued differential: M[(h,k),(g,i)] = coeff of b_k in b_i * D[h,g]."""
    bprev, bn, d = D.shape
    if bprev == 0 or bn == 0:
        return np.zeros((bprev * d, bn * d), dtype=np.uint8)
    C = A.structure  # C[i, l, k]
    rhs = np.ascontiguousarray(np.transpose(C, (1, 2, 0)).reshape(d, d * d))  # (l, (k,i))
    prod = A.field.matmul(D.reshape(bprev * bn, d), rhs)  # ((h,g), (k,i))
    prod = prod.reshape(bprev, bn, d, d)
    return np.ascontiguousarray(np.transpose(prod, (0, 2, 1, 3)).reshape(bprev * d, bn * d))


# -- cache ----------------------------------------------------------------------


def _cache_path(algebra: PresentedSuperalgebra, directory) -> Path:
    digest = hashlib.sha256((algebra.canonical_text() + __version__).encode()).hexdigest()[:24]
    return Path(directory) / f"resolution-{digest}.json"


def minimal_resolution(algebra: PresentedSuperalgebra, maxdeg: int, cache_dir=None) -> MinimalResolution:
    """Resolution to ``maxdeg``, extending a cached one when a cache directory is set."""
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    res = None
    path = None
    if cache_dir:
        path = _cache_path(algebra, cache_dir)
        if path.exists():
            try:
                res = MinimalResolution.from_dict(algebra, json.loads(path.read_text()))
            except (ValueError, KeyError):
                res = None
    if res is None:
        res = MinimalResolution(algebra, 0)
    grew = res.maxdeg < maxdeg
    res.extend(maxdeg)
    if path is not None and grew:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(res.to_dict(), separators=(",", ":")))
        tmp.replace(path)
    return res


# -- bar complex oracle -----------------------------------------------------------


class BarComplexTooLarge(RuntimeError):
    pass


@njit(cache=True)
def _bar_block(cols, n, row_lookup, nrows, mult_ptr, mult_k, mult_c, jdim, addt, mult, negt):
    """Dense matrix of the bar differential J^{(x)n} -> J^{(x)(n-1)} on one block."""
    M = np.zeros((nrows, cols.shape[0]), np.uint8)
    digits = np.empty(n, np.int64)
    out = np.empty(n - 1, np.int64)
    for c in range(cols.shape[0]):
        t = cols[c]
        for pos in range(n - 1, -1, -1):
            digits[pos] = t % jdim
            t //= jdim
        for i in range(n - 1):
            a = digits[i]
            b = digits[i + 1]
            pair = a * jdim + b
            for q in range(mult_ptr[pair], mult_ptr[pair + 1]):
                k = mult_k[q]
                coef = mult_c[q]
                if i % 2 == 0:
                    coef = negt[coef]  # sign (-1)^(i+1) with 0-based i
                idx = 0
                for pos in range(i):
                    idx = idx * jdim + digits[pos]
                idx = idx * jdim + k
                for pos in range(i + 2, n):
                    idx = idx * jdim + digits[pos]
                r = row_lookup[idx]
                M[r, c] = addt[M[r, c], coef]
    return M


def bar_ext_dims(
    A: PresentedSuperalgebra, maxdeg: int, budget: int = 2_000_000, by_parity: bool = False, block_budget: int = 200_000_000
):
    """dim Ext^n_A(k, k) for n <= maxdeg from the normalized bar complex.

    The cochain complex Hom(J^{(x)n}, k) is dual to the chain complex with
    differential sum_i (-1)^i a_1 (x) .. (x) a_i a_{i+1} (x) .. (x) a_n, so
    dim Ext^n = dim J^{(x)n} - rank d_n - rank d_{n+1}.  Ranks are taken
    block by block for the algebra's grading.  ``budget`` caps the number of
    basis tensors in J^{(x)(maxdeg+1)} and ``block_budget`` the entries of
    any dense block matrix.
    """
    F = A.field
    jdim = A.dim - 1
    if jdim == 0:
        return [1] + [0] * maxdeg
    if jdim ** (maxdeg + 1) > budget:
        raise BarComplexTooLarge(
            f"J^(x){maxdeg + 1} has {jdim ** (maxdeg + 1)} basis tensors, above the budget {budget}"
        )
    keys = basis_keys(A)[1:]
    key_ids = {k: i for i, k in enumerate(sorted(set(keys)))}
    # product J x J -> J in CSR layout over pairs (a, b)
    C = A.structure[1:, 1:, 1:]
    ptr = [0]
    ks, cs = [], []
    for a in range(jdim):
        for b in range(jdim):
            nz = np.nonzero(C[a, b])[0]
            ks.extend(nz.tolist())
            cs.extend(C[a, b, nz].tolist())
            ptr.append(len(ks))
    mult_ptr = np.array(ptr, dtype=np.int64)
    mult_k = np.array(ks, dtype=np.int64)
    mult_c = np.array(cs, dtype=np.uint8)

    # block key of every tensor, degree by degree
    key_arr = np.array([list(k) for k in keys], dtype=np.int64)

    def tensor_keys(n):
        if n == 0:
            return np.zeros((1, key_arr.shape[1]), dtype=np.int64)
        prev = tensor_keys(n - 1)
        out = (prev[:, None, :] + key_arr[None, :, :]).reshape(-1, key_arr.shape[1])
        out[:, 0] %= 2
        return out

    def grouped(n):
        tk = tensor_keys(n)
        uniq, inverse = np.unique(tk, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        groups = {}
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(len(uniq) + 1))
        for u in range(len(uniq)):
            groups[tuple(uniq[u])] = order[bounds[u] : bounds[u + 1]]
        return groups

    groups = [grouped(n) for n in range(maxdeg + 2)]
    ranks = [dict() for _ in range(maxdeg + 2)]  # ranks[n][key] = rank of d_n on that block
    for n in range(2, maxdeg + 2):
        lookup = np.full(jdim ** (n - 1), -1, dtype=np.int64)
        for key, cols in groups[n].items():
            rows = groups[n - 1].get(key)
            if rows is None:
                ranks[n][key] = 0
                continue
            if len(rows) * len(cols) > block_budget:
                raise BarComplexTooLarge(
                    f"bar differential block {tuple(int(x) for x in key)} in degree {n} has shape {len(rows)} x {len(cols)}"
                )
            lookup[rows] = np.arange(len(rows))
            M = _bar_block(
                cols.astype(np.int64), n, lookup, len(rows), mult_ptr, mult_k, mult_c, jdim,
                F.add_table, F.mul_table, F.neg_table,
            )
            ranks[n][key] = len(rref(F, M, inplace=True)[1])
    dims, parity_dims = [], []
    for n in range(maxdeg + 1):
        total = [0, 0]
        for key, cols in groups[n].items():
            h = len(cols) - ranks[n].get(key, 0) - ranks[n + 1].get(key, 0)
            total[key[0]] += h
        dims.append(total[0] + total[1])
        parity_dims.append(tuple(total))
    return parity_dims if by_parity else dims
