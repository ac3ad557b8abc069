"""Exact linear algebra over finite fields on arrays of element codes.

Matrices are ``uint8`` arrays of field codes (see :mod:`supercoh.gf`).
Row reduction runs in a numba kernel driven by the field's addition and
multiplication tables; pivot search is left to right, top to bottom, so
every result is deterministic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import LiftingFailed
from .gf import GaloisField


@njit(cache=True)
def _rref_kernel(M, npiv, addt, mult, negt, invt):
    m, n = M.shape
    pivots = np.empty(min(m, npiv), np.int64)
    nz = np.empty(n, np.int64)
    r = 0
    for c in range(npiv):
        if r == m:
            break
        pr = -1
        for i in range(r, m):
            if M[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(c, n):
                tmp = M[r, j]
                M[r, j] = M[pr, j]
                M[pr, j] = tmp
        iv = invt[M[r, c]]
        cnt = 0
        for j in range(c, n):
            if M[r, j] != 0:
                if iv != 1:
                    M[r, j] = mult[iv, M[r, j]]
                nz[cnt] = j
                cnt += 1
        for i in range(m):
            if i != r:
                f = M[i, c]
                if f != 0:
                    nf = negt[f]
                    for k in range(cnt):
                        j = nz[k]
                        M[i, j] = addt[M[i, j], mult[nf, M[r, j]]]
        pivots[r] = c
        r += 1
    return pivots[:r]


def rref(field: GaloisField, M, npiv: int | None = None, inplace: bool = False):
    """Reduced row echelon form; pivots searched in the first ``npiv`` columns.

    Returns ``(R, pivots)`` where the first ``len(pivots)`` rows of ``R`` are
    the nonzero rows.
    """
    M = np.asarray(M, dtype=np.uint8)
    if not inplace:
        M = np.array(M, dtype=np.uint8, order="C", copy=True)
    if M.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if npiv is None:
        npiv = M.shape[1]
    if M.size == 0:
        return M, np.zeros(0, dtype=np.int64)
    piv = _rref_kernel(M, npiv, field.add_table, field.mul_table, field.neg_table, field.inv_table)
    return M, piv


def rank(field: GaloisField, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(field, M)[1])


def row_basis(field: GaloisField, M) -> np.ndarray:
    """RREF basis of the row space."""
    R, piv = rref(field, M)
    return R[: len(piv)]


def nullspace(field: GaloisField, M, ncols: int | None = None) -> np.ndarray:
    """Rows spanning {x : M @ x = 0}, in the standard free-column basis."""
    M = np.asarray(M, dtype=np.uint8)
    n = M.shape[1] if M.ndim == 2 else ncols
    if M.size == 0:
        return np.eye(n, dtype=np.uint8)
    R, piv = rref(field, M)
    r = len(piv)
    free = np.setdiff1d(np.arange(n), piv)
    K = np.zeros((len(free), n), dtype=np.uint8)
    K[np.arange(len(free)), free] = 1
    if r:
        K[:, piv] = field.neg(R[:r][:, free].T)
    return K


def reduce_rows(field: GaloisField, V, basis, pivots) -> np.ndarray:
    """Reduce the rows of ``V`` modulo an RREF ``basis`` with given pivots."""
    V = np.asarray(V, dtype=np.uint8)
    if len(pivots) == 0 or V.size == 0:
        return V.copy()
    coeff = V[:, pivots]
    return field.sub(V, field.matmul(coeff, basis))


def complement_basis(field: GaloisField, sub, full) -> np.ndarray:
    """RREF rows spanning a complement of row(sub) inside row(full).

    ``row(sub)`` must be contained in ``row(full)``.
    """
    n = full.shape[1]
    if sub.shape[0]:
        S, spiv = rref(field, sub)
        S = S[: len(spiv)]
    else:
        S, spiv = np.zeros((0, n), dtype=np.uint8), np.zeros(0, dtype=np.int64)
    resid = reduce_rows(field, full, S, spiv)
    return row_basis(field, resid)


def in_rowspace(field: GaloisField, basis, pivots, v) -> bool:
    v = np.atleast_2d(np.asarray(v, dtype=np.uint8))
    return not np.any(reduce_rows(field, v, basis, pivots))


class Solver:
    """Preimages under a fixed linear map ``x -> M @ x``.

    Row-reduces ``[M | I]`` once; every later solve is a matrix product.
    """

    def __init__(self, field: GaloisField, M):
        M = np.asarray(M, dtype=np.uint8)
        self.field = field
        self.m, self.n = M.shape
        aug = np.zeros((self.m, self.n + self.m), dtype=np.uint8)
        aug[:, : self.n] = M
        aug[np.arange(self.m), self.n + np.arange(self.m)] = 1
        R, piv = rref(field, aug, npiv=self.n, inplace=True)
        self.pivots = piv
        self.rank = len(piv)
        self._T = np.ascontiguousarray(R[:, self.n :])

    def solve(self, B, check: bool = True) -> np.ndarray:
        """Return X with ``M @ X = B`` (columns of B must lie in the image)."""
        B = np.asarray(B, dtype=np.uint8)
        squeeze = B.ndim == 1
        if squeeze:
            B = B[:, None]
        X = np.zeros((self.n, B.shape[1]), dtype=np.uint8)
        if self.rank:
            X[self.pivots] = self.field.matmul(self._T[: self.rank], B)
        if check and self.rank < self.m and B.shape[1]:
            resid = self.field.matmul(self._T[self.rank :], B)
            if np.any(resid):
                raise LiftingFailed("target is not in the image of the map")
        return X[:, 0] if squeeze else X
