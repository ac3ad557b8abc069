"""Finite-dimensional modules over presented superalgebras.

Action matrices act on column vectors and are stored as arrays of field
codes, one matrix per algebra generator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import AlgebraElement, PresentedSuperalgebra, from_descriptor
from .errors import DimensionNotDivisible, NoCoproduct, NotEquivariant
from .gf import FieldElement, GF
from .linalg import nullspace, rank, row_basis


class SuperModule:
    def __init__(self, algebra: PresentedSuperalgebra, action: Mapping[str, np.ndarray], parity=None):
        self.algebra = algebra
        self.field = algebra.field
        mats = []
        dim = None
        for name in algebra.names:
            if name not in action:
                raise KeyError(f"no action matrix for generator {name}")
            M = np.array(action[name], dtype=np.uint8)
            if M.ndim != 2 or M.shape[0] != M.shape[1] or (dim is not None and M.shape[0] != dim):
                raise ValueError("action matrices must be square of a common size")
            dim = M.shape[0]
            M.setflags(write=False)
            mats.append(M)
        self.dim = dim if dim is not None else 0
        self.matrices = tuple(mats)
        par = np.zeros(self.dim, dtype=np.int64) if parity is None else np.array(parity, dtype=np.int64) % 2
        if par.shape != (self.dim,):
            raise ValueError("parity vector has the wrong length")
        self.parity = par
        self._basis_action = None

    def action(self, name) -> np.ndarray:
        return self.matrices[self.algebra._gen_index(name)]

    @property
    def basis_action(self) -> np.ndarray:
        """Array R with R[l] the matrix of PBW basis element l."""
        if self._basis_action is None:
            A, F = self.algebra, self.field
            R = np.zeros((A.dim, self.dim, self.dim), dtype=np.uint8)
            ident = np.eye(self.dim, dtype=np.uint8)
            for l, mono in enumerate(A.basis):
                M = ident
                for g, e in enumerate(mono):
                    for _ in range(e):
                        M = F.matmul(M, self.matrices[g])
                R[l] = M
            self._basis_action = R
        return self._basis_action

    def act_matrix(self, a) -> np.ndarray:
        """Matrix of an algebra element (AlgebraElement or coefficient vector)."""
        coeffs = a.coeffs if isinstance(a, AlgebraElement) else np.asarray(a, dtype=np.uint8)
        return self.field.einsum("l,lxy->xy", coeffs, self.basis_action, length=self.algebra.dim)

    def word_matrix(self, word) -> np.ndarray:
        F = self.field
        M = np.eye(self.dim, dtype=np.uint8)
        for g in word:
            M = F.matmul(M, self.matrices[g])
        return M

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        F = self.field
        data = {
            "algebra": json.loads(self.algebra.canonical_text()),
            "dim": self.dim,
            "action": {
                name: [[list(F.coeffs(int(c))) for c in row] for row in M]
                for name, M in zip(self.algebra.names, self.matrices)
            },
            "parity": self.parity.tolist(),
        }
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SuperModule":
        data = json.loads(text)
        fd = data["algebra"]["field"]
        F = GF(fd["p"], fd["m"], tuple(fd["modulus"]))
        A = from_descriptor(data["algebra"], F)
        action = {}
        for name, rows in data["action"].items():
            action[name] = np.array(
                [[F.from_coeffs(c).code for c in row] for row in rows], dtype=np.uint8
            ).reshape(data["dim"], data["dim"])
        return cls(A, action, data["parity"])

    def __repr__(self):
        return f"SuperModule(dim={self.dim}, algebra={self.algebra.descriptor.get('kind')})"


# -- constructors ---------------------------------------------------------------


def trivial_module(A: PresentedSuperalgebra, dim: int = 1, parity=None) -> SuperModule:
    zero = np.zeros((dim, dim), dtype=np.uint8)
    return SuperModule(A, {name: zero for name in A.names}, parity)


def regular_module(A: PresentedSuperalgebra) -> SuperModule:
    action = {name: A.left_mult_matrix(A.gen_vectors[i]) for i, name in enumerate(A.names)}
    return SuperModule(A, action, A.basis_parity)


def direct_sum(M: SuperModule, N: SuperModule) -> SuperModule:
    if M.algebra is not N.algebra:
        raise ValueError("modules over different algebras")
    action = {}
    for name, a, b in zip(M.algebra.names, M.matrices, N.matrices):
        S = np.zeros((M.dim + N.dim,) * 2, dtype=np.uint8)
        S[: M.dim, : M.dim] = a
        S[M.dim :, M.dim :] = b
        action[name] = S
    return SuperModule(M.algebra, action, np.concatenate([M.parity, N.parity]))


# -- checks ---------------------------------------------------------------------


def relation_failures(M: SuperModule) -> list[str]:
    A, F = M.algebra, M.field
    failures = []
    for (g, h), rhs in A.rules.items():
        lhs = F.matmul(M.matrices[g], M.matrices[h])
        total = np.zeros_like(lhs)
        for c, word in rhs:
            total = F.add(total, F.scale(c, M.word_matrix(word)))
        if not np.array_equal(lhs, total):
            failures.append(f"{A.names[g]}{A.names[h]}")
    for g, gen in enumerate(A.generators):
        if np.any(M.word_matrix((g,) * gen.exponent)):
            failures.append(f"{gen.name}^{gen.exponent}")
    for g, gen in enumerate(A.generators):
        rows, cols = np.nonzero(M.matrices[g])
        if np.any((M.parity[rows] - M.parity[cols] - gen.parity) % 2):
            failures.append(f"parity of {gen.name}")
    return failures


def check_module(M: SuperModule) -> bool:
    return not relation_failures(M)


def fixed_points(M: SuperModule) -> np.ndarray:
    """Rows spanning the common kernel of the generator actions."""
    if not M.matrices:
        return np.eye(M.dim, dtype=np.uint8)
    return nullspace(M.field, np.concatenate(M.matrices, axis=0), ncols=M.dim)


def radical_series(M: SuperModule) -> list[int]:
    """dims of J^i M for i = 0, 1, ... ending with 0."""
    F = M.field
    current = np.eye(M.dim, dtype=np.uint8)
    dims = [M.dim]
    while current.shape[0]:
        images = np.concatenate([F.matmul(current, G.T) for G in M.matrices], axis=0)
        current = row_basis(F, images)
        dims.append(current.shape[0])
    return dims


def socle_series(M: SuperModule) -> list[int]:
    """dims of soc^1 M, soc^2 M, ... up to M."""
    F = M.field
    dims = []
    S = np.zeros((0, M.dim), dtype=np.uint8)
    while S.shape[0] < M.dim:
        # functionals vanishing on S, then vectors m with g.m in S for all g
        P = nullspace(F, S, ncols=M.dim) if S.shape[0] else np.eye(M.dim, dtype=np.uint8)
        stacked = np.concatenate([F.matmul(P, G) for G in M.matrices], axis=0)
        S = row_basis(F, nullspace(F, stacked, ncols=M.dim))
        dims.append(S.shape[0])
        if len(dims) > M.dim + 1:
            raise RuntimeError("socle series failed to grow")
    return dims


def radical_socle_series(M: SuperModule) -> tuple[list[int], list[int]]:
    return radical_series(M), socle_series(M)


def is_uniserial(M: SuperModule) -> bool:
    dims = radical_series(M)
    return all(a - b == 1 for a, b in zip(dims, dims[1:]))


def is_projective_kH(M: SuperModule) -> bool:
    """Free over the local algebra: dim M = dim kH * dim M^H and dim M/JM = dim M^H."""
    fixed = fixed_points(M).shape[0]
    head = M.dim - radical_series(M)[1] if M.dim else 0
    return M.dim == M.algebra.dim * fixed and head == fixed


def tensor(M: SuperModule, N: SuperModule) -> SuperModule:
    """Tensor product through the coproduct; basis m_a (x) n_b has index a * dim N + b."""
    A = M.algebra
    if N.algebra is not A:
        raise ValueError("modules over different algebras")
    cop = A.coproduct
    if cop is None:
        raise NoCoproduct("the algebra has no coproduct")
    F = A.field
    RM, RN = M.basis_action, N.basis_action
    action = {}
    for g, name in enumerate(A.names):
        D = cop.generator_tables[g]
        T = np.zeros((M.dim * N.dim,) * 2, dtype=np.uint8)
        for a, b in zip(*np.nonzero(D)):
            # all kH generators are even, so no Koszul signs arise
            T = F.add(T, F.scale(int(D[a, b]), kron(F, RM[a], RN[b])))
        action[name] = T
    parity = (M.parity[:, None] + N.parity[None, :]).reshape(-1) % 2
    return SuperModule(A, action, parity)


def kron(F, X, Y) -> np.ndarray:
    out = F.mul_table[X[:, None, :, None], Y[None, :, None, :]]
    return out.reshape(X.shape[0] * Y.shape[0], X.shape[1] * Y.shape[1])


# -- shifted subgroups -------------------------------------------------------------


@dataclass(frozen=True)
class ShiftedPoint:
    """(gamma_1..gamma_r, alpha_1..alpha_s), not all zero."""

    coords: tuple

    def __post_init__(self):
        if not self.coords or all(c.is_zero() for c in self.coords):
            raise ValueError("shifted point must be nonzero")
        fields = {c.field for c in self.coords}
        if len(fields) != 1:
            raise ValueError("coordinates must lie in one field")

    @classmethod
    def of(cls, field, values: Sequence) -> "ShiftedPoint":
        return cls(tuple(field(v) for v in values))

    def scaled(self, c: FieldElement) -> "ShiftedPoint":
        return ShiftedPoint(tuple(c * x for x in self.coords))


def shifted_operator(A: PresentedSuperalgebra, point: ShiftedPoint) -> AlgebraElement:
    """theta = sum gamma_i s_i + sum alpha_j t_j in kH."""
    names = [n for n in A.names if n.startswith(("s_", "t_"))]
    if len(names) != len(point.coords):
        raise ValueError("point has the wrong number of coordinates")
    theta = A.zero
    for name, c in zip(names, point.coords):
        theta = theta + A.gen(name) * c
    return theta


def theta_matrix(M: SuperModule, point: ShiftedPoint) -> np.ndarray:
    return M.act_matrix(shifted_operator(M.algebra, point))


def is_free_restriction(M: SuperModule, point: ShiftedPoint) -> bool:
    """Free over k[theta]/(theta^p): rank of theta^(p-1) equals dim M / p."""
    p = M.field.p
    if M.dim % p:
        raise DimensionNotDivisible(f"dimension {M.dim} is not divisible by {p}")
    F = M.field
    T = theta_matrix(M, point)
    P = np.eye(M.dim, dtype=np.uint8)
    for _ in range(p - 1):
        P = F.matmul(P, T)
    return rank(F, P) == M.dim // p


def jordan_type(M: SuperModule, point: ShiftedPoint) -> list[int]:
    """Jordan block sizes of theta on M, largest first."""
    F = M.field
    T = theta_matrix(M, point)
    ranks = [M.dim]
    P = np.eye(M.dim, dtype=np.uint8)
    while ranks[-1]:
        P = F.matmul(P, T)
        ranks.append(rank(F, P))
    # number of blocks of size >= k is rank(T^(k-1)) - rank(T^k)
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes.extend([k] * exact)
    return sizes


# -- maps ---------------------------------------------------------------------------


def is_equivariant(f: np.ndarray, source: SuperModule, target: SuperModule) -> bool:
    F = target.field
    for a, b in zip(target.matrices, source.matrices):
        if not np.array_equal(F.matmul(a, f), F.matmul(f, b)):
            return False
    return True


def verify_direct_sum(M: SuperModule, embeddings: Sequence[tuple[np.ndarray, SuperModule]]) -> bool:
    """Each (matrix, source) must be a module map into M; checks M is their internal direct sum."""
    F = M.field
    total = 0
    blocks = []
    for f, N in embeddings:
        f = np.asarray(f, dtype=np.uint8)
        if f.shape != (M.dim, N.dim):
            raise ValueError("embedding matrix has the wrong shape")
        if not is_equivariant(f, N, M):
            raise NotEquivariant("a supplied map does not commute with the action")
        if rank(F, f) != N.dim:
            return False
        total += N.dim
        blocks.append(f)
    if total != M.dim:
        return False
    return rank(F, np.concatenate(blocks, axis=1)) == M.dim if blocks else M.dim == 0
