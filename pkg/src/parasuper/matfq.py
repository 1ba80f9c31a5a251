"""Dense matrices over F_p, index labels and the dagger involutions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def mod(A, p):
    return np.mod(np.asarray(A, dtype=np.int64), p)


def rref(A, p):
    """Reduced row echelon form over F_p. Returns (R, pivot_columns)."""
    R = mod(A, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2d array")
    m, n = R.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            R[[r, i]] = R[[i, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        col = R[:, c].copy()
        col[r] = 0
        R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A, p) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p):
    """Basis (as rows) of {x : A x = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-R[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def row_basis(V, p):
    """Canonical basis (reduced echelon rows) of the row span of V."""
    V = np.asarray(V, dtype=np.int64)
    if V.size == 0:
        return np.zeros((0, V.shape[-1] if V.ndim == 2 else 0), dtype=np.int64)
    R, piv = rref(V, p)
    return R[: len(piv)]


def inverse(A, p):
    A = mod(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(np.hstack([A, np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix over F_p")
    return R[:, n:]


def solve_left(B, A, p):
    """Find X with X @ B = A (rows of A in the row space of B)."""
    B = mod(B, p)
    A = mod(A, p)
    k = B.shape[0]
    aug = np.hstack([B.T, A.T])
    R, piv = rref(aug, p)
    if any(c >= k for c in piv):
        raise ValueError("rows are not in the span")
    X = np.zeros((A.shape[0], k), dtype=np.int64)
    for i, c in enumerate(piv):
        X[:, c] = R[i, k:]
    return X


def reduce_mod_span(v, basis_rref, pivots, p):
    """Normal form of v modulo the span of reduced echelon rows."""
    v = mod(v, p).copy()
    for row, c in zip(basis_rref, pivots):
        v = (v - np.multiply.outer(v[..., c], row)) % p
    return v


def mat_arith(A, B, op: str, p: int):
    if op == "mul":
        return mod(A, p) @ mod(B, p) % p
    if op == "add":
        return (mod(A, p) + mod(B, p)) % p
    if op == "rank":
        return rank(A, p)
    if op == "inverse":
        return inverse(A, p)
    if op == "transpose":
        return mod(A, p).T.copy()
    raise ValueError(f"unknown matrix operation {op!r}")


# ----------------------------------------------------------------------------
# index labels


@dataclass(frozen=True)
class IndexStyle:
    """Row/column labels in display order, e.g. (1, 2, 3) or (2, 1, 0, -1, -2)."""

    labels: tuple
    position: dict = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "position", {lab: i for i, lab in enumerate(self.labels)})

    @classmethod
    def plain(cls, M: int) -> "IndexStyle":
        return cls(tuple(range(1, M + 1)))

    @classmethod
    def signed(cls, n: int, with_zero: bool) -> "IndexStyle":
        labs = list(range(n, 0, -1)) + ([0] if with_zero else []) + list(range(-1, -n - 1, -1))
        return cls(tuple(labs))

    @property
    def M(self) -> int:
        return len(self.labels)

    def pos(self, label) -> int:
        return self.position[label]

    def unit(self, i, j) -> np.ndarray:
        E = np.zeros((self.M, self.M), dtype=np.int64)
        E[self.pos(i), self.pos(j)] = 1
        return E


@dataclass(frozen=True)
class FormKind:
    kind: str  # "orthogonal" | "symplectic"
    M: int

    def __post_init__(self):
        if self.kind not in ("orthogonal", "symplectic"):
            raise ValueError(self.kind)
        if self.kind == "symplectic" and self.M % 2:
            raise ValueError("symplectic form needs even dimension")

    def gram(self, p: int) -> np.ndarray:
        M = self.M
        anti = np.fliplr(np.eye(M, dtype=np.int64))
        if self.kind == "orthogonal":
            return anti % p
        n = M // 2
        J = np.zeros((M, M), dtype=np.int64)
        J[:n, n:] = np.fliplr(np.eye(n, dtype=np.int64))
        J[n:, :n] = -np.fliplr(np.eye(n, dtype=np.int64))
        return J % p


def dagger_matrices(form: FormKind, p: int):
    """(F^{-1}, F) with X^dagger = F^{-1} X^t F."""
    F = form.gram(p)
    return inverse(F, p), F


def dagger(X, form: FormKind, p: int):
    Finv, F = dagger_matrices(form, p)
    X = mod(X, p)
    return Finv @ np.swapaxes(X, -1, -2) @ F % p


def block_rank(X, rows, cols, p) -> int:
    """Rank of the submatrix on the given row and column positions."""
    rows = list(rows)
    cols = list(cols)
    if not rows or not cols:
        return 0
    X = np.asarray(X)
    return rank(X[np.ix_(rows, cols)], p)
