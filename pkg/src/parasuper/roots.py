"""Root systems of types A, B, C, D in pair notation, parabolic partitions,
the subsets of roots of the contracted nilradical and root vectors."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .matfq import FormKind, IndexStyle, dagger


@dataclass(frozen=True)
class LieTypeSpec:
    series: str
    n: int

    def __post_init__(self):
        if self.series not in ("A", "B", "C", "D"):
            raise ValueError(f"unknown series {self.series!r}")
        if self.n < 1:
            raise ValueError("rank must be positive")
        if self.series == "D" and self.n < 2:
            raise ValueError("series D needs n >= 2")

    @property
    def M(self) -> int:
        if self.series == "A":
            return self.n
        return 2 * self.n + 1 if self.series == "B" else 2 * self.n

    @property
    def is_classical_form(self) -> bool:
        return self.series != "A"

    @cached_property
    def index(self) -> IndexStyle:
        if self.series == "A":
            return IndexStyle.plain(self.n)
        return IndexStyle.signed(self.n, with_zero=self.series == "B")

    @cached_property
    def form(self) -> FormKind | None:
        if self.series == "A":
            return None
        kind = "symplectic" if self.series == "C" else "orthogonal"
        return FormKind(kind, self.M)


@dataclass(frozen=True, order=True)
class Root:
    pair: tuple
    positive: bool
    eps: str

    @property
    def row(self):
        return self.pair[0]

    @property
    def col(self):
        return self.pair[1]

    def __repr__(self):
        return f"({self.pair[0]},{self.pair[1]})"


def _root_A(i, j):
    return Root((i, j), i < j, f"e{i}-e{j}")


def build_root_system(spec: LieTypeSpec) -> list:
    """All roots, positive ones first, in a fixed order."""
    n = spec.n
    if spec.series == "A":
        pos = [_root_A(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        neg = [_root_A(j, i) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
        return pos + neg
    pos = []
    for i in range(n, 0, -1):
        for j in range(i - 1, 0, -1):
            pos.append(Root((i, j), True, f"e{i}-e{j}"))
            pos.append(Root((i, -j), True, f"e{i}+e{j}"))
        if spec.series == "B":
            pos.append(Root((i, 0), True, f"e{i}"))
        if spec.series == "C":
            pos.append(Root((i, -i), True, f"2e{i}"))
    neg = [Root((r.col, r.row), False, "-(" + r.eps + ")") for r in pos]
    return pos + neg


def root_sum(a, b):
    """Sum of roots in pair notation: (i,j)+(j,k) = (i,k) when i != k, else None."""
    a = a.pair if isinstance(a, Root) else tuple(a)
    b = b.pair if isinstance(b, Root) else tuple(b)
    if a[1] != b[0] or a[0] == b[1]:
        return None
    return (a[0], b[1])


def prime_map(a):
    """(i, j) -> (-j, -i)."""
    a = a.pair if isinstance(a, Root) else tuple(a)
    return (-a[1], -a[0])


@dataclass(frozen=True)
class PartitionSpec:
    """Consecutive blocks of the index line (display order).

    ``block_ids`` are the segment labels: 1..l for type A, and l..(0)..-l for
    the classical series, where the central segment (label 0) exists iff the
    number of blocks is odd.
    """

    spec: LieTypeSpec
    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if any(s <= 0 for s in sizes):
            raise ValueError("block sizes must be positive")
        if sum(sizes) != self.spec.M:
            raise ValueError(f"block sizes {sizes} do not cover {self.spec.M} indices")
        if self.spec.series != "A":
            if sizes != sizes[::-1]:
                raise ValueError("partition must be symmetric relative to zero")
            if self.spec.series == "B" and len(sizes) % 2 == 0:
                raise ValueError("type B partition needs a central segment containing 0")

    @classmethod
    def borel(cls, spec: LieTypeSpec) -> "PartitionSpec":
        return cls(spec, (1,) * spec.M)

    @property
    def has_central(self) -> bool:
        return self.spec.series != "A" and len(self.sizes) % 2 == 1

    @cached_property
    def block_ids(self) -> tuple:
        nb = len(self.sizes)
        if self.spec.series == "A":
            return tuple(range(1, nb + 1))
        half = nb // 2
        ids = list(range(half, 0, -1))
        if nb % 2:
            ids.append(0)
        ids += list(range(-1, -half - 1, -1))
        return tuple(ids)

    @cached_property
    def blocks(self) -> dict:
        """block id -> tuple of labels (display order)."""
        labels = self.spec.index.labels
        out = {}
        start = 0
        for k, s in zip(self.block_ids, self.sizes):
            out[k] = tuple(labels[start:start + s])
            start += s
        return out

    @cached_property
    def block_of(self) -> dict:
        return {lab: k for k, labs in self.blocks.items() for lab in labs}

    @cached_property
    def order(self) -> dict:
        """block id -> position of the block in display order."""
        return {k: i for i, k in enumerate(self.block_ids)}

    def positions(self, k) -> list:
        idx = self.spec.index
        return [idx.pos(lab) for lab in self.blocks[k]]

    def block_pair(self, pair):
        return self.block_of[pair[0]], self.block_of[pair[1]]

    def is_upper(self, pair) -> bool:
        k, m = self.block_pair(pair)
        return self.order[k] < self.order[m]

    def is_lower(self, pair) -> bool:
        k, m = self.block_pair(pair)
        return self.order[k] > self.order[m]

    def masks(self):
        """Boolean (upper, lower, levi) masks of M x M positions."""
        M = self.spec.M
        bo = np.empty(M, dtype=np.int64)
        for k in self.block_ids:
            for pos in self.positions(k):
                bo[pos] = self.order[k]
        up = bo[:, None] < bo[None, :]
        low = bo[:, None] > bo[None, :]
        levi = bo[:, None] == bo[None, :]
        return up, low, levi

    def describe(self) -> str:
        return " | ".join(",".join(str(l) for l in self.blocks[k]) for k in self.block_ids)


def delta_ua(spec: LieTypeSpec, partition: PartitionSpec):
    """(positive, negative) roots whose root vectors lie in the contracted nilradical."""
    roots = build_root_system(spec)
    pos = [r for r in roots if r.positive and partition.is_upper(r.pair)]
    neg = [r for r in roots if not r.positive and partition.is_lower(r.pair)]
    return pos, neg


def eta(root: Root, spec: LieTypeSpec, p: int) -> int:
    """The sign in E_a + eta E_a' forced by X^dagger = -X."""
    if spec.series == "A":
        return 0
    idx = spec.index
    for e in (0, 1, -1):
        X = idx.unit(*root.pair)
        X = (X + e * idx.unit(*prime_map(root.pair))) % p
        if not X.any():
            continue
        if np.array_equal(dagger(X, spec.form, p), (-X) % p):
            return e
    raise RuntimeError(f"no eta in {{1,0,-1}} makes the root vector of {root} antisymmetric")


def root_vector(root: Root, spec: LieTypeSpec, p: int) -> np.ndarray:
    idx = spec.index
    X = idx.unit(*root.pair)
    if spec.series != "A":
        X = X + eta(root, spec, p) * idx.unit(*prime_map(root.pair))
    return X % p
