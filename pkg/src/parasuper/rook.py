"""Rook placements, basic pairs, rank signatures and canonical forms.

Type A placements live in the two-sided W_L x W_L setting: rows are moved by
w1 and columns by w2^{-1}. For B, C, D the Weyl group of the GL(M)-Levi acts
by X -> w X w^dagger; the result is renormalized to a basic pair using the
torus (every coefficient becomes 1, except anti-diagonal coefficients in
type C, which keep their square class) and the discriminant of each
I_k x I_-k block (an even number of delta's is equivalent to none).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .matfq import dagger_matrices
from .roots import LieTypeSpec, PartitionSpec, Root, build_root_system, delta_ua, prime_map
from .scalars import find_nonsquare, is_square


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class RookPlacement:
    roots: tuple  # tuple of Root, sorted

    @classmethod
    def of(cls, roots) -> "RookPlacement":
        return cls(tuple(sorted(set(roots), key=_root_key)))

    @property
    def pairs(self) -> tuple:
        return tuple(r.pair for r in self.roots)

    @property
    def D_plus(self) -> tuple:
        return tuple(r for r in self.roots if r.positive)

    @property
    def D_minus(self) -> tuple:
        return tuple(r for r in self.roots if not r.positive)

    def closure(self) -> set:
        """D u D' as a set of pairs."""
        out = set(self.pairs)
        out |= {prime_map(a) for a in self.pairs}
        return out

    def __len__(self):
        return len(self.roots)

    def to_json(self):
        return [list(a) for a in self.pairs]

    def __repr__(self):
        return "{" + ", ".join(repr(r) for r in self.roots) + "}"


@dataclass(frozen=True)
class BasicPair:
    D: RookPlacement
    phi: tuple  # values aligned with D.roots

    @classmethod
    def trivial(cls, D: RookPlacement) -> "BasicPair":
        return cls(D, (1,) * len(D))

    def phi_map(self) -> dict:
        return dict(zip(self.D.pairs, self.phi))

    def to_json(self):
        return [[a[0], a[1], int(v)] for a, v in zip(self.D.pairs, self.phi)]

    def __repr__(self):
        parts = [f"{r!r}" + ("" if v == 1 else f"*{v}") for r, v in zip(self.D.roots, self.phi)]
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class WeylElement:
    """Permutation sigma of display positions; matrix P with P e_i = e_sigma(i)."""

    perm: tuple

    @classmethod
    def identity(cls, M: int) -> "WeylElement":
        return cls(tuple(range(M)))

    @property
    def matrix(self) -> np.ndarray:
        M = len(self.perm)
        P = np.zeros((M, M), dtype=np.int64)
        P[list(self.perm), list(range(M))] = 1
        return P

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for i, s in enumerate(self.perm):
            inv[s] = i
        return WeylElement(tuple(inv))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(tuple(self.perm[other.perm[i]] for i in range(len(self.perm))))

    def is_identity(self) -> bool:
        return all(i == s for i, s in enumerate(self.perm))


@dataclass(frozen=True)
class RankSignature:
    r: tuple  # sorted ((k, m), r_km) for nonzero entries
    d: tuple = field(default=())  # sorted (k, d_k) with d_k = -1 only

    def as_dict(self) -> dict:
        return {"r": {f"{k},{m}": v for (k, m), v in self.r}, "d": {str(k): v for k, v in self.d}}


def _root_key(r: Root):
    return (not r.positive, r.pair)


# ---------------------------------------------------------------------------
# enumeration


def _root_lines(r: Root, series: str):
    """(rows, cols) occupied by the root (type A) or by {r, r'} (classical)."""
    if series == "A":
        return {r.row}, {r.col}
    a, b = r.pair, prime_map(r.pair)
    if a == b:
        return {a[0]}, {a[1]}
    return {a[0], b[0]}, {a[1], b[1]}


def enumerate_rook_placements(roots, series: str) -> list:
    """All rook placements inside the given roots (exhaustive backtracking)."""
    roots = sorted(roots, key=_root_key)
    lines = [_root_lines(r, series) for r in roots]
    out = []

    def rec(i, chosen, rows, cols):
        if i == len(roots):
            out.append(RookPlacement.of(chosen))
            return
        rec(i + 1, chosen, rows, cols)
        rr, cc = lines[i]
        if not (rr & rows) and not (cc & cols):
            rec(i + 1, chosen + [roots[i]], rows | rr, cols | cc)

    rec(0, [], frozenset(), frozenset())
    out.sort(key=lambda D: (len(D), [_root_key(r) for r in D.roots]))
    return out


def is_antidiagonal(pair) -> bool:
    return pair[0] == -pair[1]


def _self_blocks(D: RookPlacement, partition: PartitionSpec) -> dict:
    """Block id k -> roots of D inside I_k x I_-k."""
    out = {}
    for r in D.roots:
        k, m = partition.block_pair(r.pair)
        if k == -m:
            out.setdefault(k, []).append(r)
    return out


def enumerate_basic_pairs(spec: LieTypeSpec, partition: PartitionSpec, p: int) -> list:
    """All basic pairs over Delta(u^a) of a classical contraction."""
    if spec.series == "A":
        raise ValueError("basic pairs are defined for B, C, D")
    pos, neg = delta_ua(spec, partition)
    delta = find_nonsquare(p)
    out = []
    for D in enumerate_rook_placements(pos + neg, spec.series):
        if spec.series != "C":
            out.append(BasicPair.trivial(D))
            continue
        blocks = _self_blocks(D, partition)
        if any(not is_antidiagonal(r.pair) for rs in blocks.values() for r in rs):
            continue
        # at most one delta per self-paired block
        choices = [[None] + list(rs) for rs in blocks.values()]
        for combo in itertools.product(*choices):
            marked = {r.pair for r in combo if r is not None}
            phi = tuple(delta if a in marked else 1 for a in D.pairs)
            out.append(BasicPair(D, phi))
    return out


def is_basic_pair(pair: BasicPair, partition: PartitionSpec, p: int) -> bool:
    spec = partition.spec
    if spec.series in ("B", "D"):
        return all(v == 1 for v in pair.phi)
    delta = find_nonsquare(p)
    phi = pair.phi_map()
    if any(v not in (1, delta) for v in pair.phi):
        return False
    if any(v == delta and not is_antidiagonal(a) for a, v in phi.items()):
        return False
    for rs in _self_blocks(pair.D, partition).values():
        if any(not is_antidiagonal(r.pair) for r in rs):
            return False
        if sum(phi[r.pair] == delta for r in rs) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# signatures


def rank_signature(D, partition: PartitionSpec, phi=None, p=None) -> RankSignature:
    """Block counts r_km (k != m; k + m >= 0 for B, C, D) and discriminants d_k."""
    if isinstance(D, BasicPair):
        D, phi = D.D, D.phi
    spec = partition.spec
    counts = {}
    if spec.series == "A":
        for a in D.pairs:
            km = partition.block_pair(a)
            counts[km] = counts.get(km, 0) + 1
    else:
        for a in D.closure():
            k, m = partition.block_pair(a)
            if k != m and k + m >= 0:
                counts[(k, m)] = counts.get((k, m), 0) + 1
    d = ()
    if spec.series == "C" and phi is not None:
        if p is None:
            raise ValueError("the discriminant needs the prime")
        pm = dict(zip(D.pairs, phi))
        dd = {}
        for k, rs in _self_blocks(D, partition).items():
            nonsq = sum(not is_square(pm[r.pair], p) for r in rs)
            if nonsq % 2:
                dd[k] = -1
        d = tuple(sorted(dd.items()))
    return RankSignature(tuple(sorted(counts.items())), d)


def realized_rank_signature(ctx, D, phi=None) -> RankSignature:
    """Signature read from block ranks of the realized matrix X_{D,phi}."""
    if isinstance(D, BasicPair):
        D, phi = D.D, D.phi
    part = ctx.partition
    X = ctx.build_XDphi(D.roots, None if phi is None else dict(zip(D.pairs, phi)))
    full = (X[0] + X[1]) % ctx.p
    from .matfq import block_rank

    counts = {}
    for k in part.block_ids:
        for m in part.block_ids:
            if k == m or (ctx.series != "A" and k + m < 0):
                continue
            rk = block_rank(full, part.positions(k), part.positions(m), ctx.p)
            if rk:
                counts[(k, m)] = rk
    sig = rank_signature(D, part, phi, ctx.p) if ctx.series == "C" and phi is not None else None
    return RankSignature(tuple(sorted(counts.items())), sig.d if sig else ())


# ---------------------------------------------------------------------------
# Weyl groups and actions


def weyl_group(partition: PartitionSpec) -> list:
    """Block permutations of the GL(M)-Levi (W_L for A, W_Lbar for B, C, D)."""
    M = partition.spec.M
    per_block = [(partition.positions(k), list(itertools.permutations(partition.positions(k))))
                 for k in partition.block_ids]
    out = []
    for combo in itertools.product(*[perms for _, perms in per_block]):
        perm = list(range(M))
        for (src, _), img in zip(per_block, combo):
            for s, t in zip(src, img):
                perm[s] = t
        out.append(WeylElement(tuple(perm)))
    return out


def random_weyl(partition: PartitionSpec, rng) -> WeylElement:
    M = partition.spec.M
    perm = list(range(M))
    for k in partition.block_ids:
        pos = partition.positions(k)
        img = list(rng.permutation(pos))
        for s, t in zip(pos, img):
            perm[s] = int(t)
    return WeylElement(tuple(perm))


class _RootTable:
    def __init__(self, spec):
        self.spec = spec
        self.by_pair = {r.pair: r for r in build_root_system(spec)}
        self.idx = spec.index


_TABLES: dict = {}


def _table(spec) -> _RootTable:
    if spec not in _TABLES:
        _TABLES[spec] = _RootTable(spec)
    return _TABLES[spec]


def weyl_act_A(w1: WeylElement, D: RookPlacement, w2: WeylElement, spec: LieTypeSpec) -> RookPlacement:
    """w1 D w2: rows moved by w1, columns by w2^{-1}."""
    t = _table(spec)
    labels = t.idx.labels
    w2i = w2.inverse()
    out = []
    for a in D.pairs:
        i = labels[w1.perm[t.idx.pos(a[0])]]
        j = labels[w2i.perm[t.idx.pos(a[1])]]
        out.append(t.by_pair[(i, j)])
    return RookPlacement.of(out)


def _pair_matrix(pair: BasicPair, spec, p):
    from .roots import root_vector

    M = spec.M
    X = np.zeros((M, M), dtype=np.int64)
    for r, v in zip(pair.D.roots, pair.phi):
        X = X + int(v) * root_vector(r, spec, p)
    return X % p


def normalize_basic_pair(coeffs: dict, partition: PartitionSpec, p: int) -> BasicPair:
    """Torus + discriminant normalization of {root: coefficient} to a basic pair."""
    spec = partition.spec
    t = _table(spec)
    D = RookPlacement.of([t.by_pair[a] for a in coeffs])
    if spec.series != "C":
        return BasicPair.trivial(D)
    delta = find_nonsquare(p)
    phi = {a: 1 for a in coeffs}
    for k, rs in _self_blocks(D, partition).items():
        nonsq = [r for r in rs if is_antidiagonal(r.pair) and not is_square(coeffs[r.pair], p)]
        if len(nonsq) % 2:
            first = min(rs, key=lambda r: spec.index.pos(r.row))
            phi[first.pair] = delta
    return BasicPair(D, tuple(phi[a] for a in D.pairs))


def weyl_act_BCD(w: WeylElement, pair: BasicPair, partition: PartitionSpec, p: int) -> BasicPair:
    """w . (D, phi): the matrix w X w^dagger renormalized to a basic pair."""
    spec = partition.spec
    t = _table(spec)
    Finv, F = dagger_matrices(spec.form, p)
    P = w.matrix
    X = _pair_matrix(pair, spec, p)
    Y = P @ X @ (Finv @ P.T @ F) % p
    pos, neg = delta_ua(spec, partition)
    coeffs = {}
    for r in pos + neg:
        c = int(Y[t.idx.pos(r.row), t.idx.pos(r.col)])
        if c:
            coeffs[r.pair] = c
    return normalize_basic_pair(coeffs, partition, p)


def weyl_act(w1, D, w2=None, partition: PartitionSpec | None = None, p: int | None = None):
    """Dispatch: two-sided for type A, dagger-twisted for B, C, D."""
    if partition is None:
        raise ValueError("partition required")
    if partition.spec.series == "A":
        return weyl_act_A(w1, D, w2 if w2 is not None else WeylElement.identity(partition.spec.M), partition.spec)
    return weyl_act_BCD(w1, D, partition, p)


# ---------------------------------------------------------------------------
# canonical forms


def canonical_positions_A(sig: RankSignature, partition: PartitionSpec) -> list:
    """Rooks of the canonical type: (n'+1, n''+1), ..., (n'+r, n''+r) per block pair."""
    spec = partition.spec
    labels = spec.index.labels
    r = dict(sig.r)
    ids = partition.block_ids
    start = {}
    s = 0
    for k, n in zip(ids, partition.sizes):
        start[k] = s
        s += n
    out = []
    for k in ids:
        for m in ids:
            rkm = r.get((k, m), 0)
            if k == m or not rkm:
                continue
            n1 = start[k] + sum(r.get((k, t), 0) for t in ids if t < m)
            n2 = start[m] + sum(r.get((t, m), 0) for t in ids if t < k)
            for q in range(rkm):
                out.append((labels[n1 + q], labels[n2 + q]))
    return out


def canonical_form_A(D: RookPlacement, partition: PartitionSpec):
    """(D_c, w1, w2) with w1 D w2 = D_c of canonical type."""
    spec = partition.spec
    if spec.series != "A":
        raise ValueError("canonical_form_A needs a type A partition")
    t = _table(spec)
    idx = spec.index
    sig = rank_signature(D, partition)
    target = canonical_positions_A(sig, partition)
    by_block = {}
    for a in sorted(D.pairs, key=lambda a: (idx.pos(a[0]), idx.pos(a[1]))):
        by_block.setdefault(partition.block_pair(a), []).append(a)
    tgt_block = {}
    for a in target:
        tgt_block.setdefault(partition.block_pair(a), []).append(a)
    row_map, col_map = {}, {}
    for km, src in by_block.items():
        for a, b in zip(src, tgt_block[km]):
            row_map[idx.pos(a[0])] = idx.pos(b[0])
            col_map[idx.pos(a[1])] = idx.pos(b[1])
    sigma = _complete_perm(row_map, partition)
    tau = _complete_perm(col_map, partition)
    w1 = WeylElement(sigma)
    w2 = WeylElement(tau).inverse()
    Dc = RookPlacement.of([t.by_pair[a] for a in target])
    return Dc, w1, w2


def _complete_perm(partial: dict, partition: PartitionSpec) -> tuple:
    """Extend an injective block-preserving partial map to a block permutation."""
    M = partition.spec.M
    perm = [None] * M
    for k in partition.block_ids:
        pos = partition.positions(k)
        used_img = {partial[s] for s in pos if s in partial}
        free_img = [q for q in pos if q not in used_img]
        for s in pos:
            perm[s] = partial[s] if s in partial else free_img.pop(0)
    return tuple(perm)


def _pair_key(pair: BasicPair, spec) -> tuple:
    idx = spec.index
    return tuple(sorted((idx.pos(a[0]), idx.pos(a[1]), int(v)) for a, v in zip(pair.D.pairs, pair.phi)))


def canonical_form_BCD(pair: BasicPair, partition: PartitionSpec, p: int):
    """(pair_c, w): the least element of the W_Lbar-orbit under a fixed order."""
    spec = partition.spec
    if spec.series == "A":
        raise ValueError("canonical_form_BCD needs a classical partition")
    best = None
    for w in weyl_group(partition):
        img = weyl_act_BCD(w, pair, partition, p)
        key = _pair_key(img, spec)
        if best is None or key < best[0]:
            best = (key, img, w)
    return best[1], best[2]


def canonical_form_bruteforce_A(D: RookPlacement, partition: PartitionSpec) -> RookPlacement:
    """Oracle: least element of the W_L x W_L orbit (used in tests)."""
    spec = partition.spec
    W = weyl_group(partition)
    best = None
    for w1 in W:
        for w2 in W:
            img = weyl_act_A(w1, D, w2, spec)
            key = tuple(sorted((spec.index.pos(a[0]), spec.index.pos(a[1])) for a in img.pairs))
            if best is None or key < best[0]:
                best = (key, img)
    return best[1]


def canonical_placements_A(partition: PartitionSpec) -> list:
    spec = partition.spec
    pos, neg = delta_ua(spec, partition)
    seen = {}
    for D in enumerate_rook_placements(pos + neg, "A"):
        Dc, _, _ = canonical_form_A(D, partition)
        seen.setdefault(Dc.pairs, Dc)
    return sorted(seen.values(), key=lambda D: (len(D), [_root_key(r) for r in D.roots]))


def canonical_basic_pairs(partition: PartitionSpec, p: int) -> list:
    spec = partition.spec
    seen = {}
    for bp in enumerate_basic_pairs(spec, partition, p):
        c, _ = canonical_form_BCD(bp, partition, p)
        seen.setdefault((c.D.pairs, c.phi), c)
    return sorted(seen.values(), key=lambda b: (len(b.D), [_root_key(r) for r in b.D.roots], b.phi))


def placement_from_pairs(pairs, spec: LieTypeSpec) -> RookPlacement:
    t = _table(spec)
    return RookPlacement.of([t.by_pair[tuple(a)] for a in pairs])


def label_json(obj) -> str:
    return json.dumps(obj.to_json())
