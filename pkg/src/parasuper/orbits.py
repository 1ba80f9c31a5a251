"""Orbits, superclasses, invariant ideals and conjugacy in G^a.

All actions used here are linear on u^a (or its dual) in the root-vector
coordinates, so an orbit partition of F_p^d is computed at once: each
generator becomes a permutation of the p^d coordinate codes and the orbits are
the weakly connected components of the union of these permutations.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .contraction import OrbitCapExceeded, ContractionContext, Superclass, all_vectors, codes_of
from .matfq import nullspace, rank, reduce_mod_span, row_basis, rref
from .rook import canonical_basic_pairs, canonical_placements_A


class ClassificationError(RuntimeError):
    """Raised when a claimed partition into classes fails at the instance."""


@dataclass
class Orbit:
    members: np.ndarray  # sorted codes
    seed: int
    action: str

    @property
    def size(self) -> int:
        return len(self.members)


# ---------------------------------------------------------------------------
# orbit engines


def components(perms, N: int):
    """Orbit labels of the group generated by permutations of range(N).

    Labels are renumbered so that orbit 0 contains 0 and orbits are ordered by
    their least element."""
    if not perms:
        return np.arange(N)
    src = np.concatenate([np.arange(N)] * len(perms))
    dst = np.concatenate(perms)
    g = csr_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(N, N))
    _, lab = connected_components(g, directed=True, connection="weak")
    first = np.full(lab.max() + 1, N, dtype=np.int64)
    np.minimum.at(first, lab, np.arange(N))
    order = np.argsort(first)
    rename = np.empty_like(order)
    rename[order] = np.arange(len(order))
    return rename[lab]


def linear_orbits(maps, d: int, p: int, cap: int | None = None):
    """Orbit labels on all p^d coordinate codes under linear maps (column convention)."""
    N = p**d
    if cap is not None and N > cap:
        raise OrbitCapExceeded(f"space of size {N} exceeds the orbit cap {cap}")
    V = all_vectors(d, p)
    perms = [codes_of(V @ np.asarray(T).T, p) for T in maps]
    return components(perms, N)


def orbit_bfs(seed, act, generators, key=None, cap: int = 10**6, action: str = "") -> list:
    """Breadth-first closure of seed under act(g, x) for g in generators."""
    key = key or (lambda x: np.asarray(x).tobytes())
    seen = {key(seed): seed}
    queue = deque([seed])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = act(g, x)
            k = key(y)
            if k not in seen:
                seen[k] = y
                if len(seen) > cap:
                    raise OrbitCapExceeded(f"orbit exceeds cap {cap} (reached {len(seen)})")
                queue.append(y)
    return [seen[k] for k in sorted(seen)]


def vector_orbit(seed, maps, p: int, cap: int = 10**6) -> Orbit:
    """Orbit of one coordinate vector under linear maps, as sorted codes."""
    seed = np.asarray(seed, dtype=np.int64) % p
    d = len(seed)
    w = p ** np.arange(d, dtype=np.int64)
    seen = {int(seed @ w)}
    frontier = seed[None, :]
    while len(frontier):
        new = []
        for T in maps:
            img = (frontier @ np.asarray(T).T) % p
            codes = img @ w
            for c, row in zip(codes.tolist(), img):
                if c not in seen:
                    seen.add(c)
                    new.append(row)
        if len(seen) > cap:
            raise OrbitCapExceeded(f"orbit exceeds cap {cap} (reached {len(seen)})")
        frontier = np.array(new, dtype=np.int64).reshape(len(new), d)
    return Orbit(np.array(sorted(seen), dtype=np.int64), int(seed @ w), "linear")


# ---------------------------------------------------------------------------
# U^a superclasses


def primal_labels(ctx: ContractionContext, cap: int | None = None):
    if not hasattr(ctx, "_primal_labels"):
        ctx._primal_labels = linear_orbits(ctx.primal_maps, ctx.dim, ctx.p, cap)
    return ctx._primal_labels


def dual_labels(ctx: ContractionContext, cap: int | None = None):
    if not hasattr(ctx, "_dual_labels"):
        ctx._dual_labels = linear_orbits(ctx.dual_maps, ctx.dim, ctx.p, cap)
    return ctx._dual_labels


def canonical_labels(ctx: ContractionContext) -> list:
    """Canonical rook placements (type A) or canonical basic pairs (B, C, D)."""
    if ctx.series == "A":
        return canonical_placements_A(ctx.partition)
    return canonical_basic_pairs(ctx.partition, ctx.p)


def label_coords(ctx: ContractionContext, label):
    if ctx.series == "A":
        return ctx.X_of(label.roots)
    return ctx.X_of(label.D.roots, label.phi_map())


def superclasses_Ua(ctx: ContractionContext, cap: int | None = None) -> list:
    """Classes of U^a, one per canonical label; raises if the labels do not
    meet every orbit exactly once."""
    lab = primal_labels(ctx, cap)
    labels = canonical_labels(ctx)
    codes = [int(codes_of(label_coords(ctx, L), ctx.p)) for L in labels]
    orbit_ids = [int(lab[c]) for c in codes]
    norb = int(lab.max()) + 1
    if len(set(orbit_ids)) != len(orbit_ids):
        seen = {}
        for L, o in zip(labels, orbit_ids):
            if o in seen:
                raise ClassificationError(f"labels {seen[o]} and {L} lie in one orbit")
            seen[o] = L
    if len(orbit_ids) != norb:
        missing = sorted(set(range(norb)) - set(orbit_ids))
        rep = int(np.nonzero(lab == missing[0])[0][0])
        raise ClassificationError(f"{len(missing)} orbits carry no canonical label, e.g. the orbit of code {rep}")
    order = np.argsort(lab, kind="stable")
    bounds = np.searchsorted(lab[order], np.arange(norb + 1))
    out = []
    for L, o, c in zip(labels, orbit_ids, codes):
        members = np.sort(order[bounds[o]:bounds[o + 1]])
        out.append(Superclass(L, members, c))
    return out


# ---------------------------------------------------------------------------
# invariant subspaces


def invariant_closure(vectors, maps, p: int):
    """Smallest subspace containing the vectors and stable under the maps (rref rows)."""
    vectors = np.asarray(vectors, dtype=np.int64)
    d = vectors.shape[-1]
    B = row_basis(vectors.reshape(-1, d), p) if vectors.size else np.zeros((0, d), dtype=np.int64)
    while True:
        imgs = [B] + [(B @ np.asarray(T).T) % p for T in maps]
        B2 = row_basis(np.vstack(imgs), p) if len(B) else B
        if len(B2) == len(B):
            return B2
        B = B2


def ad_map(ctx: ContractionContext, h):
    """Ad_h on u^a: X -> h X h^{-1}."""
    return ctx.conj_map(h)


def smallest_invariant_ideal(ctx: ContractionContext, h):
    """u^a_h: invariant closure of (Ad_h - id) u^a, certified minimal and valid."""
    T = ad_map(ctx, h)
    gens = ((T - np.eye(ctx.dim, dtype=np.int64)) % ctx.p).T  # rows = (Ad_h - id)(basis_i)
    B = invariant_closure(gens, ctx.primal_maps, ctx.p)
    # Ad_h is the identity on the quotient
    R, piv = rref(B, ctx.p) if len(B) else (B, [])
    if len(B):
        resid = reduce_mod_span(gens, R[: len(piv)], piv, ctx.p)
        if resid.any():
            raise ClassificationError("Ad_h is not trivial modulo the computed ideal")
    return B


def annihilator(rows, d: int, p: int):
    """Rows spanning {x : <r, x> = 0 for all rows r}."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, d)
    if not len(rows):
        return np.eye(d, dtype=np.int64)
    return row_basis(nullspace(rows, p), p) if len(nullspace(rows, p)) else np.zeros((0, d), dtype=np.int64)


def ideal_uaD_BCD(ctx: ContractionContext, pair):
    """u^a_D: common kernel of all g.Lambda_{D,phi}, g in Gbar^a."""
    lam = ctx.X_of(pair.D.roots, pair.phi_map())
    span = invariant_closure(lam[None, :], ctx.dual_maps, ctx.p)
    return annihilator(span, ctx.dim, ctx.p)


def subspace_codes(B, p: int):
    """Codes of all vectors of the span of the rows of B."""
    B = np.asarray(B, dtype=np.int64)
    k = len(B)
    d = B.shape[1]
    if k == 0:
        return np.zeros(1, dtype=np.int64)
    C = all_vectors(k, p)
    return np.sort(codes_of(C @ B, p))


def projection(B, p: int):
    """Normal-form map modulo span(B) applied to coordinate arrays (fixed complement)."""
    B = np.asarray(B, dtype=np.int64)
    if not len(B):
        return lambda V: np.asarray(V, dtype=np.int64) % p
    R, piv = rref(B, p)
    R = R[: len(piv)]
    return lambda V: reduce_mod_span(V, R, piv, p)


# ---------------------------------------------------------------------------
# G^a as a flat index set h * |U^a| + u


class FlatGroup:
    """Elements of G^a indexed by (levi index, U^a code)."""

    def __init__(self, ctx: ContractionContext, chunk: int = 1 << 15):
        self.ctx = ctx
        self.nL = ctx.levi_order
        self.nU = ctx.ua_order
        self.size = self.nL * self.nU
        self.chunk = chunk

    def flat(self, hidx, ucode):
        return np.asarray(hidx, dtype=np.int64) * self.nU + np.asarray(ucode, dtype=np.int64)

    def unflat(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return idx // self.nU, idx % self.nU

    def elements(self, idx):
        h, u = self.unflat(idx)
        return self.ctx.mul(self.ctx.levi_elements[h], self.ctx.ua_elements[u])

    def index_of(self, g):
        h, u = self.ctx.split(g)
        return self.flat(h, u)

    def left_perm(self, s):
        """x -> s x on flat indices."""
        return self._map(lambda G: self.ctx.mul(s, G))

    def conj_perm(self, s):
        si = self.ctx.group_inv(s)
        return self._map(lambda G: self.ctx.mul(self.ctx.mul(s, G), si))

    def _map(self, fn):
        out = np.empty(self.size, dtype=np.int64)
        for start in range(0, self.size, self.chunk):
            idx = np.arange(start, min(self.size, start + self.chunk))
            out[idx] = self.index_of(fn(self.elements(idx)))
        return out

    def levi_generators(self):
        """A small generating set of L (greedy, by closure in the multiplication table)."""
        ctx = self.ctx
        T = ctx.levi_mult
        n = len(T)
        gens = []
        span = {0}
        for cand in range(n):
            if cand in span:
                continue
            gens.append(cand)
            queue = deque(span)
            while queue:
                x = queue.popleft()
                for g in gens:
                    y = int(T[x, g])
                    if y not in span:
                        span.add(y)
                        queue.append(y)
            if len(span) == n:
                break
        return gens

    def generators(self):
        ctx = self.ctx
        gens = [ctx.levi_elements[i] for i in self.levi_generators()]
        gens += list(ctx.ua_generators)
        return gens

    def conjugacy_labels(self):
        if not hasattr(self, "_conj"):
            self._conj_perms = [self.conj_perm(s) for s in self.generators()]
            self._conj = components(self._conj_perms, self.size)
        return self._conj


def ua_conjugacy_labels(ctx: ContractionContext):
    """Conjugacy classes of U^a in coordinates (conjugation is linear there)."""
    maps = [ctx.conj_map(u) for u in ctx.ua_generators]
    return linear_orbits(maps, ctx.dim, ctx.p)


def levi_conjugacy_classes(ctx: ContractionContext) -> list:
    T = ctx.levi_mult
    n = len(T)
    inv = [int(np.nonzero(T[i] == 0)[0][0]) for i in range(n)]
    seen = set()
    out = []
    for x in range(n):
        if x in seen:
            continue
        cl = sorted({int(T[T[g, x], inv[g]]) for g in range(n)})
        seen.update(cl)
        out.append(cl)
    return out


def ua_cosets(ctx: ContractionContext, B):
    """Left cosets u U_B of U_B = image of span(B) in U^a; returns coset labels.

    Raises if the image of span(B) is not a subgroup."""
    p = ctx.p
    sub = subspace_codes(B, p)
    if len(B) == 0:
        return np.arange(ctx.ua_order)
    gens = [ctx.u_from_coords(b) for b in np.asarray(B)]
    U = ctx.ua_elements
    perms = [ctx.ua_code(ctx.mul(U, g)) for g in gens]
    lab = components(perms, ctx.ua_order)
    ident = np.nonzero(lab == lab[0])[0]
    if len(ident) != len(sub) or not np.array_equal(np.sort(ident), sub):
        raise ClassificationError("the Cayley image of the ideal is not a subgroup")
    return lab


def assemble_superclasses_Ga(ctx: ContractionContext, ua_classes, hd_map: dict, fg: FlatGroup | None = None):
    """Classes K_beta (type A) / K_b (B, C, D) over (label, h), h in H_D up to L-conjugacy.

    hd_map: label -> sorted list of Levi indices forming H_D.
    Returns (classes, label_array over flat indices)."""
    fg = fg or FlatGroup(ctx)
    lclasses = levi_conjugacy_classes(ctx)
    cl_of = {}
    for cl in lclasses:
        for x in cl:
            cl_of[x] = cl
    assign = np.full(fg.size, -1, dtype=np.int64)
    out = []
    ideal_cache = {}
    for K in ua_classes:
        H = hd_map[K.label]
        Hs = set(H)
        reps = [min(Hs & set(cl)) for cl in lclasses if Hs & set(cl)]
        for h in reps:
            if h not in ideal_cache:
                B = smallest_invariant_ideal(ctx, ctx.levi_elements[h])
                if ctx.series == "A":
                    ideal_cache[h] = ("proj", projection(B, ctx.p))
                else:
                    ideal_cache[h] = ("coset", ua_cosets(ctx, B))
            kind, data = ideal_cache[h]
            if kind == "proj":
                V = all_vectors(ctx.dim, ctx.p)
                keys = codes_of(data(V), ctx.p)
                target = np.isin(keys, np.unique(keys[K.members]))
            else:
                target = np.isin(data, np.unique(data[K.members]))
            ucodes = np.nonzero(target)[0]
            members = np.sort(np.concatenate([fg.flat(np.full(len(ucodes), x), ucodes) for x in cl_of[h]]))
            clash = assign[members] >= 0
            if clash.any():
                other = out[int(assign[members[clash][0]])].label
                raise ClassificationError(f"classes {other} and {(K.label, h)} overlap")
            assign[members] = len(out)
            rep = int(fg.flat(h, K.representative))
            out.append(Superclass((K.label, h), members, rep))
    if (assign < 0).any():
        miss = int(np.nonzero(assign < 0)[0][0])
        raise ClassificationError(f"element {fg.unflat(miss)} lies in no class")
    return out, assign
