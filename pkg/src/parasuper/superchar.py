"""Supercharacters of U^a and G^a.

Exponential sums  sum_{mu in Omega} eps^{mu(X)}  over an orbit Omega are
evaluated at every X at once with a Fourier transform over (Z/p)^d whose
values lie in the group ring Z[x]/(x^p - 1): the coefficient of x^t counts the
mu in Omega with mu(X) = t. The result is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .contraction import ContractionContext, Superclass, all_vectors, codes_of
from .grouptools import SmallGroup, character_table, decompose, is_genuine
from .orbits import (
    ClassificationError,
    FlatGroup,
    OrbitCapExceeded,
    assemble_superclasses_Ga,
    dual_labels,
    ideal_uaD_BCD,
    invariant_closure,
    levi_conjugacy_classes,
    subspace_codes,
    superclasses_Ua,
    ua_conjugacy_labels,
    vector_orbit,
)
from .matfq import reduce_mod_span, rref
from .scalars import CycloNumber, cyclotomic_field, lcm


# ---------------------------------------------------------------------------
# data types


@dataclass
class ClassFunction:
    """Values num[j] / den on the classes of a theory, in Q(zeta_N)."""

    label: object
    N: int
    num: np.ndarray  # (r, deg) integers
    den: int = 1
    info: dict = field(default_factory=dict)

    def value(self, j: int) -> CycloNumber:
        return CycloNumber(self.N, [Fraction(int(c), self.den) for c in self.num[j]])

    @property
    def degree(self) -> Fraction:
        return Fraction(int(self.num[0][0]), self.den)


@dataclass
class SupercharTheory:
    group: str  # "Ua" or "Ga"
    ctx: ContractionContext
    classes: list
    characters: list
    N: int
    order: int
    element_class: np.ndarray
    element_values: object  # callable i -> (num array over elements, den)
    conjugacy: object  # callable -> conjugacy labels over elements
    identity: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.classes], dtype=np.int64)

    def table(self) -> list:
        return [[ch.value(j) for j in range(len(self.classes))] for ch in self.characters]


# ---------------------------------------------------------------------------
# exponential sums


def exponential_sums(codes, d: int, p: int) -> np.ndarray:
    """counts[X, t] = #{mu in codes : mu . X = t (mod p)} for every X in F_p^d."""
    A = np.zeros((p**d, p), dtype=np.int64)
    A[np.asarray(codes, dtype=np.int64), 0] = 1
    A = A.reshape((p,) * d + (p,))
    for axis in range(d):
        B = np.moveaxis(A, axis, 0)
        out = np.zeros_like(B)
        for X in range(p):
            for m in range(p):
                out[X] += np.roll(B[m], (m * X) % p, axis=-1)
        A = np.moveaxis(out, 0, axis)
    return A.reshape(p**d, p)


def counts_to_field(counts, p: int) -> np.ndarray:
    return cyclotomic_field(p).reduce(counts)


# ---------------------------------------------------------------------------
# stabilizers and subgroups, type A


def S_of_root(ctx: ContractionContext, gamma) -> tuple:
    """(S_+(gamma), S_-(gamma)) as sets of pairs."""
    part = ctx.partition
    order = part.order
    pair = gamma.pair if hasattr(gamma, "pair") else tuple(gamma)
    k, m = part.block_pair(pair)
    ok, om = order[k], order[m]
    Sp, Sm = set(), set()
    for r in ctx.roots:
        if r.row != pair[0]:
            continue
        kk, t = part.block_pair(r.pair)
        ot = order[t]
        if ok < om:
            if r.positive and ok < ot < om:
                Sp.add(r.pair)
        else:
            if (not r.positive) and ot < om:
                Sm.add(r.pair)
            if r.positive and ok < ot:
                Sp.add(r.pair)
    return Sp, Sm


def uaD_basis_A(ctx: ContractionContext, D) -> np.ndarray:
    """Rows spanning u^a_D = span{E_b : b not in S_+(D)} + span{F_b : b not in S_-(D)}."""
    Sp, Sm = set(), set()
    for g in D.roots:
        a, b = S_of_root(ctx, g)
        Sp |= a
        Sm |= b
    keep = [i for i, r in enumerate(ctx.roots) if r.pair not in (Sp if r.positive else Sm)]
    return np.eye(ctx.dim, dtype=np.int64)[keep]


def right_stabilizer_bruteforce(ctx: ContractionContext, lam) -> np.ndarray:
    """Codes of all u = 1 + Y in U^a with Lambda . u = Lambda, by exhaustion."""
    p = ctx.p
    lam = np.asarray(lam, dtype=np.int64)
    # Lambda(u X) - Lambda(X) = Lambda(Y X): Q[i, j] = Lambda(b_i b_j)
    B = ctx.basis
    Q = np.array([[int(lam @ ctx.coords(ctx.mul(B[i], B[j]))) for j in range(ctx.dim)] for i in range(ctx.dim)],
                 dtype=np.int64).reshape(ctx.dim, ctx.dim)
    V = all_vectors(ctx.dim, p)
    ok = ~((V @ Q) % p).any(axis=1)
    return np.nonzero(ok)[0]


def block_scalar_groups(partition, pair) -> list:
    """Block ids that must form one scalar matrix for h in H_gamma (GL(M)-Levi)."""
    ids = partition.block_ids
    k, m = partition.block_pair(pair)
    ok, om = partition.order[k], partition.order[m]
    if ok < om:
        return [list(ids[ok:om + 1])]
    return [list(ids[: om + 1]) + list(ids[ok:])]


def _is_scalar_on(h, positions, p) -> bool:
    sub = h[np.ix_(positions, positions)] % p
    c = sub[0, 0]
    return c != 0 and np.array_equal(sub, c * np.eye(len(positions), dtype=np.int64))


def H_gamma(ctx: ContractionContext, gamma) -> list:
    """Levi indices of H_gamma (for B, C, D the intersection with H_gamma')."""
    from .roots import prime_map

    pair = gamma.pair if hasattr(gamma, "pair") else tuple(gamma)
    part = ctx.partition
    conds = block_scalar_groups(part, pair)
    if ctx.series != "A":
        conds += block_scalar_groups(part, prime_map(pair))
    pos_sets = [[q for k in c for q in part.positions(k)] for c in conds]
    out = []
    for i, h in enumerate(ctx.levi_elements[:, 0]):
        if all(_is_scalar_on(h, ps, ctx.p) for ps in pos_sets):
            out.append(i)
    return out


def H_D(ctx: ContractionContext, D) -> list:
    roots = D.roots if hasattr(D, "roots") else D.D.roots
    S = set(range(ctx.levi_order))
    for g in roots:
        S &= set(H_gamma(ctx, g))
    return sorted(S)


def levi_group(ctx: ContractionContext) -> SmallGroup:
    if not hasattr(ctx, "_levi_group"):
        ctx._levi_group = SmallGroup(ctx.levi_mult, 0, "L")
    return ctx._levi_group


# ---------------------------------------------------------------------------
# U^a supercharacters


def dual_orbit_codes(ctx: ContractionContext, lam) -> np.ndarray:
    lab = dual_labels(ctx)
    c = int(codes_of(np.asarray(lam), ctx.p))
    return np.nonzero(lab == lab[c])[0]


def right_ua_orbit_size(ctx: ContractionContext, lam) -> int:
    """|Lambda U^a| for the right action (Lambda.u)(X) = Lambda(u X)."""
    maps = [ctx.left_map(u).T for u in ctx.ua_generators]
    return vector_orbit(lam, maps, ctx.p).size


def zeta_D(ctx: ContractionContext, D):
    """Element values of zeta_D on U^a: (numerators (p^d, p-1), denominator)."""
    lam = ctx.X_of(D.roots)
    omega = dual_orbit_codes(ctx, lam)
    ratio = Fraction(right_ua_orbit_size(ctx, lam), len(omega))
    vals = counts_to_field(exponential_sums(omega, ctx.dim, ctx.p), ctx.p) * ratio.numerator
    return vals, ratio.denominator, {"orbit": len(omega), "ratio": str(ratio)}


def sigma_Dphi(ctx: ContractionContext, pair):
    """Element values of sigma_{D,phi} on U^a (indexed by Cayley coordinates)."""
    lam = ctx.X_of(pair.D.roots, pair.phi_map())
    omega = dual_orbit_codes(ctx, lam)
    vals = counts_to_field(exponential_sums(omega, ctx.dim, ctx.p), ctx.p)
    return vals, 1, {"orbit": len(omega)}


def xi_D_values(ctx: ContractionContext, D, uaD_codes):
    """xi_D(1+X) = sum_{p in L} eps^{(p Lambda_D)(X)} on X in u^a_D: counts (n, p)."""
    p = ctx.p
    lam = ctx.X_of(D.roots)
    V = all_vectors(ctx.dim, p)[uaD_codes]
    counts = np.zeros((len(uaD_codes), p), dtype=np.int64)
    for h in ctx.levi_elements:
        # (p.Lambda)(X) = Lambda(p^{-1} X p)
        T = ctx.conj_map(ctx.group_inv(h))
        mu = (T.T @ lam) % p
        t = (V @ mu) % p
        np.add.at(counts, (np.arange(len(t)), t), 1)
    return counts


def subgroup_of_ua(ctx: ContractionContext, codes, name="") -> SmallGroup:
    """SmallGroup on the U^a elements with the given codes (must be a subgroup)."""
    codes = np.asarray(codes, dtype=np.int64)
    pos = -np.ones(ctx.ua_order, dtype=np.int64)
    pos[codes] = np.arange(len(codes))
    E = ctx.ua_elements[codes]

    def index(B):
        c = pos[ctx.ua_code(B)]
        if (c < 0).any():
            raise ClassificationError("subset of U^a is not closed under multiplication")
        return c

    G = SmallGroup.from_elements(E, ctx.mul, index, name)
    G.embedding = codes
    return G


def xi_D_genuineness(ctx: ContractionContext, D) -> dict:
    """Decompose xi_D against Irr(U^a_D); genuine iff multiplicities are in Z_{>=0}."""
    B = uaD_basis_A(ctx, D)
    codes = subspace_codes(B, ctx.p)
    G = subgroup_of_ua(ctx, codes, "U^a_D")
    counts = xi_D_values(ctx, D, codes)
    vals = counts_to_field(counts, ctx.p)
    per_class = []
    for c in G.conjugacy_classes():
        v = vals[c]
        if not (v == v[0]).all():
            return {"genuine": False, "reason": "not a class function", "order": G.order}
        per_class.append(v[0])
    tab = character_table(G)
    mults = decompose(np.array(per_class), tab, ctx.p)
    return {
        "genuine": is_genuine(mults),
        "order": G.order,
        "n_irr": len(tab),
        "multiplicities": [str(m) for m in mults],
        "degree": int(vals[0][0]),
    }


# ---------------------------------------------------------------------------
# theories


def _ua_theory(ctx: ContractionContext, cap=None) -> SupercharTheory:
    classes = superclasses_Ua(ctx, cap)
    p = ctx.p
    chars, cache = [], {}
    for K in classes:
        if ctx.series == "A":
            vals, den, info = zeta_D(ctx, K.label)
        else:
            vals, den, info = sigma_Dphi(ctx, K.label)
        cache[len(chars)] = (vals, den)
        num = np.array([vals[k.representative] for k in classes])
        chars.append(ClassFunction(K.label, p, num, den, info))
    elem_class = np.empty(ctx.ua_order, dtype=np.int64)
    for j, K in enumerate(classes):
        elem_class[K.members] = j
    return SupercharTheory(
        "Ua", ctx, classes, chars, p, ctx.ua_order, elem_class,
        lambda i: cache[i], lambda: ua_conjugacy_labels(ctx), 0,
        {"theorem": "ThSupUa" if ctx.series == "A" else "SupUaos"},
    )


def _theta_on_levi(ctx, H, tab, hgroup):
    """theta-dot on all of L for each row of the table: (k, |L|, deg)."""
    cls = hgroup.class_of
    out = np.zeros((len(tab), ctx.levi_order, tab.field.degree), dtype=np.int64)
    for local, h in enumerate(H):
        out[:, h] = tab.values[:, cls[local]]
    return out


LEVI_CAP = 5000


def _ga_theory(ctx: ContractionContext, cap=None) -> SupercharTheory:
    p = ctx.p
    if ctx.levi_order > LEVI_CAP:
        raise OrbitCapExceeded(f"|L| = {ctx.levi_order} exceeds the Levi cap {LEVI_CAP}")
    ua_classes = superclasses_Ua(ctx, cap)
    hd = {K.label: H_D(ctx, K.label) for K in ua_classes}
    fg = FlatGroup(ctx)
    classes, assign = assemble_superclasses_Ga(ctx, ua_classes, hd, fg)
    L = levi_group(ctx)
    # per-label data
    pieces = []
    N = p
    for K in ua_classes:
        H = hd[K.label]
        Hg = L.subgroup(H)
        tab = character_table(Hg)
        N = lcm(N, tab.N)
        if ctx.series == "A":
            vals, den, info = zeta_D(ctx, K.label)
        else:
            vals, den, info = sigma_Dphi(ctx, K.label)
        pieces.append((K, H, Hg, tab, vals, den, info))
    F = cyclotomic_field(N)
    nL = ctx.levi_order
    chars = []
    element_fns = []
    transversal_cache = {}
    proportional = {}
    for K, H, Hg, tab, vals, den, info in pieces:
        uvals = F.embed_from(vals, p)  # (p^d, deg)
        theta = _theta_on_levi(ctx, H, tab, Hg)
        theta = F.embed_from(theta, tab.N) if tab.N != N else theta
        for i in range(len(tab)):
            if ctx.series == "A":
                c = Fraction(nL * nL, len(H))
                hv = theta[i]
                scale = c
            else:
                hv, scale = _induced_levi_part(ctx, H, theta[i], F, transversal_cache)
                idx = nL // len(H)
                proportional[repr((K.label, i))] = bool(np.array_equal(hv, idx * theta[i]))
            elem = _outer(F, hv, uvals)  # (|L|, p^d, deg)
            elem = elem.reshape(nL * ctx.ua_order, F.degree)
            fr = Fraction(scale) / den
            num_full = elem * fr.numerator
            den_full = fr.denominator
            reps = np.array([cl.representative for cl in classes])
            label = (K.label, i)
            ch = ClassFunction(label, N, num_full[reps], den_full, dict(info, theta=i, H_order=len(H)))
            chars.append(ch)
            element_fns.append((num_full, den_full))
    elem_fn = lambda i: element_fns[i]
    theory = SupercharTheory(
        "Ga", ctx, classes, chars, N, fg.size, assign, elem_fn, fg.conjugacy_labels, 0,
        {"theorem": "GGsuper" if ctx.series == "A" else "Gsuper"},
    )
    if ctx.series != "A":
        theory.meta["proportional"] = proportional
    theory.flat = fg
    theory.pieces = pieces
    return theory


def _outer(F, a, b):
    """a: (n, deg), b: (m, deg) -> (n, m, deg) field products."""
    return np.einsum("ni,mj,ijk->nmk", a, b, F.mult)


def _induced_levi_part(ctx, H, theta_row, F, cache):
    """Levi factor of Ind(theta x sigma, H_D U^a, G^a) using sigma's L-invariance:
    sum over a transversal x of L / H_D of theta-dot(x^{-1} h x)."""
    key = tuple(H)
    L = levi_group(ctx)
    T = L.table
    inv = L.inverse
    if key not in cache:
        Hs = set(H)
        reps, covered = [], set()
        for x in range(L.order):
            if x in covered:
                continue
            reps.append(x)
            covered |= {int(T[x, h]) for h in H}
        cache[key] = reps
    reps = cache[key]
    out = np.zeros_like(theta_row)
    hs = np.arange(L.order)
    for x in reps:
        conj = T[T[inv[x], hs], x]  # x^{-1} h x
        out += theta_row[conj]
    return out, Fraction(1)


def assemble_theory(ctx: ContractionContext, target: str = "Ua", cap=None) -> SupercharTheory:
    if target == "Ua":
        return _ua_theory(ctx, cap)
    if target == "Ga":
        return _ga_theory(ctx, cap)
    raise ValueError(f"unknown target {target!r}")


# ---------------------------------------------------------------------------
# structural-claim helpers


def hd_stabilizes_orbit(ctx: ContractionContext, label) -> dict:
    """H_D versus {h in L : Ad*_h fixes every form of the orbit of Lambda_D}."""
    lam = ctx.X_of(label.roots) if ctx.series == "A" else ctx.X_of(label.D.roots, label.phi_map())
    omega = all_vectors(ctx.dim, ctx.p)[dual_orbit_codes(ctx, lam)]
    fixers = []
    for i, h in enumerate(ctx.levi_elements):
        T = ctx.conj_map(ctx.group_inv(h))  # mu -> mu o Ad_{h^{-1}}
        if np.array_equal((omega @ T) % ctx.p, omega):
            fixers.append(i)
    H = H_D(ctx, label)
    return {"H_D": H, "fixers": fixers, "contained": set(H) <= set(fixers), "equal": H == fixers}


def hd_preserves_uaD(ctx: ContractionContext, pair) -> dict:
    """For h in H_D: (Ad_h - id) v lies in u^a_D for every basis vector v."""
    B = ideal_uaD_BCD(ctx, pair)
    H = H_D(ctx, pair)
    R, piv = rref(B, ctx.p) if len(B) else (B, [])
    bad = []
    for h in H:
        T = ctx.conj_map(ctx.levi_elements[h])
        rows = ((T - np.eye(ctx.dim, dtype=np.int64)) % ctx.p).T
        resid = reduce_mod_span(rows, R[: len(piv)], piv, ctx.p) if len(B) else rows
        if resid.any():
            bad.append(h)
    return {"ok": not bad, "H_D": H, "violations": bad, "dim_uaD": len(B)}


def zeta_vs_induction(ctx: ContractionContext, D) -> dict:
    """Compare zeta_D with the restriction to U^a of Ind(xi_D, U^a_D, G^a)."""
    p = ctx.p
    B = uaD_basis_A(ctx, D)
    codes = subspace_codes(B, p)
    xi_counts = np.zeros((ctx.ua_order, p), dtype=np.int64)
    xi_counts[codes] = xi_D_values(ctx, D, codes)
    # sum over h in L of xi-dot(h w h^{-1})
    V = all_vectors(ctx.dim, p)
    acc = np.zeros_like(xi_counts)
    for h in ctx.levi_elements:
        T = ctx.conj_map(h)
        acc += xi_counts[codes_of(V @ T.T, p)]
    conj = ua_conjugacy_labels(ctx)
    # sum over v in U^a of f(v u v^{-1}) = |C(u)| * sum over the class of u
    nc = conj.max() + 1
    class_sum = np.zeros((nc, p), dtype=np.int64)
    np.add.at(class_sum, conj, acc)
    sizes = np.bincount(conj)
    ind = class_sum[conj] * (ctx.ua_order // sizes[conj])[:, None]
    ind_vals = counts_to_field(ind, p)
    zv, zden, _ = zeta_D(ctx, D)
    # induced value = ind / |U^a_D|; find a rational r with ind/|S| = r * zeta
    S = len(codes)
    ratio = None
    for x in range(ctx.ua_order):
        if zv[x].any():
            a = Fraction(int(ind_vals[x][np.nonzero(zv[x])[0][0]]), S)
            b = Fraction(int(zv[x][np.nonzero(zv[x])[0][0]]), zden)
            ratio = a / b
            break
    prop = ratio is not None and all(
        (Fraction(1, S) * ind_vals[x].astype(object) == ratio * Fraction(1, zden) * zv[x].astype(object)).all()
        for x in range(ctx.ua_order)
    )
    return {"proportional": bool(prop), "ratio": str(ratio)}
