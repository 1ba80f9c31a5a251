"""Axiom checks for supercharacter theories and instance checks of the structural claims."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy

from .contraction import ContractionContext, codes_of
from .grouptools import _gram
from .matfq import rank
from .orbits import ClassificationError, primal_labels, superclasses_Ua
from .rook import enumerate_basic_pairs, enumerate_rook_placements, rank_signature
from .scalars import cyclotomic_field

AXIOMS = (
    "partition",
    "identity_class",
    "union_of_conjugacy_classes",
    "constancy",
    "disjointness",
    "equal_counts",
    "invertibility",
)


@dataclass
class CheckResult:
    name: str
    ok: bool
    witness: object = None
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> dict:
        out = {"name": self.name, "status": "pass" if self.ok else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class VerificationReport:
    title: str
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name, fn):
        t = time.perf_counter()
        try:
            ok, witness, detail = fn()
        except (ClassificationError, ArithmeticError, ValueError) as exc:
            ok, witness, detail = False, f"{type(exc).__name__}: {exc}", {}
        res = CheckResult(name, bool(ok), witness, detail, time.perf_counter() - t)
        self.checks.append(res)
        return res

    def failures(self) -> list:
        return [c.name for c in self.checks if not c.ok]

    def to_json(self, timings: bool = False) -> dict:
        checks = []
        for c in self.checks:
            j = c.to_json()
            if timings:
                j["seconds"] = round(c.seconds, 4)
            checks.append(j)
        return {"title": self.title, "status": "pass" if self.ok else "fail", "checks": checks}


# ---------------------------------------------------------------------------
# axioms


def describe(ctx) -> str:
    return f"{ctx.series}{ctx.spec.n} {ctx.partition.describe()} p={ctx.p}"


def _member_lists(theory):
    return [np.asarray(K.members, dtype=np.int64) for K in theory.classes]


def _check_partition(theory):
    members = _member_lists(theory)
    allm = np.concatenate(members)
    counts = np.bincount(allm, minlength=theory.order)
    if len(counts) > theory.order:
        return False, {"element": int(np.argmax(counts[theory.order:]) + theory.order)}, {}
    if (counts == 0).any():
        return False, {"uncovered": int(np.argmin(counts))}, {}
    if (counts > 1).any():
        return False, {"repeated": int(np.argmax(counts > 1))}, {}
    ec = theory.element_class
    for j, m in enumerate(members):
        if (ec[m] != j).any():
            return False, {"class": j}, {}
    return True, None, {"classes": len(members)}


def _check_identity(theory):
    j = int(theory.element_class[theory.identity])
    size = theory.classes[j].size
    return size == 1, (None if size == 1 else {"class": j, "size": size}), {}


def _check_conjugacy(theory):
    conj = np.asarray(theory.conjugacy())
    ec = theory.element_class
    n = int(conj.max()) + 1
    first = np.full(n, -1, dtype=np.int64)
    first[conj[::-1]] = ec[::-1]
    bad = np.nonzero(first[conj] != ec)[0]
    if len(bad):
        x = int(bad[0])
        return False, {"element": x, "conjugacy_class": int(conj[x])}, {}
    return True, None, {"conjugacy_classes": n}


def _check_constancy(theory):
    ec = theory.element_class
    for i, ch in enumerate(theory.characters):
        num, den = theory.element_values(i)
        if den != ch.den:
            return False, {"character": i, "reason": "denominator mismatch"}, {}
        bad = np.nonzero((np.asarray(num) != ch.num[ec]).any(axis=1))[0]
        if len(bad):
            return False, {"character": i, "element": int(bad[0])}, {}
    return True, None, {}


def _gram_matrix(theory):
    F = cyclotomic_field(theory.N)
    A = np.array([ch.num for ch in theory.characters])
    return _gram(A, A, theory.class_sizes, F)


def _check_disjoint(theory):
    G = _gram_matrix(theory)
    k = len(theory.characters)
    norms = []
    for i in range(k):
        for j in range(k):
            if i != j and any(int(x) for x in G[i, j]):
                return False, {"pair": [i, j]}, {}
        d = G[i, i]
        if any(int(x) for x in d[1:]) or int(d[0]) <= 0:
            return False, {"character": i, "reason": "norm is not a positive rational"}, {}
        dens = theory.characters[i].den
        norms.append(str(Fraction(int(d[0]), theory.order * dens * dens)))
    return True, None, {"norms": norms}


def _check_counts(theory):
    a, b = len(theory.characters), len(theory.classes)
    return a == b, (None if a == b else {"characters": a, "classes": b}), {"count": b}


def _modular_rank(mat, N, P):
    F = cyclotomic_field(N)
    z = F.root_mod(P)
    powers = np.array([pow(z, i, P) for i in range(F.degree)], dtype=object)
    M = (np.asarray(mat, dtype=object) % P).dot(powers) % P
    return rank(np.asarray(M, dtype=np.int64), P)


def _certificate_primes(N, count=3, start=10**4):
    out, P = [], start - start % N + 1
    while len(out) < count:
        if sympy.isprime(P):
            out.append(P)
        P += N
    return out


def _check_invertible(theory):
    """Value matrix invertible: its image under a ring map Z[zeta_N] -> F_P has full rank,
    so its determinant is nonzero. Exact elimination is the fallback."""
    k = len(theory.characters)
    if k != len(theory.classes):
        return False, {"reason": "matrix is not square"}, {}
    mat = np.array([ch.num for ch in theory.characters], dtype=object)
    for P in _certificate_primes(theory.N):
        if _modular_rank(mat, theory.N, P) == k:
            return True, None, {"method": "modular", "prime": P, "size": k}
    r = _exact_rank(theory)
    return r == k, (None if r == k else {"rank": r}), {"method": "exact", "size": k}


def _exact_rank(theory) -> int:
    rows = [[ch.value(j) for j in range(len(theory.classes))] for ch in theory.characters]
    n, m = len(rows), len(rows[0])
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        for i in range(n):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def check_axioms(theory, title: str | None = None, workers: int = 1) -> VerificationReport:
    """Checks (1)-(7) in order; with workers > 1 they run concurrently."""
    rep = VerificationReport(title or f"axioms {theory.group} {describe(theory.ctx)}")
    fns = [_check_partition, _check_identity, _check_conjugacy, _check_constancy,
           _check_disjoint, _check_counts, _check_invertible]
    if workers <= 1:
        for name, fn in zip(AXIOMS, fns):
            rep.add(name, lambda fn=fn: fn(theory))
        return rep
    theory.conjugacy()  # shared cache, built once before fanning out
    parts = [VerificationReport(name) for name in AXIOMS]
    with ThreadPoolExecutor(workers) as pool:
        list(pool.map(lambda a: a[0].add(a[1], lambda: a[2](theory)), zip(parts, AXIOMS, fns)))
    for part in parts:
        rep.checks.extend(part.checks)
    return rep


# ---------------------------------------------------------------------------
# structural claims


def _signature_key(sig) -> str:
    return repr(sorted(sig.as_dict().items(), key=repr))


def check_signature_criterion(ctx: ContractionContext):
    """Equal rank signatures <=> same orbit, over every labelled element."""
    lab = primal_labels(ctx)
    part = ctx.partition
    if ctx.series == "A":
        items = [(D, ctx.X_of(D.roots), rank_signature(D, part)) for D in enumerate_rook_placements(ctx.roots, "A")]
    else:
        items = [(P, ctx.X_of(P.D.roots, P.phi_map()), rank_signature(P, part, p=ctx.p))
                 for P in enumerate_basic_pairs(ctx.spec, part, ctx.p)]
    by_sig, by_orbit = {}, {}
    for obj, x, sig in items:
        o = int(lab[int(codes_of(x, ctx.p))])
        s = _signature_key(sig)
        if by_sig.setdefault(s, o) != o:
            return False, {"same_signature_different_orbits": str(obj)}, {}
        if by_orbit.setdefault(o, s) != s:
            return False, {"same_orbit_different_signatures": str(obj)}, {}
    covered = len(by_orbit) == int(lab.max()) + 1
    return covered, (None if covered else {"orbits_without_label": int(lab.max()) + 1 - len(by_orbit)}), {
        "labelled_elements": len(items), "signatures": len(by_sig)}


def check_uniform(ctx: ContractionContext, trials: int = 500, seed: int = 0):
    """(g X1, X2) = (X1, X2 g) for random g in G^a and X1, X2 in u^a."""
    rng = np.random.default_rng(seed)
    p = ctx.p
    for t in range(trials):
        g = random_group_element(ctx, rng)
        x1 = ctx.from_coords(rng.integers(0, p, ctx.dim))
        x2 = ctx.from_coords(rng.integers(0, p, ctx.dim))
        a = int(ctx.bilinear_form(ctx.mul(g, x1), x2))
        b = int(ctx.bilinear_form(x1, ctx.mul(x2, g)))
        if a != b:
            return False, {"trial": t, "lhs": a, "rhs": b}, {}
    return True, None, {"trials": trials}


def random_group_element(ctx: ContractionContext, rng):
    h = ctx.levi_elements[rng.integers(ctx.levi_order)]
    u = ctx.ua_elements[rng.integers(ctx.ua_order)]
    return ctx.mul(h, u)


def check_stabilizers(ctx: ContractionContext):
    from .superchar import right_stabilizer_bruteforce, uaD_basis_A
    from .orbits import subspace_codes

    for K in superclasses_Ua(ctx):
        D = K.label
        a = subspace_codes(uaD_basis_A(ctx, D), ctx.p)
        b = right_stabilizer_bruteforce(ctx, ctx.X_of(D.roots))
        if not np.array_equal(np.sort(a), np.sort(b)):
            return False, {"D": str(D), "S_gamma": len(a), "bruteforce": len(b)}, {}
    return True, None, {}


def check_hddd(ctx: ContractionContext):
    from .superchar import hd_preserves_uaD

    for K in superclasses_Ua(ctx):
        r = hd_preserves_uaD(ctx, K.label)
        if not r["ok"]:
            return False, {"pair": str(K.label), "h": r["violations"][:3]}, {}
    return True, None, {}


def check_hd_stabilizes(ctx: ContractionContext):
    from .superchar import hd_stabilizes_orbit

    equal = 0
    for K in superclasses_Ua(ctx):
        r = hd_stabilizes_orbit(ctx, K.label)
        if not r["contained"]:
            return False, {"label": str(K.label)}, {}
        equal += r["equal"]
    return True, None, {"labels_with_equality": equal}


def check_xi_genuine(ctx: ContractionContext):
    from .superchar import xi_D_genuineness

    for K in superclasses_Ua(ctx):
        r = xi_D_genuineness(ctx, K.label)
        if not r["genuine"]:
            return False, {"D": str(K.label), "multiplicities": r.get("multiplicities")}, {}
    return True, None, {}


def check_structural_claims(ctx: ContractionContext, theory=None) -> VerificationReport:
    rep = VerificationReport(f"claims {describe(ctx)}")
    rep.add("label_completeness", lambda: (len(superclasses_Ua(ctx)) == int(primal_labels(ctx).max()) + 1, None, {}))
    rep.add("signature_criterion", lambda: check_signature_criterion(ctx))
    rep.add("hd_stabilizes_orbit", lambda: check_hd_stabilizes(ctx))
    if ctx.series == "A":
        rep.add("uniform_identity", lambda: check_uniform(ctx))
        rep.add("stabilizer", lambda: check_stabilizers(ctx))
        rep.add("xi_genuine", lambda: check_xi_genuine(ctx))
    else:
        rep.add("hd_preserves_uaD", lambda: check_hddd(ctx))
        rep.add("cayley_antisymmetry", lambda: check_cayley(ctx))
    if theory is not None and "proportional" in theory.meta:
        bad = [k for k, v in theory.meta["proportional"].items() if not v]
        rep.add("induced_proportionality", lambda: (not bad, bad[:3] or None, {}))
    return rep


def check_cayley(ctx: ContractionContext):
    """f is a bijection U^a -> u^a and every f(u) is dagger-antisymmetric."""
    U = ctx.ua_elements
    X = ctx.cayley(U)
    p = ctx.p
    if not np.array_equal(ctx.dag(X), (-X) % p):
        return False, {"reason": "f(u) not antisymmetric"}, {}
    codes = codes_of(ctx.coords(X), p)
    if not np.array_equal(codes, np.arange(ctx.ua_order)):
        return False, {"reason": "not a bijection"}, {}
    if not all(ctx.is_unitary(u) for u in U[:: max(1, len(U) // 512)]):
        return False, {"reason": "element outside G"}, {}
    return True, None, {"elements": len(U)}
