"""Acceptance criteria 1-7. Each test prints one PASS/FAIL line with its runtime and limit."""
import time

import numpy as np
import pytest

from parasuper.contraction import build_context
from parasuper.orbits import ideal_uaD_BCD, invariant_closure, primal_labels, smallest_invariant_ideal, superclasses_Ua
from parasuper.rook import (
    BasicPair,
    RookPlacement,
    canonical_basic_pairs,
    canonical_form_A,
    canonical_form_BCD,
    canonical_form_bruteforce_A,
    canonical_placements_A,
    enumerate_basic_pairs,
    enumerate_rook_placements,
    random_weyl,
    weyl_act_A,
    weyl_act_BCD,
)
from parasuper.superchar import H_D, H_gamma, assemble_theory
from parasuper.verify import (
    check_axioms,
    check_cayley,
    check_hddd,
    check_signature_criterion,
    check_stabilizers,
    check_uniform,
    check_xi_genuine,
)


@pytest.fixture
def announce(capsys):
    def emit(k, ok, seconds, limit, note=""):
        status = "PASS" if ok else "FAIL"
        lim = f"< {limit:g} s" if limit else "no limit"
        with capsys.disabled():
            print(f"\n[criterion {k}] {status}  {seconds:.2f} s ({lim})  {note}")
        return ok and (not limit or seconds < limit)

    return emit


def axioms_ok(ctx, target):
    rep = check_axioms(assemble_theory(ctx, target))
    return rep.ok, rep.failures()


def test_criterion_1(announce):
    t = time.perf_counter()
    ctx = build_context(("A", 2), None, 3)
    sizes = sorted(K.size for K in superclasses_Ua(ctx))
    # oracle: exhaustive two-sided orbit enumeration over all 9 elements
    oracle = sorted(np.bincount(primal_labels(ctx)).tolist())
    ok_ax, fails = axioms_ok(ctx, "Ua")
    ok = sizes == [1, 2, 2, 4] == oracle and sum(sizes) == 9 and ok_ax
    dt = time.perf_counter() - t
    assert announce(1, ok, dt, 1, f"sizes={sizes} axiom failures={fails}")


def test_criterion_2(announce):
    t = time.perf_counter()
    ctx = build_context(("A", 2), None, 3)
    G = assemble_theory(ctx, "Ga")
    rep = check_axioms(G)
    ok = G.order == 36 and len(G.classes) == len(G.characters) == 10 and rep.ok
    dt = time.perf_counter() - t
    assert announce(2, ok, dt, 5, f"|G^a|={G.order} classes={len(G.classes)} characters={len(G.characters)}")


def test_criterion_3(announce):
    t = time.perf_counter()
    notes, ok = [], True
    for sizes in (None, (2, 1)):
        ctx = build_context(("A", 3), sizes, 3)
        part = ctx.partition
        n_orbits = int(primal_labels(ctx).max()) + 1
        n_canon = len(canonical_placements_A(part))
        n_brute = len({canonical_form_bruteforce_A(D, part) for D in enumerate_rook_placements(ctx.roots, "A")})
        n_classes = len(superclasses_Ua(ctx))
        ax_u, _ = axioms_ok(ctx, "Ua")
        ax_g, _ = axioms_ok(ctx, "Ga")
        ok &= n_orbits == n_canon == n_brute == n_classes and ax_u and ax_g
        notes.append(f"{sizes or 'Borel'}: orbits={n_orbits} canonical={n_canon} bruteforce={n_brute}")
    dt = time.perf_counter() - t
    assert announce(3, ok, dt, 120, "; ".join(notes))


def test_criterion_4(announce):
    t = time.perf_counter()
    ctx = build_context(("C", 2), None, 3)
    lab = primal_labels(ctx)  # all 6561 elements of u^a
    canon = canonical_basic_pairs(ctx.partition, 3)
    classes = superclasses_Ua(ctx)  # raises unless labels meet every orbit exactly once
    sig_ok, _, sig = check_signature_criterion(ctx)
    ax_u, f_u = axioms_ok(ctx, "Ua")
    ax_g, f_g = axioms_ok(ctx, "Ga")
    ok = len(lab) == 6561 and int(lab.max()) + 1 == len(canon) == len(classes) and sig_ok and ax_u and ax_g
    dt = time.perf_counter() - t
    assert announce(4, ok, dt, 900, f"orbits={int(lab.max()) + 1} canonical pairs={len(canon)} "
                                    f"signatures={sig.get('signatures')} failures={f_u + f_g}")


def test_criterion_5(announce):
    t = time.perf_counter()
    ctx = build_context(("B", 2), None, 3)
    pairs = enumerate_basic_pairs(ctx.spec, ctx.partition, 3)
    phi_ok = all(set(P.phi) <= {1} for P in pairs)
    phi_ok &= all(set(K.label.phi) <= {1} for K in superclasses_Ua(ctx))
    ax_u, fails = axioms_ok(ctx, "Ua")
    dt = time.perf_counter() - t
    assert announce(5, phi_ok and ax_u, dt, 900, f"basic pairs={len(pairs)} phi==1: {phi_ok} failures={fails}")


def test_criterion_6(announce):
    t = time.perf_counter()
    results = {}
    # doubled realization for n = 2
    a2 = build_context(("A", 2), None, 3)
    Y = a2.realize_doubled_A(a2.from_coords(np.ones(a2.dim, dtype=np.int64)))
    results["doubled"] = {(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(Y))} == {(1, 2), (3, 4), (2, 3)}
    # H_(1,3), H_(3,1) for n = 4
    a4 = build_context(("A", 4), None, 3)
    diag = lambda idx: {tuple(int(x) for x in np.diag(a4.levi_elements[i][0])) for i in idx}
    F = (1, 2)
    results["H13"] = diag(H_gamma(a4, (1, 3))) == {(a, a, a, b) for a in F for b in F}
    results["H31"] = diag(H_gamma(a4, (3, 1))) == {(a, b, a, a) for a in F for b in F}
    # u^a_h for h = diag(a, a, b, a)
    h = a4.identity()
    h[0] = np.diag([1, 1, 2, 1])
    B = smallest_invariant_ideal(a4, h)
    stars = {a4.roots[i].pair for row in B for i in np.nonzero(row)[0]}
    results["star"] = len(B) == 9 and stars == {(1, 3), (1, 4), (2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4), (4, 3)}
    # C_2: D = {a1 + a2, -a2}
    c2 = build_context(("C", 2), None, 3)
    D = RookPlacement.of([r for r in c2.roots if r.pair in [(2, -1), (-1, 1)]])
    pair = BasicPair.trivial(D)
    U = ideal_uaD_BCD(c2, pair)
    spanned = {c2.roots[i].pair for row in U for i in np.nonzero(row)[0]}
    # F_{-a1} sits at (1, 2), E_{2a1+a2} at (2, -2)
    results["uaD"] = len(U) == 2 and spanned == {(1, 2), (2, -2)}
    results["HD"] = {tuple(int(x) for x in np.diag(c2.levi_elements[i][0])) for i in H_D(c2, pair)} == {(1, 1, 1, 1), (2, 2, 2, 2)}
    results["W*D"] = len(invariant_closure(c2.X_of(D.roots)[None], c2.dual_maps, 3)) == 6
    dt = time.perf_counter() - t
    assert announce(6, all(results.values()), dt, None, " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in results.items()))


def _canonical_uniqueness(series, n, sizes, trials=200, seed=0):
    ctx = build_context((series, n), sizes, 3)
    P = ctx.partition
    rng = np.random.default_rng(seed)
    if series == "A":
        items = enumerate_rook_placements(ctx.roots, "A")
        for _ in range(trials):
            D = items[rng.integers(len(items))]
            E = weyl_act_A(random_weyl(P, rng), D, random_weyl(P, rng), P.spec)
            c, w1, w2 = canonical_form_A(E, P)
            if c != canonical_form_A(D, P)[0] or weyl_act_A(w1, E, w2, P.spec) != c:
                return False
        return True
    items = enumerate_basic_pairs(P.spec, P, 3)
    for _ in range(trials):
        pair = items[rng.integers(len(items))]
        E = weyl_act_BCD(random_weyl(P, rng), pair, P, 3)
        c, w = canonical_form_BCD(E, P, 3)
        if c != canonical_form_BCD(pair, P, 3)[0] or weyl_act_BCD(w, E, P, 3) != c:
            return False
    return True


def test_criterion_7(announce):
    t = time.perf_counter()
    res = {}
    res["uniform"] = check_uniform(build_context(("A", 3), (2, 1), 3), trials=500)[0]
    for key in [("A", 4, (2, 2)), ("B", 2, (2, 1, 2)), ("C", 2, (2, 2)), ("D", 2, (2, 2))]:
        res[f"canonical_{key[0]}"] = _canonical_uniqueness(*key)
    for s in ("C", "B"):
        res[f"cayley_{s}2"] = check_cayley(build_context((s, 2), None, 3))[0]
    inst = [("A", 2, None), ("A", 3, None), ("A", 3, (2, 1)), ("A", 3, (1, 2)), ("A", 3, (3,))]
    res["stabilizer"] = all(check_stabilizers(build_context(k[:2], k[2], 3))[0] for k in inst)
    res["xi_genuine"] = all(check_xi_genuine(build_context(k[:2], k[2], 3))[0] for k in inst[:3])
    res["hddd"] = all(check_hddd(build_context((s, 2), None, 3))[0] for s in ("C", "B"))
    dt = time.perf_counter() - t
    assert announce(7, all(res.values()), dt, None, " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in res.items()))
