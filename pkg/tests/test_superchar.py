from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parasuper.contraction import all_vectors
from parasuper.orbits import subspace_codes, superclasses_Ua
from parasuper.rook import BasicPair, RookPlacement, placement_from_pairs
from parasuper.scalars import CycloNumber, additive_character
from parasuper.superchar import (
    H_D,
    H_gamma,
    S_of_root,
    assemble_theory,
    counts_to_field,
    dual_orbit_codes,
    exponential_sums,
    hd_stabilizes_orbit,
    hd_preserves_uaD,
    right_stabilizer_bruteforce,
    right_ua_orbit_size,
    sigma_Dphi,
    uaD_basis_A,
    xi_D_genuineness,
    xi_D_values,
    zeta_D,
    zeta_vs_induction,
)


@settings(max_examples=40, deadline=None)
@given(p=st.sampled_from([3, 5]), d=st.integers(1, 3), data=st.data())
def test_exponential_sums_match_direct(p, d, data):
    codes = data.draw(st.lists(st.integers(0, p**d - 1), min_size=1, max_size=6, unique=True))
    V = all_vectors(d, p)
    got = exponential_sums(codes, d, p)
    for x in range(p**d):
        t = (V[codes] @ V[x]) % p
        assert got[x].tolist() == np.bincount(t, minlength=p).tolist()


def naive_zeta(ctx, D, x):
    """Direct evaluation of the closed formula at one coordinate vector."""
    lam = ctx.X_of(D.roots)
    omega = all_vectors(ctx.dim, ctx.p)[dual_orbit_codes(ctx, lam)]
    total = CycloNumber.rational(0, ctx.p)
    for mu in omega:
        total = total + additive_character(int(mu @ x), ctx.p)
    return total * CycloNumber.rational(Fraction(right_ua_orbit_size(ctx, lam), len(omega)), ctx.p)


def test_zeta_table_n2(a2):
    V = all_vectors(a2.dim, 3)
    table = []
    for K in superclasses_Ua(a2):
        vals, den, _ = zeta_D(a2, K.label)
        row = []
        for L in superclasses_Ua(a2):
            x = L.representative
            got = CycloNumber(3, [Fraction(int(c), den) for c in vals[x]])
            assert got == naive_zeta(a2, K.label, V[x])
            row.append(got.rational_value())
        table.append(row)
    h = Fraction(-1, 2)
    assert table == [[1, 1, 1, 1], [1, h, 1, h], [1, 1, h, h], [1, h, h, Fraction(1, 4)]]


def test_zeta_degree_is_right_orbit(ctx_of):
    ctx = ctx_of("A", 3)
    for K in superclasses_Ua(ctx):
        vals, den, _ = zeta_D(ctx, K.label)
        assert Fraction(int(vals[0][0]), den) == right_ua_orbit_size(ctx, ctx.X_of(K.label.roots))


def test_S_examples(ctx_of):
    a2, a3 = ctx_of("A", 2), ctx_of("A", 3)
    assert S_of_root(a2, (1, 2)) == (set(), set())
    assert S_of_root(a3, (1, 3)) == ({(1, 2)}, set())
    assert S_of_root(a3, (3, 1)) == (set(), set())
    assert S_of_root(a3, (2, 1)) == ({(2, 3)}, set())


@pytest.mark.parametrize("key", [("A", 2), ("A", 3), ("A", 3, (2, 1))])
def test_stabilizer_matches_bruteforce(ctx_of, key):
    ctx = ctx_of(*key)
    for K in superclasses_Ua(ctx):
        a = subspace_codes(uaD_basis_A(ctx, K.label), 3)
        b = right_stabilizer_bruteforce(ctx, ctx.X_of(K.label.roots))
        assert np.array_equal(np.sort(a), b)


def test_xi_degree_and_genuine(a2):
    for K in superclasses_Ua(a2):
        codes = subspace_codes(uaD_basis_A(a2, K.label), 3)
        counts = xi_D_values(a2, K.label, codes)
        assert counts[0].tolist() == [a2.levi_order, 0, 0]
        r = xi_D_genuineness(a2, K.label)
        assert r["genuine"] and r["degree"] == a2.levi_order


def test_xi_explicit_n2(a2):
    # xi_D(1 + tE) = sum over the torus of eps^{a b^{-1} t}; two values of a/b per ratio class
    D = placement_from_pairs([(1, 2)], a2.spec)
    codes = subspace_codes(uaD_basis_A(a2, D), 3)
    counts = xi_D_values(a2, D, codes)
    e = a2.root_index[(1, 2)]
    for row, code in zip(counts, codes):
        t = all_vectors(a2.dim, 3)[code][e]
        assert row.tolist() == ([4, 0, 0] if t == 0 else [0, 2, 2])


def test_h_gamma_examples(ctx_of):
    ctx = ctx_of("A", 4)
    diag = lambda idx: {tuple(np.diag(ctx.levi_elements[i][0])) for i in idx}
    a_a_a_b = {(a, a, a, b) for a in (1, 2) for b in (1, 2)}
    a_b_a_a = {(a, b, a, a) for a in (1, 2) for b in (1, 2)}
    assert diag(H_gamma(ctx, (1, 3))) == a_a_a_b
    assert diag(H_gamma(ctx, (3, 1))) == a_b_a_a


def test_c2_example(c2):
    D = RookPlacement.of([r for r in c2.roots if r.pair in [(2, -1), (-1, 1)]])
    pair = BasicPair.trivial(D)
    H = H_D(c2, pair)
    assert {tuple(np.diag(c2.levi_elements[i][0])) for i in H} == {(1, 1, 1, 1), (2, 2, 2, 2)}
    r = hd_preserves_uaD(c2, pair)
    assert r["ok"] and r["dim_uaD"] == 2


def test_hd_stabilizes(ctx_of):
    for key in [("A", 3), ("C", 2), ("B", 2)]:
        ctx = ctx_of(*key)
        for K in superclasses_Ua(ctx):
            assert hd_stabilizes_orbit(ctx, K.label)["contained"]


def test_sigma_degree_is_orbit(c2):
    for K in superclasses_Ua(c2)[:20]:
        vals, den, info = sigma_Dphi(c2, K.label)
        assert int(vals[0][0]) == info["orbit"]


def test_chi_alpha_vanishes_off_hd(a2):
    G = assemble_theory(a2, "Ga")
    for i, ch in enumerate(G.characters):
        num, den = G.element_values(i)
        H = set(H_D(a2, ch.label[0]))
        h_of = np.arange(G.order) // a2.ua_order
        off = ~np.isin(h_of, sorted(H))
        assert not num[off].any()


def test_chi_alpha_degree(a2):
    G = assemble_theory(a2, "Ga")
    triv = [ch for ch in G.characters if not ch.label[0].roots and ch.label[1] == 0][0]
    assert triv.degree == Fraction(a2.levi_order**2, len(H_D(a2, triv.label[0])))


def test_sigma_a_proportional(c2, b2):
    for ctx in (c2, b2):
        G = assemble_theory(ctx, "Ga")
        assert all(G.meta["proportional"].values())


def test_zeta_vs_literal_induction(a2):
    res = {repr(K.label): zeta_vs_induction(a2, K.label) for K in superclasses_Ua(a2)}
    assert res["{}"]["proportional"] and res["{}"]["ratio"] == "16"
    assert res["{(1,2)}"]["proportional"] and res["{(2,1)}"]["proportional"]
    # the doubled placement: the induced function only sees the L-orbit of Lambda_D
    assert not res["{(1,2), (2,1)}"]["proportional"]


def test_counts_to_field_reduces():
    assert counts_to_field(np.array([[1, 1, 1]]), 3).tolist() == [[0, 0]]
