import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parasuper.contraction import all_vectors, build_context, codes_of
from parasuper.matfq import block_rank


def rand_coords(ctx, rng):
    return rng.integers(0, ctx.p, ctx.dim)


@pytest.mark.parametrize("key", [("A", 2, None), ("A", 3, (2, 1)), ("C", 2, None), ("B", 2, None), ("D", 2, None)])
def test_orders(ctx_of, key):
    ctx = ctx_of(*key)
    assert ctx.group_order == ctx.levi_order * ctx.p ** ctx.dim
    assert np.array_equal(ctx.levi_elements[0], ctx.identity())
    assert len({h.tobytes() for h in ctx.levi_elements}) == ctx.levi_order


def test_levi_orders(ctx_of):
    # torus of GL(2), GL(2) x GL(1), torus of Sp(4), of SO(5) x {+-1}, GL(2) inside Sp(4)
    assert ctx_of("A", 2).levi_order == 4
    assert ctx_of("A", 3, (2, 1)).levi_order == 48 * 2
    assert ctx_of("C", 2).levi_order == 4
    assert ctx_of("B", 2).levi_order == 8
    assert ctx_of("C", 2, (2, 2)).levi_order == 48


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), key=st.sampled_from([("A", 3, None), ("C", 2, None), ("B", 2, None)]))
def test_group_law(ctx_of, seed, key):
    ctx = ctx_of(*key)
    rng = np.random.default_rng(seed)
    g = [ctx.element(rng.integers(ctx.levi_order), rng.integers(ctx.ua_order)) for _ in range(3)]
    a = ctx.mul(ctx.mul(g[0], g[1]), g[2])
    b = ctx.mul(g[0], ctx.mul(g[1], g[2]))
    assert np.array_equal(a, b)
    assert np.array_equal(ctx.mul(g[0], ctx.group_inv(g[0])), ctx.identity())
    h, u = ctx.split(g[1])
    assert np.array_equal(ctx.element(h, u), g[1])


@pytest.mark.parametrize("key", [("C", 2, None), ("B", 2, None)])
def test_cayley_bijection(ctx_of, key):
    ctx = ctx_of(*key)
    V = all_vectors(ctx.dim, ctx.p)
    U = ctx.cayley_inv(ctx.from_coords(V))
    X = ctx.cayley(U)
    assert np.array_equal(codes_of(ctx.coords(X), ctx.p), np.arange(ctx.ua_order))
    assert np.array_equal(ctx.dag(X), (-X) % ctx.p)


def test_cayley_rejects_non_unipotent(c2):
    with pytest.raises(ValueError):
        c2.cayley(c2.levi_elements[1])


def test_basis_antisymmetric(c2, b2):
    for ctx in (c2, b2):
        assert np.array_equal(ctx.dag(ctx.basis), (-ctx.basis) % ctx.p)
        assert all(ctx.is_unitary(h) for h in ctx.levi_elements)


def test_uniform_identity_generators(ctx_of):
    ctx = ctx_of("A", 3)
    rng = np.random.default_rng(7)
    for g in ctx.gl_generators:
        x1 = ctx.from_coords(rand_coords(ctx, rng))
        x2 = ctx.from_coords(rand_coords(ctx, rng))
        assert ctx.bilinear_form(ctx.mul(g, x1), x2) == ctx.bilinear_form(x1, ctx.mul(x2, g))


def test_form_is_nondegenerate(ctx_of):
    from parasuper.matfq import rank

    for key in [("A", 2), ("A", 3), ("A", 4, (2, 2))]:
        ctx = ctx_of(*key)
        assert rank(ctx.form_gram(), ctx.p) == ctx.dim


def test_lambda_pairs_with_opposite_placement(ctx_of):
    # Lambda_D(Y) = (X_{D^t}, Y) with D^t the opposite roots
    ctx = ctx_of("A", 3)
    G = ctx.form_gram()
    for r in ctx.roots:
        t = ctx.root_index[(r.col, r.row)]
        assert np.array_equal(G[t], ctx.X_of([r]))


def test_doubled_pattern_n2(a2):
    X = a2.from_coords(np.ones(a2.dim, dtype=np.int64))
    Y = a2.realize_doubled_A(X)
    assert {(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(Y))} == {(1, 2), (3, 4), (2, 3)}


def test_doubled_ranks_invariant(ctx_of):
    ctx = ctx_of("A", 3, (2, 1))
    rng = np.random.default_rng(3)
    for _ in range(100):
        X = ctx.from_coords(rand_coords(ctx, rng))
        A = ctx.element(rng.integers(ctx.levi_order), rng.integers(ctx.ua_order))
        B = ctx.element(rng.integers(ctx.levi_order), rng.integers(ctx.ua_order))
        assert ctx.doubled_ranks(X) == ctx.doubled_ranks(ctx.mul(ctx.mul(A, X), B))


def test_zero_ranks(a2):
    R, Rt = a2.doubled_ranks(a2.zero())
    assert not any(R.values()) and not any(Rt.values())


def test_x_of_rejects_foreign_root(ctx_of):
    ctx = ctx_of("A", 3, (2, 1))
    with pytest.raises(KeyError):
        ctx.X_of([(1, 2)])


def test_lower_part_is_two_sided_ideal(ctx_of):
    # products of two strictly lower elements vanish in the contraction
    ctx = ctx_of("A", 3)
    low = [b for b in ctx.basis if b[1].any()]
    for x in low:
        for y in low:
            assert not ctx.mul(x, y).any()


def test_conj_map_matches_multiplication(c2):
    rng = np.random.default_rng(1)
    for _ in range(20):
        g = c2.element(rng.integers(c2.levi_order), rng.integers(c2.ua_order))
        c = rand_coords(c2, rng)
        X = c2.from_coords(c)
        lhs = c2.coords(c2.mul(c2.mul(g, X), c2.group_inv(g)))
        assert np.array_equal(lhs, c2.conj_map(g) @ c % 3)


def test_bad_prime():
    with pytest.raises(ValueError):
        build_context(("A", 2), None, 9)


def test_large_central_block_raises_lazily():
    from parasuper.contraction import OrbitCapExceeded, build_context

    ctx = build_context(("C", 2), (4,), 3)
    assert ctx.dim == 0
    with pytest.raises(OrbitCapExceeded):
        ctx.levi_elements
