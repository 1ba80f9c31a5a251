import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from parasuper.matfq import FormKind, dagger, inverse, nullspace, rank, reduce_mod_span, rref, solve_left


def span_size(A, p):
    """Brute-force oracle: number of distinct F_p-combinations of the rows."""
    A = np.asarray(A) % p
    return len({tuple((np.array(c) @ A) % p) for c in itertools.product(range(p), repeat=len(A))})


small = arrays(np.int64, st.tuples(st.integers(1, 3), st.integers(1, 4)), elements=st.integers(0, 2))


@settings(max_examples=80)
@given(small)
def test_rank_matches_span_count(A):
    assert 3 ** rank(A, 3) == span_size(A, 3)


@settings(max_examples=60)
@given(small)
def test_nullspace_annihilates(A):
    N = nullspace(A, 3)
    assert len(N) == A.shape[1] - rank(A, 3)
    if len(N):
        assert not ((A @ N.T) % 3).any()


@settings(max_examples=60)
@given(arrays(np.int64, (3, 3), elements=st.integers(0, 4)))
def test_inverse_or_singular(A):
    if rank(A, 5) == 3:
        assert np.array_equal(A @ inverse(A, 5) % 5, np.eye(3, dtype=np.int64))
    else:
        with pytest.raises(ZeroDivisionError):
            inverse(A, 5)


def test_rref_is_reduced():
    A = np.array([[1, 2, 0, 1], [2, 1, 1, 0], [0, 0, 1, 1]])
    R, piv = rref(A, 3)
    for i, c in enumerate(piv):
        col = R[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1


def test_reduce_mod_span_kills_span():
    B = np.array([[1, 0, 2], [0, 1, 1]])
    R, piv = rref(B, 3)
    v = (2 * B[0] + B[1]) % 3
    assert not reduce_mod_span(v, R[: len(piv)], piv, 3).any()


def test_solve_left():
    B = np.array([[1, 1, 0], [0, 1, 2]])
    X = np.array([[2, 1], [1, 1], [0, 2]])
    A = X @ B % 3
    assert np.array_equal(solve_left(B, A, 3) @ B % 3, A)
    with pytest.raises(ValueError):
        solve_left(B, np.array([[0, 0, 1]]), 3)


@pytest.mark.parametrize("kind,M", [("symplectic", 4), ("orthogonal", 5), ("orthogonal", 4)])
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_dagger_is_antiautomorphism(kind, M, data):
    form = FormKind(kind, M)
    X = data.draw(arrays(np.int64, (M, M), elements=st.integers(0, 2)))
    Y = data.draw(arrays(np.int64, (M, M), elements=st.integers(0, 2)))
    assert np.array_equal(dagger(dagger(X, form, 3), form, 3), X % 3)
    assert np.array_equal(dagger(X @ Y, form, 3), dagger(Y, form, 3) @ dagger(X, form, 3) % 3)


def test_gram_symmetry():
    assert np.array_equal(FormKind("orthogonal", 5).gram(3), FormKind("orthogonal", 5).gram(3).T)
    J = FormKind("symplectic", 4).gram(3)
    assert np.array_equal((J + J.T) % 3, np.zeros((4, 4), dtype=np.int64))
    with pytest.raises(ValueError):
        FormKind("symplectic", 5)
