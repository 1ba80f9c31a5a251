import cmath
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from parasuper.scalars import (
    CycloNumber,
    FieldElement,
    PrimeModulus,
    additive_character,
    cyclotomic_field,
    find_nonsquare,
    is_prime,
    is_square,
    primitive_root,
)

PRIMES = [3, 5, 7, 11, 13]


def test_is_prime_matches_sympy():
    assert [n for n in range(200) if is_prime(n)] == list(sympy.primerange(0, 200))


@pytest.mark.parametrize("bad", [1, 2, 4, 9, 15])
def test_prime_modulus_rejects(bad):
    with pytest.raises(ValueError):
        PrimeModulus(bad)


@given(st.sampled_from(PRIMES), st.integers(-50, 50), st.integers(-50, 50))
def test_field_ops_agree_with_integers(p, a, b):
    x, y = FieldElement(a, p), FieldElement(b, p)
    assert (x + y).value == (a + b) % p
    assert (x * y).value == (a * b) % p
    assert (x - y).value == (a - b) % p
    if b % p:
        assert ((x / y) * y).value == a % p


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        FieldElement(3, 5) / FieldElement(0, 5)


@pytest.mark.parametrize("p", PRIMES)
def test_squares_and_roots(p):
    squares = {x * x % p for x in range(1, p)}
    assert all(is_square(t, p) == (t in squares) for t in range(1, p))
    assert find_nonsquare(p) not in squares
    g = primitive_root(p)
    assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


@pytest.mark.parametrize("N", [1, 2, 3, 4, 6, 9, 12])
def test_cyclotomic_degree(N):
    assert cyclotomic_field(N).degree == sympy.totient(N)


@pytest.mark.parametrize("N", [3, 4, 5, 8, 12])
def test_roots_of_unity(N):
    z = CycloNumber.zeta_power(1, N)
    one = CycloNumber.rational(1, N)
    acc = one
    for _ in range(N):
        acc = acc * z
    assert acc == one
    total = sum((CycloNumber.zeta_power(k, N) for k in range(N)), CycloNumber.rational(0, N))
    assert total.is_zero()
    assert (z * z.conj()) == one


@pytest.mark.parametrize("p", [3, 5, 7])
def test_norm_of_one_minus_zeta(p):
    # N(1 - zeta_p) = Phi_p(1) = p
    x = CycloNumber.rational(1, p) - CycloNumber.zeta_power(1, p)
    assert x.norm() == p


coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=2, max_size=2)


@settings(max_examples=60)
@given(coeffs, coeffs, coeffs)
def test_ring_axioms_q_zeta3(a, b, c):
    x, y, z = (CycloNumber(3, v) for v in (a, b, c))
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    if not x.is_zero():
        assert (x * x.inverse()) == CycloNumber.rational(1, 3)


@settings(max_examples=40)
@given(st.lists(st.integers(0, 4), min_size=5, max_size=5))
def test_from_counts_matches_complex(counts):
    x = CycloNumber.from_counts(counts, 5, Fraction(1, 3))
    expect = sum(c * cmath.exp(2j * cmath.pi * k / 5) for k, c in enumerate(counts)) / 3
    assert abs(complex(x) - expect) < 1e-9


def test_embedding_between_fields():
    z3 = CycloNumber.zeta_power(1, 3)
    assert z3.to_order(6) == CycloNumber.zeta_power(2, 6)
    F = cyclotomic_field(6)
    assert np.array_equal(F.embed_from(np.array(z3.coeffs, dtype=object), 3), np.array(CycloNumber.zeta_power(2, 6).coeffs))


@pytest.mark.parametrize("p", [3, 5])
def test_additive_character_sums_to_zero(p):
    total = sum((additive_character(t, p) for t in range(p)), CycloNumber.rational(0, p))
    assert total.is_zero()
