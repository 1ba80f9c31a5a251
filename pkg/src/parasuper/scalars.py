"""Exact scalars: the prime field F_p and cyclotomic fields Q(zeta_N).

Character values live in Q(zeta_N). For N = p prime the canonical basis is
zeta^0, ..., zeta^(p-2), i.e. every zeta^(p-1) is rewritten through
1 + zeta + ... + zeta^(p-1) = 0. For composite N (needed when Levi characters
with values in Q(zeta_{p-1}) are multiplied in) the canonical form is the
remainder modulo the N-th cyclotomic polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import numpy as np
import sympy


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, isqrt(n) + 1))


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not is_prime(int(self.p)):
            raise ValueError(f"{self.p} is not prime")
        if self.p == 2:
            raise ValueError("characteristic 2 is not supported")

    def __int__(self):
        return int(self.p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError("elements of different prime fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def inv(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElement(self._coerce(other), self.p).inv()

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch one of add, sub, mul, inv, neg."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inv()
    if op == "neg":
        return -a
    raise ValueError(f"unknown field operation {op!r}")


def find_nonsquare(p: int) -> int:
    """Smallest positive residue with no square root mod p."""
    PrimeModulus(p)
    squares = {(x * x) % p for x in range(p)}
    return next(t for t in range(1, p) if t not in squares)


def is_square(t: int, p: int) -> bool:
    t %= p
    return t == 0 or pow(t, (p - 1) // 2, p) == 1


def primitive_root(p: int) -> int:
    """Smallest generator of F_p^*."""
    order = p - 1
    factors = sympy.primefactors(order)
    for g in range(1, p):
        if all(pow(g, order // q, p) != 1 for q in factors):
            return g
    raise ValueError(p)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ----------------------------------------------------------------------------
# cyclotomic fields


class CyclotomicField:
    """Vectorized arithmetic in Q(zeta_N) on integer coefficient arrays.

    Elements are arrays whose last axis has length ``degree`` (canonical
    coefficients). ``reduce`` maps exponent-count arrays (last axis N, entry k
    is the multiplicity of zeta^k) to canonical coefficients.
    """

    def __init__(self, N: int):
        if N < 1:
            raise ValueError(N)
        self.N = N
        x = sympy.Symbol("x")
        poly = sympy.Poly(sympy.cyclotomic_poly(N, x), x)
        phi = [int(c) for c in reversed(poly.all_coeffs())]  # low -> high, monic
        self.degree = d = len(phi) - 1
        # reduction of zeta^k, k = 0..2N, to the canonical basis
        red = np.zeros((2 * N, d), dtype=np.int64)
        cur = [0] * d
        cur[0] = 1
        for k in range(2 * N):
            red[k] = cur
            # multiply cur by x modulo phi
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [c - top * phi[i] for i, c in enumerate(cur)]
        self.reduction = red[:N]
        # structure tensor: basis_i * basis_j = sum_k mult[i, j, k] basis_k
        self.mult = np.zeros((d, d, d), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                self.mult[i, j] = red[i + j]
        conj = np.zeros((d, d), dtype=np.int64)
        for i in range(d):
            conj[i] = self.reduction[(-i) % N]
        self.conj_matrix = conj

    def reduce(self, counts):
        counts = np.asarray(counts)
        if counts.dtype == object:
            return counts.dot(self.reduction.astype(object))
        return counts @ self.reduction

    def mul(self, a, b):
        return np.einsum("...i,...j,ijk->...k", a, b, self.mult)

    def conj(self, a):
        return np.asarray(a) @ self.conj_matrix

    def embed_from(self, coeffs, M: int):
        """Embed canonical coefficients of Q(zeta_M) into this field (M | N)."""
        if self.N % M:
            raise ValueError(f"Q(zeta_{M}) is not a subfield of Q(zeta_{self.N})")
        coeffs = np.asarray(coeffs)
        step = self.N // M
        idx = (np.arange(coeffs.shape[-1]) * step) % self.N
        return coeffs @ self.reduction[idx]

    def number(self, coeffs) -> "CycloNumber":
        return CycloNumber(self.N, tuple(Fraction(int(c)) if not isinstance(c, Fraction) else c for c in coeffs))

    def root_mod(self, P: int) -> int:
        """A primitive N-th root of unity modulo a prime P = 1 (mod N)."""
        if (P - 1) % self.N:
            raise ValueError(f"{P} is not 1 mod {self.N}")
        g = primitive_root(P)
        return pow(g, (P - 1) // self.N, P)


@lru_cache(maxsize=None)
def cyclotomic_field(N: int) -> CyclotomicField:
    return CyclotomicField(N)


class CycloNumber:
    """Exact element of Q(zeta_N) with rational canonical coefficients."""

    __slots__ = ("N", "coeffs", "_hash")

    def __init__(self, N: int, coeffs):
        field = cyclotomic_field(N)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != field.degree:
            raise ValueError(f"expected {field.degree} coefficients, got {len(coeffs)}")
        self.N = N
        self.coeffs = coeffs
        self._hash = None

    # -- constructors
    @classmethod
    def rational(cls, q, N: int = 1) -> "CycloNumber":
        d = cyclotomic_field(N).degree
        return cls(N, (Fraction(q),) + (Fraction(0),) * (d - 1))

    @classmethod
    def zeta_power(cls, k: int, N: int) -> "CycloNumber":
        field = cyclotomic_field(N)
        return cls(N, field.reduction[k % N])

    @classmethod
    def from_counts(cls, counts, N: int, scale=1) -> "CycloNumber":
        """sum_k counts[k] * zeta_N^k, times a rational scale."""
        field = cyclotomic_field(N)
        red = field.reduce(np.asarray([int(c) for c in counts], dtype=object))
        scale = Fraction(scale)
        return cls(N, [scale * int(c) for c in red])

    # -- helpers
    def to_order(self, L: int) -> "CycloNumber":
        if L == self.N:
            return self
        field = cyclotomic_field(L)
        if L % self.N:
            raise ValueError(f"cannot embed Q(zeta_{self.N}) into Q(zeta_{L})")
        step = L // self.N
        out = [Fraction(0)] * field.degree
        for i, c in enumerate(self.coeffs):
            if c:
                for k, r in enumerate(field.reduction[(i * step) % L]):
                    if r:
                        out[k] += c * int(r)
        return CycloNumber(L, out)

    def _unify(self, other):
        if not isinstance(other, CycloNumber):
            other = CycloNumber.rational(other, self.N)
        if other.N == self.N:
            return self, other
        L = lcm(self.N, other.N)
        return self.to_order(L), other.to_order(L)

    def simplify(self) -> "CycloNumber":
        """Re-express in the smallest Q(zeta_M) containing the value (M | N)."""
        for M in sorted(sympy.divisors(self.N)):
            d = cyclotomic_field(M).degree
            # solve by embedding candidates: the image of Q(zeta_M) is spanned by
            # embed(basis_i); test membership via least-squares over Q.
            if M == self.N:
                return self
            emb = cyclotomic_field(self.N).embed_from(np.eye(d, dtype=np.int64), M)
            mat = sympy.Matrix(emb.T.tolist())
            rhs = sympy.Matrix([sympy.Rational(c.numerator, c.denominator) for c in self.coeffs])
            try:
                sol, params = mat.gauss_jordan_solve(rhs)
            except ValueError:
                continue
            if params.shape[0]:
                continue
            return CycloNumber(M, [Fraction(int(s.p), int(s.q)) for s in sol])
        return self

    # -- arithmetic
    def __add__(self, other):
        a, b = self._unify(other)
        return CycloNumber(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber(self.N, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._unify(other)
        return CycloNumber(a.N, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycloNumber):
            q = Fraction(other)
            return CycloNumber(self.N, [q * x for x in self.coeffs])
        a, b = self._unify(other)
        field = cyclotomic_field(a.N)
        d = field.degree
        out = [Fraction(0)] * d
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if not y:
                    continue
                xy = x * y
                for k in range(d):
                    m = field.mult[i, j, k]
                    if m:
                        out[k] += xy * int(m)
        return CycloNumber(a.N, out)

    __rmul__ = __mul__

    def galois(self, k: int) -> "CycloNumber":
        """Image under zeta -> zeta^k (k coprime to N)."""
        field = cyclotomic_field(self.N)
        out = [Fraction(0)] * field.degree
        for i, c in enumerate(self.coeffs):
            if c:
                for j, r in enumerate(field.reduction[(i * k) % self.N]):
                    if r:
                        out[j] += c * int(r)
        return CycloNumber(self.N, out)

    def conj(self) -> "CycloNumber":
        return self.galois(-1)

    def norm(self) -> Fraction:
        prod = self
        for k in range(2, self.N):
            if gcd(k, self.N) == 1:
                prod = prod * self.galois(k)
        if any(prod.coeffs[1:]):
            raise ArithmeticError("norm is not rational")
        return prod.coeffs[0]

    def inverse(self) -> "CycloNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        rest = CycloNumber.rational(1, self.N)
        for k in range(2, self.N):
            if gcd(k, self.N) == 1:
                rest = rest * self.galois(k)
        nrm = (self * rest).coeffs[0]
        return rest * (1 / nrm)

    def __truediv__(self, other):
        if not isinstance(other, CycloNumber):
            return self * (1 / Fraction(other))
        a, b = self._unify(other)
        return a * b.inverse()

    # -- predicates / conversions
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if not isinstance(other, CycloNumber):
            try:
                other = CycloNumber.rational(other, self.N)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._unify(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            s = self.simplify()
            self._hash = hash((s.N, s.coeffs))
        return self._hash

    def __complex__(self):
        z = np.exp(2j * np.pi / self.N)
        return complex(sum(float(c) * z**i for i, c in enumerate(self.coeffs)))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(f"{c}*z{self.N}^{i}")
        return " + ".join(terms) if terms else "0"

    def to_json(self):
        return {"order": self.N, "coeffs": [str(c) for c in self.coeffs]}


def additive_character(t: int, p: int) -> CycloNumber:
    """The additive character t -> zeta_p^t."""
    return CycloNumber.zeta_power(int(t) % p, p)
