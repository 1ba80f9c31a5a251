"""Small finite groups given by a multiplication table: conjugacy classes,
character tables, inner products and decompositions of class functions.

Character values live in Q(zeta_e), e the exponent, stored as integer
coefficient arrays of ``CyclotomicField(e)`` (values of characters are
algebraic integers, so integer coefficients suffice).

Two table algorithms are provided. Abelian groups: characters are built by
extending along a chain of cyclic extensions. General groups: the
Dixon-Schneider method, splitting the class-algebra action over a prime
P = 1 (mod e), followed by an exact lift, where each value chi(g) is recovered
from the eigenvalue multiplicities of rho(g), which are integers in [0, chi(1)].
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np
import sympy

from .matfq import nullspace, rref
from .scalars import CycloNumber, cyclotomic_field, lcm


class GroupTooLarge(ValueError):
    pass


class SmallGroup:
    """Finite group on range(n) with multiplication table ``table[a, b] = a*b``."""

    def __init__(self, table, identity: int | None = None, name: str = ""):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        self.table = table
        self.order = n
        self.name = name
        if identity is None:
            ids = np.nonzero((table == np.arange(n)[None, :]).all(axis=1))[0]
            if not len(ids):
                raise ValueError("table has no identity element")
            identity = int(ids[0])
        self.identity = identity
        inv = np.argmax(table == identity, axis=1)
        if not np.array_equal(table[np.arange(n), inv], np.full(n, identity)):
            raise ValueError("table is not a group (missing inverses)")
        self.inverse = inv

    @classmethod
    def from_elements(cls, elements, mul, index, name: str = "", cap: int = 20000) -> "SmallGroup":
        """Build from an element array, a batched product mul(a, B) and index(B) -> int array."""
        n = len(elements)
        if n > cap:
            raise GroupTooLarge(f"group of order {n} exceeds the cap {cap}")
        table = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            table[i] = index(mul(elements[i], elements))
        ident = None
        return cls(table, ident, name)

    @classmethod
    def cyclic(cls, n: int) -> "SmallGroup":
        a = np.arange(n)
        return cls((a[:, None] + a[None, :]) % n, 0, f"C{n}")

    @classmethod
    def direct_product(cls, G: "SmallGroup", H: "SmallGroup") -> "SmallGroup":
        n, m = G.order, H.order
        a = np.arange(n * m)
        g, h = a // m, a % m
        table = G.table[g[:, None], g[None, :]] * m + H.table[h[:, None], h[None, :]]
        return cls(table, G.identity * m + H.identity, f"{G.name}x{H.name}")

    @classmethod
    def symmetric(cls, k: int) -> "SmallGroup":
        import itertools

        perms = list(itertools.permutations(range(k)))
        pos = {q: i for i, q in enumerate(perms)}
        table = np.array([[pos[tuple(a[b[i]] for i in range(k))] for b in perms] for a in perms])
        return cls(table, pos[tuple(range(k))], f"S{k}")

    # -- structure
    def is_abelian(self) -> bool:
        return np.array_equal(self.table, self.table.T)

    def power(self, x: int, k: int) -> int:
        r = self.identity
        b = x
        k = int(k)
        while k:
            if k & 1:
                r = int(self.table[r, b])
            b = int(self.table[b, b])
            k >>= 1
        return r

    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        for k in range(1, n + 1):
            hit = (cur == self.identity) & (orders == 0)
            orders[hit] = k
            if (orders > 0).all():
                break
            cur = self.table[cur, np.arange(n)]
        return orders

    def exponent(self) -> int:
        e = 1
        for o in np.unique(self.element_orders()):
            e = lcm(e, int(o))
        return e

    def generators(self) -> list:
        """A small generating set (greedy)."""
        n = self.order
        span = {self.identity}
        gens = []
        for c in range(n):
            if c in span:
                continue
            gens.append(c)
            queue = deque(span)
            while queue:
                x = queue.popleft()
                for g in gens:
                    y = int(self.table[x, g])
                    if y not in span:
                        span.add(y)
                        queue.append(y)
            if len(span) == n:
                break
        return gens

    def conjugacy_classes(self) -> list:
        """Classes as sorted arrays; the class of the identity comes first."""
        if hasattr(self, "_classes"):
            return self._classes
        n = self.order
        gens = self.generators() or [self.identity]
        lab = -np.ones(n, dtype=np.int64)
        classes = []
        for x in [self.identity] + list(range(n)):
            if lab[x] >= 0:
                continue
            cl = {x}
            queue = deque([x])
            while queue:
                y = queue.popleft()
                for g in gens:
                    z = int(self.table[self.table[g, y], self.inverse[g]])
                    if z not in cl:
                        cl.add(z)
                        queue.append(z)
            arr = np.array(sorted(cl), dtype=np.int64)
            lab[arr] = len(classes)
            classes.append(arr)
        self._classes = classes
        self._class_of = lab
        return classes

    @property
    def class_of(self) -> np.ndarray:
        self.conjugacy_classes()
        return self._class_of

    def subgroup(self, members) -> "SmallGroup":
        members = np.asarray(sorted(set(int(m) for m in members)), dtype=np.int64)
        pos = -np.ones(self.order, dtype=np.int64)
        pos[members] = np.arange(len(members))
        sub = pos[self.table[np.ix_(members, members)]]
        if (sub < 0).any():
            raise ValueError("subset is not closed under multiplication")
        G = SmallGroup(sub, int(pos[self.identity]), self.name + "_sub")
        G.embedding = members
        return G


# ---------------------------------------------------------------------------
# character tables


@dataclass
class CharacterTable:
    order: int
    N: int  # values in Q(zeta_N)
    classes: list
    values: np.ndarray  # (k, r, deg) integer coefficients

    @property
    def field(self):
        return cyclotomic_field(self.N)

    @property
    def class_sizes(self) -> np.ndarray:
        return np.array([len(c) for c in self.classes], dtype=np.int64)

    @property
    def degrees(self) -> list:
        return [int(v) for v in self.values[:, 0, 0]]

    def __len__(self):
        return len(self.values)

    def number(self, i: int, j: int) -> CycloNumber:
        return self.field.number(self.values[i, j])

    def rows(self) -> list:
        return [[self.number(i, j) for j in range(len(self.classes))] for i in range(len(self))]

    def check(self) -> bool:
        """Row orthogonality and sum of squared degrees, exactly."""
        F = self.field
        sizes = self.class_sizes
        gram = _gram(self.values, self.values, sizes, F)
        target = np.zeros_like(gram)
        idx = np.arange(len(self))
        target[idx, idx, 0] = self.order
        return bool(np.array_equal(gram, target)) and sum(d * d for d in self.degrees) == self.order


def _gram(A, B, sizes, F):
    """sum_c sizes[c] A[i,c] conj(B[j,c]) as (i, j, deg) integer arrays."""
    Bc = np.asarray(B) @ F.conj_matrix
    out = np.zeros((len(A), len(B), F.degree), dtype=object)
    A = np.asarray(A, dtype=object)
    Bc = np.asarray(Bc, dtype=object)
    mult = F.mult.astype(object)
    W = A * np.asarray(sizes, dtype=object)[None, :, None]
    # (i,c,a) x (j,c,b) x (a,b,k) -> (i,j,k)
    for a in range(F.degree):
        for b in range(F.degree):
            coef = mult[a, b]
            if not any(coef):
                continue
            s = W[:, :, a].dot(Bc[:, :, b].T)
            out += s[:, :, None] * coef[None, None, :]
    return out


def _abelian_table(G: SmallGroup) -> CharacterTable:
    e = G.exponent()
    n = G.order
    T = G.table
    # characters as exponent arrays a(x) with chi(x) = zeta_e^a(x), built on a growing subgroup
    members = [G.identity]
    pos = {G.identity: 0}
    chars = np.zeros((1, 1), dtype=np.int64)
    for g in range(n):
        if g in pos:
            continue
        # smallest m with g^m in the current subgroup
        m, x = 1, g
        while x not in pos:
            x = int(T[x, g])
            m += 1
        base = chars[:, pos[x]]
        if (base % m).any():
            raise ArithmeticError("abelian extension step failed")
        new_members = list(members)
        cur = list(members)
        for j in range(1, m):
            cur = [int(T[y, g]) for y in cur]
            new_members += cur
        blocks = []
        for t in range(m):
            b = (base // m + t * (e // m)) % e
            cols = [chars + (j * b)[:, None] for j in range(m)]
            blocks.append(np.concatenate(cols, axis=1) % e)
        chars = np.concatenate(blocks, axis=0)
        members = new_members
        pos = {y: i for i, y in enumerate(members)}
        if len(members) == n:
            break
    order = np.array([pos[x] for x in range(n)])
    expo = chars[:, order]
    F = cyclotomic_field(e)
    values = F.reduction[expo]  # (k, n, deg)
    classes = [np.array([x]) for x in range(n)]
    # identity first
    ident = G.identity
    perm = [ident] + [x for x in range(n) if x != ident]
    classes = [classes[x] for x in perm]
    values = values[:, perm]
    G._classes = classes
    lab = np.empty(n, dtype=np.int64)
    lab[perm] = np.arange(n)
    G._class_of = lab
    # trivial character first
    triv = int(np.nonzero((expo == 0).all(axis=1))[0][0])
    rows = [triv] + [i for i in range(len(values)) if i != triv]
    return CharacterTable(n, e, classes, values[rows])


def _choose_prime(e: int, order: int) -> int:
    bound = 2 * isqrt(order) + 2
    P = e * (bound // e + 1) + 1
    while not (sympy.isprime(P) and order % P):
        P += e
    return P


def _split_spaces(mats, r: int, P: int, rng) -> list:
    """Common eigenvectors (columns) of commuting matrices over F_P."""
    spaces = [np.eye(r, dtype=np.int64)]
    done = []
    tries = 0
    while spaces:
        B = spaces.pop()
        m = B.shape[1]
        if m == 1:
            done.append(B[:, 0])
            continue
        tries += 1
        if tries > 50 * r + 200:
            raise ArithmeticError("Dixon splitting did not converge")
        c = rng.integers(0, P, size=len(mats))
        Mc = np.zeros((r, r), dtype=np.int64)
        for ci, Mj in zip(c, mats):
            Mc = (Mc + int(ci) * Mj) % P
        R, piv = rref(B.T, P)
        Bn = R[: len(piv)].T  # columns, identity on pivot rows
        A = ((Mc @ Bn) % P)[piv, :]
        parts = []
        for lam in range(P):
            K = (A - lam * np.eye(m, dtype=np.int64)) % P
            ns = nullspace(K, P)
            if len(ns):
                parts.append((Bn @ ns.T) % P)
                if sum(q.shape[1] for q in parts) == m:
                    break
        spaces.extend(parts)
    return done


def _dixon_table(G: SmallGroup) -> CharacterTable:
    classes = G.conjugacy_classes()
    r = len(classes)
    n = G.order
    e = G.exponent()
    P = _choose_prime(e, n)
    cls = G.class_of
    sizes = np.array([len(c) for c in classes], dtype=np.int64)
    reps = np.array([c[0] for c in classes], dtype=np.int64)
    # a[j, k, i] = #{x in C_j : x^{-1} g_i in C_k}
    a = np.zeros((r, r, r), dtype=np.int64)
    xs = np.arange(n)
    for i, g in enumerate(reps):
        ys = G.table[G.inverse[xs], g]
        np.add.at(a, (cls[xs], cls[ys], np.full(n, i)), 1)
    mats = [a[j] % P for j in range(r)]  # M_j[k, i]: omega_j omega_k = sum_i a[j,k,i] omega_i
    rng = np.random.default_rng(12345)
    vecs = _split_spaces(mats, r, P, rng)
    # eigenvectors are the central characters up to scale; normalise omega = 1 at the identity
    inv_cls = cls[G.inverse[reps]]
    z = pow(sympy.primitive_root(P), (P - 1) // e, P)
    F = cyclotomic_field(e)
    orders = G.element_orders()[reps]
    rows = []
    for v in vecs:
        v = v % P
        if v[0] == 0:
            raise ArithmeticError("degenerate class-algebra eigenvector")
        w = (v * pow(int(v[0]), -1, P)) % P
        s = sum(int(w[j]) * int(w[inv_cls[j]]) * pow(int(sizes[j]), -1, P) for j in range(r)) % P
        d2 = (n * pow(s, -1, P)) % P
        d = next((x for x in range(1, isqrt(n) + 1) if (x * x - d2) % P == 0), None)
        if d is None:
            raise ArithmeticError("no degree found for a Dixon eigenvector")
        chi_mod = [(d * int(w[j]) * pow(int(sizes[j]), -1, P)) % P for j in range(r)]
        row = np.zeros((r, F.degree), dtype=np.int64)
        for j in range(r):
            o = int(orders[j])
            zo = pow(z, e // o, P)
            pw = [int(cls[G.power(int(reps[j]), l)]) for l in range(o)]
            counts = np.zeros(e, dtype=np.int64)
            inv_o = pow(o, -1, P)
            for k in range(o):
                mk = sum(chi_mod[pw[l]] * pow(zo, (-k * l) % o, P) for l in range(o)) * inv_o % P
                if mk > d:
                    raise ArithmeticError("eigenvalue multiplicity out of range")
                counts[(k * (e // o)) % e] += mk
            row[j] = F.reduce(counts)
        rows.append(row)
    values = np.array(rows)
    order_rows = sorted(range(len(rows)), key=lambda i: (values[i, 0, 0], [list(x) for x in values[i]]))
    values = values[order_rows]
    return CharacterTable(n, e, classes, values)


def character_table(G: SmallGroup, cap: int = 10000) -> CharacterTable:
    if G.is_abelian():
        if G.order > 4 * cap:
            raise GroupTooLarge(f"abelian group of order {G.order} exceeds the cap")
        tab = _abelian_table(G)
    else:
        if G.order > cap:
            raise GroupTooLarge(f"group of order {G.order} exceeds the cap {cap}; use a smaller instance")
        tab = _dixon_table(G)
    if not tab.check():
        raise ArithmeticError("character table failed the orthogonality check")
    return tab


# ---------------------------------------------------------------------------
# class functions


def class_values(G: SmallGroup, elementwise, N: int):
    """Per-class values from per-element values (n, deg) in Q(zeta_N); checks constancy."""
    elementwise = np.asarray(elementwise)
    out = []
    for c in G.conjugacy_classes():
        vals = elementwise[c]
        if not (vals == vals[0]).all():
            raise ValueError("function is not constant on a conjugacy class")
        out.append(vals[0])
    return np.array(out)


def inner_product(f, g, sizes, order: int, N: int) -> CycloNumber:
    """(1/|G|) sum_C |C| f(C) conj g(C) for per-class coefficient arrays in Q(zeta_N)."""
    F = cyclotomic_field(N)
    s = _gram(np.asarray(f)[None], np.asarray(g)[None], sizes, F)[0, 0]
    return CycloNumber(N, [Fraction(int(x), order) for x in s])


def decompose(f, table: CharacterTable, N: int | None = None) -> list:
    """Multiplicities <f, chi_i> as CycloNumbers (f per class, field Q(zeta_N))."""
    N = N or table.N
    L = lcm(N, table.N)
    F = cyclotomic_field(L)
    fv = F.embed_from(np.asarray(f), N) if N != L else np.asarray(f)
    tv = F.embed_from(table.values, table.N) if table.N != L else table.values
    gram = _gram(fv[None], tv, table.class_sizes, F)[0]
    return [CycloNumber(L, [Fraction(int(x), table.order) for x in row]) for row in gram]


def is_genuine(mults) -> bool:
    for m in mults:
        if not m.is_rational():
            return False
        q = m.rational_value()
        if q.denominator != 1 or q < 0:
            return False
    return True


def induce_values(G: SmallGroup, S_members, chi_on_S, deg: int):
    """Induced class function, per element of G: (1/|S|) sum_x chi'(x g x^-1)."""
    n = G.order
    pos = -np.ones(n, dtype=np.int64)
    S_members = np.asarray(S_members)
    pos[S_members] = np.arange(len(S_members))
    chi = np.asarray(chi_on_S)
    out = np.zeros((n, deg), dtype=object)
    xs = np.arange(n)
    for x in range(n):
        conj = G.table[G.table[x, xs], G.inverse[x]]
        inside = pos[conj] >= 0
        out[inside] += chi[pos[conj[inside]]].astype(object)
    return out, len(S_members)
