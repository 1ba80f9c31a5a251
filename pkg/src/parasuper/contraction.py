"""Parabolic contractions G^a = P x| U_-^a of GL(n), O(M), Sp(M).

Elements of the associative algebra gl^a(M) are stored as arrays of shape
(..., 2, M, M): slot 0 is the parabolic part (block upper triangular), slot 1
the contracted opposite part (strictly block lower). Multiplication is

    (A1, B1)(A2, B2) = (A1 A2, low(A1 B2 + B1 A2)),

which is the doubled realization [[A, B], [0, A]] modulo the ideal of
parabolic B's. ``low`` keeps strictly block-lower entries. The trace pairing
identifies the lower part with the dual of u_+, so this product reproduces
t.lambda(x) = lambda(x t) and lambda.t(x) = lambda(t x).

For the classical series the dagger is extended slotwise,
(A, B)^dagger = (A^dagger, B^dagger), which is again an antiautomorphism.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .matfq import dagger_matrices, inverse, mod, rank, rref
from .roots import LieTypeSpec, PartitionSpec, Root, delta_ua, root_vector
from .scalars import PrimeModulus, primitive_root


class RowIndex:
    """Vectorized lookup of integer rows (e.g. flattened matrices) -> index."""

    def __init__(self, rows):
        rows = np.ascontiguousarray(np.asarray(rows, dtype=np.int8))
        self.width = rows.shape[1]
        keys = rows.view(np.dtype((np.void, self.width))).ravel()
        self.order = np.argsort(keys, kind="stable")
        self.sorted = keys[self.order]
        if len(keys) > 1 and np.any(self.sorted[1:] == self.sorted[:-1]):
            raise ValueError("duplicate rows in index")

    def lookup(self, rows, missing_ok=False):
        rows = np.ascontiguousarray(np.asarray(rows, dtype=np.int8).reshape(-1, self.width))
        keys = rows.view(np.dtype((np.void, self.width))).ravel()
        pos = np.searchsorted(self.sorted, keys)
        pos = np.minimum(pos, len(self.sorted) - 1)
        found = self.sorted[pos] == keys
        if not missing_ok and not found.all():
            raise KeyError("row not present in index")
        out = self.order[pos]
        return np.where(found, out, -1)


class OrbitCapExceeded(RuntimeError):
    """An enumeration would exceed a configured size cap."""


CENTRAL_ENUM_CAP = 10**6


def all_vectors(d, p):
    """All vectors of F_p^d; row k has the base-p digits of k (little endian)."""
    N = p**d
    k = np.arange(N, dtype=np.int64)
    return np.stack([(k // p**i) % p for i in range(d)], axis=1) if d else np.zeros((1, 0), dtype=np.int64)


def codes_of(V, p):
    V = np.asarray(V, dtype=np.int64)
    d = V.shape[-1]
    return (V % p) @ (p ** np.arange(d, dtype=np.int64))


def enumerate_gl(m, p):
    """All invertible m x m matrices over F_p (desk scale only)."""
    if p ** (m * m) > 2_000_000:
        raise ValueError(f"GL({m},{p}) too large to enumerate")
    cand = all_vectors(m * m, p).reshape(-1, m, m)
    keep = [i for i, A in enumerate(cand) if rank(A, p) == m] if m > 1 else list(np.nonzero(cand[:, 0, 0])[0])
    return cand[keep]


@dataclass
class Superclass:
    label: object
    members: np.ndarray  # flat element indices of the ambient group
    representative: int

    @property
    def size(self) -> int:
        return len(self.members)


class ContractionContext:
    """Everything about one contraction G^a for (series, n, p, partition)."""

    def __init__(self, spec: LieTypeSpec, partition: PartitionSpec | None = None, p: int = 3, check: bool = True):
        self.spec = spec
        self.partition = partition or PartitionSpec.borel(spec)
        if self.partition.spec != spec:
            raise ValueError("partition belongs to a different root system")
        self.p = int(PrimeModulus(p))
        self.M = spec.M
        self.series = spec.series
        up, low, levi = self.partition.masks()
        self.upper_mask = up.astype(np.int64)
        self.lower_mask = low.astype(np.int64)
        self.levi_mask = levi.astype(np.int64)
        self.parabolic_mask = (up | levi).astype(np.int64)
        self.pos_roots, self.neg_roots = delta_ua(spec, self.partition)
        self.roots = list(self.pos_roots) + list(self.neg_roots)
        self.dim = len(self.roots)
        self.root_index = {r.pair: i for i, r in enumerate(self.roots)}
        idx = spec.index
        basis = np.zeros((self.dim, 2, self.M, self.M), dtype=np.int64)
        slots = []
        for i, r in enumerate(self.roots):
            slot = 0 if r.positive else 1
            basis[i, slot] = root_vector(r, spec, self.p)
            slots.append((slot, idx.pos(r.row), idx.pos(r.col)))
        self.basis = basis
        self._slots = np.array(slots, dtype=np.int64).reshape(-1, 3)
        if spec.series != "A":
            self.form = spec.form
            self._Finv, self._F = dagger_matrices(spec.form, self.p)
        else:
            self.form = None
        self.half = pow(2, -1, self.p)
        if check:
            self._check_invariants()

    # ------------------------------------------------------------------ algebra
    def identity(self):
        e = np.zeros((2, self.M, self.M), dtype=np.int64)
        e[0] = np.eye(self.M, dtype=np.int64)
        return e

    def zero(self):
        return np.zeros((2, self.M, self.M), dtype=np.int64)

    def mul(self, X, Y):
        p = self.p
        A = X[..., 0, :, :] @ Y[..., 0, :, :]
        B = (X[..., 0, :, :] @ Y[..., 1, :, :] + X[..., 1, :, :] @ Y[..., 0, :, :]) * self.lower_mask
        return np.stack([A % p, B % p], axis=-3)

    def dag(self, X):
        if self.form is None:
            raise ValueError("dagger is defined for the classical series only")
        Xt = np.swapaxes(X, -1, -2)
        return (self._Finv @ Xt @ self._F) % self.p

    def coords(self, X):
        X = np.asarray(X)
        s = self._slots
        return X[..., s[:, 0], s[:, 1], s[:, 2]] % self.p

    def from_coords(self, c):
        c = np.asarray(c, dtype=np.int64)
        return np.tensordot(c, self.basis, axes=([-1], [0])) % self.p

    def in_ua(self, X) -> bool:
        X = np.asarray(X) % self.p
        if np.any(X[0] * (1 - self.upper_mask)) or np.any(X[1] * (1 - self.lower_mask)):
            return False
        if self.form is not None and not np.array_equal(self.dag(X), (-X) % self.p):
            return False
        return np.array_equal(self.from_coords(self.coords(X)), X)

    def algebra_mul(self, x, y):
        """Product of u^a elements given by coordinates (result in coordinates).

        For the classical series the product leaves u^a; the result is then the
        coordinate vector of the full product together with a membership flag.
        """
        Z = self.mul(self.from_coords(x), self.from_coords(y))
        if self.form is None:
            return self.coords(Z)
        return self.coords(Z), self.in_ua(Z)

    # ------------------------------------------------------------------ group
    def group_mul(self, g1, g2):
        return self.mul(g1, g2)

    def group_inv(self, g):
        g = np.asarray(g) % self.p
        Ainv = inverse(g[0], self.p)
        out = np.zeros_like(g)
        out[0] = Ainv
        out[1] = (-(Ainv @ g[1] @ Ainv) * self.lower_mask) % self.p
        return out

    def is_unitary(self, g) -> bool:
        return np.array_equal(self.mul(self.dag(g), g), self.identity())

    def levi_part(self, g):
        h = np.zeros_like(np.asarray(g))
        h[..., 0, :, :] = g[..., 0, :, :] * self.levi_mask
        return h

    # ------------------------------------------------------------------ Cayley map
    def _nilpotent_series(self, X, sign):
        """sum_k sign^k X^{k+1} / 2^k."""
        p = self.p
        total = X.copy()
        term = X.copy()
        coef = 1
        for _ in range(self.M * 2 + 2):
            term = self.mul(term, X)
            if not term.any():
                return total % p
            coef = (coef * sign * self.half) % p
            total = (total + coef * term) % p
        raise ValueError("element is not nilpotent")

    def _unipotent_part(self, u):
        u = np.asarray(u) % self.p
        X = (u - self.identity()) % self.p
        if np.any(X[..., 0, :, :] * self.levi_mask):
            raise ValueError("cayley map needs a unipotent element of U^a")
        return X

    def cayley(self, u):
        """f(u) = 2(u-1)/(u+1) as a power series in X = u - 1."""
        return self._nilpotent_series(self._unipotent_part(u), -1)

    def cayley_inv(self, X):
        X = np.asarray(X) % self.p
        if np.any(X[..., 0, :, :] * (1 - self.upper_mask)):
            raise ValueError("cayley_inv needs a nilpotent element of u^a")
        return (self.identity() + self._nilpotent_series(X, 1)) % self.p

    # coordinates of U^a elements: 1 + X for type A, Cayley image otherwise
    def u_coords(self, u):
        if self.form is None:
            return self.coords(self._unipotent_part(u))
        return self.coords(self.cayley(u))

    def u_from_coords(self, c):
        X = self.from_coords(c)
        if self.form is None:
            return (self.identity() + X) % self.p
        return self.cayley_inv(X)

    # ------------------------------------------------------------------ actions
    def linear_map(self, fn):
        """d x d matrix T of a linear map on u^a: coords(fn(X)) = T @ coords(X)."""
        imgs = fn(self.basis)
        T = self.coords(imgs).T
        if self.form is not None:
            back = self.from_coords(T.T)
            if not np.array_equal(back % self.p, imgs % self.p):
                raise ValueError("map does not preserve u^a")
        return T % self.p

    def left_map(self, g):
        return self.linear_map(lambda X: self.mul(g, X))

    def right_map(self, g):
        return self.linear_map(lambda X: self.mul(X, g))

    def dagger_action_map(self, g):
        """X -> g X g^dagger."""
        gd = self.dag(g)
        return self.linear_map(lambda X: self.mul(self.mul(g, X), gd))

    def conj_map(self, g):
        """X -> g X g^{-1}, the conjugation action in U^a coordinates."""
        gi = self.group_inv(g)
        return self.linear_map(lambda X: self.mul(self.mul(g, X), gi))

    def act_two_sided_A(self, a, X, b):
        if self.form is not None:
            raise ValueError("two-sided action is the type A action")
        return self.mul(self.mul(a, X), b)

    def act_dagger_BCD(self, g, X):
        if self.form is None:
            raise ValueError("dagger action needs a classical series")
        return self.mul(self.mul(g, X), self.dag(g))

    def dual_act(self, g, lam, side="left"):
        """Action on linear forms given by dual coordinates.

        Type A: left (t.L)(X) = L(X t), right (L.t)(X) = L(t X).
        Classical: (g.L)(X) = L(g^dagger X g).
        """
        lam = np.asarray(lam, dtype=np.int64)
        if self.form is None:
            T = self.right_map(g) if side == "left" else self.left_map(g)
        else:
            gd = self.dag(g)
            T = self.linear_map(lambda X: self.mul(self.mul(gd, X), g))
        return (T.T @ lam) % self.p

    # ------------------------------------------------------------------ generators
    @cached_property
    def gl_generators(self):
        """Generators of the GL(M)-contraction P x| U_-^a (the acting group for orbits):
        torus elements for a primitive root, one root element per parabolic
        position and one translation per opposite position."""
        p, M = self.p, self.M
        g = primitive_root(p)
        gens = []
        for i in range(M):
            t = self.identity()
            t[0, i, i] = g
            gens.append(t)
        for a in range(M):
            for b in range(M):
                if a != b and self.parabolic_mask[a, b]:
                    x = self.identity()
                    x[0, a, b] = 1
                    gens.append(x)
        for a in range(M):
            for b in range(M):
                if self.lower_mask[a, b]:
                    x = self.identity()
                    x[1, a, b] = 1
                    gens.append(x)
        return np.array(gens)

    @cached_property
    def ua_generators(self):
        """Generators of U^a: images of the basis vectors."""
        return np.array([self.u_from_coords(np.eye(self.dim, dtype=np.int64)[i]) for i in range(self.dim)])

    @cached_property
    def primal_maps(self):
        """Linear maps generating the orbit action on u^a."""
        if self.form is None:
            maps = [self.left_map(g) for g in self.gl_generators] + [self.right_map(g) for g in self.gl_generators]
        else:
            maps = [self.dagger_action_map(g) for g in self.gl_generators]
        return _dedupe(maps)

    @cached_property
    def dual_maps(self):
        return [T.T.copy() for T in self.primal_maps]

    # ------------------------------------------------------------------ Levi
    @cached_property
    def levi_elements(self):
        """All elements of L as (2, M, M) group elements, identity first."""
        p, M = self.p, self.M
        part = self.partition
        factors = []
        if self.form is None:
            for k in part.block_ids:
                pos = part.positions(k)
                mats = []
                for A in enumerate_gl(len(pos), p):
                    g = np.eye(M, dtype=np.int64)
                    g[np.ix_(pos, pos)] = A
                    mats.append(g)
                factors.append(mats)
        else:
            Finv, F = self._Finv, self._F
            for k in part.block_ids:
                if k < 0:
                    continue
                pos = part.positions(k)
                mats = []
                if k > 0:
                    for A in enumerate_gl(len(pos), p):
                        g = np.eye(M, dtype=np.int64)
                        g[np.ix_(pos, pos)] = A
                        gd = Finv @ g.T @ F % p
                        mats.append(g @ inverse(gd, p) % p)
                else:
                    m = len(pos)
                    if p ** (m * m) > CENTRAL_ENUM_CAP:
                        raise OrbitCapExceeded(f"central Levi block of size {m} is too large to enumerate")
                    for A in all_vectors(m * m, p).reshape(-1, m, m):
                        g = np.eye(M, dtype=np.int64)
                        g[np.ix_(pos, pos)] = A
                        if np.array_equal(Finv @ g.T @ F @ g % p, np.eye(M, dtype=np.int64)):
                            mats.append(g)
                factors.append(mats)
        elems = []
        for combo in itertools.product(*factors):
            g = np.eye(M, dtype=np.int64)
            for f in combo:
                g = g @ f % p
            elems.append(g)
        elems.sort(key=lambda g: (not np.array_equal(g, np.eye(M, dtype=np.int64)), g.ravel().tolist()))
        out = np.zeros((len(elems), 2, M, M), dtype=np.int64)
        out[:, 0] = np.array(elems)
        return out

    @cached_property
    def levi_index(self):
        return RowIndex(self.levi_elements[:, 0].reshape(len(self.levi_elements), -1))

    @cached_property
    def levi_inverses(self):
        return np.array([self.group_inv(h) for h in self.levi_elements])

    @cached_property
    def levi_mult(self):
        """Multiplication table of L on indices."""
        L = self.levi_elements[:, 0]
        n = len(L)
        out = np.empty((n, n), dtype=np.int64)
        step = max(1, (1 << 22) // (n * self.M * self.M))
        for a in range(0, n, step):
            prod = np.einsum("aij,bjk->abik", L[a:a + step], L) % self.p
            out[a:a + step] = self.levi_index.lookup(prod.reshape(-1, self.M * self.M)).reshape(-1, n)
        return out

    @property
    def levi_order(self) -> int:
        return len(self.levi_elements)

    @cached_property
    def weyl_levi(self):
        """Permutation matrices of the GL(M)-Levi (products of symmetric groups on blocks)."""
        part = self.partition
        M = self.M
        perms_per_block = [list(itertools.permutations(part.positions(k))) for k in part.block_ids]
        out = []
        for combo in itertools.product(*perms_per_block):
            w = np.zeros((M, M), dtype=np.int64)
            for k, img in zip(part.block_ids, combo):
                for src, dst in zip(part.positions(k), img):
                    w[dst, src] = 1
            out.append(w)
        return out

    # ------------------------------------------------------------------ orders
    @property
    def ua_order(self) -> int:
        return self.p**self.dim

    @property
    def group_order(self) -> int:
        return self.levi_order * self.ua_order

    # ------------------------------------------------------------------ U^a enumeration
    @cached_property
    def ua_elements(self):
        """All elements of U^a; element k has coordinates with base-p code k."""
        V = all_vectors(self.dim, self.p)
        X = self.from_coords(V)
        if self.form is None:
            return (self.identity() + X) % self.p
        return self.cayley_inv(X)

    def ua_code(self, u):
        return codes_of(self.u_coords(u), self.p)

    def split(self, g):
        """g = h u with h in L, u in U^a -> (levi index, U^a code)."""
        g = np.asarray(g) % self.p
        h = self.levi_part(g)
        hidx = self.levi_index.lookup(h[..., 0, :, :].reshape(-1, self.M * self.M))
        hinv = self.levi_inverses[hidx].reshape(g.shape)
        u = self.mul(hinv, g)
        return hidx.reshape(g.shape[:-3]), self.ua_code(u)

    def element(self, hidx, ucode):
        return self.mul(self.levi_elements[hidx], self.ua_elements[ucode])

    # ------------------------------------------------------------------ forms & realizations
    def bilinear_form(self, X1, X2):
        """(X1, X2) = lambda2(x1) + lambda1(x2), trace pairing (type A)."""
        if self.form is not None:
            raise ValueError("the bilinear form is defined for type A")
        X1 = np.asarray(X1)
        X2 = np.asarray(X2)
        t = np.einsum("...ij,...ji->...", X2[..., 1, :, :], X1[..., 0, :, :])
        t = t + np.einsum("...ij,...ji->...", X1[..., 1, :, :], X2[..., 0, :, :])
        return t % self.p

    def form_gram(self):
        """Gram matrix of the bilinear form in the root-vector basis."""
        B = self.basis
        return np.array([[int(self.bilinear_form(B[i], B[j])) for j in range(self.dim)] for i in range(self.dim)])

    def X_of(self, D, phi=None):
        """Coordinates of X_{D,phi}; also the dual coordinates of Lambda_{D,phi}."""
        c = np.zeros(self.dim, dtype=np.int64)
        for r in D:
            pair = r.pair if isinstance(r, Root) else tuple(r)
            if pair not in self.root_index:
                raise KeyError(f"root {pair} is not in Delta(u^a)")
            c[self.root_index[pair]] = 1 if phi is None else int(phi.get(pair, 1)) % self.p
        return c

    def build_XDphi(self, D, phi=None):
        return self.from_coords(self.X_of(D, phi))

    def build_LambdaDphi(self, D, phi=None):
        return self.X_of(D, phi)

    def realize_doubled_A(self, X):
        X = np.asarray(X) % self.p
        M = self.M
        out = np.zeros((2 * M, 2 * M), dtype=np.int64)
        out[:M, :M] = X[0]
        out[M:, M:] = X[0]
        out[:M, M:] = X[1]
        return out

    def doubled_ranks(self, X):
        """R_km (k < m) and tilde R_km (m < k) of the doubled realization."""
        part = self.partition
        ids = part.block_ids
        Y = self.realize_doubled_A(X)
        M = self.M
        R, Rt = {}, {}
        for a, k in enumerate(ids):
            for b, m in enumerate(ids):
                if a < b:
                    rows = [q for t in ids[a:b + 1] for q in part.positions(t)]
                    R[(k, m)] = rank(Y[np.ix_(rows, rows)], self.p)
                elif b < a:
                    rows = [q for t in ids[a:] for q in part.positions(t)]
                    rows += [q + M for t in ids[: b + 1] for q in part.positions(t)]
                    Rt[(k, m)] = rank(Y[np.ix_(rows, rows)], self.p)
        return R, Rt

    # ------------------------------------------------------------------ checks / summary
    def _check_invariants(self):
        p = self.p
        if self.form is not None:
            for i, b in enumerate(self.basis):
                if not np.array_equal(self.dag(b), (-b) % p):
                    raise AssertionError(f"root vector {self.roots[i]} is not antisymmetric")
            try:
                levi = self.levi_elements[:64]
            except OrbitCapExceeded:
                levi = []  # reported lazily when L is first needed
            for h in levi:
                if not self.is_unitary(h):
                    raise AssertionError("Levi element violates the membership condition")
        flat = self.basis.reshape(self.dim, 2 * self.M * self.M)
        if self.dim and rank(flat, p) != self.dim:
            raise AssertionError("root vectors are not linearly independent")

    def summary(self) -> dict:
        return {
            "series": self.series,
            "n": self.spec.n,
            "p": self.p,
            "partition": list(self.partition.sizes),
            "blocks": {str(k): list(v) for k, v in self.partition.blocks.items()},
            "dim_ua": self.dim,
            "dim_u_plus": len(self.pos_roots),
            "dim_u_minus": len(self.neg_roots),
            "levi_order": self.levi_order,
            "ua_order": self.ua_order,
            "group_order": self.group_order,
            "basis": [("E" if r.positive else "F") + repr(r) for r in self.roots],
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary(), sort_keys=True)


def _dedupe(maps):
    seen = set()
    out = []
    for T in maps:
        key = T.tobytes()
        if key not in seen and not np.array_equal(T, np.eye(T.shape[0], dtype=T.dtype)):
            seen.add(key)
            out.append(T)
    return out


def build_context(spec, partition=None, p=3, check=True) -> ContractionContext:
    if isinstance(spec, tuple):
        spec = LieTypeSpec(*spec)
    if partition is not None and not isinstance(partition, PartitionSpec):
        partition = PartitionSpec(spec, tuple(partition))
    return ContractionContext(spec, partition, p, check=check)
