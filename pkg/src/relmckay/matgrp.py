"""Explicit matrix realizations of ``SL_{r+1}(q)`` and ``Sp_{2r}(q)``.

Matrices over F_q are int arrays of field elements (see
:mod:`relmckay.finite_field`). A matrix is identified with its base-q code
(row-major digits), so the element list of a group is a sorted int64 array
and membership is a binary search.

Symplectic matrices preserve ``J = antidiag(1, ..., 1, -1, ..., -1)``. The
maximal torus is ``diag(t_0, ..., t_{r-1}, t_{r-1}^-1, ..., t_0^-1)`` and the
last simple root ``t_{r-1}^2`` is the long one, matching the C-type Cartan
convention of :mod:`relmckay.rootdata`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .finite_field import FqContext, field_context
from .rootdata import RootDatum, group_order

SCHEMA_VERSION = 1
DEFAULT_MAX_ORDER = 10**8


class UnsupportedGroupError(ValueError):
    pass


class GroupOrderBoundError(RuntimeError):
    pass


class InvalidAutomorphismError(ValueError):
    pass


def max_group_order(explicit: int | None = None) -> int:
    if explicit is not None:
        if explicit < 1:
            raise ValueError("order bound must be positive")
        return explicit
    env = os.environ.get("MCKAY_MAX_GROUP_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


# --- batched matrix arithmetic over F_q ----------------------------------------


def matmul(F: FqContext, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of (broadcastable) stacks of square matrices over F_q."""
    if F.n == 1:
        return (a @ b) % F.p
    size = a.shape[-1]
    acc = F.mul_table[a[..., :, 0, None], b[..., None, 0, :]]
    for k in range(1, size):
        acc = F.add_table[acc, F.mul_table[a[..., :, k, None], b[..., None, k, :]]]
    return acc


def mat_inverse(F: FqContext, a: np.ndarray) -> np.ndarray:
    """Inverse of a single invertible matrix by Gauss-Jordan elimination."""
    size = a.shape[0]
    m = np.concatenate([a.copy(), np.eye(size, dtype=np.int64)], axis=1)
    for col in range(size):
        piv = next((r for r in range(col, size) if m[r, col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[[col, piv]] = m[[piv, col]]
        m[col] = F.mul_table[F.inv(int(m[col, col])), m[col]]
        for r in range(size):
            if r != col and m[r, col]:
                factor = F.neg(int(m[r, col]))
                m[r] = F.add_table[m[r], F.mul_table[factor, m[col]]]
    return m[:, size:]


def mat_transpose_form(F: FqContext, m: np.ndarray, form: np.ndarray) -> np.ndarray:
    """``m^T form m``."""
    return matmul(F, matmul(F, m.T.copy(), form), m)


@dataclass(frozen=True)
class _Encoder:
    q: int
    size: int

    @cached_property
    def weights(self) -> np.ndarray:
        return self.q ** np.arange(self.size * self.size - 1, -1, -1, dtype=np.int64)

    def encode(self, mats: np.ndarray) -> np.ndarray:
        flat = mats.reshape(mats.shape[:-2] + (self.size * self.size,))
        return flat @ self.weights

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        digits = (codes[..., None] // self.weights) % self.q
        return digits.reshape(codes.shape + (self.size, self.size))


# --- group automorphisms ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    """An automorphism of a matrix group, applied to stacks of matrices.

    ``conjugation``: ``x -> s x s^-1`` for a matrix ``s`` normalizing the group;
    ``frobenius``: entrywise ``x -> x^(p^j)``; ``composite``: apply ``parts`` in order.
    """

    kind: str
    field: FqContext
    matrix: np.ndarray | None = None
    power: int = 0
    parts: tuple["GroupAutomorphism", ...] = ()
    label: str = ""

    def __call__(self, mats: np.ndarray) -> np.ndarray:
        F = self.field
        if self.kind == "conjugation":
            inv = mat_inverse(F, self.matrix)
            return matmul(F, matmul(F, self.matrix, mats), inv)
        if self.kind == "frobenius":
            return F.frobenius_table(self.power)[mats]
        if self.kind == "composite":
            for part in self.parts:
                mats = part(mats)
            return mats
        raise InvalidAutomorphismError(f"unknown automorphism kind {self.kind!r}")

    def then(self, other: "GroupAutomorphism") -> "GroupAutomorphism":
        """``other o self``: apply ``self`` first."""
        return GroupAutomorphism(
            "composite", self.field, parts=(self, other), label=f"{other.label}*{self.label}"
        )

    def power_of(self, k: int) -> "GroupAutomorphism":
        if k < 1:
            raise ValueError("power must be positive")
        return GroupAutomorphism(
            "composite", self.field, parts=(self,) * k, label=f"({self.label})^{k}"
        )


# --- the group ------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassData:
    """Conjugacy classes sorted by (element order, size, least code)."""

    class_of: np.ndarray
    representatives: np.ndarray
    sizes: np.ndarray
    orders: np.ndarray

    def __len__(self) -> int:
        return len(self.sizes)


class MatGroup:
    """A finite matrix group given by generators, enumerated on demand."""

    def __init__(
        self,
        datum: RootDatum,
        p: int,
        n: int,
        degree: int,
        generators: Sequence[np.ndarray],
        root_elements: Sequence,
        form: np.ndarray | None,
        max_order: int | None = None,
    ):
        self.datum = datum
        self.p, self.n = p, n
        self.q = p**n
        self.field = field_context(p, n)
        self.degree = degree
        self.generators = tuple(np.asarray(g, dtype=np.int64) for g in generators)
        self.root_elements = tuple(root_elements)
        self.form = form
        self.expected_order = group_order(datum, self.q)
        bound = max_group_order(max_order)
        if self.expected_order > bound:
            raise GroupOrderBoundError(
                f"|{datum.type_label}({self.q})| = {self.expected_order} exceeds the bound {bound}"
            )
        if float(self.q) ** (degree * degree) >= 2.0**62:
            raise GroupOrderBoundError("matrix codes do not fit in 64 bits")
        self.encoder = _Encoder(self.q, degree)

    @property
    def family(self) -> str:
        return self.datum.family

    @property
    def identity(self) -> np.ndarray:
        return np.eye(self.degree, dtype=np.int64)

    # enumeration -------------------------------------------------------------

    @cached_property
    def codes(self) -> np.ndarray:
        F, enc = self.field, self.encoder
        seen = enc.encode(self.identity[None])
        frontier = self.identity[None]
        while len(frontier):
            new = []
            for g in self.generators:
                prod = matmul(F, frontier, g)
                new.append(prod)
            cand = np.concatenate(new)
            cc = enc.encode(cand)
            cc, first = np.unique(cc, return_index=True)
            fresh = ~np.isin(cc, seen, assume_unique=True)
            frontier = cand[first[fresh]]
            seen = np.union1d(seen, cc[fresh])
            if len(seen) > self.expected_order:
                raise AssertionError("enumeration exceeded the expected order")  # pragma: no cover
        return seen

    @property
    def order(self) -> int:
        return len(self.codes)

    @cached_property
    def elements(self) -> np.ndarray:
        return self.encoder.decode(self.codes)

    def index_of(self, mats: np.ndarray) -> np.ndarray:
        """Positions of matrices in the sorted element list; raises if any is outside the group."""
        c = self.encoder.encode(mats)
        pos = np.searchsorted(self.codes, c)
        pos = np.minimum(pos, len(self.codes) - 1)
        if not np.all(self.codes[pos] == c):
            raise KeyError("matrix is not an element of the group")
        return pos

    def contains(self, mats: np.ndarray) -> np.ndarray:
        c = self.encoder.encode(mats)
        pos = np.minimum(np.searchsorted(self.codes, c), len(self.codes) - 1)
        return self.codes[pos] == c

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return matmul(self.field, a, b)

    def inverse(self, a: np.ndarray) -> np.ndarray:
        return mat_inverse(self.field, a)

    # classes -------------------------------------------------------------------

    @cached_property
    def classes(self) -> ClassData:
        els = self.elements
        size = self.order
        rows, cols = [], []
        for g in self.generators:
            ginv = self.inverse(g)
            img = self.index_of(matmul(self.field, matmul(self.field, ginv, els), g))
            rows.append(np.arange(size))
            cols.append(img)
        graph = coo_matrix(
            (np.ones(size * len(self.generators), dtype=np.int8), (np.concatenate(rows), np.concatenate(cols))),
            shape=(size, size),
        )
        ncls, labels = connected_components(graph, directed=True, connection="weak")
        sizes = np.bincount(labels, minlength=ncls)
        # least code (= least index) per component
        first = np.full(ncls, size, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(size))
        orders = np.array([self._element_order(els[k]) for k in first], dtype=np.int64)
        key = sorted(range(ncls), key=lambda c: (orders[c], sizes[c], first[c]))
        relabel = np.empty(ncls, dtype=np.int64)
        relabel[key] = np.arange(ncls)
        return ClassData(
            class_of=relabel[labels],
            representatives=first[key],
            sizes=sizes[key],
            orders=orders[key],
        )

    def _element_order(self, x: np.ndarray) -> int:
        y, k = x.copy(), 1
        one = self.identity
        while not np.array_equal(y, one):
            y = matmul(self.field, y, x)
            k += 1
        return k

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_of_matrices(self, mats: np.ndarray) -> np.ndarray:
        return self.classes.class_of[self.index_of(mats)]

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.classes.orders))

    @cached_property
    def inverse_classes(self) -> np.ndarray:
        reps = self.elements[self.classes.representatives]
        invs = np.stack([self.inverse(x) for x in reps])
        return self.class_of_matrices(invs)

    def power_map(self, k: int) -> np.ndarray:
        """Class of ``x^k`` for ``x`` in each class."""
        reps = self.elements[self.classes.representatives]
        out = np.broadcast_to(self.identity, reps.shape).copy()
        base, e = reps.copy(), k % self.exponent
        while e:
            if e & 1:
                out = matmul(self.field, out, base)
            base = matmul(self.field, base, base)
            e >>= 1
        return self.class_of_matrices(out)

    def class_multiplication_counts(self, k: int) -> np.ndarray:
        """``M[a, b] = #{y in class a : y z_k in class b}`` for the representative ``z_k``."""
        z = self.elements[self.classes.representatives[k]]
        img = self.class_of_matrices(matmul(self.field, self.elements, z))
        ncls = self.class_count
        out = np.zeros((ncls, ncls), dtype=np.int64)
        np.add.at(out, (self.classes.class_of, img), 1)
        return out

    # center and tori -------------------------------------------------------------

    @cached_property
    def center_indices(self) -> np.ndarray:
        els = self.elements
        mask = np.ones(self.order, dtype=bool)
        for g in self.generators:
            mask &= np.all(matmul(self.field, els, g) == matmul(self.field, g, els), axis=(1, 2))
        return np.nonzero(mask)[0]

    def center_of(self) -> np.ndarray:
        return self.elements[self.center_indices]

    def coroot(self, k: int, s: int) -> np.ndarray:
        """``alpha_k^vee(s)`` as a diagonal matrix."""
        F = self.field
        r = self.datum.rank
        diag = [1] * self.degree
        if self.family == "A":
            diag[k], diag[k + 1] = s, F.inv(s)
        else:
            mirror = lambda i: self.degree - 1 - i  # noqa: E731
            if k < r - 1:
                diag[k], diag[k + 1] = s, F.inv(s)
                diag[mirror(k)], diag[mirror(k + 1)] = F.inv(s), s
            else:
                diag[k], diag[mirror(k)] = s, F.inv(s)
        return np.diag(np.array(diag, dtype=np.int64))

    def torus_element(self, coords: Sequence[int]) -> np.ndarray:
        """``prod_k alpha_k^vee(zeta^coords[k])``."""
        F = self.field
        out = self.identity
        for k, a in enumerate(coords):
            out = matmul(F, out, self.coroot(k, F.zeta(a)))
        return out

    def root_element(self, i: int, t: int, negative: bool = False) -> np.ndarray:
        """``x_{+-alpha_i}(t)``."""
        builder = self.root_elements[i]
        return builder(t, negative)

    def conjugation_root_values(self, s: np.ndarray) -> list[int]:
        """``log_zeta`` of the scalar by which conjugation by ``s`` rescales each ``x_{alpha_i}``."""
        F = self.field
        sinv = mat_inverse(F, s)
        out = []
        for i in range(self.datum.rank):
            x = self.root_element(i, 1)
            y = matmul(F, matmul(F, s, x), sinv)
            for c in range(F.q):
                if c and np.array_equal(y, self.root_element(i, c)):
                    out.append(F.log(c))
                    break
            else:
                raise InvalidAutomorphismError("conjugation does not normalize the root subgroup")
        return out

    # automorphisms ------------------------------------------------------------------

    def diagonal_matrix(self) -> np.ndarray:
        F = self.field
        zeta = F.zeta(1)
        diag = [1] * self.degree
        if self.family == "A":
            diag[0] = zeta
        else:
            for i in range(self.degree // 2, self.degree):
                diag[i] = zeta
        return np.diag(np.array(diag, dtype=np.int64))

    def diagonal_automorphism(self) -> GroupAutomorphism:
        s = self.diagonal_matrix()
        return GroupAutomorphism("conjugation", self.field, matrix=s, label="delta")

    def field_automorphism(self, j: int) -> GroupAutomorphism:
        if not 1 <= j <= self.n:
            raise ValueError(f"j={j} outside 1..{self.n}")
        return GroupAutomorphism("frobenius", self.field, power=j, label=f"F{j}")

    def inner_automorphism(self, x: np.ndarray) -> GroupAutomorphism:
        if not self.contains(np.asarray(x)[None])[0]:
            raise InvalidAutomorphismError("conjugating element is not in the group")
        return GroupAutomorphism("conjugation", self.field, matrix=np.asarray(x), label="inner")

    def validate_automorphism(self, sigma: GroupAutomorphism) -> None:
        images = sigma(np.stack(self.generators))
        if not np.all(self.contains(images)):
            raise InvalidAutomorphismError(f"{sigma.label}: a generator image leaves the group")

    def class_permutation(self, sigma: GroupAutomorphism) -> np.ndarray:
        """``perm[c]`` is the class of ``sigma(x)`` for ``x`` in class ``c``."""
        self.validate_automorphism(sigma)
        reps = self.elements[self.classes.representatives]
        perm = self.class_of_matrices(sigma(reps))
        cd = self.classes
        if sorted(perm.tolist()) != list(range(len(cd))):
            raise InvalidAutomorphismError(f"{sigma.label} does not permute the classes")
        if not (np.array_equal(cd.sizes[perm], cd.sizes) and np.array_equal(cd.orders[perm], cd.orders)):
            raise InvalidAutomorphismError(f"{sigma.label} does not preserve class invariants")
        return perm

    def to_dict(self) -> dict:
        cd = self.classes
        reps = self.elements[cd.representatives]
        return {
            "schema_version": SCHEMA_VERSION,
            "type": self.datum.type_label,
            "p": self.p,
            "n": self.n,
            "degree": self.degree,
            "order": self.order,
            "class_count": len(cd),
            "class_sizes": cd.sizes.tolist(),
            "element_orders": cd.orders.tolist(),
            "representatives": reps.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# --- constructors --------------------------------------------------------------------


def _elementary(F: FqContext, size: int, entries: Sequence[tuple[int, int, int]]) -> np.ndarray:
    m = np.eye(size, dtype=np.int64)
    for i, j, v in entries:
        m[i, j] = F.add(int(m[i, j]), v)
    return m


def _symplectic_form(F: FqContext, r: int) -> np.ndarray:
    size = 2 * r
    form = np.zeros((size, size), dtype=np.int64)
    for i in range(size):
        form[i, size - 1 - i] = 1 if i < r else F.neg(1)
    return form


def build_group(d: RootDatum, q: int | None = None, *, p: int | None = None, n: int | None = None,
                max_order: int | None = None) -> MatGroup:
    """``SL_{r+1}(q)`` for type A_r, ``Sp_{2r}(q)`` for type C_r."""
    from .finite_field import prime_power

    if q is not None:
        p, n = prime_power(q)
    if p is None or n is None:
        raise ValueError("give q or both p and n")
    F = field_context(p, n)
    r = d.rank
    if d.family == "A":
        size = r + 1

        def make(i):
            def root(t, negative=False):
                return _elementary(F, size, [(i + 1, i, t)] if negative else [(i, i + 1, t)])
            return root

        builders = [make(i) for i in range(r)]
        form = None
    elif d.family == "C":
        size = 2 * r
        form = _symplectic_form(F, r)
        mirror = lambda i: size - 1 - i  # noqa: E731

        def make(i):
            def root(t, negative=False):
                if i == r - 1:
                    a, b = (r, r - 1) if negative else (r - 1, r)
                    return _elementary(F, size, [(a, b, t)])
                a, b = (i + 1, i) if negative else (i, i + 1)
                for sign in (1, F.neg(1)):
                    m = _elementary(F, size, [(a, b, t), (mirror(b), mirror(a), F.mul(sign, t))])
                    if np.array_equal(mat_transpose_form(F, m, form), form):
                        return m
                raise AssertionError("no symplectic sign choice")  # pragma: no cover
            return root

        builders = [make(i) for i in range(r)]
    else:
        raise UnsupportedGroupError(
            f"no matrix model for type {d.type_label}; only A_n (SL) and C_n (Sp) are built"
        )
    gens = []
    for b in builders:
        for t in F.basis():
            gens.append(b(t))
            gens.append(b(t, True))
    return MatGroup(d, p, n, size, gens, builders, form, max_order=max_order)
