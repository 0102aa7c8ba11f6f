"""Exact character tables by the Dixon-Schneider method.

Central characters ``omega_chi(K_i) = h_i chi(g_i) / chi(1)`` are the common
eigenvectors of the class-multiplication matrices, computed over ``F_l`` for
a prime ``l = 1 mod e``. Character values are then lifted through the power
maps: the eigenvalue multiplicities of ``rho(g)`` are recovered by a discrete
Fourier transform in ``F_l`` and are honest integers.

A value is stored twice, both exactly:

* ``mults[i]`` has shape ``(rows, o_i)`` where ``o_i`` is the element order
  of class ``i``; ``chi_a(g_i) = sum_u mults[i][a, u] * exp(2 pi i u / o_i)``.
* ``values[a, i]`` holds the coefficients in the power basis of
  ``Z[x] / Phi_e(x)``, ``x = exp(2 pi i / e)``.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import sympy

from .finite_field import is_prime

SCHEMA_VERSION = 1


class SplittingError(RuntimeError):
    """Class-multiplication eigenspaces failed to split into lines."""


class InvalidTableError(ValueError):
    pass


# --- linear algebra over F_l ------------------------------------------------------


def _rref(a: np.ndarray, ell: int) -> tuple[np.ndarray, list[int]]:
    m = a.copy() % ell
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if not len(nz):
            continue
        piv = r + nz[0]
        m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, ell)) % ell
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if len(others):
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % ell
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace_mod(a: np.ndarray, ell: int) -> np.ndarray:
    """Columns spanning ``{v : a v = 0}`` over F_l."""
    cols = a.shape[1]
    red, pivots = _rref(a, ell)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, pc in enumerate(pivots):
            basis[pc, k] = (-red[row, f]) % ell
    return basis


def inverse_mod(a: np.ndarray, ell: int) -> np.ndarray:
    size = a.shape[0]
    red, pivots = _rref(np.concatenate([a, np.eye(size, dtype=np.int64)], axis=1), ell)
    if pivots[:size] != list(range(size)):
        raise ZeroDivisionError("matrix is singular modulo l")
    return red[:, size:]


def charpoly_mod(a: np.ndarray, ell: int) -> np.ndarray:
    """Characteristic polynomial (low degree first) via Hessenberg reduction."""
    h = a.copy() % ell
    size = h.shape[0]
    for j in range(size - 2):
        nz = np.nonzero(h[j + 1 :, j])[0]
        if not len(nz):
            continue
        i = j + 1 + nz[0]
        if i != j + 1:
            h[[i, j + 1]] = h[[j + 1, i]]
            h[:, [i, j + 1]] = h[:, [j + 1, i]]
        inv = pow(int(h[j + 1, j]), -1, ell)
        for i in range(j + 2, size):
            u = (int(h[i, j]) * inv) % ell
            if u:
                h[i] = (h[i] - u * h[j + 1]) % ell
                h[:, j + 1] = (h[:, j + 1] + u * h[:, i]) % ell
    polys = [np.array([1], dtype=np.int64)]
    for m in range(size):
        nxt = np.zeros(m + 2, dtype=np.int64)
        nxt[1:] = polys[m]
        nxt[: m + 1] = (nxt[: m + 1] - int(h[m, m]) * polys[m]) % ell
        prod = 1
        for i in range(m - 1, -1, -1):
            prod = (prod * int(h[i + 1, i])) % ell
            if not prod:
                break
            coeff = (int(h[i, m]) * prod) % ell
            nxt[: i + 1] = (nxt[: i + 1] - coeff * polys[i]) % ell
        polys.append(nxt % ell)
    return polys[size]


def roots_mod(poly: np.ndarray, ell: int) -> list[int]:
    xs = np.arange(ell, dtype=np.int64)
    acc = np.zeros(ell, dtype=np.int64)
    for c in poly[::-1]:
        acc = (acc * xs + int(c)) % ell
    return np.nonzero(acc == 0)[0].tolist()


def _primitive_root(ell: int) -> int:
    factors = sympy.factorint(ell - 1)
    for g in range(2, ell):
        if all(pow(g, (ell - 1) // f, ell) != 1 for f in factors):
            return g
    raise AssertionError("no primitive root")  # pragma: no cover


def choose_prime(exponent: int, group_order: int) -> int:
    """Least prime ``l = 1 mod e`` with ``l > 2 sqrt(|G|)``."""
    ell = exponent + 1
    while not (is_prime(ell) and ell * ell > 4 * group_order):
        ell += exponent
    return ell


# --- cyclotomic arithmetic ----------------------------------------------------------


@lru_cache(maxsize=16)
def cyclotomic_reduction(e: int) -> np.ndarray:
    """Row ``k`` holds ``x^k mod Phi_e`` in the power basis."""
    x = sympy.Symbol("x")
    phi = [int(c) for c in sympy.Poly(sympy.cyclotomic_poly(e, x), x).all_coeffs()[::-1]]
    deg = len(phi) - 1
    out = np.zeros((e, deg), dtype=np.int64)
    cur = np.zeros(deg, dtype=np.int64)
    cur[0] = 1 if deg else 0
    for k in range(e):
        out[k] = cur
        lead = cur[-1]
        cur = np.concatenate([[0], cur[:-1]]) - lead * np.array(phi[:-1], dtype=np.int64)
    out.setflags(write=False)
    return out


# --- the table ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ClassAlgebraData:
    """What Dixon-Schneider needs from a group: class data and structure constants."""

    order: int
    sizes: np.ndarray
    element_orders: np.ndarray
    inverse_classes: np.ndarray
    power_map: Callable[[int], np.ndarray]
    multiplication_counts: Callable[[int], np.ndarray]


@dataclass(frozen=True, eq=False)
class CharacterTable:
    label: str
    group_order: int
    class_sizes: np.ndarray
    element_orders: np.ndarray
    inverse_classes: np.ndarray
    exponent: int
    mults: tuple[np.ndarray, ...]
    values: np.ndarray
    degrees: np.ndarray
    center_classes: tuple[int, ...] = ()
    meta: dict = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return len(self.degrees)

    @property
    def class_count(self) -> int:
        return len(self.class_sizes)

    def value(self, row: int, cls: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.values[row, cls])

    def row_key(self, row: int) -> tuple:
        return tuple(self.values[row].ravel().tolist())

    # orthogonality ------------------------------------------------------------

    def gram(self) -> np.ndarray:
        """``|G| <chi_a, chi_b>`` as exact cyclotomic coefficient vectors, shape (k, k, phi(e))."""
        e, k = self.exponent, self.rows
        total = np.zeros((k, k, e), dtype=np.int64)
        for i in range(self.class_count):
            o = int(self.element_orders[i])
            a = self.mults[i]
            b = self.mults[int(self.inverse_classes[i])]
            # circulant of b: shifted[bb, w, u] = b[bb, (w - u) % o]
            idx = (np.arange(o)[:, None] - np.arange(o)[None, :]) % o
            shifted = b[:, idx]
            folded = np.einsum("au,bwu->abw", a, shifted)
            total[:, :, :: e // o] += int(self.class_sizes[i]) * folded
        return total @ cyclotomic_reduction(e)

    def column_gram(self) -> np.ndarray:
        """``sum_chi chi(g_i) conj(chi(g_j))`` exactly, shape (k, k, phi(e))."""
        e, k = self.exponent, self.class_count
        red = cyclotomic_reduction(e)
        out = np.zeros((k, k, red.shape[1]), dtype=np.int64)
        for i in range(k):
            oi = int(self.element_orders[i])
            for j in range(k):
                js = int(self.inverse_classes[j])
                oj = int(self.element_orders[js])
                prod = self.mults[i].T @ self.mults[js]
                idx = (np.arange(oi)[:, None] * (e // oi) + np.arange(oj)[None, :] * (e // oj)) % e
                vec = np.zeros(e, dtype=np.int64)
                np.add.at(vec, idx.ravel(), prod.ravel())
                out[i, j] = vec @ red
        return out

    def check_orthogonality(self) -> None:
        """Raise :class:`InvalidTableError` unless both orthogonality relations hold exactly."""
        k = self.rows
        if k != self.class_count:
            raise InvalidTableError("row count differs from class count")
        phi = self.values.shape[2]
        unit = np.zeros(phi, dtype=np.int64)
        unit[0] = 1
        g = self.gram()
        expect = np.zeros_like(g)
        for a in range(k):
            expect[a, a] = self.group_order * unit
        if not np.array_equal(g, expect):
            raise InvalidTableError("row orthogonality fails")
        c = self.column_gram()
        expect = np.zeros_like(c)
        for i in range(k):
            expect[i, i] = (self.group_order // int(self.class_sizes[i])) * unit
        if not np.array_equal(c, expect):
            raise InvalidTableError("column orthogonality fails")
        if int((self.degrees.astype(object) ** 2).sum()) != self.group_order:
            raise InvalidTableError("sum of squared degrees differs from the group order")
        if any(self.group_order % int(d) for d in self.degrees):
            raise InvalidTableError("a degree does not divide the group order")

    # export ------------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "label": self.label,
            "group_order": self.group_order,
            "exponent": self.exponent,
            "class_sizes": self.class_sizes.tolist(),
            "element_orders": self.element_orders.tolist(),
            "inverse_classes": self.inverse_classes.tolist(),
            "center_classes": list(self.center_classes),
            "degrees": self.degrees.tolist(),
            "values": self.values.tolist(),
            "mults": [m.tolist() for m in self.mults],
            "meta": self.meta,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict) -> "CharacterTable":
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unknown schema version {doc.get('schema_version')!r}")
        values = np.array(doc["values"], dtype=np.int64)
        k = len(doc["degrees"])
        if values.size == 0:
            values = values.reshape(k, k, 1)
        return cls(
            label=doc["label"],
            group_order=int(doc["group_order"]),
            class_sizes=np.array(doc["class_sizes"], dtype=np.int64),
            element_orders=np.array(doc["element_orders"], dtype=np.int64),
            inverse_classes=np.array(doc["inverse_classes"], dtype=np.int64),
            exponent=int(doc["exponent"]),
            mults=tuple(np.array(m, dtype=np.int64).reshape(k, -1) for m in doc["mults"]),
            values=values,
            degrees=np.array(doc["degrees"], dtype=np.int64),
            center_classes=tuple(doc.get("center_classes", ())),
            meta=doc.get("meta", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "CharacterTable":
        return cls.from_dict(json.loads(text))

    def to_tsv(self) -> str:
        lines = [
            f"# schema_version\t{SCHEMA_VERSION}",
            f"# group\t{self.label}\torder\t{self.group_order}\texponent\t{self.exponent}",
            "# values are coefficient tuples in the power basis of Z[x]/Phi_e(x), x = exp(2 pi i/e)",
            "row\tdegree\t" + "\t".join(
                f"C{i}(o={int(o)},h={int(h)})"
                for i, (o, h) in enumerate(zip(self.element_orders, self.class_sizes))
            ),
        ]
        for a in range(self.rows):
            cells = ["(" + ",".join(str(int(v)) for v in self.values[a, i]) + ")" for i in range(self.class_count)]
            lines.append(f"{a}\t{int(self.degrees[a])}\t" + "\t".join(cells))
        return "\n".join(lines) + "\n"


# --- the algorithm -----------------------------------------------------------------


def _common_eigenvectors(matrices: Sequence[np.ndarray], ell: int) -> list[np.ndarray]:
    size = matrices[0].shape[0]
    spaces = [np.eye(size, dtype=np.int64)]
    for m in matrices:
        if all(s.shape[1] == 1 for s in spaces):
            break
        nxt = []
        for basis in spaces:
            dim = basis.shape[1]
            if dim == 1:
                nxt.append(basis)
                continue
            _, piv_rows = _rref(basis.T, ell)
            left = inverse_mod(basis[piv_rows], ell)
            restricted = (left @ ((m @ basis) % ell)[piv_rows]) % ell
            pieces = []
            for lam in roots_mod(charpoly_mod(restricted, ell), ell):
                ns = nullspace_mod((restricted - lam * np.eye(dim, dtype=np.int64)) % ell, ell)
                pieces.append((basis @ ns) % ell)
            if sum(p.shape[1] for p in pieces) != dim:
                raise SplittingError("class matrix is not diagonalizable on an invariant subspace")
            nxt.extend(pieces)
        spaces = nxt
    if any(s.shape[1] != 1 for s in spaces):
        raise SplittingError("class matrices do not separate the characters")
    return [s[:, 0] for s in spaces]


def dixon_schneider_from_data(data: ClassAlgebraData, label: str = "", center_classes: Sequence[int] = ()) -> CharacterTable:
    k = len(data.sizes)
    sizes = np.asarray(data.sizes, dtype=np.int64)
    orders = np.asarray(data.element_orders, dtype=np.int64)
    inv = np.asarray(data.inverse_classes, dtype=np.int64)
    e = int(np.lcm.reduce(orders)) if k else 1
    ell = choose_prime(e, data.order)
    z = pow(_primitive_root(ell), (ell - 1) // e, ell)

    # structure constants a_ijk = #{x in C_i : x^-1 z_k in C_j}, stored as mats[i][j, k]
    counts = np.stack([data.multiplication_counts(kk) for kk in range(k)])  # [k][a, b]
    mats = [counts[:, inv[i], :].T.copy() % ell for i in range(k)]
    order_idx = sorted(range(k), key=lambda i: (-int(sizes[i]), i))
    vectors = _common_eigenvectors([mats[i] for i in order_idx], ell)

    powmaps = np.stack([np.asarray(data.power_map(t), dtype=np.int64) for t in range(e)])
    sizes_inv = np.array([pow(int(h), -1, ell) for h in sizes], dtype=np.int64)
    red = cyclotomic_reduction(e)
    mult_rows: list[list[np.ndarray]] = []
    degrees = []
    for vec in vectors:
        omega = (vec * pow(int(vec[0]), -1, ell)) % ell
        norm = sum(int(omega[j]) * int(omega[inv[j]]) * int(sizes_inv[j]) for j in range(k)) % ell
        deg_sq = (data.order * pow(norm, -1, ell)) % ell
        deg = next((d for d in range(1, math.isqrt(data.order) + 1) if (d * d) % ell == deg_sq), None)
        if deg is None:
            raise SplittingError("degree is not recoverable modulo l")
        chi = (deg * omega % ell) * sizes_inv % ell  # chi(g_i) mod l
        row = []
        for i in range(k):
            o = int(orders[i])
            zo = pow(z, e // o, ell)
            vals = chi[powmaps[:o, i]]
            oinv = pow(o, -1, ell)
            m = []
            for u in range(o):
                acc = sum(int(vals[t]) * pow(zo, (-u * t) % o, ell) for t in range(o)) % ell
                m.append((acc * oinv) % ell)
            m = np.array(m, dtype=np.int64)
            if m.sum() != deg:
                raise SplittingError("eigenvalue multiplicities do not sum to the degree")
            row.append(m)
        mult_rows.append(row)
        degrees.append(deg)

    values = np.zeros((k, k, red.shape[1]), dtype=np.int64)
    for a, row in enumerate(mult_rows):
        for i, m in enumerate(row):
            o = len(m)
            values[a, i] = m @ red[np.arange(o) * (e // o)]
    keys = [(degrees[a], tuple(values[a].ravel().tolist())) for a in range(k)]
    perm = sorted(range(k), key=lambda a: keys[a])
    mults = tuple(np.stack([mult_rows[a][i] for a in perm]) for i in range(k))
    table = CharacterTable(
        label=label,
        group_order=data.order,
        class_sizes=sizes,
        element_orders=orders,
        inverse_classes=inv,
        exponent=e,
        mults=mults,
        values=values[perm],
        degrees=np.array([degrees[a] for a in perm], dtype=np.int64),
        center_classes=tuple(int(c) for c in center_classes),
        meta={"prime": ell, "root": z},
    )
    return table


def trivial_group_data() -> ClassAlgebraData:
    one = np.array([1], dtype=np.int64)
    return ClassAlgebraData(
        order=1,
        sizes=one,
        element_orders=one,
        inverse_classes=np.array([0], dtype=np.int64),
        power_map=lambda t: np.array([0], dtype=np.int64),
        multiplication_counts=lambda k: np.array([[1]], dtype=np.int64),
    )


def class_algebra_data(g) -> ClassAlgebraData:
    """Adapter from :class:`relmckay.matgrp.MatGroup`."""
    cd = g.classes
    e = g.exponent
    cache = {}

    def power_map(t: int) -> np.ndarray:
        t %= e
        if t not in cache:
            cache[t] = g.power_map(t)
        return cache[t]

    return ClassAlgebraData(
        order=g.order,
        sizes=cd.sizes,
        element_orders=cd.orders,
        inverse_classes=g.inverse_classes,
        power_map=power_map,
        multiplication_counts=g.class_multiplication_counts,
    )


def center_generator_classes(g) -> tuple[int, ...]:
    """Classes of the Z^F generators, in the torus coordinates of :mod:`relmckay.twist`."""
    from .twist import center_fixed_points

    pts = center_fixed_points(g.datum, g.q)
    gens = [gen for gen, o in zip(pts.generators, pts.orders) if o > 1]
    if not gens:
        return ()
    mats = np.stack([g.torus_element(gen) for gen in gens])
    return tuple(int(c) for c in g.class_of_matrices(mats))


def dixon_schneider(g) -> CharacterTable:
    table = dixon_schneider_from_data(
        class_algebra_data(g),
        label=f"{g.datum.type_label}({g.q})",
        center_classes=center_generator_classes(g),
    )
    return table


# --- queries ------------------------------------------------------------------------


def p_prime_rows(t: CharacterTable, p: int) -> list[int]:
    return [a for a in range(t.rows) if int(t.degrees[a]) % p]


def central_character(t: CharacterTable, row: int) -> tuple[int, ...]:
    """``nu`` with ``chi(z) = chi(1) exp(2 pi i nu / o_z)`` on each center generator ``z``."""
    out = []
    for c in t.center_classes:
        m = t.mults[c][row]
        support = np.nonzero(m)[0]
        if len(support) != 1 or int(m[support[0]]) != int(t.degrees[row]):
            raise InvalidTableError(f"class {c} is not central for row {row}")
        out.append(int(support[0]))
    return tuple(out)


def automorphism_action(t: CharacterTable, class_perm: Sequence[int]) -> list[int]:
    """Row permutation ``pi`` with ``chi_{pi(i)}(C) = chi_i(sigma^-1(C))``.

    ``class_perm[c]`` is the class of ``sigma(x)`` for ``x`` in ``c``.
    """
    class_perm = np.asarray(class_perm, dtype=np.int64)
    if sorted(class_perm.tolist()) != list(range(t.class_count)):
        raise InvalidTableError("automorphism does not permute the classes")
    inv = np.empty_like(class_perm)
    inv[class_perm] = np.arange(len(class_perm))
    index = {t.row_key(a): a for a in range(t.rows)}
    out = []
    for a in range(t.rows):
        moved = t.values[a][inv]
        key = tuple(moved.ravel().tolist())
        if key not in index:
            raise InvalidTableError("image of a character is not a row of the table")
        out.append(index[key])
    return out
