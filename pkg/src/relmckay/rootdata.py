"""Root data of simple simply connected groups.

Simple roots are numbered as in Bourbaki's tables (0-based here). The
simply connected character lattice is the weight lattice, so simple root
``i`` has fundamental-weight coordinates ``cartan[i]`` with
``cartan[i][j] = <alpha_i, alpha_j^vee>``. For type C the last simple root is
the long one; in C2 it is the row ``(-2, 2)``.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .lattice import FiniteAbelianGroup, Matrix, cokernel_torsion, determinant

SCHEMA_VERSION = 1

_LABEL = re.compile(r"^([A-G])_?(\d+)$")
_EXCEPTIONAL = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


class UnsupportedTypeError(ValueError):
    pass


def _chain(n: int) -> list[list[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def cartan_matrix(family: str, n: int) -> list[list[int]]:
    """Cartan matrix ``a[i][j] = <alpha_i, alpha_j^vee>`` for a Bourbaki-labelled type."""
    if family == "A" and n >= 1:
        return _chain(n)
    if family == "B" and n >= 2:
        a = _chain(n)
        a[n - 2][n - 1] = -2
        return a
    if family == "C" and n >= 2:
        a = _chain(n)
        a[n - 1][n - 2] = -2
        return a
    if family == "D" and n >= 4:
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    if family == "E" and n in (6, 7, 8):
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        edges = [(0, 2), (1, 3), (2, 3)] + [(k, k + 1) for k in range(3, n - 1)]
        for i, j in edges:
            a[i][j] = a[j][i] = -1
        return a
    if family == "F" and n == 4:
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    if family == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise UnsupportedTypeError(f"unsupported type {family}{n}")


def parse_type_label(label: str) -> tuple[str, int]:
    m = _LABEL.match(label.strip().upper())
    if not m:
        raise UnsupportedTypeError(f"cannot parse type label {label!r}")
    family, n = m.group(1), int(m.group(2))
    if family in _EXCEPTIONAL and n not in _EXCEPTIONAL[family]:
        raise UnsupportedTypeError(f"unsupported type {label!r}")
    cartan_matrix(family, n)
    return family, n


@dataclass(frozen=True)
class RootDatum:
    """Simply connected root datum of a simple group."""

    type_label: str
    rank: int
    cartan: Matrix

    @property
    def family(self) -> str:
        return self.type_label[0]

    @property
    def simple_roots(self) -> tuple[int, ...]:
        return tuple(range(self.rank))

    def rows(self, J: Iterable[int]) -> list[tuple[int, ...]]:
        """Fundamental-weight coordinates of the simple roots in ``J``."""
        return [self.cartan[i] for i in sorted(J)]

    @cached_property
    def positive_roots(self) -> "PositiveRootSet":
        return positive_roots(self)

    def to_json(self) -> str:
        return json.dumps(
            {
                "schema_version": SCHEMA_VERSION,
                "type": self.type_label,
                "rank": self.rank,
                "cartan": [list(r) for r in self.cartan],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "RootDatum":
        doc = json.loads(text)
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unknown schema version {doc.get('schema_version')!r}")
        datum = build_root_datum(doc["type"])
        if [list(r) for r in datum.cartan] != doc["cartan"] or datum.rank != doc["rank"]:
            raise ValueError("serialized Cartan matrix does not match the type label")
        return datum


def _symmetrizable_positive_definite(a: list[list[int]]) -> bool:
    """Leading principal minors of the symmetrized matrix are positive."""
    n = len(a)
    # d_i a_ij = d_j a_ji with d_i proportional to squared root lengths
    frontier = [0]
    dd = [Fraction(0)] * n
    dd[0] = Fraction(1)
    seen = {0}
    while frontier:
        i = frontier.pop()
        for j in range(n):
            if a[i][j] and j not in seen:
                dd[j] = dd[i] * a[i][j] / a[j][i]
                seen.add(j)
                frontier.append(j)
    if len(seen) != n:
        return False
    lcm = math.lcm(*(x.denominator for x in dd))
    d = [int(x * lcm) for x in dd]
    sym = [[d[i] * a[i][j] for j in range(n)] for i in range(n)]
    if any(sym[i][j] != sym[j][i] for i in range(n) for j in range(n)):
        return False
    return all(determinant(tuple(tuple(r[:k]) for r in sym[:k])) > 0 for k in range(1, n + 1))


def build_root_datum(type_label: str) -> RootDatum:
    family, n = parse_type_label(type_label)
    a = cartan_matrix(family, n)
    if any(a[i][i] != 2 for i in range(n)) or any(
        a[i][j] > 0 for i in range(n) for j in range(n) if i != j
    ):
        raise AssertionError("malformed Cartan matrix")  # pragma: no cover
    if not _symmetrizable_positive_definite(a):
        raise AssertionError("Cartan matrix is not of finite type")  # pragma: no cover
    return RootDatum(type_label=f"{family}{n}", rank=n, cartan=tuple(tuple(r) for r in a))


@dataclass(frozen=True)
class PositiveRootSet:
    """Positive roots as coefficient vectors over the simple roots."""

    roots: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def highest_root(self) -> tuple[int, ...]:
        return max(self.roots, key=lambda r: (sum(r), r))

    def heights(self) -> list[int]:
        return [sum(r) for r in self.roots]


def positive_roots(d: RootDatum) -> PositiveRootSet:
    """Closure of the simple roots under simple reflections, positive part."""
    n = d.rank
    a = d.cartan
    simple = [tuple(int(i == k) for k in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for beta in frontier:
            for i in range(n):
                # <beta, alpha_i^vee> = sum_k beta_k <alpha_k, alpha_i^vee>
                c = sum(beta[k] * a[k][i] for k in range(n))
                image = tuple(beta[k] - (c if k == i else 0) for k in range(n))
                if all(x >= 0 for x in image) and any(image) and image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    return PositiveRootSet(tuple(sorted(found, key=lambda r: (sum(r), r))))


def exponents(d: RootDatum) -> list[int]:
    """Exponents from the height distribution of positive roots (dual partition)."""
    heights = d.positive_roots.heights()
    counts = [heights.count(h) for h in range(1, max(heights) + 1)]
    # exponent multiset: for each k, the number of exponents >= k is counts[k-1]
    out = []
    for k in range(len(counts)):
        nxt = counts[k + 1] if k + 1 < len(counts) else 0
        out += [k + 1] * (counts[k] - nxt)
    return sorted(out)


def center(d: RootDatum) -> FiniteAbelianGroup:
    """Center of the simply connected group: torsion of ``X(T)/<Delta>``."""
    return cokernel_torsion(d.cartan)


def levi_center_component_group(d: RootDatum, J: Iterable[int]) -> FiniteAbelianGroup:
    """Component group ``H_J`` of the center of the standard Levi ``L_J``."""
    J = sorted(set(J))
    if any(j < 0 or j >= d.rank for j in J):
        raise ValueError(f"J={J} is not a subset of the simple roots of {d.type_label}")
    return cokernel_torsion(d.rows(J), d.rank)


def _check_prime(p: int) -> None:
    if p < 2 or any(p % k == 0 for k in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")


def is_good_prime(d: RootDatum, p: int) -> bool:
    _check_prime(p)
    return all(c % p for c in d.positive_roots.highest_root)


def is_nonsingular_prime(d: RootDatum, p: int) -> bool:
    _check_prime(p)
    if p == 2 and d.family in "BCFG":
        return False
    if p == 3 and d.family == "G":
        return False
    return True


def group_order(d: RootDatum, q: int) -> int:
    """``|G^F|`` for the split simply connected group over ``F_q``."""
    if q < 2:
        raise ValueError("q must be at least 2")
    return q ** len(d.positive_roots) * math.prod(q ** (e + 1) - 1 for e in exponents(d))
