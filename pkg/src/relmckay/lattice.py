"""Exact integer linear algebra and finite abelian groups.

Matrices are tuples of tuples of Python ints, so no intermediate value can
overflow. A finite abelian group is stored by its invariant factors
``d_1 | d_2 | ... | d_k`` and its elements are coordinate vectors ``h`` with
``0 <= h_i < d_i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

Matrix = tuple[tuple[int, ...], ...]
CharacterIndex = tuple[int, ...]


def as_matrix(rows: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    if ncols is not None and any(len(row) != ncols for row in mat):
        raise ValueError("ragged matrix")
    if mat and len({len(row) for row in mat}) != 1:
        raise ValueError("ragged matrix")
    return mat


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def shape(m: Matrix, ncols: int = 0) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else ncols)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return ()
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise ValueError("shape mismatch in matmul")
    cols = list(zip(*b)) if b else []
    if not cols:
        return tuple(() for _ in a)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def determinant(m: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ source @ V == D`` with ``U``, ``V`` unimodular."""

    U: Matrix
    D: Matrix
    V: Matrix
    source: Matrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return tuple(self.D[i][i] for i in range(k))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> SmithDecomposition:
    """Smith normal form with explicit unimodular transforms.

    The pivot is always a nonzero entry of least absolute value in the
    remaining block. ``ncols`` is only needed for a matrix with no rows.
    """
    src = as_matrix(m)
    nrows = len(src)
    if ncols is None:
        ncols = len(src[0]) if src else 0
    a = [list(row) for row in src]
    u = [list(row) for row in identity(nrows)]
    v = [list(row) for row in identity(ncols)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst: int, src_row: int, c: int) -> None:
        if c:
            a[dst] = [x + c * y for x, y in zip(a[dst], a[src_row])]
            u[dst] = [x + c * y for x, y in zip(u[dst], u[src_row])]

    def add_col(dst: int, src_col: int, c: int) -> None:
        if c:
            for row in a:
                row[dst] += c * row[src_col]
            for row in v:
                row[dst] += c * row[src_col]

    for t in range(min(nrows, ncols)):
        while True:
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, nrows):
                add_row(i, t, -(a[i][t] // piv))
                dirty |= a[i][t] != 0
            for j in range(t + 1, ncols):
                add_col(j, t, -(a[t][j] // piv))
                dirty |= a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < nrows and t < ncols and a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        if all(a[i][j] == 0 for i in range(t, nrows) for j in range(t, ncols)):
            break

    return SmithDecomposition(
        U=as_matrix(u) if nrows else (),
        D=as_matrix(a) if nrows else (),
        V=as_matrix(v) if ncols else (),
        source=src,
    )


def invert_unimodular(m: Matrix) -> Matrix:
    """Exact inverse of a unimodular matrix."""
    n = len(m)
    dec = smith_normal_form(m)
    if any(x != 1 for x in dec.diagonal) or len(dec.diagonal) != n:
        raise ValueError("matrix is not unimodular")
    # D = U M V = I  =>  M^{-1} = V U
    return matmul(dec.V, dec.U)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group ``Z/d_1 x ... x Z/d_k`` with ``d_i | d_{i+1}``."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)
        if any(d < 2 for d in factors):
            raise ValueError(f"invariant factors must be >= 2, got {factors}")
        if any(b % a for a, b in zip(factors, factors[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain: {factors}")

    @classmethod
    def from_cyclic_orders(cls, orders: Sequence[int]) -> "FiniteAbelianGroup":
        """Normalize a product of cyclic groups of arbitrary orders."""
        orders = [int(o) for o in orders if int(o) != 1]
        if any(o <= 0 for o in orders):
            raise ValueError("cyclic orders must be positive")
        if not orders:
            return cls(())
        diag = [[orders[i] if i == j else 0 for j in range(len(orders))] for i in range(len(orders))]
        return cls(tuple(d for d in smith_normal_form(diag).diagonal if d > 1))

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def reduce(self, h: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(x) % d for x, d in zip(h, self.invariant_factors))

    def add(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def scale(self, c: int, a: Sequence[int]) -> tuple[int, ...]:
        return self.reduce([c * x for x in a])

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


def cokernel_torsion(rows: Sequence[Sequence[int]], ncols: int | None = None) -> FiniteAbelianGroup:
    """Torsion subgroup of ``Z^ncols / span(rows)``."""
    dec = smith_normal_form(rows, ncols)
    return FiniteAbelianGroup(tuple(d for d in dec.diagonal if d > 1))


def _check_well_defined(factors: Sequence[int], matrix: Matrix) -> None:
    k = len(factors)
    if len(matrix) != k or any(len(row) != k for row in matrix):
        raise ValueError("endomorphism matrix has the wrong shape")
    for i in range(k):
        for j in range(k):
            if (matrix[i][j] * factors[j]) % factors[i]:
                raise ValueError(
                    f"matrix entry ({i},{j}) does not define a map Z/{factors[j]} -> Z/{factors[i]}"
                )


@dataclass(frozen=True)
class AbelianEndomorphism:
    """Endomorphism ``h -> matrix @ h`` of a finite abelian group."""

    group: FiniteAbelianGroup
    matrix: Matrix = field(default=())

    def __post_init__(self) -> None:
        k = self.group.rank
        mat = as_matrix(self.matrix) if self.matrix else identity(k)
        if k == 0:
            mat = ()
        mat = tuple(
            tuple(x % self.group.invariant_factors[i] for x in row) for i, row in enumerate(mat)
        )
        _check_well_defined(self.group.invariant_factors, mat)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def multiplication(cls, group: FiniteAbelianGroup, q: int) -> "AbelianEndomorphism":
        k = group.rank
        return cls(group, tuple(tuple(q if i == j else 0 for j in range(k)) for i in range(k)))

    @classmethod
    def identity(cls, group: FiniteAbelianGroup) -> "AbelianEndomorphism":
        return cls.multiplication(group, 1)

    def __call__(self, h: Sequence[int]) -> tuple[int, ...]:
        return self.group.reduce([sum(a * b for a, b in zip(row, h)) for row in self.matrix])

    def compose(self, other: "AbelianEndomorphism") -> "AbelianEndomorphism":
        """``self o other``."""
        if other.group != self.group:
            raise ValueError("endomorphisms of different groups")
        if not self.group.rank:
            return self
        return AbelianEndomorphism(self.group, matmul(self.matrix, other.matrix))

    def __add__(self, other: "AbelianEndomorphism") -> "AbelianEndomorphism":
        if other.group != self.group:
            raise ValueError("endomorphisms of different groups")
        return AbelianEndomorphism(
            self.group,
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.matrix, other.matrix)),
        )

    def __sub__(self, other: "AbelianEndomorphism") -> "AbelianEndomorphism":
        if other.group != self.group:
            raise ValueError("endomorphisms of different groups")
        return AbelianEndomorphism(
            self.group,
            tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.matrix, other.matrix)),
        )

    def power(self, e: int) -> "AbelianEndomorphism":
        result = AbelianEndomorphism.identity(self.group)
        base = self
        while e > 0:
            if e & 1:
                result = result.compose(base)
            base = base.compose(base)
            e >>= 1
        return result

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.matrix for x in row)

    def is_identity(self) -> bool:
        return self == AbelianEndomorphism.identity(self.group)


def _stacked(phi: AbelianEndomorphism) -> Matrix:
    """``[phi - 1 | diag(d)]`` as an integer matrix."""
    factors = phi.group.invariant_factors
    k = len(factors)
    return tuple(
        tuple(phi.matrix[i][j] - (i == j) for j in range(k))
        + tuple(factors[i] if i == j else 0 for j in range(k))
        for i in range(k)
    )


def fixed_point_order(phi: AbelianEndomorphism) -> int:
    """``|{h : phi(h) = h}|``, computed as an index of integer lattices.

    ``ker(phi - 1)`` lifts to ``L = {x in Z^k : (phi - 1) x in D Z^k}`` and
    ``|ker| = [L : D Z^k] = |H| / [Z^k : L]``.
    """
    k = phi.group.rank
    if k == 0:
        return 1
    stacked = _stacked(phi)
    dec = smith_normal_form(stacked)
    rank = dec.rank
    # integer kernel of stacked = last columns of V; project onto x-coordinates
    kernel_cols = [[dec.V[i][c] for i in range(k)] for c in range(rank, 2 * k)]
    lattice_index = math.prod(d for d in smith_normal_form(kernel_cols, k).diagonal)
    if len(kernel_cols) < k or lattice_index == 0:  # pragma: no cover - L always has full rank
        raise ArithmeticError("kernel lattice is not of full rank")
    return phi.group.order // lattice_index


def lang_quotient(phi: AbelianEndomorphism) -> FiniteAbelianGroup:
    """The quotient ``H / (phi - 1) H``."""
    if phi.group.rank == 0:
        return FiniteAbelianGroup(())
    return cokernel_torsion(_stacked(phi))


def norm_endomorphism(phi: AbelianEndomorphism, m: int) -> AbelianEndomorphism:
    """``1 + phi + ... + phi^(m-1)``."""
    if m < 1:
        raise ValueError("m must be positive")
    total = AbelianEndomorphism.identity(phi.group)
    term = total
    for _ in range(m - 1):
        term = phi.compose(term)
        total = total + term
    return total


def characters(group: FiniteAbelianGroup) -> list[CharacterIndex]:
    """All irreducible characters, as index vectors ``c`` with ``0 <= c_i < d_i``."""
    return list(group.elements())


def pairing(group: FiniteAbelianGroup, c: Sequence[int], h: Sequence[int]) -> Fraction:
    """``chi_c(h) = exp(2 pi i * pairing)``; the result lies in ``[0, 1)``."""
    total = sum(Fraction(ci * hi, d) for ci, hi, d in zip(c, h, group.invariant_factors))
    return total - math.floor(total)


def pullback(phi: AbelianEndomorphism, c: Sequence[int]) -> CharacterIndex:
    """Index of ``chi_c o phi``."""
    factors = phi.group.invariant_factors
    out = []
    for j, dj in enumerate(factors):
        val = sum(Fraction(c[i] * phi.matrix[i][j], factors[i]) for i in range(len(factors))) * dj
        if val.denominator != 1:  # pragma: no cover - excluded by well-definedness
            raise ArithmeticError("pullback is not a character")
        out.append(int(val) % dj)
    return tuple(out)


@dataclass(frozen=True)
class ModularKernel:
    """Kernel of ``M : (Z/m)^cols -> (Z/m)^rows`` in Smith-adapted coordinates.

    Cyclic slot ``i`` is generated by ``generators[i]`` and has order
    ``orders[i]``; trivial slots are kept so that slot ``i`` always matches
    column ``i`` of ``V``.
    """

    modulus: int
    orders: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    v_inverse: Matrix

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        m = self.modulus
        s = [sum(a * b for a, b in zip(row, x)) % m for row in self.v_inverse]
        out = []
        for si, order in zip(s, self.orders):
            step = m // order
            if si % step:
                raise ValueError(f"{tuple(x)} is not in the kernel")
            out.append(si // step)
        return tuple(out)

    def element(self, coords: Sequence[int]) -> tuple[int, ...]:
        m = self.modulus
        n = len(self.v_inverse)
        vec = [0] * n
        for k, g in zip(coords, self.generators):
            for i in range(n):
                vec[i] += k * g[i]
        return tuple(x % m for x in vec)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def elements(self) -> Iterator[tuple[int, ...]]:
        for coords in itertools.product(*(range(o) for o in self.orders)):
            yield self.element(coords)


def kernel_mod(rows: Sequence[Sequence[int]], ncols: int, m: int) -> ModularKernel:
    """Kernel of the integer matrix ``rows`` acting on ``(Z/m)^ncols``."""
    dec = smith_normal_form(rows, ncols)
    diag = dec.diagonal
    orders = []
    gens = []
    for i in range(ncols):
        d = diag[i] if i < len(diag) else 0
        order = math.gcd(d, m)
        orders.append(order)
        step = m // order
        gens.append(tuple((dec.V[r][i] * step) % m for r in range(ncols)))
    return ModularKernel(
        modulus=m,
        orders=tuple(orders),
        generators=tuple(gens),
        v_inverse=invert_unimodular(dec.V) if ncols else (),
    )


@dataclass(frozen=True)
class ModularCokernel:
    """Cokernel of ``M : (Z/m)^cols -> (Z/m)^rows`` in Smith-adapted coordinates."""

    modulus: int
    orders: tuple[int, ...]
    u: Matrix

    def coordinates(self, y: Sequence[int]) -> tuple[int, ...]:
        return tuple(
            sum(a * b for a, b in zip(row, y)) % order for row, order in zip(self.u, self.orders)
        )

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def classes(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(o) for o in self.orders))


def cokernel_mod(rows: Sequence[Sequence[int]], ncols: int, m: int) -> ModularCokernel:
    """Cokernel of the integer matrix ``rows`` acting ``(Z/m)^ncols -> (Z/m)^len(rows)``."""
    dec = smith_normal_form(rows, ncols)
    diag = dec.diagonal
    orders = tuple(math.gcd(diag[i] if i < len(diag) else 0, m) for i in range(len(rows)))
    return ModularCokernel(modulus=m, orders=orders, u=dec.U)
