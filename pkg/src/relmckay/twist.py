"""Split Frobenius maps acting on tori, centers and stabilizer tori.

Torus elements over ``F_q`` are written in coroot coordinates: the vector
``a`` in ``(Z/(q-1))^r`` stands for ``prod_k alpha_k^vee(zeta^a_k)`` where
``zeta`` generates ``F_q^x``. Simple root ``i`` takes the value
``zeta^(sum_k cartan[i][k] a_k)`` on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .finite_field import is_prime
from .lattice import (
    AbelianEndomorphism,
    FiniteAbelianGroup,
    ModularKernel,
    fixed_point_order,
    kernel_mod,
    lang_quotient,
    norm_endomorphism,
)
from .rootdata import RootDatum, center, levi_center_component_group


@dataclass(frozen=True)
class SplitFrobenius:
    """``F_j = F_0^j`` on a group defined over ``F_q``, ``q = p^n``; ``j = n`` is ``F`` itself."""

    p: int
    n: int
    j: int | None = None

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.j is None:
            object.__setattr__(self, "j", self.n)
        if self.j < 1 or self.n % self.j:
            raise ValueError(f"j={self.j} must divide n={self.n}")

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def level(self) -> int:
        """``q_j = p^j``, the field size fixed by ``F_j``."""
        return self.p**self.j

    @property
    def m(self) -> int:
        return self.n // self.j


def torus_fixed_order(d: RootDatum, fr: SplitFrobenius) -> int:
    return (fr.level - 1) ** d.rank


@dataclass(frozen=True)
class StabilizerTorus:
    """``T_J = T_J° x H_J``, the common stabilizer of the regular elements of ``U_J``.

    ``center_embedding`` lists, for each generator of the exponent-``e``
    torsion of ``Z``, its coordinates in the Smith-adapted generators of
    ``T_J[e]``; the first ``|J|`` coordinates live in ``H_J``, the rest in
    ``T_J°``.
    """

    J: tuple[int, ...]
    free_rank: int
    component_group: FiniteAbelianGroup
    center_embedding: tuple[tuple[int, ...], ...]
    torsion_modulus: int


def stabilizer_torus(d: RootDatum, J: Iterable[int]) -> StabilizerTorus:
    J = tuple(sorted(set(J)))
    H = levi_center_component_group(d, J)
    Z = center(d)
    e = max(Z.exponent, 1)
    zker = kernel_mod(d.cartan, d.rank, e) if e > 1 else None
    tker = kernel_mod(d.rows(J), d.rank, e) if e > 1 else None
    emb: list[tuple[int, ...]] = []
    if zker is not None:
        for g, order in zip(zker.generators, zker.orders):
            if order > 1:
                emb.append(tker.coordinates(g))
    return StabilizerTorus(
        J=J,
        free_rank=d.rank - len(J),
        component_group=H,
        center_embedding=tuple(emb),
        torsion_modulus=e,
    )


def stabilizer_fixed_order(st: StabilizerTorus, fr: SplitFrobenius) -> int:
    """``|T_J^{F_j}| = (q_j - 1)^{free rank} * |H_J^{F_j}|``."""
    phi = AbelianEndomorphism.multiplication(st.component_group, fr.level)
    return (fr.level - 1) ** st.free_rank * fixed_point_order(phi)


def component_fixed_order(d: RootDatum, J: Iterable[int], fr: SplitFrobenius) -> int:
    """``|H_J^{F_j}|``."""
    H = levi_center_component_group(d, J)
    return fixed_point_order(AbelianEndomorphism.multiplication(H, fr.level))


def center_fixed_order(d: RootDatum, fr: SplitFrobenius) -> int:
    return fixed_point_order(AbelianEndomorphism.multiplication(center(d), fr.level))


def h1_center(d: RootDatum, fr: SplitFrobenius) -> FiniteAbelianGroup:
    """``H^1(F_j, Z) = Z / (F_j - 1) Z``."""
    return lang_quotient(AbelianEndomorphism.multiplication(center(d), fr.level))


def fixed_points_in_torus(d: RootDatum, J: Iterable[int], q: int) -> ModularKernel:
    """``T_J^F`` inside ``(Z/(q-1))^r`` (Smith-adapted generators)."""
    return kernel_mod(d.rows(J), d.rank, q - 1)


def center_fixed_points(d: RootDatum, q: int) -> ModularKernel:
    """``Z^F`` inside ``(Z/(q-1))^r``."""
    return kernel_mod(d.cartan, d.rank, q - 1)


class NormType(str, Enum):
    TRIVIAL = "trivial"
    SURJECTIVE = "surjective"


class NormClassificationError(ValueError):
    pass


def norm_map_classification(d: RootDatum, p: int, n: int, j: int) -> NormType:
    """Classify ``N : Z^F -> Z^{F_j}``, ``F = F_j^m``, as trivial or surjective.

    A trivial target counts as surjective.
    """
    fr = SplitFrobenius(p, n, j)
    Z = center(d)
    if Z.order > 1 and not is_prime(Z.order):
        raise NormClassificationError(
            f"center of {d.type_label} has order {Z.order}, which is neither 1 nor prime"
        )
    phi_j = AbelianEndomorphism.multiplication(Z, fr.level)
    phi = phi_j.power(fr.m)
    norm = norm_endomorphism(phi_j, fr.m)
    source = [h for h in Z.elements() if phi(h) == h]
    target = {h for h in Z.elements() if phi_j(h) == h}
    image = {norm(h) for h in source}
    if not image <= target:  # pragma: no cover - norm lands in F_j-fixed points
        raise ArithmeticError("norm image is not F_j-stable")
    if image == target:
        return NormType.SURJECTIVE
    if len(image) == 1:
        return NormType.TRIVIAL
    raise NormClassificationError("norm map is neither trivial nor surjective")  # pragma: no cover


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def multiplicative_inverse(a: int, m: int) -> int:
    if m == 1:
        return 0
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return pow(a, -1, m)
