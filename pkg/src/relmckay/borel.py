"""p'-characters of the Borel subgroup B^F of a split simply connected group.

Every irreducible character of ``B_0^F = U_1^F x| T^F`` is induced from a
character ``phi_c`` of ``U_1^F = prod_alpha X_alpha^F`` times a character
``psi`` of its stabilizer ``T_J^F``, where ``J`` is the support of ``c``.
A label is ``(J, z, psi)``:

* ``z`` is the T^F-orbit of ``c``. Writing ``c_alpha = zeta^{y_alpha}``,
  T^F moves ``y`` by the image of the rows of ``J`` in ``(Z/(q-1))^J``, so
  ``z`` is a point of that cokernel (Smith-adapted coordinates). ``z = 0``
  is the orbit of ``c = (1, ..., 1)``, which is stable under every field
  automorphism.
* ``psi`` indexes a character of ``T_J^F`` in the Smith-adapted generators
  of :func:`relmckay.twist.fixed_points_in_torus`. The first ``|J|`` slots
  span ``H_J^F``, the remaining ones ``T_J°^F``.

Automorphisms act on characters on the left, ``sigma . chi = chi o sigma^-1``.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .finite_field import FqContext, field_context
from .lattice import ModularCokernel, ModularKernel, cokernel_mod
from .rootdata import RootDatum, center
from .twist import (
    SplitFrobenius,
    center_fixed_points,
    component_fixed_order,
    fixed_points_in_torus,
    multiplicative_inverse,
)

SCHEMA_VERSION = 1


class ExcludedGroupError(ValueError):
    """The group is one of the small exceptions where ``U_0^F != [U^F, U^F]``."""


class BoundExceededError(RuntimeError):
    pass


def check_not_excluded(d: RootDatum, q: int) -> None:
    family = d.family
    if (family in "BC" and q == 2) or (family == "G" and q in (2, 3)) or (family == "F" and q == 2):
        raise ExcludedGroupError(f"{d.type_label}({q}) is excluded: U_0^F is not the derived subgroup")


@dataclass(frozen=True, order=True)
class BorelLabel:
    """``chi_{J,z,psi}``; ``J`` is a sorted tuple of simple-root indices."""

    J: tuple[int, ...]
    z: tuple[int, ...]
    psi: tuple[int, ...]

    def sort_key(self) -> tuple:
        return (len(self.J), self.J, self.z, self.psi)


@dataclass(frozen=True)
class UnipotentCharacterIndex:
    """``x_alpha(u) -> psi_1(Tr(c_alpha u))`` on ``U_1^F``; entries are F_q elements."""

    coeffs: tuple[int, ...]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)


@dataclass(frozen=True)
class DOrbit:
    J: tuple[int, ...]
    psi: tuple[int, ...]
    members: tuple[BorelLabel, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class OrbitCensus:
    """D-orbit counts over a central character: ``n1 + d * nd`` equals the per-nu count."""

    side: str
    nu: tuple[int, ...]
    d: int
    n1: int
    nd: int
    fixed: dict[int, tuple[int, int]]

    @property
    def total(self) -> int:
        return self.n1 + (self.d * self.nd if self.d > 1 else 0)

    def as_dict(self) -> dict:
        return {
            "side": self.side,
            "nu": list(self.nu),
            "d": self.d,
            "N1": self.n1,
            "Nd": self.nd,
            "fixed": {str(j): {"N1": a, "Nd": b} for j, (a, b) in sorted(self.fixed.items())},
        }


@dataclass(frozen=True)
class _Stratum:
    J: tuple[int, ...]
    torus: ModularKernel
    psi_slots: tuple[int, ...]
    psi_orders: tuple[int, ...]
    orbits: ModularCokernel
    z_slots: tuple[int, ...]
    z_orders: tuple[int, ...]

    @property
    def i(self) -> int:
        return math.prod(self.z_orders)

    @property
    def torus_order(self) -> int:
        return math.prod(self.psi_orders)

    def z_coords(self, y: Sequence[int]) -> tuple[int, ...]:
        full = self.orbits.coordinates(y)
        return tuple(full[s] for s in self.z_slots)

    def psi_coords_of(self, t: Sequence[int]) -> tuple[int, ...]:
        full = self.torus.coordinates(t)
        return tuple(full[s] for s in self.psi_slots)

    @property
    def h_slots(self) -> tuple[int, ...]:
        """Positions in ``psi`` belonging to ``H_J^F``."""
        return tuple(k for k, s in enumerate(self.psi_slots) if s < len(self.J))


class BorelParametrization:
    """All p'-characters of ``B^F`` for a datum over ``F_q``, with their symmetries."""

    def __init__(self, d: RootDatum, p: int, n: int = 1):
        self.datum = d
        self.frobenius = SplitFrobenius(p, n)
        self.p, self.n = p, n
        self.q = p**n
        self.m = self.q - 1
        check_not_excluded(d, self.q)
        self.center_points = center_fixed_points(d, self.q)
        self.center_slots = tuple(k for k, o in enumerate(self.center_points.orders) if o > 1)
        self.center_orders = tuple(self.center_points.orders[k] for k in self.center_slots)
        self.center_generators = tuple(self.center_points.generators[k] for k in self.center_slots)

    @property
    def field(self) -> FqContext:
        return field_context(self.p, self.n)

    @cached_property
    def strata(self) -> dict[tuple[int, ...], _Stratum]:
        r = self.datum.rank
        out = {}
        for size in range(r + 1):
            for J in itertools.combinations(range(r), size):
                torus = fixed_points_in_torus(self.datum, J, self.q)
                psi_slots = tuple(k for k, o in enumerate(torus.orders) if o > 1)
                orbits = cokernel_mod(self.datum.rows(J), r, self.m)
                z_slots = tuple(k for k, o in enumerate(orbits.orders) if o > 1)
                out[J] = _Stratum(
                    J=J,
                    torus=torus,
                    psi_slots=psi_slots,
                    psi_orders=tuple(torus.orders[k] for k in psi_slots),
                    orbits=orbits,
                    z_slots=z_slots,
                    z_orders=tuple(orbits.orders[k] for k in z_slots),
                )
        return out

    @property
    def center_order(self) -> int:
        return math.prod(self.center_orders)

    def central_characters(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(o) for o in self.center_orders)))

    def i_of(self, J: Iterable[int]) -> int:
        return self.strata[tuple(sorted(J))].i

    @cached_property
    def labels(self) -> tuple[BorelLabel, ...]:
        out = []
        for J, st in self.strata.items():
            for z in itertools.product(*(range(o) for o in st.z_orders)):
                for psi in itertools.product(*(range(o) for o in st.psi_orders)):
                    out.append(BorelLabel(J, z, psi))
        return tuple(sorted(out, key=BorelLabel.sort_key))

    @cached_property
    def label_index(self) -> dict[BorelLabel, int]:
        return {lab: k for k, lab in enumerate(self.labels)}

    def j_index(self, label: BorelLabel) -> int:
        """1-based position of ``z`` among the T^F-orbits of regular characters of ``U_J``."""
        st = self.strata[label.J]
        k = 0
        for zi, o in zip(label.z, st.z_orders):
            k = k * o + zi
        return k + 1

    def total(self) -> int:
        return sum(st.i * st.torus_order for st in self.strata.values())

    def contributions(self) -> list[dict]:
        fr = self.frobenius
        rows = []
        for J, st in self.strata.items():
            rows.append(
                {
                    "J": list(J),
                    "i": st.i,
                    "H_J_fixed": component_fixed_order(self.datum, J, fr),
                    "T_J_fixed": st.torus_order,
                    "contribution": st.i * st.torus_order,
                }
            )
        return rows

    # --- central characters -------------------------------------------------

    def restriction_to_center(self, label: BorelLabel) -> tuple[int, ...]:
        st = self.strata[label.J]
        out = []
        for g, order in zip(self.center_generators, self.center_orders):
            k = st.psi_coords_of(g)
            val = sum(Fraction(a * b, o) for a, b, o in zip(label.psi, k, st.psi_orders))
            val = (val * order) % order
            if val.denominator != 1:  # pragma: no cover - psi restricted to Z^F is a character of Z^F
                raise ArithmeticError("restriction is not a character of Z^F")
            out.append(int(val))
        return tuple(out)

    @cached_property
    def nu_of(self) -> dict[BorelLabel, tuple[int, ...]]:
        return {lab: self.restriction_to_center(lab) for lab in self.labels}

    def labels_over(self, nu: Sequence[int]) -> list[BorelLabel]:
        nu = tuple(nu)
        return [lab for lab in self.labels if self.nu_of[lab] == nu]

    def per_nu_count(self, nu: Sequence[int]) -> int:
        return len(self.labels_over(nu))

    # --- symmetries ---------------------------------------------------------

    def diagonal_action(self, label: BorelLabel, root_values: Sequence[int]) -> BorelLabel:
        """Conjugation by ``t`` in the connected-center torus with ``alpha_i(t) = zeta^root_values[i]``."""
        st = self.strata[label.J]
        shift = st.z_coords([root_values[i] for i in label.J])
        z = tuple((a - b) % o for a, b, o in zip(label.z, shift, st.z_orders))
        return BorelLabel(label.J, z, label.psi)

    def frobenius_action(self, label: BorelLabel, j: int) -> BorelLabel:
        """``F_j = F_0^j`` acting on the left: ``z -> p^j z`` and ``psi -> psi o F_j^-1``."""
        st = self.strata[label.J]
        pj = pow(self.p, j, self.m) if self.m > 1 else 0
        pinv = multiplicative_inverse(pj, self.m) if self.m > 1 else 0
        z = tuple((pj * a) % o for a, o in zip(label.z, st.z_orders))
        psi = tuple((pinv * a) % o for a, o in zip(label.psi, st.psi_orders))
        return BorelLabel(label.J, z, psi)

    def frobenius_on_center(self, nu: Sequence[int], j: int) -> tuple[int, ...]:
        """Left action of ``F_j`` on characters of ``Z^F``."""
        if not self.center_orders:
            return ()
        pinv = multiplicative_inverse(pow(self.p, j, self.m), self.m)
        # Z^F is cyclic in Smith coordinates up to a basis change that commutes with scalars
        return tuple((pinv * a) % o for a, o in zip(nu, self.center_orders))

    def permutation(self, action) -> list[int]:
        idx = self.label_index
        return [idx[action(lab)] for lab in self.labels]

    # --- D-orbits -----------------------------------------------------------

    def d_orbits(self, nu: Sequence[int] | None = None) -> list[DOrbit]:
        groups: dict[tuple, list[BorelLabel]] = defaultdict(list)
        for lab in self.labels:
            if nu is None or self.nu_of[lab] == tuple(nu):
                groups[(lab.J, lab.psi)].append(lab)
        return [
            DOrbit(J=key[0], psi=key[1], members=tuple(members))
            for key, members in sorted(groups.items(), key=lambda kv: (len(kv[0][0]), kv[0]))
        ]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "type": self.datum.type_label,
            "p": self.p,
            "n": self.n,
            "labels": [
                {
                    "J": list(lab.J),
                    "j": self.j_index(lab),
                    "z": list(lab.z),
                    "psi": list(lab.psi),
                    "nu": list(self.nu_of[lab]),
                }
                for lab in self.labels
            ],
        }


@lru_cache(maxsize=32)
def parametrization(d: RootDatum, p: int, n: int = 1) -> BorelParametrization:
    return BorelParametrization(d, p, n)


def enumerate_labels(d: RootDatum, fr: SplitFrobenius) -> list[BorelLabel]:
    return list(parametrization(d, fr.p, fr.n).labels)


def closed_form_count(d: RootDatum, fr: SplitFrobenius) -> int:
    """``sum_J i(J) |T_J^F|``."""
    return parametrization(d, fr.p, fr.n).total()


def restriction_to_center(label: BorelLabel, d: RootDatum, fr: SplitFrobenius) -> tuple[int, ...]:
    return parametrization(d, fr.p, fr.n).restriction_to_center(label)


def per_nu_count(d: RootDatum, fr: SplitFrobenius, nu: Sequence[int]) -> int:
    return parametrization(d, fr.p, fr.n).per_nu_count(nu)


def d_orbit_census(d: RootDatum, fr: SplitFrobenius, nu: Sequence[int]) -> OrbitCensus:
    par = parametrization(d, fr.p, fr.n)
    dd = par.center_order
    sizes = Counter(orb.size for orb in par.d_orbits(nu))
    if set(sizes) - {1, dd}:
        raise ArithmeticError(f"unexpected D-orbit sizes {sorted(sizes)}")  # pragma: no cover
    n1 = sizes.get(1, 0)
    nd = sizes.get(dd, 0) if dd > 1 else 0
    return OrbitCensus("B", tuple(nu), dd, n1, nd, {})


def frobenius_on_label(label: BorelLabel, d: RootDatum, p: int, n: int, j: int) -> BorelLabel:
    if n % j:
        raise ValueError(f"j={j} must divide n={n}")
    return parametrization(d, p, n).frobenius_action(label, j)


def fixed_label_census(d: RootDatum, p: int, n: int, j: int, size: int, mu: Sequence[int]) -> int:
    """Number of ``F_j``-stable D-orbits of the given size lying over ``mu``."""
    par = parametrization(d, p, n)
    count = 0
    for orb in par.d_orbits(mu):
        if orb.size != size:
            continue
        image = par.frobenius_action(orb.members[0], j)
        if (image.J, image.psi) == (orb.J, orb.psi):
            count += 1
    return count


def find_stable_regular_character(d: RootDatum, p: int, n: int, j: int) -> UnipotentCharacterIndex:
    """Least ``c`` with every ``c_alpha != 0`` and ``c`` fixed by ``c -> c^(p^j)``."""
    if d.rank == 0:
        raise ValueError("datum has no simple roots")
    if n % j:
        raise ValueError(f"j={j} must divide n={n}")
    F = field_context(p, n)
    stable = [a for a in F.subfield(j) if a != 0]
    return UnipotentCharacterIndex(tuple([min(stable)] * d.rank))


def diagonal_root_values(d: RootDatum, q: int) -> tuple[int, ...]:
    """Root values ``log_zeta alpha_i(t)`` of the torus element inducing the diagonal generator.

    For type A this is ``diag(zeta, 1, ..., 1)``, for type C the similitude
    ``diag(1, ..., 1, zeta, ..., zeta)``; otherwise the least fundamental
    coweight whose image generates the group of diagonal automorphisms.
    """
    r, m = d.rank, q - 1
    if d.family == "A":
        return tuple(int(i == 0) for i in range(r))
    if d.family == "C":
        return tuple((-int(i == r - 1)) % m for i in range(r))
    full = cokernel_mod(d.rows(range(r)), r, m)
    target = math.prod(full.orders)
    for k in range(r):
        w = tuple(int(i == k) for i in range(r))
        c = full.coordinates(w)
        order = math.lcm(*(o // math.gcd(o, x) if o > 1 else 1 for o, x in zip(full.orders, c)))
        if order == target:
            return w
    raise ArithmeticError("group of diagonal automorphisms is not cyclic")  # pragma: no cover


# --- brute-force oracle ---------------------------------------------------------


def _scalings(d: RootDatum, F: FqContext) -> np.ndarray:
    """Row ``t`` holds ``prod_k t_k^(-a_ik)`` for every ``t`` in ``(F_q^x)^r``."""
    r = d.rank
    units = list(range(1, F.q))
    out = []
    for t in itertools.product(units, repeat=r):
        row = []
        for i in range(r):
            val = 1
            for k in range(r):
                val = F.mul(val, F.pow(t[k], -d.cartan[i][k]))
            row.append(val)
        out.append(row)
    return np.array(out, dtype=np.int64)


def brute_force_orbits(d: RootDatum, fr: SplitFrobenius, bound: int = 10**6):
    """T^F-orbits on ``Irr(U_1^F)`` by direct field arithmetic.

    Returns ``(orbit_of, stabilizer_order)`` arrays indexed by the base-q code
    of ``c``.
    """
    F = field_context(fr.p, fr.n)
    q, r = F.q, d.rank
    if q**r > bound:
        raise BoundExceededError(f"q^r = {q**r} exceeds the brute-force bound {bound}")
    cs = np.array(list(itertools.product(range(q), repeat=r)), dtype=np.int64)
    weights = q ** np.arange(r - 1, -1, -1, dtype=np.int64)
    codes = cs @ weights
    scal = _scalings(d, F)
    orbit_of = codes.copy()
    stab = np.zeros(len(cs), dtype=np.int64)
    for row in scal:
        images = F.mul_table[cs, row[None, :]] @ weights
        orbit_of = np.minimum(orbit_of, images)
        stab += images == codes
    return cs, orbit_of, stab


def brute_force_count(d: RootDatum, fr: SplitFrobenius, bound: int = 10**6) -> int:
    """``sum`` over T^F-orbits on ``Irr(U_1^F)`` of the stabilizer order."""
    _, orbit_of, stab = brute_force_orbits(d, fr, bound)
    reps = np.unique(orbit_of, return_index=True)[1]
    return int(stab[reps].sum())


def brute_force_orbit_counts(d: RootDatum, fr: SplitFrobenius, bound: int = 10**6) -> dict:
    """Number of T^F-orbits on the regular characters of ``U_J`` for every ``J``."""
    cs, orbit_of, _ = brute_force_orbits(d, fr, bound)
    support = [tuple(np.nonzero(c)[0].tolist()) for c in cs]
    out: dict[tuple[int, ...], set] = defaultdict(set)
    for J, o in zip(support, orbit_of.tolist()):
        out[J].add(o)
    return {J: len(v) for J, v in out.items()}


def labels_to_json(par: BorelParametrization, census: dict | None = None) -> str:
    doc = par.to_dict()
    doc["census"] = census or {}
    return json.dumps(doc, sort_keys=True, indent=1)


def labels_to_tsv(par: BorelParametrization) -> str:
    lines = [f"# schema_version\t{SCHEMA_VERSION}", "J\tj\tz\tpsi\tnu"]
    for lab in par.labels:
        lines.append(
            "\t".join(
                [
                    ",".join(map(str, lab.J)) or "-",
                    str(par.j_index(lab)),
                    ",".join(map(str, lab.z)) or "-",
                    ",".join(map(str, lab.psi)) or "-",
                    ",".join(map(str, par.nu_of[lab])) or "-",
                ]
            )
        )
    return "\n".join(lines) + "\n"


def center_order_of(d: RootDatum) -> int:
    return center(d).order
