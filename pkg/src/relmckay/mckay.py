"""Relative McKay checks: G-side oracle against the Borel-side formula.

Both sides are finite sets over a central character ``nu`` carrying two
permutations: the diagonal generator ``delta`` (conjugation by the same
torus element of the connected-center group on both sides) and the field
automorphisms ``F_j``. Everything downstream (censuses, fixed
sub-censuses, the equivariant bijection) is computed from those
permutations alone, so the two sides go through identical code.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Sequence

from .borel import (
    BorelLabel,
    BorelParametrization,
    ExcludedGroupError,
    OrbitCensus,
    d_orbit_census,
    diagonal_root_values,
    fixed_label_census,
    parametrization,
)
from .chartab import CharacterTable, automorphism_action, central_character, dixon_schneider, p_prime_rows
from .matgrp import MatGroup, build_group
from .rootdata import RootDatum, is_nonsingular_prime
from .twist import SplitFrobenius, divisors

SCHEMA_VERSION = 1


class HypothesisError(ValueError):
    """Input violates the standing hypotheses (prime-order center, nonsingular p, ...)."""


class CensusMismatchError(RuntimeError):
    pass


class ObstructionError(RuntimeError):
    """No representative choice yields an equivariant bijection on some orbit."""


# --- generic action data -------------------------------------------------------------


@dataclass(frozen=True)
class SideAction:
    """A finite set with ``delta`` and ``F_j`` (``j | n``) acting by permutations.

    ``points`` are hashable handles; permutations are dicts point -> point.
    ``nu`` maps each point to its central character.
    """

    side: str
    points: tuple[Hashable, ...]
    nu: dict
    delta: dict
    frob: dict[int, dict]
    d: int
    n: int

    def over(self, nu: tuple[int, ...]) -> list:
        return [x for x in self.points if self.nu[x] == nu]

    def d_orbits(self, nu: tuple[int, ...]) -> list[tuple]:
        seen, out = set(), []
        for x in self.over(nu):
            if x in seen:
                continue
            orb, y = [x], self.delta[x]
            while y != x:
                orb.append(y)
                y = self.delta[y]
            seen.update(orb)
            out.append(tuple(orb))
        return out

    def stabilizer_level(self, nu: tuple[int, ...], frob_on_nu) -> int:
        """Least ``j | n`` with ``F_j(nu) = nu``; ``F_{j0}`` generates ``K_nu``."""
        return min(j for j in divisors(self.n) if frob_on_nu(nu, j) == nu)


def _census(act: SideAction, nu: tuple[int, ...], frob_on_nu) -> OrbitCensus:
    orbits = act.d_orbits(nu)
    sizes = Counter(len(o) for o in orbits)
    if set(sizes) - {1, act.d}:
        raise CensusMismatchError(f"{act.side}: D-orbit sizes {sorted(sizes)} are not 1 or d={act.d}")
    fixed = {}
    for j in divisors(act.n):
        if frob_on_nu(nu, j) != nu:
            continue
        counts = Counter()
        for o in orbits:
            image = act.frob[j][o[0]]
            if image in o:
                counts[len(o)] += 1
        fixed[j] = (counts.get(1, 0), counts.get(act.d, 0) if act.d > 1 else 0)
    return OrbitCensus(
        act.side,
        tuple(nu),
        act.d,
        sizes.get(1, 0),
        sizes.get(act.d, 0) if act.d > 1 else 0,
        fixed,
    )


def k_orbit_sizes(act: SideAction, nu: tuple[int, ...], j0: int) -> Counter:
    """Multiset of ``(D-orbit size, K_nu-orbit size)`` over D-orbits above ``nu``."""
    gamma = act.frob[j0]
    orbits = act.d_orbits(nu)
    where = {x: k for k, o in enumerate(orbits) for x in o}
    seen, out = set(), Counter()
    for k, o in enumerate(orbits):
        if k in seen:
            continue
        cyc, cur = [k], where[gamma[o[0]]]
        while cur != k:
            cyc.append(cur)
            cur = where[gamma[orbits[cur][0]]]
        seen.update(cyc)
        out[(len(o), len(cyc))] += 1
    return out


def k_orbits_from_fixed_counts(fixed: dict[int, int], n: int, j0: int) -> Counter:
    """K_nu-orbit sizes recovered from fixed-point counts by Moebius inversion.

    ``K_nu = <F_{j0}>`` is cyclic of order ``n / j0``; ``fixed[j]`` counts the
    points fixed by ``F_j`` for ``j0 | j | n``.
    """
    order = n // j0
    exact = {}
    # points whose stabilizer is exactly <F_{j0 k}>, largest subgroups first
    for k in sorted(divisors(order)):
        j = j0 * k
        exact[k] = fixed[j] - sum(exact[kk] for kk in exact if k % kk == 0 and kk != k)
    out = Counter()
    for k, count in exact.items():
        if count % k:
            raise CensusMismatchError("fixed-point counts are not those of a cyclic action")
        if count:
            out[k] = count // k
    return out


# --- the two sides ------------------------------------------------------------------------


def _check_hypotheses(d: RootDatum, p: int, n: int) -> None:
    q = p**n
    if not is_nonsingular_prime(d, p):
        raise HypothesisError(f"p={p} is singular for type {d.type_label}")
    par = parametrization(d, p, n)
    order = par.center_order
    if order > 1 and not all(order % k for k in range(2, math.isqrt(order) + 1)):
        raise HypothesisError(f"|Z^F| = {order} is not prime")
    if q < 2:  # pragma: no cover
        raise HypothesisError("q must be at least 2")


def borel_side(d: RootDatum, p: int, n: int) -> tuple[SideAction, BorelParametrization]:
    par = parametrization(d, p, n)
    w = diagonal_root_values(d, par.q)
    labels = par.labels
    delta = {lab: par.diagonal_action(lab, w) for lab in labels}
    frob = {j: {lab: par.frobenius_action(lab, j) for lab in labels} for j in divisors(n)}
    act = SideAction("B", labels, dict(par.nu_of), delta, frob, max(par.center_order, 1), n)
    return act, par


@dataclass(frozen=True, order=True)
class GSideHandle:
    row: int
    nu: tuple[int, ...] = field(compare=False)
    degree: int = field(compare=False)


def group_side(g: MatGroup, t: CharacterTable) -> SideAction:
    rows = p_prime_rows(t, g.p)
    handles = {r: GSideHandle(r, central_character(t, r), int(t.degrees[r])) for r in rows}
    dperm = automorphism_action(t, g.class_permutation(g.diagonal_automorphism()))
    frob = {}
    for j in divisors(g.n):
        perm = automorphism_action(t, g.class_permutation(g.field_automorphism(j)))
        frob[j] = {handles[r]: handles[perm[r]] for r in rows}
    delta = {handles[r]: handles[dperm[r]] for r in rows}
    nu = {h: h.nu for h in handles.values()}
    z = len(g.center_indices)
    return SideAction("G", tuple(handles.values()), nu, delta, frob, max(z, 1), g.n)


# --- censuses --------------------------------------------------------------------------------


def census_B(d: RootDatum, p: int, n: int, nu: Sequence[int]) -> OrbitCensus:
    _check_hypotheses(d, p, n)
    nu = tuple(nu)
    act, par = borel_side(d, p, n)
    out = _census(act, nu, par.frobenius_on_center)
    # the generic census must agree with the label-level functions
    base = d_orbit_census(d, SplitFrobenius(p, n), nu)
    if (base.n1, base.nd) != (out.n1, out.nd):
        raise CensusMismatchError("D-orbit census disagrees with the label grouping")  # pragma: no cover
    for j, (f1, fd) in out.fixed.items():
        expect = (
            fixed_label_census(d, p, n, j, 1, nu),
            fixed_label_census(d, p, n, j, out.d, nu) if out.d > 1 else 0,
        )
        if expect != (f1, fd):
            raise CensusMismatchError("fixed sub-census disagrees with the label scan")  # pragma: no cover
    return out


def census_G(g: MatGroup, t: CharacterTable, p: int, nu: Sequence[int]) -> OrbitCensus:
    if p != g.p:
        raise ValueError("the census prime must be the defining characteristic")
    act = group_side(g, t)
    par = parametrization(g.datum, g.p, g.n)
    return _census(act, tuple(nu), par.frobenius_on_center)


# --- the bijection ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquivariantBijection:
    nu: tuple[int, ...]
    gamma_level: int
    pairs: tuple[tuple[GSideHandle, BorelLabel], ...]
    delta_certificate: tuple[tuple[int, int], ...]
    gamma_certificate: tuple[tuple[int, int], ...]
    certified: bool
    representatives: tuple[dict, ...]

    def as_dict(self, par: BorelParametrization) -> dict:
        return {
            "nu": list(self.nu),
            "gamma": f"F{self.gamma_level}",
            "pairs": [
                {
                    "row": h.row,
                    "degree": h.degree,
                    "J": list(lab.J),
                    "j": par.j_index(lab),
                    "z": list(lab.z),
                    "psi": list(lab.psi),
                }
                for h, lab in self.pairs
            ],
            "representatives": list(self.representatives),
            "certified": self.certified,
        }


def _orbit_classes(act: SideAction, nu, j0) -> list[tuple[int, list[tuple]]]:
    """K_nu-orbits of D-orbits, as (D-orbit size, list of D-orbits), deterministic order."""
    gamma = act.frob[j0]
    orbits = sorted(act.d_orbits(nu), key=lambda o: min(o))
    where = {x: k for k, o in enumerate(orbits) for x in o}
    seen, out = set(), []
    for k, o in enumerate(orbits):
        if k in seen:
            continue
        cyc, cur = [k], where[gamma[o[0]]]
        while cur != k:
            cyc.append(cur)
            cur = where[gamma[orbits[cur][0]]]
        seen.update(cyc)
        out.append((len(o), [orbits[c] for c in sorted(cyc)]))
    return out


def _extend(x, y, gens_g: list[dict], gens_b: list[dict]) -> dict | None:
    """Extend ``x -> y`` along the generators; ``None`` if the extension is inconsistent."""
    psi, back = {x: y}, {y: x}
    frontier = [x]
    while frontier:
        a = frontier.pop()
        for gg, gb in zip(gens_g, gens_b):
            a2, b2 = gg[a], gb[psi[a]]
            if a2 in psi:
                if psi[a2] != b2:
                    return None
                continue
            if b2 in back:
                return None
            psi[a2], back[b2] = b2, a2
            frontier.append(a2)
    return psi


def build_equivariant_bijection(
    g_act: SideAction,
    b_act: SideAction,
    nu: Sequence[int],
    gamma_level: int,
    b_preferred: Sequence[BorelLabel] = (),
) -> EquivariantBijection:
    """Orbit-matching bijection commuting with ``delta`` and ``gamma = F_{gamma_level}``.

    K_nu-orbits of D-orbits are matched by (D-orbit size, K-orbit size) in a
    deterministic order. In each matched pair a G-side representative is
    chosen (a gamma-fixed point when the K-orbit is a single D-orbit) and every
    B-side candidate is tried, preferred labels first, until the extension
    along ``delta`` and ``gamma`` is consistent.
    """
    nu = tuple(nu)
    cg = _orbit_classes(g_act, nu, gamma_level)
    cb = _orbit_classes(b_act, nu, gamma_level)
    shape = lambda classes: Counter((i, len(ods)) for i, ods in classes)  # noqa: E731
    if shape(cg) != shape(cb):
        raise CensusMismatchError(
            f"orbit structures differ over nu={nu}: G {dict(shape(cg))} vs B {dict(shape(cb))}"
        )
    gamma_g, gamma_b = g_act.frob[gamma_level], b_act.frob[gamma_level]
    gens_g, gens_b = [g_act.delta, gamma_g], [b_act.delta, gamma_b]
    key = lambda c: (c[0], len(c[1]))  # noqa: E731
    pool_b: dict[tuple, list] = {}
    for c in cb:
        pool_b.setdefault(key(c), []).append(c)
    rank = {lab: k for k, lab in enumerate(b_preferred)}
    psi: dict = {}
    reps = []
    for c in cg:
        partner = pool_b[key(c)].pop(0)
        g_points = sorted(x for o in c[1] for x in o)
        if len(c[1]) == 1:
            stable = [x for x in g_points if gamma_g[x] == x]
            if not stable:
                raise ObstructionError(
                    f"gamma-stable D-orbit over nu={nu} has no gamma-fixed G-side element"
                )
            x = stable[0]
        else:
            x = g_points[0]
        b_points = sorted(
            (y for o in partner[1] for y in o), key=lambda y: (rank.get(y, len(rank)), y)
        )
        for y in b_points:
            ext = _extend(x, y, gens_g, gens_b)
            if ext is not None and len(ext) == len(g_points):
                psi.update(ext)
                reps.append({"row": x.row, "label": [list(y.J), list(y.z), list(y.psi)],
                             "gamma_fixed": gamma_g[x] == x and gamma_b[y] == y})
                break
        else:
            raise ObstructionError(f"no equivariant representative for an orbit over nu={nu}")
    g_over, b_over = g_act.over(nu), b_act.over(nu)
    pairs = tuple(sorted(psi.items()))
    index_g = {x: k for k, x in enumerate(sorted(g_over))}
    index_b = {y: k for k, y in enumerate(sorted(b_over))}
    delta_cert, gamma_cert = [], []
    ok = len(psi) == len(g_over) == len(b_over) and set(psi.values()) == set(b_over)
    for x in sorted(g_over):
        lhs_d, rhs_d = psi[g_act.delta[x]], b_act.delta[psi[x]]
        lhs_g, rhs_g = psi[gamma_g[x]], gamma_b[psi[x]]
        delta_cert.append((index_b[lhs_d], index_b[rhs_d]))
        gamma_cert.append((index_b[lhs_g], index_b[rhs_g]))
        ok &= lhs_d == rhs_d and lhs_g == rhs_g and b_act.nu[psi[x]] == g_act.nu[x]
    return EquivariantBijection(
        nu=nu,
        gamma_level=gamma_level,
        pairs=pairs,
        delta_certificate=tuple(delta_cert),
        gamma_certificate=tuple(gamma_cert),
        certified=bool(ok),
        representatives=tuple(reps),
    )


def stable_preference(par: BorelParametrization, j0: int) -> list[BorelLabel]:
    """B-side labels with ``z = 0`` and gamma-stable ``psi`` first, the rest after."""
    first = [lab for lab in par.labels if not any(lab.z) and par.frobenius_action(lab, j0) == lab]
    return first + [lab for lab in par.labels if lab not in set(first)]


# --- the full check ---------------------------------------------------------------------------


@dataclass
class McKayReport:
    datum: str
    p: int
    n: int
    per_nu: dict = field(default_factory=dict)
    census: dict = field(default_factory=dict)
    fixed: dict = field(default_factory=dict)
    burnside: dict = field(default_factory=dict)
    bijection: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if not self.failures else "fail"

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "datum": self.datum,
            "p": self.p,
            "n": self.n,
            "per_nu": self.per_nu,
            "census": self.census,
            "fixed": self.fixed,
            "burnside": self.burnside,
            "bijection": self.bijection,
            "failures": self.failures,
            "verdict": self.verdict,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)


def _nu_key(nu: tuple[int, ...]) -> str:
    return ",".join(map(str, nu)) or "trivial"


class RelativeMcKayCheck:
    """Both sides of one instance, computed once and shared by the report parts."""

    def __init__(self, d: RootDatum, p: int, n: int = 1, max_order: int | None = None):
        _check_hypotheses(d, p, n)
        self.datum, self.p, self.n = d, p, n
        self.group = build_group(d, p=p, n=n, max_order=max_order)
        self.table = dixon_schneider(self.group)
        self.table.check_orthogonality()
        self.b_act, self.par = borel_side(d, p, n)
        self.g_act = group_side(self.group, self.table)
        w_matrix = [x % (self.par.q - 1 or 1) for x in self.group.conjugation_root_values(self.group.diagonal_matrix())]
        w_label = [x % (self.par.q - 1 or 1) for x in diagonal_root_values(d, self.par.q)]
        if w_matrix != w_label:
            raise AssertionError("diagonal generators differ between the two sides")  # pragma: no cover

    @cached_property
    def nus(self) -> list[tuple[int, ...]]:
        return self.par.central_characters()

    def gamma_level(self, nu) -> int:
        return self.b_act.stabilizer_level(nu, self.par.frobenius_on_center)

    def census(self, side: str, nu) -> OrbitCensus:
        act = self.g_act if side == "G" else self.b_act
        return _census(act, tuple(nu), self.par.frobenius_on_center)

    def bijection(self, nu) -> EquivariantBijection:
        j0 = self.gamma_level(nu)
        return build_equivariant_bijection(
            self.g_act, self.b_act, nu, j0, stable_preference(self.par, j0)
        )

    def report(self, with_bijection: bool = True) -> McKayReport:
        rep = McKayReport(self.datum.type_label, self.p, self.n)
        totals = {"G": len(self.g_act.points), "B": len(self.b_act.points)}
        if totals["G"] != totals["B"]:
            rep.failures.append(f"total p'-counts differ: {totals}")
        for nu in self.nus:
            k = _nu_key(nu)
            g_count, b_count = len(self.g_act.over(nu)), len(self.b_act.over(nu))
            rep.per_nu[k] = {"G": g_count, "B": b_count}
            if g_count != b_count:
                rep.failures.append(f"per-nu counts differ over nu={k}: G {g_count}, B {b_count}")
            cg, cb = self.census("G", nu), self.census("B", nu)
            rep.census[k] = {"d": cg.d, "N1": cg.n1, "Nd": cg.nd, "N1p": cb.n1, "Ndp": cb.nd}
            if (cg.n1, cg.nd) != (cb.n1, cb.nd):
                rep.failures.append(f"D-orbit censuses differ over nu={k}")
            for j in sorted(set(cg.fixed) | set(cb.fixed)):
                entry = rep.fixed.setdefault(str(j), {})
                entry[k] = {"G": list(cg.fixed.get(j, ())), "B": list(cb.fixed.get(j, ()))}
                if cg.fixed.get(j) != cb.fixed.get(j):
                    rep.failures.append(f"F{j}-fixed censuses differ over nu={k}")
            j0 = self.gamma_level(nu)
            burn = {}
            for side, act, cen in (("G", self.g_act, cg), ("B", self.b_act, cb)):
                actual = k_orbit_sizes(act, nu, j0)
                ok = True
                for size_index, i in enumerate((1, cen.d) if cen.d > 1 else (1,)):
                    fixed = {j: cen.fixed[j][size_index] for j in cen.fixed if j % j0 == 0}
                    derived = k_orbits_from_fixed_counts(fixed, self.n, j0)
                    ok &= derived == Counter({s: c for (ii, s), c in actual.items() if ii == i})
                burn[side] = {"k_orbits": sorted([list(key) + [c] for key, c in actual.items()]), "consistent": ok}
                if not ok:
                    rep.failures.append(f"{side}: K_nu-orbit sizes do not follow from fixed counts over nu={k}")
            burn["equal"] = burn["G"]["k_orbits"] == burn["B"]["k_orbits"]
            if not burn["equal"]:
                rep.failures.append(f"K_nu-orbit size multisets differ over nu={k}")
            rep.burnside[k] = burn
            if with_bijection:
                try:
                    bij = self.bijection(nu)
                except (CensusMismatchError, ObstructionError) as exc:
                    rep.bijection[k] = {"certified": False, "error": str(exc)}
                    rep.failures.append(f"bijection over nu={k}: {exc}")
                else:
                    rep.bijection[k] = bij.as_dict(self.par)
                    if not bij.certified:
                        rep.failures.append(f"bijection over nu={k} fails its certificates")
        return rep


def check_relative_mckay(d: RootDatum, p: int, n: int = 1, max_order: int | None = None) -> McKayReport:
    return RelativeMcKayCheck(d, p, n, max_order=max_order).report()


__all__ = [
    "CensusMismatchError",
    "EquivariantBijection",
    "ExcludedGroupError",
    "GSideHandle",
    "HypothesisError",
    "McKayReport",
    "ObstructionError",
    "RelativeMcKayCheck",
    "SideAction",
    "borel_side",
    "build_equivariant_bijection",
    "census_B",
    "census_G",
    "check_relative_mckay",
    "group_side",
    "k_orbit_sizes",
    "k_orbits_from_fixed_counts",
]
