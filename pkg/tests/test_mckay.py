import dataclasses
import json
from collections import Counter

import pytest

from oracle_cache import check, datum, group, table
from relmckay.mckay import (
    CensusMismatchError,
    HypothesisError,
    build_equivariant_bijection,
    census_B,
    census_G,
    check_relative_mckay,
    k_orbit_sizes,
    k_orbits_from_fixed_counts,
)
from relmckay.twist import divisors

INSTANCES = [("A1", 3, 1), ("A1", 5, 1), ("A1", 7, 1), ("A1", 3, 2), ("A1", 2, 2), ("A1", 2, 3), ("A1", 5, 2)]


@pytest.mark.parametrize("label, p, n", INSTANCES)
def test_report_passes(label, p, n):
    rep = check(label, p, n).report()
    assert rep.verdict == "pass", rep.failures
    for k, v in rep.per_nu.items():
        assert v["G"] == v["B"]
    assert all(b["certified"] for b in rep.bijection.values())


@pytest.mark.parametrize("p, per_nu", [(3, 3), (5, 4), (7, 5)])
def test_a1_per_nu(p, per_nu):
    rep = check("A1", p).report(with_bijection=False)
    assert [v["G"] for v in rep.per_nu.values()] == [per_nu, per_nu]


def test_sl2_5_censuses():
    chk = check("A1", 5)
    g, t = chk.group, chk.table
    for nu in chk.nus:
        cb, cg = census_B(datum("A1"), 5, 1, nu), census_G(g, t, 5, nu)
        assert (cb.n1, cb.nd) == (cg.n1, cg.nd) == (2, 1)
    with pytest.raises(ValueError):
        census_G(g, t, 3, (0,))


def test_sl2_3_census_sum():
    chk = check("A1", 3)
    for nu in chk.nus:
        c = census_G(chk.group, chk.table, 3, nu)
        assert c.n1 + 2 * c.nd == 3


def test_q9_fixed_subcensus():
    chk = check("A1", 3, 2)
    cb = census_B(datum("A1"), 3, 2, (1,))
    assert cb.fixed[1][0] == 0
    cg = chk.census("G", (1,))
    assert cg.fixed == cb.fixed


def test_bijection_is_equivariant_by_hand():
    chk = check("A1", 3, 2)
    for nu in chk.nus:
        bij = chk.bijection(nu)
        psi = dict(bij.pairs)
        j0 = bij.gamma_level
        assert len(set(psi.values())) == len(psi) == len(chk.b_act.over(nu))
        for x, y in psi.items():
            assert psi[chk.g_act.delta[x]] == chk.b_act.delta[y]
            assert psi[chk.g_act.frob[j0][x]] == chk.b_act.frob[j0][y]
        assert all(a == b for a, b in bij.delta_certificate + bij.gamma_certificate)


def test_dropping_an_orbit_is_a_census_mismatch():
    chk = check("A1", 5)
    nu = chk.nus[0]
    b = chk.b_act
    dropped = set(b.d_orbits(nu)[0])
    corrupted = dataclasses.replace(b, points=tuple(x for x in b.points if x not in dropped))
    with pytest.raises(CensusMismatchError):
        build_equivariant_bijection(chk.g_act, corrupted, nu, 1)


@pytest.mark.parametrize("label, p, n", [("C2", 2, 1), ("G2", 3, 1)])
def test_hypotheses_enforced(label, p, n):
    with pytest.raises((HypothesisError, ValueError)):
        check_relative_mckay(datum(label), p, n)


def test_composite_center_rejected():
    # SL_4(5): |Z^F| = 4 is not prime
    with pytest.raises(HypothesisError):
        census_B(datum("A3"), 5, 1, (0,))


@pytest.mark.parametrize("label, p, n", [("A1", 3, 2), ("A1", 2, 3), ("A1", 5, 2), ("A1", 3, 3)])
def test_moebius_recovers_k_orbits(label, p, n):
    from relmckay.mckay import borel_side

    act, par = borel_side(datum(label), p, n)
    for nu in par.central_characters():
        j0 = act.stabilizer_level(nu, par.frobenius_on_center)
        actual = k_orbit_sizes(act, nu, j0)
        orbits = act.d_orbits(nu)
        for size in {len(o) for o in orbits}:
            fixed = {
                j: sum(1 for o in orbits if len(o) == size and act.frob[j][o[0]] in o)
                for j in divisors(n) if j % j0 == 0
            }
            derived = k_orbits_from_fixed_counts(fixed, n, j0)
            assert derived == Counter({s: c for (i, s), c in actual.items() if i == size})


def test_moebius_rejects_impossible_counts():
    with pytest.raises(CensusMismatchError):
        k_orbits_from_fixed_counts({1: 0, 2: 1}, 2, 1)


def test_report_json_schema():
    rep = check("A1", 3).report()
    doc = json.loads(rep.to_json())
    for key in ("datum", "p", "n", "per_nu", "census", "fixed", "bijection", "verdict"):
        assert key in doc
    assert doc["verdict"] == "pass"
    assert set(doc["census"]["0"]) == {"d", "N1", "Nd", "N1p", "Ndp"}
