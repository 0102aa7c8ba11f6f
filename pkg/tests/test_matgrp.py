import json

import numpy as np
import pytest

from oracle_cache import datum, group
from relmckay.borel import diagonal_root_values
from relmckay.matgrp import (
    GroupOrderBoundError,
    InvalidAutomorphismError,
    UnsupportedGroupError,
    build_group,
    max_group_order,
)
from relmckay.rootdata import group_order
from relmckay.twist import SplitFrobenius, center_fixed_order

GROUPS = [("A1", q) for q in (2, 3, 4, 5, 7, 8, 9)] + [("A2", 2), ("A2", 3), ("A2", 4), ("C2", 3)]


@pytest.mark.parametrize("label, q", GROUPS)
def test_order_matches_formula(label, q):
    g = group(label, q)
    assert g.order == group_order(datum(label), q)
    assert len(np.unique(g.codes)) == g.order


@pytest.mark.parametrize("label, q, classes", [("A1", 3, 7), ("A1", 5, 9), ("C2", 3, 34), ("A1", 4, 5), ("A1", 9, 13)])
def test_class_counts(label, q, classes):
    g = group(label, q)
    assert g.class_count == classes
    assert int(g.classes.sizes.sum()) == g.order


@pytest.mark.parametrize("label, q", GROUPS)
def test_center_matches_fixed_points(label, q):
    g = group(label, q)
    p, n = g.p, g.n
    assert len(g.center_indices) == center_fixed_order(datum(label), SplitFrobenius(p, n))
    assert all(np.count_nonzero(z - np.diag(np.diag(z))) == 0 for z in g.center_of())


@pytest.mark.parametrize("label, q", [("A1", 5), ("A1", 7), ("A2", 4), ("A2", 3), ("C2", 3), ("C2", 5)])
def test_coroot_convention(label, q):
    d = datum(label)
    g = build_group(d, q) if (label, q) == ("C2", 5) else group(label, q)
    F = g.field
    for k in range(d.rank):
        s = g.coroot(k, F.zeta(1))
        vals = g.conjugation_root_values(s)
        assert vals == [d.cartan[i][k] % (q - 1) for i in range(d.rank)]


@pytest.mark.parametrize("label, q", [("A1", 3), ("A1", 5), ("A1", 9), ("A2", 4), ("C2", 3)])
def test_diagonal_generator_agrees_with_label_side(label, q):
    g = group(label, q)
    w = g.conjugation_root_values(g.diagonal_matrix())
    assert w == [x % (q - 1) for x in diagonal_root_values(datum(label), q)]


@pytest.mark.parametrize("label, q", [("A1", 3), ("A1", 5), ("A1", 9), ("A1", 8), ("A2", 4), ("C2", 3)])
def test_automorphism_class_permutations(label, q):
    g = group(label, q)
    cd = g.classes
    autos = [g.diagonal_automorphism()] + [g.field_automorphism(j) for j in range(1, g.n + 1)]
    for sigma in autos:
        perm = g.class_permutation(sigma)
        assert np.array_equal(cd.sizes[perm], cd.sizes)
        assert np.array_equal(cd.orders[perm], cd.orders)
    # delta^d is inner, so it fixes every class
    d = len(g.center_indices)
    delta = g.diagonal_automorphism()
    power = g.class_permutation(delta.power_of(max(d, 1)))
    assert power.tolist() == list(range(len(cd)))
    # the full Frobenius is the identity on F_q-points
    assert g.class_permutation(g.field_automorphism(g.n)).tolist() == list(range(len(cd)))


def test_composition_order():
    g = group("A1", 9)
    delta, f1 = g.diagonal_automorphism(), g.field_automorphism(1)
    reps = g.elements[g.classes.representatives]
    assert np.array_equal(delta.then(f1)(reps), f1(delta(reps)))


def test_inner_automorphism_fixes_classes():
    g = group("A1", 5)
    x = g.elements[7]
    assert g.class_permutation(g.inner_automorphism(x)).tolist() == list(range(g.class_count))
    with pytest.raises(InvalidAutomorphismError):
        g.inner_automorphism(np.diag([2, 2]))


def test_power_map_and_inverse_classes():
    g = group("A1", 5)
    inv = g.inverse_classes
    assert sorted(inv.tolist()) == list(range(g.class_count))
    assert np.array_equal(inv[inv], np.arange(g.class_count))
    assert np.all(g.power_map(g.exponent) == 0)
    assert np.all(g.power_map(1) == np.arange(g.class_count))


def test_bounds_and_types(monkeypatch):
    with pytest.raises(GroupOrderBoundError):
        build_group(datum("C3"), 3)
    with pytest.raises(GroupOrderBoundError):
        build_group(datum("A1"), 5, max_order=100)
    monkeypatch.setenv("MCKAY_MAX_GROUP_ORDER", "50")
    assert max_group_order() == 50
    with pytest.raises(GroupOrderBoundError):
        build_group(datum("A1"), 5)
    with pytest.raises(UnsupportedGroupError):
        build_group(datum("G2"), 5)
    with pytest.raises(ValueError):
        group("A1", 9).field_automorphism(3)


def test_json_export():
    doc = json.loads(group("A1", 3).to_json())
    assert doc["order"] == 24 and doc["class_count"] == 7 and doc["schema_version"] == 1
    assert sum(doc["class_sizes"]) == 24
