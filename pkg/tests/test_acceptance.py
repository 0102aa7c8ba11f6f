"""The eight acceptance criteria, each reported as one PASS/FAIL line."""

import itertools
import math
import time

import numpy as np
import pytest

import conftest
from oracle_cache import BUILT_TABLES, check, datum, group, table
from relmckay.borel import (
    brute_force_count,
    closed_form_count,
    fixed_label_census,
    parametrization,
)
from relmckay.chartab import automorphism_action, central_character, p_prime_rows
from relmckay.finite_field import prime_power
from relmckay.lattice import (
    AbelianEndomorphism,
    FiniteAbelianGroup,
    determinant,
    fixed_point_order,
    lang_quotient,
    matmul,
    smith_normal_form,
)
from relmckay.mckay import census_B, census_G
from relmckay.twist import SplitFrobenius

CRITERION_1 = [("A1", q) for q in (3, 4, 5, 7, 8, 9, 11)] + [("A2", q) for q in (2, 3, 4, 5)]
CRITERION_1 += [("C2", 3), ("C2", 5), ("A3", 3)]

# frozen from the orbit oracle; A1 at even q has trivial centre and gives q, not q + 3
FROZEN_TOTALS = {("A1", q): (q + 3 if q % 2 else q) for q in (3, 4, 5, 7, 8, 9, 11)}
FROZEN_TOTALS.update({("C2", 3): 18, ("A2", 4): 24})

CRITERION_3 = [("A1", 3, 1), ("A1", 5, 1), ("A1", 7, 1), ("A1", 3, 2), ("C2", 3, 1)]


def record(k: int, ok: bool, detail: str) -> None:
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    conftest.ACCEPTANCE_LINES[k] = line
    print(line)


def fr_of(q):
    return SplitFrobenius(*prime_power(q))


def test_criterion_1_closed_form_vs_orbit_oracle():
    start = time.perf_counter()
    bad = []
    for label, q in CRITERION_1:
        d = datum(label)
        formula, oracle = closed_form_count(d, fr_of(q)), brute_force_count(d, fr_of(q))
        if formula != oracle or FROZEN_TOTALS.get((label, q), formula) != formula:
            bad.append((label, q, formula, oracle))
    elapsed = time.perf_counter() - start
    record(1, not bad, f"{len(CRITERION_1)} instances, formula = oracle, {elapsed:.1f}s; mismatches {bad}")
    assert not bad


def test_criterion_2_per_nu_uniformity():
    bad, checked = [], 0
    for label, q in CRITERION_1:
        par = parametrization(datum(label), *prime_power(q))
        if par.center_order == 1:
            continue
        checked += 1
        expected = par.total() // par.center_order
        counts = [par.per_nu_count(nu) for nu in par.central_characters()]
        if par.total() % par.center_order or set(counts) != {expected}:
            bad.append((label, q, counts))
    record(2, not bad and checked > 0, f"{checked} instances with nontrivial centre uniform; failures {bad}")
    assert not bad


def test_criterion_3_mckay_equality_per_nu():
    start = time.perf_counter()
    bad, summary = [], []
    for label, p, n in CRITERION_3:
        chk = check(label, p, n)
        par = chk.par
        t = chk.table
        g_counts = {}
        for a in p_prime_rows(t, p):
            nu = central_character(t, a)
            g_counts[nu] = g_counts.get(nu, 0) + 1
        b_counts = {nu: par.per_nu_count(nu) for nu in par.central_characters()}
        q = p**n
        expected = (q + 3) // 2 if label == "A1" else 9
        if g_counts != b_counts or set(b_counts.values()) != {expected}:
            bad.append((label, q, g_counts, b_counts))
        summary.append(f"{label}({q}):{expected}")
    elapsed = time.perf_counter() - start
    record(3, not bad, f"per-nu G = B for {' '.join(summary)}, {elapsed:.1f}s")
    assert not bad


def test_criterion_4_orbit_census_equality():
    bad = []
    for label, p, n in CRITERION_3:
        chk = check(label, p, n)
        for nu in chk.nus:
            cg = census_G(chk.group, chk.table, p, nu)
            cb = census_B(chk.datum, p, n, nu)
            if (cg.n1, cg.nd) != (cb.n1, cb.nd):
                bad.append((label, p**n, nu, (cg.n1, cg.nd), (cb.n1, cb.nd)))
            if (label, p, n) == ("A1", 5, 1) and (cg.n1, cg.nd, cb.n1, cb.nd) != (2, 1, 2, 1):
                bad.append(("SL2(5) frozen census", nu))
    record(4, not bad, f"N_i = N'_i on all criterion-3 instances; SL2(5) gives (2, 1); failures {bad}")
    assert not bad


def test_criterion_5_frobenius_fixed_subcensuses():
    d = datum("A1")
    chk = check("A1", 3, 2)
    problems = []
    if fixed_label_census(d, 3, 2, 1, 1, (1,)) != 0:
        problems.append("SL2(9): N'_1(mu != 1)^F0 is not empty")
    for nu in chk.nus:
        g_fixed = chk.census("G", nu).fixed
        b_fixed = chk.census("B", nu).fixed
        if g_fixed != b_fixed:
            problems.append(f"SL2(9) nu={nu}: G {g_fixed} vs B {b_fixed}")
    # q = 27, label side only: the norm is onto, so fixed censuses agree across mu
    per_mu = {
        mu: tuple(fixed_label_census(d, 3, 3, 1, size, mu) for size in (1, 2))
        for mu in parametrization(d, 3, 3).central_characters()
    }
    if len(set(per_mu.values())) != 1:
        problems.append(f"SL2(27) fixed censuses differ across mu: {per_mu}")
    record(5, not problems, f"SL2(9) trivial-norm and G = B fixed censuses; SL2(27) per-mu {per_mu}; {problems}")
    assert not problems


def test_criterion_6_bijection_certificates():
    bad, count = [], 0
    for label, p, n in [("A1", 3, 1), ("A1", 5, 1), ("A1", 3, 2), ("C2", 3, 1)]:
        chk = check(label, p, n)
        for nu in chk.nus:
            bij = chk.bijection(nu)
            count += 1
            literal = all(a == b for a, b in bij.delta_certificate + bij.gamma_certificate)
            if not (bij.certified and literal):
                bad.append((label, p**n, nu))
    record(6, not bad, f"{count} bijections certified for delta and gamma; failures {bad}")
    assert not bad


def test_criterion_8_d_equals_three():
    start = time.perf_counter()
    chk = check("A2", 2, 2)
    par = chk.par
    problems = []
    if par.total() != 24:
        problems.append(f"Borel total {par.total()}")
    per_nu_b = [par.per_nu_count(nu) for nu in chk.nus]
    per_nu_g = [len(chk.g_act.over(nu)) for nu in chk.nus]
    if per_nu_b != [8, 8, 8] or per_nu_g != [8, 8, 8]:
        problems.append(f"per-nu B {per_nu_b}, G {per_nu_g}")
    for nu in chk.nus:
        cg, cb = chk.census("G", nu), chk.census("B", nu)
        if cg.d != 3 or (cg.n1, cg.nd, cg.fixed) != (cb.n1, cb.nd, cb.fixed):
            problems.append(f"census nu={nu}")
    rep = chk.report()
    if rep.verdict != "pass":
        problems.extend(rep.failures)
    elapsed = time.perf_counter() - start
    record(8, not problems, f"SL3(4): total 24, per-nu 8 on both sides, d = 3 censuses equal, {elapsed:.1f}s; {problems}")
    assert not problems


# --- criterion 7 ----------------------------------------------------------------------


def _minor_gcds(m, k):
    rows, cols = len(m), len(m[0])
    g = 0
    for r in itertools.combinations(range(rows), k):
        for c in itertools.combinations(range(cols), k):
            g = math.gcd(g, determinant([[m[i][j] for j in c] for i in r]))
    return g


def _snf_ok(m) -> bool:
    dec = smith_normal_form(m)
    if matmul(matmul(dec.U, m), dec.V) != dec.D:
        return False
    if abs(determinant(dec.U)) != 1 or abs(determinant(dec.V)) != 1:
        return False
    diag = [abs(x) for x in dec.diagonal]
    rows, cols = len(m), len(m[0])
    if any(dec.D[i][j] for i in range(rows) for j in range(cols) if i != j):
        return False
    if any(b % a if a else b for a, b in zip(diag, diag[1:])):
        return False
    # determinantal divisors: d_1 ... d_k = gcd of the k x k minors
    prod = 1
    for k in range(1, min(rows, cols) + 1):
        prod *= diag[k - 1]
        if _minor_gcds(m, k) != prod:
            return False
    return True


def _random_group(rng):
    while True:
        k = int(rng.integers(1, 4))
        factors, base = [], 1
        for _ in range(k):
            base *= int(rng.integers(1 if factors else 2, 9))
            if base > 1:
                factors.append(base)
        if factors and math.prod(factors) <= 10**4:
            return FiniteAbelianGroup(tuple(factors))


def _random_endomorphism(rng, H):
    f = H.invariant_factors
    mat = [[(f[i] // math.gcd(f[i], f[j])) * int(rng.integers(-50, 51)) for j in range(len(f))] for i in range(len(f))]
    return AbelianEndomorphism(H, tuple(map(tuple, mat)))


def _brute_kernel_and_image(psi):
    f = np.array(psi.group.invariant_factors, dtype=np.int64)
    pts = np.array(list(psi.group.elements()), dtype=np.int64)
    images = (pts @ np.array(psi.matrix, dtype=np.int64).T) % f
    kernel = int(np.all(images == 0, axis=1).sum())
    image = len(np.unique(images, axis=0))
    return kernel, image


def test_criterion_7_infrastructure_properties():
    start = time.perf_counter()
    rng = np.random.default_rng(20240607)
    problems = []

    snf_bad = 0
    for _ in range(1000):
        rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        m = rng.integers(-20, 21, size=(rows, cols)).tolist()
        snf_bad += not _snf_ok(m)
    if snf_bad:
        problems.append(f"{snf_bad} SNF failures")

    ker_bad = 0
    for _ in range(500):
        H = _random_group(rng)
        psi = _random_endomorphism(rng, H)
        phi = psi + AbelianEndomorphism.identity(H)  # fixed points of phi = kernel of psi
        kernel, image = _brute_kernel_and_image(psi)
        if not (fixed_point_order(phi) == kernel == lang_quotient(phi).order == H.order // image):
            ker_bad += 1
    if ker_bad:
        problems.append(f"{ker_bad} kernel/cokernel failures")

    for label, q in [("A1", 3), ("A1", 4), ("A1", 5), ("A1", 7), ("A1", 8), ("A1", 9), ("A2", 2), ("A2", 3)]:
        table(label, q)
    for key, t in sorted(BUILT_TABLES.items()):
        try:
            t.check_orthogonality()
        except Exception as exc:  # noqa: BLE001
            problems.append(f"table {key}: {exc}")

    hom_checked = 0
    for label, q in [("A1", 4), ("A1", 8), ("A1", 9), ("A2", 4)]:
        g, t = group(label, q), table(label, q)
        delta, frob = g.diagonal_automorphism(), g.field_automorphism(1)
        pd = automorphism_action(t, g.class_permutation(delta))
        pf = automorphism_action(t, g.class_permutation(frob))
        for first, second, p1, p2 in [(delta, frob, pd, pf), (frob, delta, pf, pd), (delta, delta, pd, pd)]:
            both = automorphism_action(t, g.class_permutation(first.then(second)))
            hom_checked += 1
            if both != [p2[p1[a]] for a in range(t.rows)]:
                problems.append(f"homomorphism fails on {label}({q})")
    elapsed = time.perf_counter() - start
    record(
        7,
        not problems,
        f"1000 SNF, 500 ker/coker, {len(BUILT_TABLES)} tables orthogonal, {hom_checked} compositions, {elapsed:.1f}s; {problems}",
    )
    assert not problems
