import itertools

import numpy as np
import pytest

from relmckay.finite_field import FqContext, defining_polynomial, field_context, is_prime, prime_power

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (3, 3), (5, 2)]


@pytest.mark.parametrize("p, n", FIELDS)
def test_field_axioms(p, n):
    F = field_context(p, n)
    q = F.q
    xs = range(q)
    for a, b in itertools.product(xs, xs):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
    for a, b, c in itertools.product(xs, repeat=3) if q <= 9 else []:
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
    assert sorted(F.exp_table.tolist()) == list(range(1, q))


@pytest.mark.parametrize("p, n", FIELDS)
def test_frobenius_is_an_automorphism_fixing_the_prime_field(p, n):
    F = field_context(p, n)
    fr = F.frobenius_table(1)
    assert sorted(fr.tolist()) == list(range(F.q))
    for a, b in itertools.product(range(F.q), repeat=2):
        assert fr[F.mul(a, b)] == F.mul(int(fr[a]), int(fr[b]))
        assert fr[F.add(a, b)] == F.add(int(fr[a]), int(fr[b]))
    assert F.subfield(1) == list(range(p))
    assert np.array_equal(F.frobenius_table(n), np.arange(F.q))


def test_defining_polynomials():
    assert defining_polynomial(2, 2) == (1, 1, 1)
    assert defining_polynomial(3, 2) == (1, 0, 1)
    assert defining_polynomial(3, 3) == (1, 2, 0, 1)
    assert field_context(2, 2).generator == 2
    assert field_context(3, 2).generator == 4


def test_powers_and_logs():
    F = field_context(3, 2)
    assert F.pow(0, 0) == 1 and F.pow(0, 3) == 0
    with pytest.raises(ZeroDivisionError):
        F.pow(0, -1)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ValueError):
        F.log(0)
    for a in range(1, 9):
        assert F.zeta(F.log(a)) == a
        assert F.mul(F.pow(a, -1), a) == 1
    assert F.trace(1) == 2  # 1 + 1 in F_3
    assert F.sub(5, 5) == 0


def test_prime_helpers():
    assert prime_power(27) == (3, 3)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12):
        with pytest.raises(ValueError):
            prime_power(bad)
    assert [k for k in range(20) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        FqContext(4, 1)


def test_contexts_compare_by_parameters():
    assert field_context(2, 2) == FqContext(2, 2)
    assert hash(field_context(2, 2)) == hash(FqContext(2, 2))
    assert field_context(2, 2) != field_context(2, 3)
