"""Table-driven arithmetic in F_q, q = p^n.

An element is an int ``0 <= x < q`` whose base-p digits are the coefficients
of a polynomial in ``F_p[X]`` reduced modulo the defining polynomial. The
defining polynomial is the first irreducible monic polynomial of degree n
when monic polynomials ``X^n + c_{n-1} X^{n-1} + ... + c_0`` are ordered by
the integer ``sum c_i p^i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


def is_prime(p: int) -> bool:
    return p >= 2 and all(p % k for k in range(2, math.isqrt(p) + 1))


def prime_power(q: int) -> tuple[int, int]:
    """``(p, n)`` with ``q = p**n``; raises for non prime powers."""
    for p in range(2, q + 1):
        if q % p == 0:
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1 or not is_prime(p):
                break
            return p, n
    raise ValueError(f"{q} is not a prime power")


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    """Remainder of ``a`` by monic ``f``; coefficient lists are low degree first."""
    a = [x % p for x in a]
    df = len(f) - 1
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k]
        if c:
            for i in range(df + 1):
                a[k - df + i] = (a[k - df + i] - c * f[i]) % p
    return a[:df] + [0] * max(0, df - len(a))


def _is_irreducible(f: list[int], p: int) -> bool:
    n = len(f) - 1
    for deg in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            g = list(tail) + [1]
            if not any(_poly_mod(f, g, p)[:deg]):
                return False
    return True


def defining_polynomial(p: int, n: int) -> tuple[int, ...]:
    """Least irreducible monic polynomial of degree n over F_p (low degree first)."""
    if n == 1:
        return (0, 1)
    for k in range(p**n):
        tail = [(k // p**i) % p for i in range(n)]
        f = tail + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FqContext:
    """Finite field with precomputed addition and multiplication tables."""

    p: int
    n: int
    modulus: tuple[int, ...] = field(init=False)
    add_table: np.ndarray = field(init=False, repr=False)
    mul_table: np.ndarray = field(init=False, repr=False)
    neg_table: np.ndarray = field(init=False, repr=False)
    inv_table: np.ndarray = field(init=False, repr=False)
    generator: int = field(init=False)
    log_table: np.ndarray = field(init=False, repr=False)
    exp_table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.n < 1:
            raise ValueError(f"invalid field parameters p={self.p}, n={self.n}")
        p, n = self.p, self.n
        q = p**n
        f = list(defining_polynomial(p, n))
        digits = np.array([[(x // p**i) % p for i in range(n)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(n, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights
        # products: convolve digit vectors then reduce by f
        conv = np.zeros((q, q, 2 * n - 1), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                conv[:, :, i + j] += digits[:, None, i] * digits[None, :, j]
        red = np.array([_poly_mod([0] * k + [1], f, p) for k in range(2 * n - 1)], dtype=np.int64)
        mul = ((conv @ red) % p) @ weights
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.nonzero(mul[x] == 1)[0][0])
        gen = next(g for g in range(1, q) if _multiplicative_order(mul, g) == q - 1)
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            x = int(mul[x, gen])
        for name, value in [
            ("modulus", tuple(f)),
            ("add_table", add),
            ("mul_table", mul),
            ("neg_table", neg),
            ("inv_table", inv),
            ("generator", gen),
            ("log_table", log),
            ("exp_table", exp),
        ]:
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def order(self) -> int:
        return self.q

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_q")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse in F_q")
            return 1 if e == 0 else 0
        return int(self.exp_table[(int(self.log_table[a]) * e) % (self.q - 1)])

    def zeta(self, k: int) -> int:
        """``generator ** k``."""
        return int(self.exp_table[k % (self.q - 1)])

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of 0")
        return int(self.log_table[a])

    def frobenius(self, a: int, j: int = 1) -> int:
        """``a ** (p ** j)``."""
        return self.pow(a, self.p**j)

    def frobenius_table(self, j: int = 1) -> np.ndarray:
        return np.array([self.frobenius(a, j) for a in range(self.q)], dtype=np.int64)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p."""
        t = 0
        for j in range(self.n):
            t = self.add(t, self.frobenius(a, j))
        return t

    def subfield(self, j: int) -> list[int]:
        """Elements of ``F_{p^j}`` (fixed by ``x -> x^(p^j)``)."""
        return [a for a in range(self.q) if self.frobenius(a, j) == a]

    def basis(self) -> list[int]:
        """F_p-basis ``1, X, ..., X^(n-1)`` of F_q."""
        return [self.p**i for i in range(self.n)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FqContext) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))


def _multiplicative_order(mul: np.ndarray, g: int) -> int:
    x, k = g, 1
    while x != 1:
        x = int(mul[x, g])
        k += 1
    return k


@lru_cache(maxsize=None)
def field_context(p: int, n: int = 1) -> FqContext:
    return FqContext(p, n)
