"""Explicit small finite fields GF(p^m) with log, antilog and trace tables.

Elements are stored as integers ``0 <= x < q``: the base-``p`` digits of ``x``
(least significant first) are the polynomial-basis coordinates of the element,
so ``x = c_0 + c_1 p + ... + c_{m-1} p^{m-1}`` stands for
``c_0 + c_1 t + ... + c_{m-1} t^{m-1}`` modulo the defining polynomial.
All multiplication after construction goes through the log tables.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

DEFAULT_MAX_Q = 10**6
MAX_Q_ENV = "GP_SPECTRA_MAX_Q"


class FieldSizeError(ValueError):
    """Raised when a requested field exceeds the configured size cap."""


def max_field_size() -> int:
    value = os.environ.get(MAX_Q_ENV)
    return int(value) if value else DEFAULT_MAX_Q


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``q = p**m`` and ``p`` prime, or None."""
    if q < 2:
        return None
    for p in prime_factors(q)[:1]:
        m = 0
        while q % p == 0:
            q //= p
            m += 1
        if q == 1:
            return p, m
    return None


# --- polynomials over GF(p), coefficient lists low degree first ----------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = [c % p for c in a]
    _trim(a)
    df = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def poly_mulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return poly_mod(prod, f, p)


def poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = poly_mod(a, f, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, f, p)
        base = poly_mulmod(base, base, f, p)
        e >>= 1
    return poly_mod(result, f, p)


def poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test: ``x^(p^m) = x mod f`` and ``gcd(x^(p^(m/r)) - x, f) = 1``."""
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    for r in prime_factors(m):
        h = poly_powmod(x, p ** (m // r), f, p)
        if len(poly_gcd(f, poly_sub(h, x, p), p)) != 1:
            return False
    return poly_sub(poly_powmod(x, p**m, f, p), x, p) == []


def _eval_mod(f: list[int], r: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * r + c) % p
    return acc


def find_irreducible(p: int, m: int) -> list[int]:
    """Lexicographically smallest monic irreducible of degree ``m`` over GF(p).

    Candidates are compared on their coefficient tuples ``(a_0, ..., a_{m-1})``,
    low degree first.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("degree must be positive")
    for low in itertools.product(range(p), repeat=m):
        f = list(low) + [1]
        # cheap rejection: a root in GF(p) means a linear factor
        if m > 1 and any(_eval_mod(f, r, p) == 0 for r in range(p)):
            continue
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


# --- the field -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Field:
    """GF(p^m) with a fixed primitive element and precomputed tables.

    ``exp_table[i]`` is omega**i, ``log_table[x]`` the discrete log of ``x``
    (``-1`` for zero) and ``trace_table[x]`` the absolute trace in GF(p).
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    omega: int
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)
    trace_table: np.ndarray = field(repr=False)
    digits: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.m

    @cached_property
    def powers(self) -> np.ndarray:
        return self.p ** np.arange(self.m, dtype=np.int64)

    def to_coeffs(self, x: int) -> tuple[int, ...]:
        return tuple(int(c) for c in self.digits[x])

    def from_coeffs(self, coeffs) -> int:
        if len(coeffs) != self.m:
            raise ValueError("coefficient vector has wrong length")
        return int(sum((int(c) % self.p) * self.p**i for i, c in enumerate(coeffs)))

    def add(self, x, y):
        s = (self.digits[x] + self.digits[y]) % self.p
        return s @ self.powers

    def neg(self, x):
        return ((-self.digits[x]) % self.p) @ self.powers

    def sub(self, x, y):
        s = (self.digits[x] - self.digits[y]) % self.p
        return s @ self.powers

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        e = (int(self.log_table[x]) + int(self.log_table[y])) % (self.q - 1)
        return int(self.exp_table[e])

    def mul_array(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Elementwise product of two broadcastable index arrays."""
        x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
        e = (self.log_table[x] + self.log_table[y]) % (self.q - 1)
        out = self.exp_table[e]
        return np.where((x == 0) | (y == 0), 0, out)

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e <= 0:
                raise ZeroDivisionError("0 has no non-positive powers")
            return 0
        return int(self.exp_table[(int(self.log_table[x]) * e) % (self.q - 1)])

    def inv(self, x: int) -> int:
        return self.pow(x, -1)

    def power_of_omega(self, i: int) -> int:
        return int(self.exp_table[i % (self.q - 1)])

    def trace(self, x: int) -> int:
        return int(self.trace_table[x])

    def coset_index(self, x: int, k: int) -> int:
        """Index ``i`` of the cyclotomic coset ``omega^i <omega^k>`` containing ``x``."""
        if (self.q - 1) % k:
            raise ValueError(f"k={k} does not divide q-1={self.q - 1}")
        if x == 0:
            raise ValueError("0 lies in no cyclotomic coset")
        return int(self.log_table[x]) % k

    def coset(self, i: int, k: int) -> np.ndarray:
        """Elements of ``C_i^{(k,q)}`` as an index array."""
        if (self.q - 1) % k:
            raise ValueError(f"k={k} does not divide q-1={self.q - 1}")
        return self.exp_table[i % k :: k]

    def with_generator(self, omega: int) -> Field:
        """Same field and modulus with a different primitive element."""
        return _tables(self.p, self.m, list(self.modulus), omega)


def _element_order_ok(g: list[int], f: list[int], p: int, q: int, factors) -> bool:
    if not g:
        return False
    return all(poly_powmod(g, (q - 1) // r, f, p) != [1] for r in factors)


def _mul_by_matrix(a: list[int], f: list[int], p: int) -> np.ndarray:
    """Matrix of multiplication by ``a`` on coordinate vectors (columns = images of t^j)."""
    m = len(f) - 1
    cols = []
    for j in range(m):
        img = poly_mulmod(a, [0] * j + [1], f, p)
        cols.append(img + [0] * (m - len(img)))
    return np.array(cols, dtype=np.int64).T


def _tables(p: int, m: int, f: list[int], omega: int) -> Field:
    q = p**m
    powers = p ** np.arange(m, dtype=np.int64)
    idx = np.arange(q, dtype=np.int64)
    digits = (idx[:, None] // powers[None, :]) % p
    w = [int(c) for c in digits[omega]]
    _trim(w)

    # first block by repeated multiplication, the rest one block at a time
    block = max(1, math.isqrt(q - 1))
    step = _mul_by_matrix(w, f, p)
    vecs = np.zeros((q - 1, m), dtype=np.int64)
    v = np.zeros(m, dtype=np.int64)
    v[0] = 1
    for i in range(min(block, q - 1)):
        vecs[i] = v
        v = (step @ v) % p
    jump = _mul_by_matrix(poly_powmod(w, block, f, p), f, p)
    for start in range(block, q - 1, block):
        stop = min(start + block, q - 1)
        vecs[start:stop] = (vecs[start - block : stop - block] @ jump.T) % p
    exp_table = vecs @ powers
    log_table = np.full(q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(q - 1, dtype=np.int64)
    if (log_table[1:] < 0).any() or exp_table[0] != 1:
        raise ValueError(f"element {omega} is not a generator of GF({q})*")

    # trace of the basis t^j, extended linearly
    tr_basis = []
    for j in range(m):
        acc: list[int] = []
        b = [0] * j + [1]
        for i in range(m):
            term = poly_powmod(b, p**i, f, p)
            acc = poly_sub(acc, [(-c) % p for c in term], p)
        acc = poly_mod(acc, f, p)
        if len(acc) > 1:
            raise AssertionError("trace left the prime field")
        tr_basis.append(acc[0] if acc else 0)
    trace_table = (digits @ np.array(tr_basis, dtype=np.int64)) % p

    return Field(
        p=p,
        m=m,
        modulus=tuple(f),
        omega=omega,
        exp_table=exp_table,
        log_table=log_table,
        trace_table=trace_table,
        digits=digits,
    )


def build_field(p: int, m: int, max_q: int | None = None) -> Field:
    """Build GF(p^m) with the deterministic modulus and primitive element.

    ``omega`` is the generator of GF(q)* with the smallest coefficient tuple
    ``(c_0, ..., c_{m-1})`` in lexicographic order.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be positive")
    cap = max_field_size() if max_q is None else max_q
    q = p**m
    if q > cap:
        raise FieldSizeError(f"q={q} exceeds the field size cap {cap}")
    f = find_irreducible(p, m)
    factors = prime_factors(q - 1) if q > 2 else []
    for coeffs in itertools.product(range(p), repeat=m):
        g = _trim(list(coeffs))
        if _element_order_ok(g, f, p, q, factors):
            omega = sum(c * p**i for i, c in enumerate(coeffs))
            return _tables(p, m, f, omega)
    raise AssertionError("no primitive element found")  # unreachable


def coset_index(field: Field, x: int, k: int) -> int:
    return field.coset_index(x, k)
