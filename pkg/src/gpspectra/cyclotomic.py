"""Exact arithmetic in Z[zeta_p], Gaussian periods and period polynomials."""

from __future__ import annotations

import cmath
import math
import operator
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from gpspectra.finite_field import Field, is_prime, prime_factors

# cost budget (k^2 * p^2 elementary ops) for the direct Z[zeta_p] expansion
EXACT_EXPANSION_BUDGET = 5 * 10**7


class IntegralityError(ArithmeticError):
    """A quantity that must be a rational integer was not one."""


class CycInt:
    """An element of Z[zeta_p] stored as a reduced coefficient vector.

    ``counts[j]`` is the coefficient of ``zeta_p**j``. Since the ``p`` powers
    sum to zero the vector is only defined up to adding a constant; the stored
    form subtracts the minimum so that ``min(counts) == 0``.
    """

    __slots__ = ("p", "counts", "_hash", "_emb", "_rat")

    def __init__(self, p: int, counts: Iterable[int]):
        if isinstance(counts, np.ndarray) and counts.dtype.kind in "iu":
            if counts.shape != (p,):
                raise ValueError(f"expected {p} coefficients, got shape {counts.shape}")
            c = (counts - counts.min()).tolist()
        else:
            c = [int(v) for v in counts]
            if len(c) != p:
                raise ValueError(f"expected {p} coefficients, got {len(c)}")
            low = min(c)
            if low:
                c = [v - low for v in c]
        self._set(p, c)

    def _set(self, p: int, c: list[int]) -> None:
        self.p = p
        self.counts = tuple(c)
        self._hash = None
        self._emb = None
        self._rat = False  # not yet computed

    @classmethod
    def _from_ints(cls, p: int, c: list[int]) -> CycInt:
        """Trusted constructor: ``c`` is a list of Python ints of length p."""
        low = min(c)
        if low:
            c = [v - low for v in c]
        obj = cls.__new__(cls)
        obj._set(p, c)
        return obj

    @classmethod
    def from_int(cls, p: int, value: int) -> CycInt:
        c = [0] * p
        c[0] = int(value)
        return cls(p, c)

    @classmethod
    def zeta(cls, p: int, j: int = 1) -> CycInt:
        c = [0] * p
        c[j % p] = 1
        return cls(p, c)

    def _check(self, other: CycInt) -> None:
        if not isinstance(other, CycInt):
            raise TypeError("CycInt arithmetic needs CycInt operands")
        if other.p != self.p:
            raise ValueError(f"conductor mismatch: {self.p} vs {other.p}")

    def _coerce(self, other) -> CycInt:
        if isinstance(other, (int, np.integer)):
            return CycInt.from_int(self.p, int(other))
        self._check(other)
        return other

    def __add__(self, other) -> CycInt:
        other = self._coerce(other)
        return CycInt._from_ints(self.p, list(map(operator.add, self.counts, other.counts)))

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt._from_ints(self.p, [-a for a in self.counts])

    def __sub__(self, other) -> CycInt:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> CycInt:
        return self._coerce(other) - self

    def __mul__(self, other) -> CycInt:
        other = self._coerce(other)
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.counts):
            if a:
                for j, b in enumerate(other.counts):
                    if b:
                        out[(i + j) % p] += a * b
        return CycInt._from_ints(p, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, np.integer)):
            other = CycInt.from_int(self.p, int(other))
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.p == other.p and self.counts == other.counts

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.counts))
        return self._hash

    def __repr__(self) -> str:
        r = self.as_rational_integer()
        if r is not None:
            return f"CycInt(p={self.p}, {r})"
        terms = [f"{c}*z^{j}" for j, c in enumerate(self.counts) if c]
        return f"CycInt(p={self.p}, {' + '.join(terms)})"

    def as_rational_integer(self) -> int | None:
        """The integer value if this element lies in Z, else None."""
        if self._rat is False:
            c = self.counts
            if len(c) == 1:
                self._rat = c[0]
            elif c.count(c[1]) - (c[0] == c[1]) == len(c) - 1:
                self._rat = c[0] - c[1]
            else:
                self._rat = None
        return self._rat

    @property
    def is_rational(self) -> bool:
        return self.as_rational_integer() is not None

    def embed_complex(self) -> complex:
        if self._emb is None:
            r = self.as_rational_integer()
            if r is not None:
                self._emb = complex(r, 0.0)
            else:
                c = self.counts
                if max(c) < 2**53:
                    cos, sin = _unit_circle(self.p)
                    v = np.asarray(c, dtype=np.float64)
                    self._emb = complex(float(v @ cos), float(v @ sin))
                else:
                    p = self.p
                    terms = [(x, 2 * math.pi * j / p) for j, x in enumerate(c) if x]
                    re = math.fsum(x * math.cos(t) for x, t in terms)
                    im = math.fsum(x * math.sin(t) for x, t in terms)
                    self._emb = complex(re, im)
        return self._emb

    def conjugate(self) -> CycInt:
        c = self.counts
        return CycInt(self.p, [c[0]] + list(reversed(c[1:])))

    def galois(self, a: int) -> CycInt:
        """Image under the automorphism zeta -> zeta**a."""
        if a % self.p == 0:
            raise ValueError("a must be a unit mod p")
        out = [0] * self.p
        for j, c in enumerate(self.counts):
            out[(j * a) % self.p] += c
        return CycInt(self.p, out)


@lru_cache(maxsize=64)
def _unit_circle(p: int) -> tuple[np.ndarray, np.ndarray]:
    t = 2 * np.pi * np.arange(p) / p
    return np.cos(t), np.sin(t)


def embed_complex(a: CycInt) -> complex:
    return a.embed_complex()


def as_rational_integer(a: CycInt) -> int | None:
    return a.as_rational_integer()


def cyc_arith(a: CycInt, b: CycInt | None, op: str):
    """Dispatch helper: ``op`` is one of add, sub, mul, neg, eq."""
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"operation {op} needs two operands")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "eq":
        return a == b
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients low degree first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = [int(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> IntPoly:
        out = [1]
        for r in roots:
            out = [0] + out
            for i in range(len(out) - 1):
                out[i] -= r * out[i + 1]
        return cls(out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: IntPoly) -> IntPoly:
        if not self.coeffs or not other.coeffs:
            return IntPoly([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPoly(out)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for j in range(self.degree, -1, -1):
            c = self.coeffs[j]
            if c == 0:
                continue
            mono = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
            mag = abs(c)
            body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def integer_roots(self) -> list[int]:
        """Integer roots with multiplicity (rational root test on the constant term)."""
        poly = list(self.coeffs)
        roots: list[int] = []
        if not poly:
            raise ValueError("zero polynomial")
        while len(poly) > 1 and poly[0] == 0:
            roots.append(0)
            poly = poly[1:]
        if len(poly) == 1:
            return roots
        cands = set()
        for d in _int_divisors(abs(poly[0])):
            cands.update((d, -d))
        progress = True
        while progress and len(poly) > 1:
            progress = False
            for r in sorted(cands):
                if _peval(poly, r) == 0:
                    poly = _deflate(poly, r)
                    roots.append(r)
                    progress = True
                    break
        return sorted(roots)


def _peval(c: Sequence[int], x: int) -> int:
    acc = 0
    for v in reversed(c):
        acc = acc * x + v
    return acc


def _deflate(c: list[int], r: int) -> list[int]:
    """Divide by (x - r), assuming r is a root."""
    n = len(c) - 1
    out = [0] * n
    carry = 0
    for i in range(n, 0, -1):
        carry = c[i] + carry * r
        out[i - 1] = carry
    return out


def _int_divisors(n: int) -> list[int]:
    if n == 0:
        return [0]
    fs = []
    m = n
    for f in prime_factors(m):
        e = 0
        while m % f == 0:
            m //= f
            e += 1
        fs.append((f, e))
    out = [1]
    for f, e in fs:
        out = [d * f**i for d in out for i in range(e + 1)]
    return out


# --- Gaussian periods ----------------------------------------------------------


def _check_k(field: Field, k: int) -> None:
    if k < 1 or (field.q - 1) % k:
        raise ValueError(f"k={k} must divide q-1={field.q - 1}")


def period_count_matrix(field: Field, k: int) -> np.ndarray:
    """``M[i, j] = #{x in C_i : Tr(x) = j}`` as a (k, p) int64 array."""
    _check_k(field, k)
    logs = field.log_table[1:]
    tr = field.trace_table[1:]
    flat = (logs % k) * field.p + tr
    return np.bincount(flat, minlength=k * field.p).reshape(k, field.p)


def gaussian_periods(field: Field, k: int) -> list[CycInt]:
    """All ``k`` periods, indexed by coset."""
    mat = period_count_matrix(field, k)
    return [CycInt(field.p, row) for row in mat]


def gaussian_period(field: Field, k: int, i: int) -> CycInt:
    _check_k(field, k)
    if not 0 <= i < k:
        raise ValueError(f"coset index {i} out of range for k={k}")
    coset = field.coset(i, k)
    counts = np.bincount(field.trace_table[coset], minlength=field.p)
    return CycInt(field.p, counts)


# --- period polynomials --------------------------------------------------------


def _expand_exact(p: int, periods: Sequence[CycInt]) -> list[int]:
    """prod (x - eta) with Z[zeta_p] coefficients, projected to Z."""
    # coefficient array: rows = degree, columns = power of zeta
    poly = np.zeros((1, p), dtype=object)
    poly[0, 0] = 1
    for eta in periods:
        shifted = np.zeros((poly.shape[0] + 1, p), dtype=object)
        shifted[1:] = poly
        prod = np.zeros_like(poly)
        for t, c in enumerate(eta.counts):
            if c:
                prod = prod + c * np.roll(poly, t, axis=1)
        shifted[:-1] -= prod
        poly = shifted - shifted.min(axis=1, keepdims=True)
    out = []
    for row in poly:
        val = CycInt(p, row.tolist()).as_rational_integer()
        if val is None:
            raise IntegralityError("period polynomial coefficient is not a rational integer")
        out.append(val)
    return out


def _miller_rabin(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for s in small:
        if n % s == 0:
            return n == s
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _modular_primes(p: int, count: int) -> list[int]:
    """Primes l = 1 mod p (and mod 2) just below 2^31, descending."""
    step = 2 * p if p > 2 else 2
    top = (1 << 31) - 1
    l = top - (top - 1) % step
    out = []
    while len(out) < count:
        if _miller_rabin(l):
            out.append(l)
        l -= step
    return out


def _root_of_unity(p: int, l: int) -> int:
    """A primitive p-th root of unity modulo the prime l."""
    for g in range(2, l):
        r = pow(g, (l - 1) // p, l)
        if r != 1:
            return r
    raise AssertionError("no root of unity")  # unreachable


def _expand_mod(values: np.ndarray, moduli: np.ndarray) -> np.ndarray:
    """Coefficients of prod_i (x - values[:, i]) modulo each row's modulus.

    ``values`` has shape (P, k); the result has shape (P, k + 1), low degree first.
    """
    P, k = values.shape
    L = moduli[:, None]
    poly = np.zeros((P, k + 1), dtype=np.int64)
    poly[:, 0] = 1
    for deg in range(k):
        v = values[:, deg : deg + 1]
        head = poly[:, : deg + 1].copy()
        poly[:, 1 : deg + 2] = head
        poly[:, 0] = 0
        poly[:, : deg + 1] = (poly[:, : deg + 1] - v * head) % L
    return poly


def _mulmod_vec(counts: np.ndarray, powers: np.ndarray, l: int) -> np.ndarray:
    """(counts @ powers) mod l without int64 overflow (powers < 2^31)."""
    cm = counts % l
    lo = powers & 0xFFFF
    hi = powers >> 16
    # each partial sum stays below 2^63 as long as p * l * 2^16 does
    a = (cm @ lo) % l
    b = (cm @ hi) % l
    return (a + (b << 16) % l) % l


def _expand_multimodular(p: int, counts: np.ndarray) -> list[int]:
    """prod (x - eta_i) by CRT over primes where zeta_p is an integer.

    Each prime is used under two embeddings zeta -> r and zeta -> r^a with
    ``a`` a generator of (Z/p)^*; a Galois-invariant (rational) coefficient
    gives the same residue under both, so disagreement signals a bug.
    """
    k = counts.shape[0]
    emb = np.abs(np.exp(2j * np.pi * np.arange(p) / p) @ counts.T.astype(float))
    bits = float(np.sum(np.log2(1.0 + emb))) + 2.0
    nprimes = int(bits // 30) + 2
    primes = _modular_primes(p, nprimes)
    gen = primitive_root_mod(p) if p > 2 else 1
    vals_a, vals_b = [], []
    for l in primes:
        r = _root_of_unity(p, l)
        for a, sink in ((1, vals_a), (gen, vals_b)):
            ra = pow(r, a, l)
            powers = np.array([pow(ra, j, l) for j in range(p)], dtype=np.int64)
            sink.append(_mulmod_vec(counts, powers, l))
    moduli = np.array(primes, dtype=np.int64)
    res_a = _expand_mod(np.array(vals_a), moduli)
    if p > 2:
        res_b = _expand_mod(np.array(vals_b), moduli)
        if not np.array_equal(res_a, res_b):
            raise IntegralityError("period polynomial coefficient is not Galois invariant")
    # CRT, one coefficient at a time
    M = 1
    acc = [0] * (k + 1)
    for l, res in zip(primes, res_a.tolist()):
        inv = pow(M % l, -1, l)
        for i in range(k + 1):
            acc[i] += M * (((res[i] - acc[i]) * inv) % l)
        M *= l
    half = M // 2
    return [a - M if a > half else a for a in acc]


def expand_periods(p: int, periods: Sequence[CycInt], method: str = "auto") -> IntPoly:
    if method not in ("auto", "exact", "modular"):
        raise ValueError(f"unknown method {method!r}")
    k = len(periods)
    if method == "auto":
        method = "exact" if k * k * p * p <= EXACT_EXPANSION_BUDGET else "modular"
    if method == "exact":
        coeffs = _expand_exact(p, periods)
    else:
        counts = np.array([c.counts for c in periods], dtype=object)
        if counts.size and max(max(c.counts) for c in periods) < (1 << 31):
            counts = counts.astype(np.int64)
        coeffs = _expand_multimodular(p, counts)
    poly = IntPoly(coeffs)
    if poly.degree != k or poly.coeffs[-1] != 1:
        raise IntegralityError("expanded polynomial is not monic of the right degree")
    return poly


def period_polynomial(field: Field, k: int, method: str = "auto") -> IntPoly:
    """Psi_{k,q}(x) = prod_i (x - eta_i), computed exactly.

    ``method="exact"`` multiplies out in Z[zeta_p]; ``"modular"`` uses a
    multimodular expansion with a Galois-invariance check; ``"auto"`` picks
    the exact route when it is cheap.
    """
    periods = gaussian_periods(field, k)
    return expand_periods(field.p, periods, method)


def reduced_period_polynomial(psi: IntPoly, k: int) -> IntPoly:
    """Psi*(X) = k^k Psi((X - 1)/k), whose roots are k*eta + 1."""
    if psi.degree != k or psi.coeffs[-1] != 1:
        raise ValueError("psi must be monic of degree k")
    out = [0] * (k + 1)
    # k^(k-j) (X - 1)^j for each coefficient c_j
    for j, c in enumerate(psi.coeffs):
        scale = c * k ** (k - j)
        for i in range(j + 1):
            out[i] += scale * math.comb(j, i) * (-1) ** (j - i)
    return IntPoly(out)


def integrality_index(p: int, m: int, k: int) -> int:
    """N = gcd((q-1)/(p-1), k), the number of rational factors of Psi."""
    q = p**m
    return math.gcd((q - 1) // (p - 1), k)


def orbit_factors(field: Field, k: int, method: str = "auto") -> list[IntPoly]:
    """The N rational factors psi^(i) = prod_{j = i mod N} (x - eta_j)."""
    periods = gaussian_periods(field, k)
    N = integrality_index(field.p, field.m, k)
    return [expand_periods(field.p, periods[i::N], method) for i in range(N)]


def periods_are_generator_independent(field: Field, k: int, other_omega: int) -> bool:
    """Compare period multisets for two primitive elements."""
    from collections import Counter

    alt = field.with_generator(other_omega)
    return Counter(gaussian_periods(field, k)) == Counter(gaussian_periods(alt, k))


def primitive_root_mod(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 1
    fs = prime_factors(p - 1)
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // f, p) != 1 for f in fs))


def zeta_powers(p: int) -> np.ndarray:
    return np.array([cmath.exp(2j * math.pi * j / p) for j in range(p)])
