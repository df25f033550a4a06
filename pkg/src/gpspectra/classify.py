"""Structural classifications of GP-graphs.

Integrality, semiprimitive pairs, strongly regular parameters and
Latin-square type, Ramanujan verdicts, Hamming detection and energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from gpspectra.cyclotomic import CycInt, gaussian_periods
from gpspectra.finite_field import Field, divisors
from gpspectra.graph import GPGraph, adjacency_matrix, is_undirected
from gpspectra.spectra import (
    Spectrum,
    closed_form_k3,
    closed_form_k4,
    closed_form_semiprimitive,
    embed,
    semiprimitive_eigenvalues,
)


class TheoremViolation(AssertionError):
    """A computed object contradicts a proven statement (a bug detector)."""


class DisconnectedGraphError(ValueError):
    """Ramanujan verdicts are only defined for connected graphs."""


class NotStronglyRegular(ValueError):
    pass


# --- integrality ---------------------------------------------------------------------


def is_integral_pred(p: int, m: int, k: int) -> bool:
    """Spec(Gamma(k, p^m)) is integral iff k | (q-1)/(p-1)."""
    q = p**m
    if (q - 1) % k:
        raise ValueError(f"k={k} must divide q-1={q - 1}")
    return ((q - 1) // (p - 1)) % k == 0


def integrality_condition(p: int, m: int, k: int) -> bool:
    """(p = 1 mod k and k | m) or p != 1 mod k."""
    return (p % k == 1 % k and m % k == 0) or p % k != 1 % k


def check_integrality_consistency(field: Field, k: int, periods: list[CycInt] | None = None) -> bool:
    """Compare the arithmetic criterion with the actual periods.

    Returns True when they agree and, in the integral case, every period
    satisfies k*eta + 1 = 0 (mod p).
    """
    p, m = field.p, field.m
    pred = is_integral_pred(p, m, k)
    if periods is None:
        periods = gaussian_periods(field, k)
    ints = [eta.as_rational_integer() for eta in periods]
    actual = all(v is not None for v in ints)
    if pred != actual:
        return False
    if actual and any((k * v + 1) % p for v in ints):
        return False
    return True


# --- semiprimitive pairs ------------------------------------------------------------


@dataclass(frozen=True)
class SemiprimitiveWitness:
    """t minimal with k | p^t + 1, s = m/(2t), sigma = (-1)^(s+1).

    For k = 2 with m odd the pair is semiprimitive only through q = 1 (mod 4);
    then ``paley_only`` is set and t, s, sigma are None.
    """

    k: int
    p: int
    m: int
    t: Optional[int]
    s: Optional[int]
    sigma: Optional[int]
    paley_only: bool = False


def is_semiprimitive_pair(k: int, p: int, m: int) -> SemiprimitiveWitness | None:
    q = p**m
    if k == 2:
        if q % 4 != 1:
            return None
        if m % 2:
            return SemiprimitiveWitness(k, p, m, None, None, None, paley_only=True)
        # p odd and m even: 2 | p + 1, so t = 1
        s = m // 2
        return SemiprimitiveWitness(k, p, m, 1, s, (-1) ** (s + 1))
    if k < 2 or m % 2:
        return None
    half = m // 2
    if k == p**half + 1:
        return None
    for t in divisors(half):
        if (p**t + 1) % k == 0:
            s = half // t
            return SemiprimitiveWitness(k, p, m, t, s, (-1) ** (s + 1))
    return None


def table1_semiprimitive_k(p: int, m: int) -> list[int]:
    """All k >= 2 making (k, p^m) a semiprimitive pair."""
    if m % 2:
        return [2] if p**m % 4 == 1 else []
    found = set()
    for t in divisors(m // 2):
        for k in divisors(p**t + 1):
            if k >= 2 and is_semiprimitive_pair(k, p, m) is not None:
                found.add(k)
    return sorted(found)


# --- strongly regular parameters -------------------------------------------------------


@dataclass(frozen=True)
class LatinType:
    """PL_delta(w) (pseudo-Latin square) or the NL-like shape with h."""

    kind: str  # "PL" or "NL~"
    w: int
    param: int  # delta for PL, h for NL~

    def srg(self) -> tuple[int, int, int, int]:
        w, x = self.w, self.param
        if self.kind == "PL":
            return (w * w, x * (w - 1), x * x - 3 * x + w, x * (x - 1))
        return (w * w, x * (w + 1), x * x + 3 * x - w, x * (x + 1))

    def __str__(self) -> str:
        if self.kind == "PL":
            return f"PL_{self.param}({self.w})"
        return f"NL~_{self.param}({self.w})"


@dataclass(frozen=True)
class SrgParams:
    v: int
    r: int
    e: int
    d: int
    comp_r: int
    comp_e: int
    comp_d: int
    intersection: tuple[int, int, int, int]
    comp_intersection: tuple[int, int, int, int]
    eigenvalues: tuple[int, int]  # (f, g), f > 0 > g
    comp_eigenvalues: tuple[int, int]
    latin: Optional[LatinType] = None
    comp_latin: Optional[LatinType] = None
    conference: bool = False

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.v, self.r, self.e, self.d)

    @property
    def comp_params(self) -> tuple[int, int, int, int]:
        return (self.v, self.comp_r, self.comp_e, self.comp_d)

    def feasible(self) -> bool:
        ok = self.r * (self.r - self.e - 1) == (self.v - self.r - 1) * self.d
        ok_c = self.comp_r * (self.comp_r - self.comp_e - 1) == (self.v - self.comp_r - 1) * self.comp_d
        return ok and ok_c


def _latin(f: int, g: int, s: int) -> LatinType:
    w = f - g
    if s % 2:
        return LatinType("PL", w, -g)
    return LatinType("NL~", w, min(abs(f), abs(g)))


def srg_params(k: int, p: int, m: int, witness: SemiprimitiveWitness | None = None) -> SrgParams:
    if witness is None:
        witness = is_semiprimitive_pair(k, p, m)
    if witness is None or witness.paley_only:
        raise ValueError(f"({k}, {p}^{m}) is not a semiprimitive pair with m even")
    q = p**m
    n = (q - 1) // k
    l1, l2 = semiprimitive_eigenvalues(k, p, m, witness.sigma)
    d = n + l1 * l2
    e = d + l1 + l2
    comp_r = q - n - 1
    comp_e = q - 2 - 2 * n + d
    comp_d = q - 2 * n + e
    f, g = max(l1, l2), min(l1, l2)
    cf, cg = max(-1 - l1, -1 - l2), min(-1 - l1, -1 - l2)
    latin = _latin(f, g, witness.s)
    if latin.kind == "PL":
        comp_latin = _latin(cf, cg, witness.s)
    else:
        # the complement of NL_h(w) has the same shape with h -> w - 1 - h
        comp_latin = LatinType("NL~", latin.w, latin.w - 1 - latin.param)
    out = SrgParams(
        v=q,
        r=n,
        e=e,
        d=d,
        comp_r=comp_r,
        comp_e=comp_e,
        comp_d=comp_d,
        intersection=(n, n - e - 1, 1, d),
        comp_intersection=(comp_r, n - d, 1, q - 2 * n + e),
        eigenvalues=(f, g),
        comp_eigenvalues=(cf, cg),
        latin=latin,
        comp_latin=comp_latin,
        conference=2 * n + (q - 1) * (e - d) == 0,
    )
    if latin.srg() != out.params or comp_latin.srg() != out.comp_params:
        raise TheoremViolation(f"Latin-square shape does not reproduce srg for ({k}, {p}^{m})")
    return out


def verify_srg_by_counting(graph: GPGraph, cap: int = 4096) -> tuple[int, int]:
    """(e, d) by counting common neighbours of every pair of vertices."""
    if not is_undirected(graph):
        raise ValueError("strong regularity is checked on undirected graphs only")
    A = adjacency_matrix(graph, cap).astype(np.float32)
    C = A @ A  # exact: counts are far below 2^24
    adj = A.astype(bool)
    np.fill_diagonal(adj, False)
    off = ~adj
    np.fill_diagonal(off, False)
    on_edges = np.unique(C[adj])
    off_edges = np.unique(C[off])
    if on_edges.size != 1 or off_edges.size > 1:
        raise NotStronglyRegular(
            f"common-neighbour counts are not constant: adjacent {on_edges[:5]}, non-adjacent {off_edges[:5]}"
        )
    d = int(off_edges[0]) if off_edges.size else 0
    return int(on_edges[0]), d


# --- Ramanujan ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RamanujanVerdict:
    lambda_max: float
    bound_undirected: float
    bound_directed_LP: float
    is_ramanujan_undirected: bool
    is_ramanujan_directed_classical: bool
    is_ramanujan_directed_LP: bool
    adjacency_normal: bool = True
    undirected: bool = True

    @property
    def is_ramanujan(self) -> bool:
        if self.undirected:
            return self.is_ramanujan_undirected
        return self.is_ramanujan_directed_classical


_RAMA_TOL = 1e-9


def _le_bound(v, bound_sq: int) -> bool:
    """|v| <= sqrt(bound_sq), exactly for integers."""
    if isinstance(v, int):
        return v * v <= bound_sq
    return abs(embed(v)) <= math.sqrt(bound_sq) + _RAMA_TOL


def is_ramanujan(spec: Spectrum, n: int, undirected: bool | None = None) -> RamanujanVerdict:
    """Verdicts from the spectrum of a connected n-regular GP-graph.

    lambda = max |lambda| over the eigenvalues with |lambda| != n.
    """
    principal = sum(mult for v, mult in spec if isinstance(v, int) and v == n)
    if principal != 1:
        raise DisconnectedGraphError(f"degree {n} has multiplicity {principal}; graph is disconnected")
    if undirected is None:
        undirected = all(abs(embed(v).imag) < 1e-12 for v, _ in spec)
    rest = [v for v, _ in spec if abs(abs(embed(v)) - n) > _RAMA_TOL]
    lam = max((abs(embed(v)) for v in rest), default=0.0)
    undirected_ok = all(_le_bound(v, 4 * (n - 1)) for v in rest)
    lp_ok = all(_le_bound(v, n) for v in rest)
    return RamanujanVerdict(
        lambda_max=lam,
        bound_undirected=2 * math.sqrt(n - 1) if n >= 1 else 0.0,
        bound_directed_LP=math.sqrt(n),
        is_ramanujan_undirected=undirected_ok,
        is_ramanujan_directed_classical=undirected_ok,  # GP-graphs are normal
        is_ramanujan_directed_LP=lp_ok,
        adjacency_normal=True,
        undirected=undirected,
    )


def adjacency_is_normal(A: np.ndarray) -> bool:
    B = A.astype(np.int64)
    return bool(np.array_equal(B @ B.T, B.T @ B))


def rama_classification_semiprimitive(k: int, p: int, m: int) -> bool:
    """Arithmetic Ramanujan verdict for a semiprimitive Gamma(k, p^m).

    Also checks that the complement is Ramanujan, as it must be for every
    semiprimitive pair.
    """
    wit = is_semiprimitive_pair(k, p, m)
    if wit is None:
        raise ValueError(f"({k}, {p}^{m}) is not a semiprimitive pair")
    q = p**m
    n = (q - 1) // k
    comp = closed_form_semiprimitive(k, p, m, complement=True)
    if not is_ramanujan(comp, (k - 1) * n, undirected=True).is_ramanujan_undirected:
        raise TheoremViolation(f"complement of Gamma({k}, {p}^{m}) is not Ramanujan")
    if k == 2:
        return True
    if m % 2:
        return False
    if k == 3:
        return (p == 2 and m >= 4) or (p != 2 and p % 3 == 2 and m >= 2)
    if k == 4:
        return (p == 3 and m >= 4) or (p != 3 and p % 4 == 3 and m >= 2)
    if k == 5:
        return (
            (p == 2 and m >= 8 and m % 4 == 0)
            or (p != 2 and p % 5 in (2, 3) and m >= 4 and m % 4 == 0)
            or (p % 5 == 4 and m >= 2)
        )
    return False


def check_rama_nonsemiprimitive_k34(p: int, m: int, k: int) -> bool:
    """Direct Ramanujan check of Gamma(k, p^m), k in {3, 4}, p = 1 (mod k)."""
    if k not in (3, 4) or p % k != 1 or (k == 4 and m % 2):
        raise ValueError("needs k in {3,4}, p = 1 (mod k), and m even when k = 4")
    q = p**m
    spec = closed_form_k3(p, m) if k == 3 else closed_form_k4(p, m)
    verdict = is_ramanujan(spec, (q - 1) // k, undirected=True)
    if not verdict.is_ramanujan_undirected:
        raise TheoremViolation(f"Gamma({k}, {p}^{m}) is not Ramanujan: lambda = {verdict.lambda_max}")
    return True


# --- Hamming and energy ---------------------------------------------------------------------


def is_hamming_gp(k: int, p: int, M: int) -> tuple[int, int] | None:
    """(b, m) with M = b m and k = (p^M - 1) / (b (p^m - 1)), so Gamma(k, p^M) = H(b, p^m).

    b must divide p^m - 1; b | (p^M - 1)/(p^m - 1) alone is not enough
    (Gamma(10, 3^4) is 9 copies of K_9, not H(4, 3)).
    """
    for b in divisors(M):
        m = M // b
        ratio = (p**M - 1) // (p**m - 1)
        if (p**m - 1) % b == 0 and ratio // b == k:
            return b, m
    return None


def energy_check(spec: Spectrum, n: int) -> tuple[int, bool]:
    if not spec.is_integral:
        raise ValueError("energy divisibility is stated for integral spectra")
    E = sum(mult * abs(v) for v, mult in spec)
    return E, E % n == 0


def spectrum_energy(spec: Spectrum) -> float:
    return math.fsum(mult * abs(z) for z, mult in spec.embedded())


def distinct_periods(spec: Spectrum, n: int) -> int:
    """Number of distinct non-principal eigenvalues (the s in g(k,q) <= s)."""
    return sum(1 for v, _ in spec if not (isinstance(v, int) and v == n)) + (
        1 if spec.multiplicity(n) > 1 else 0
    )
