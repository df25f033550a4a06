"""Spectra of GP-graphs: the general period spectrum and the closed forms.

Eigenvalues are one of three kinds:

* ``int`` for rational integers,
* :class:`~gpspectra.cyclotomic.CycInt` for irrational Gaussian periods,
* :class:`AlgebraicDescriptor` for closed-form radical expressions, carried
  with a complex embedding evaluated at high precision.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

import mpmath
import numpy as np

from gpspectra.cyclotomic import CycInt, gaussian_periods
from gpspectra.finite_field import Field, is_prime

MERGE_TOL = 1e-9
COMPARE_TOL = 1e-8
_DPS = 60


class UnsupportedCase(ValueError):
    """The requested spectrum is not defined by the available formulas."""


@dataclass(frozen=True, eq=False)
class AlgebraicDescriptor:
    """A closed-form algebraic number with its complex embedding."""

    case: str
    expr: str
    value: complex
    params: tuple[tuple[str, object], ...] = field(default=())

    def embed_complex(self) -> complex:
        return self.value

    def __neg__(self) -> AlgebraicDescriptor:
        return AlgebraicDescriptor(self.case, f"-({self.expr})", -self.value, self.params)

    def __repr__(self) -> str:
        return f"<{self.case}: {self.expr} ~ {_fmt_complex(self.value)}>"


Eigenvalue = Union[int, CycInt, AlgebraicDescriptor]


def embed(v: Eigenvalue) -> complex:
    if isinstance(v, (int, np.integer)):
        return complex(int(v), 0.0)
    return v.embed_complex()


def _normalize(v) -> Eigenvalue:
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        if v.denominator != 1:
            raise ValueError(f"non-integral rational eigenvalue {v}")
        return int(v)
    if isinstance(v, CycInt):
        r = v.as_rational_integer()
        return v if r is None else r
    if isinstance(v, AlgebraicDescriptor):
        return v
    raise TypeError(f"unsupported eigenvalue type {type(v).__name__}")


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) < 1e-12:
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _negate(v: Eigenvalue) -> Eigenvalue:
    return -v


def _minus_one_minus(v: Eigenvalue) -> Eigenvalue:
    if isinstance(v, int):
        return -1 - v
    if isinstance(v, CycInt):
        return CycInt.from_int(v.p, -1) - v
    return AlgebraicDescriptor(v.case, f"-1-({v.expr})", -1 - v.value, v.params)


class Spectrum:
    """Multiset of eigenvalues; equal values are merged on construction."""

    def __init__(self, entries: Iterable[tuple[Eigenvalue, int]]):
        exact: dict = {}
        approx: list[list] = []
        for value, mult in entries:
            mult = int(mult)
            if mult < 0:
                raise ValueError("negative multiplicity")
            if mult == 0:
                continue
            v = _normalize(value)
            if isinstance(v, AlgebraicDescriptor):
                z = v.value
                for slot in approx:
                    if abs(slot[2] - z) < MERGE_TOL:
                        slot[1] += mult
                        break
                else:
                    approx.append([v, mult, z])
            else:
                exact[v] = exact.get(v, 0) + mult
        # a descriptor that lands on an exact value merges into it
        merged = dict(exact)
        leftover = []
        for v, mult, z in approx:
            hit = next((e for e in merged if abs(embed(e) - z) < MERGE_TOL), None)
            if hit is None:
                leftover.append((v, mult))
            else:
                merged[hit] += mult
        items = list(merged.items()) + leftover
        items.sort(key=lambda t: (-round(embed(t[0]).real, 9), -round(embed(t[0]).imag, 9)))
        self.entries: tuple[tuple[Eigenvalue, int], ...] = tuple(items)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def embedded(self) -> list[tuple[complex, int]]:
        return [(embed(v), m) for v, m in self.entries]

    def complex_multiset(self) -> np.ndarray:
        out = np.empty(self.total, dtype=complex)
        i = 0
        for z, m in self.embedded():
            out[i : i + m] = z
            i += m
        return out

    def trace(self) -> complex:
        re = math.fsum(m * z.real for z, m in self.embedded())
        im = math.fsum(m * z.imag for z, m in self.embedded())
        return complex(re, im)

    def sum_of_squares(self) -> complex:
        """sum of mult * lambda^2 (exact for integer spectra)."""
        if self.is_integral:
            return complex(sum(m * v * v for v, m in self.entries))
        re = math.fsum(m * (z * z).real for z, m in self.embedded())
        im = math.fsum(m * (z * z).imag for z, m in self.embedded())
        return complex(re, im)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(v, int) for v, _ in self.entries)

    def as_int_dict(self) -> dict[int, int]:
        if not self.is_integral:
            raise ValueError("spectrum is not integral")
        return {v: m for v, m in self.entries}

    def multiplicity(self, value) -> int:
        z = embed(_normalize(value))
        return sum(m for v, m in self.entries if abs(embed(v) - z) < MERGE_TOL)

    def equivalent(self, other: Spectrum, tol: float = COMPARE_TOL) -> bool:
        """Multiset equality: exact on integers, within ``tol`` otherwise."""
        if self.total != other.total:
            return False
        if self.is_integral and other.is_integral:
            return self.as_int_dict() == other.as_int_dict()
        remaining = [[z, m] for z, m in other.embedded()]
        for z, m in self.embedded():
            need = m
            for slot in remaining:
                if need and slot[1] and abs(slot[0] - z) <= tol:
                    take = min(need, slot[1])
                    slot[1] -= take
                    need -= take
            if need:
                return False
        return all(slot[1] == 0 for slot in remaining)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.equivalent(other, MERGE_TOL)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Spectrum({self})"

    def __str__(self) -> str:
        parts = []
        for v, m in self.entries:
            if isinstance(v, int):
                s = str(v)
            else:
                s = _fmt_complex(embed(v))
            parts.append(f"[{s}]^{m}")
        return "{" + ", ".join(parts) + "}"


# --- spectra from periods --------------------------------------------------------


def spectrum_from_periods(field: Field, k: int, periods: list[CycInt] | None = None) -> Spectrum:
    """{[n]^(1 + mu n), [eta]^(mu_eta n), ...} from the exact Gaussian periods."""
    if (field.q - 1) % k:
        raise ValueError(f"k={k} must divide q-1={field.q - 1}")
    n = (field.q - 1) // k
    if periods is None:
        periods = gaussian_periods(field, k)
    counts = Counter(periods)
    entries: list[tuple[Eigenvalue, int]] = [(n, 1)]
    for eta, c in counts.items():
        entries.append((eta, c * n))
    return Spectrum(entries)


def _remove_principal(spec: Spectrum, degree: int) -> list[tuple[Eigenvalue, int]]:
    out = []
    removed = False
    for v, m in spec.entries:
        if not removed and isinstance(v, int) and v == degree:
            m -= 1
            removed = True
        if m:
            out.append((v, m))
    if not removed:
        raise ValueError(f"degree {degree} is not an eigenvalue of the spectrum")
    return out


def complement_spectrum(spec: Spectrum, degree: int) -> Spectrum:
    """Spectrum of the complement of a connected-or-not regular graph.

    The all-ones eigenvector carries ``degree``; every other eigenvector of A
    is an eigenvector of J - I - A with eigenvalue -1 - lambda.
    """
    q = spec.total
    rest = _remove_principal(spec, degree)
    entries = [(q - 1 - degree, 1)] + [(_minus_one_minus(v), m) for v, m in rest]
    return Spectrum(entries)


def spectrum_complement(spec: Spectrum, k: int, n: int) -> Spectrum:
    """Spectrum of the complement of Gamma(k, q) given Spec(Gamma(k, q)).

    The principal eigenvalue (k-1)n appears once; the extra copies of n
    present when Gamma(k, q) is disconnected map to -1-n like every other
    non-principal eigenvalue.
    """
    if spec.total != k * n + 1:
        raise ValueError("spectrum size does not match k*n + 1")
    return complement_spectrum(spec, n)


def spectrum_sum_graph(spec: Spectrum, q: int, n: int) -> Spectrum:
    """Spectrum of Gamma^+(k, q) from Spec(Gamma(k, q)).

    For q even the two graphs coincide. For q odd and n even every
    non-principal eigenvalue lambda splits into +lambda and -lambda with half
    the multiplicity each.
    """
    if spec.total != q:
        raise ValueError("spectrum size does not match q")
    if q % 2 == 0:
        return spec
    if n % 2:
        raise UnsupportedCase("Gamma^+ spectrum is only defined here for n even when q is odd")
    rest = _remove_principal(spec, n)
    entries: list[tuple[Eigenvalue, int]] = [(n, 1)]
    for v, m in rest:
        if m % 2:
            raise UnsupportedCase(f"odd multiplicity {m} cannot split into +/- pairs")
        entries.append((v, m // 2))
        entries.append((_negate(v), m // 2))
    return Spectrum(entries)


# --- helpers for closed forms ------------------------------------------------------


def _int_root(x: int, r: int) -> int:
    """Exact integer r-th root of a perfect power x >= 0."""
    y = round(x ** (1.0 / r)) if x < 2**1000 else int(mpmath.nint(mpmath.root(x, r)))
    for cand in (y - 1, y, y + 1):
        if cand >= 0 and cand**r == x:
            return cand
    raise ValueError(f"{x} is not a perfect {r}-th power")


def _exact_div(num: int, den: int) -> int:
    if num % den:
        raise ArithmeticError(f"{num}/{den} is not an integer")
    return num // den


def _desc(case: str, expr: str, z, **params) -> AlgebraicDescriptor:
    c = complex(z)
    if abs(c.imag) < 1e-30 * max(1.0, abs(c)):
        c = complex(c.real, 0.0)
    if abs(c.real) < 1e-30 * max(1.0, abs(c)):
        c = complex(0.0, c.imag)
    return AlgebraicDescriptor(case, expr, c, tuple(sorted(params.items())))


def _check_prime(p: int, m: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 1:
        raise ValueError("m must be positive")
    return p**m


# --- k = 2 ------------------------------------------------------------------------


def closed_form_k2(p: int, m: int) -> Spectrum:
    """Paley graph spectrum {[n], [eta0]^n, [-1-eta0]^n}.

    eta0 = (-1 + (-1)^(m-1) sqrt(q)) / 2 for p = 1 (mod 4) and
    eta0 = (-1 + (-1)^(m-1) i^m sqrt(q)) / 2 for p = 3 (mod 4).
    """
    q = _check_prime(p, m)
    if (q - 1) % 2:
        raise ValueError("k=2 needs q odd")
    n = (q - 1) // 2
    sign = (-1) ** (m - 1)
    if m % 2 == 0:
        r = p ** (m // 2)
        unit = 1 if p % 4 == 1 else (-1) ** (m // 2)
        eta0 = _exact_div(-1 + sign * unit * r, 2)
        return Spectrum([(n, 1), (eta0, n), (-1 - eta0, n)])
    with mpmath.workdps(_DPS):
        root = mpmath.sqrt(q)
        if p % 4 == 1:
            z0 = (-1 + sign * root) / 2
            z1 = -1 - z0
            e0 = _desc("k2", f"(-1 + {sign}*sqrt({q}))/2", z0, p=p, m=m)
            e1 = _desc("k2", f"(-1 - {sign}*sqrt({q}))/2", z1, p=p, m=m)
        else:
            im = mpmath.mpc(0, 1) ** m
            z0 = (-1 + sign * im * root) / 2
            z1 = -1 - z0
            e0 = _desc("k2", f"(-1 + {sign}*i^{m}*sqrt({q}))/2", z0, p=p, m=m)
            e1 = _desc("k2", f"(-1 - {sign}*i^{m}*sqrt({q}))/2", z1, p=p, m=m)
    return Spectrum([(n, 1), (e0, n), (e1, n)])


# --- k = 3 ------------------------------------------------------------------------


def solve_3_27(T: int, p: int) -> tuple[int, int]:
    """(a, b) with T = a^2 + 27 b^2, a = 1 (mod 3), gcd(a, p) = 1, b >= 0.

    The search runs over b upward, so the smallest admissible b is returned.
    """
    if T <= 0:
        raise ValueError("target must be positive")
    for b in range(math.isqrt(T // 27) + 1):
        rest = T - 27 * b * b
        s = math.isqrt(rest)
        if s * s != rest:
            continue
        for a in (s, -s):
            if a % 3 == 1 and math.gcd(a, p) == 1:
                return a, b
    raise ValueError(f"no admissible solution of {T} = a^2 + 27 b^2 for p={p}")


def period_polynomial_k3(p: int, m: int) -> tuple[int, ...]:
    """Coefficients (low first) of x^3 + x^2 - n x - d with d = ((a+3)q - 1)/27."""
    q = _check_prime(p, m)
    if (q - 1) % 3:
        raise ValueError("3 must divide q-1")
    n = (q - 1) // 3
    a = _solve_3_27_any(4 * q, p)
    d = _exact_div((a + 3) * q - 1, 27)
    return (-d, -n, 1, 1)


def _solve_3_27_any(T: int, p: int) -> int:
    # a = 1 (mod 3), with gcd(a, p) = 1 required only for p = 1 (mod 3)
    need_coprime = p % 3 == 1
    for b in range(math.isqrt(T // 27) + 1):
        rest = T - 27 * b * b
        s = math.isqrt(rest)
        if s * s == rest:
            for a in (s, -s):
                if a % 3 == 1 and (not need_coprime or math.gcd(a, p) == 1):
                    return a
    raise ValueError("no solution")


def closed_form_k3(p: int, m: int) -> Spectrum:
    q = _check_prime(p, m)
    if (q - 1) % 3 or q < 5:
        raise ValueError("closed_form_k3 needs 3 | q-1 and q >= 5")
    n = (q - 1) // 3
    if p % 3 == 1 and m % 3 == 0:
        c3 = p ** (m // 3)
        a, b = solve_3_27(4 * c3, p)
        vals = [
            Fraction(a * c3 - 1, 3),
            Fraction(Fraction(-(a + 9 * b), 2) * c3 - 1, 3),
            Fraction(Fraction(-(a - 9 * b), 2) * c3 - 1, 3),
        ]
        return Spectrum([(n, 1)] + [(v, n) for v in vals])
    if p % 3 == 1:
        a, b = solve_3_27(4 * q, p)
        out: list[tuple[Eigenvalue, int]] = [(n, 1)]
        with mpmath.workdps(_DPS):
            w = mpmath.cbrt(q) * mpmath.cbrt((-a + mpmath.sqrt(-27) * b) / 2)
            if abs(w) < mpmath.mpf(10) ** (-_DPS // 2):
                w = mpmath.cbrt(q) * mpmath.cbrt((-a - mpmath.sqrt(-27) * b) / 2)
            omega = mpmath.exp(2j * mpmath.pi / 3)
            for j in range(3):
                wj = omega**j * w
                x = -(1 + wj + q / wj) / 3
                expr = f"-(1 + w^{j} W + {q}/(w^{j} W))/3, W = cbrt({q})*cbrt((-({a}) + sqrt(-27)*{b})/2)"
                out.append((_desc("k3b", expr, x, a=a, b=b, j=j), n))
        return Spectrum(out)
    if p % 3 == 2 and m % 2 == 0:
        r = p ** (m // 2)
        if m % 4 == 0:
            return Spectrum([(n, 1), (Fraction(r - 1, 3), 2 * n), (Fraction(-2 * r - 1, 3), n)])
        return Spectrum([(n, 1), (Fraction(2 * r - 1, 3), n), (Fraction(-r - 1, 3), 2 * n)])
    raise UnsupportedCase(f"no k=3 case applies to p={p}, m={m}")


# --- k = 4 ------------------------------------------------------------------------


def solve_two_squares(T: int, p: int) -> tuple[int, int]:
    """(c, d) with T = c^2 + 4 d^2, c = 1 (mod 4), gcd(c, p) = 1, d >= 0."""
    if T <= 0:
        raise ValueError("target must be positive")
    for d in range(math.isqrt(T // 4) + 1):
        rest = T - 4 * d * d
        s = math.isqrt(rest)
        if s * s != rest:
            continue
        for c in (s, -s):
            if c % 4 == 1 and math.gcd(c, p) == 1:
                return c, d
    raise ValueError(f"no admissible solution of {T} = c^2 + 4 d^2 for p={p}")


def period_polynomial_k4(p: int, m: int) -> tuple[Fraction, ...]:
    """Coefficients (low first) of the k=4 period polynomial for p = 1 (mod 4)."""
    q = _check_prime(p, m)
    if p % 4 != 1:
        raise ValueError("needs p = 1 (mod 4)")
    c, _ = solve_two_squares(q, p)
    n = (q - 1) // 4
    if n % 2 == 0:
        coeffs = (
            Fraction(q * q - (4 * c * c - 8 * c + 6) * q + 1, 256),
            Fraction((2 * c - 3) * q + 1, 16),
            Fraction(-(3 * q - 3), 8),
            Fraction(1),
            Fraction(1),
        )
    else:
        coeffs = (
            Fraction(9 * q * q - (4 * c * c - 8 * c - 2) * q + 1, 256),
            Fraction((2 * c + 1) * q + 1, 16),
            Fraction(q + 3, 8),
            Fraction(1),
            Fraction(1),
        )
    return coeffs


def _ferrari_roots(coeffs: tuple[Fraction, ...]) -> tuple[dict, list]:
    """Roots of a monic quartic by Ferrari's method, at high precision.

    Returns the exact depressed-quartic constants and the four roots as
    (label, mpc) pairs, labelled like x_1^+, x_1^-, x_2^+, x_2^-.
    """
    E, D, C, B, A = coeffs
    alpha = -3 * B**2 / (8 * A**2) + C / A
    beta = B**3 / (8 * A**3) - B * C / (2 * A**2) + D / A
    gamma = -3 * B**4 / (256 * A**4) + C * B**2 / (16 * A**3) - B * D / (4 * A**2) + E / A
    P = -(alpha**2) / 12 - gamma
    Q = -(alpha**3) / 108 + alpha * gamma / 3 - beta**2 / 8
    consts = {"alpha": alpha, "beta": beta, "gamma": gamma, "P": P, "Q": Q}
    shift = -B / (4 * A)

    def mp(fr: Fraction):
        return mpmath.mpf(fr.numerator) / fr.denominator

    al, be, Pm, Qm = mp(alpha), mp(beta), mp(P), mp(Q)
    roots = []
    if beta == 0:
        disc = mpmath.sqrt(al**2 - 4 * mp(gamma))
        for s1, lab1 in ((1, "1"), (-1, "2")):
            for s2, lab2 in ((1, "+"), (-1, "-")):
                u = s2 * mpmath.sqrt((-al + s1 * disc) / 2)
                roots.append((f"x_{lab1}^{lab2}", u + mp(shift)))
        return consts, roots
    R = -Qm / 2 + mpmath.sqrt(Qm**2 / 4 + Pm**3 / 27)
    U = mpmath.cbrt(R) if R != 0 else mpmath.mpf(0)
    if abs(U) < mpmath.mpf(10) ** (-_DPS // 2):
        R = -Qm / 2 - mpmath.sqrt(Qm**2 / 4 + Pm**3 / 27)
        U = mpmath.cbrt(R)
    y = -5 * al / 6 + U - Pm / (3 * U)
    W = mpmath.sqrt(al + 2 * y)
    for s1, lab1 in ((-1, "1"), (1, "2")):
        inner = mpmath.sqrt(-(3 * al + 2 * y + s1 * 2 * be / W))
        for s2, lab2 in ((1, "+"), (-1, "-")):
            roots.append((f"x_{lab1}^{lab2}", (s1 * W + s2 * inner) / 2 + mp(shift)))
    return consts, roots


def closed_form_k4(p: int, m: int) -> Spectrum:
    q = _check_prime(p, m)
    if (q - 1) % 4:
        raise ValueError("closed_form_k4 needs 4 | q-1")
    n = (q - 1) // 4
    if p % 4 == 1 and m % 4 == 0:
        r2, r4 = p ** (m // 2), p ** (m // 4)
        c, d = solve_two_squares(r2, p)
        vals = [
            Fraction(r2 + 4 * d * r4 - 1, 4),
            Fraction(r2 - 4 * d * r4 - 1, 4),
            Fraction(-r2 + 2 * c * r4 - 1, 4),
            Fraction(-r2 - 2 * c * r4 - 1, 4),
        ]
        return Spectrum([(n, 1)] + [(v, n) for v in vals])
    if p % 4 == 1 and m % 4 == 2:
        c, d = solve_two_squares(q, p)
        r = p ** (m // 2)
        out: list[tuple[Eigenvalue, int]] = [(n, 1)]
        with mpmath.workdps(_DPS):
            for base, inner, tag in ((-(1 + r), q + c * r, "+"), (-(1 - r), q - c * r, "-")):
                rad = mpmath.sqrt(2 * inner)
                for sign in (1, -1):
                    z = (base + sign * rad) / 4
                    expr = f"({base} {'+' if sign > 0 else '-'} sqrt(2*{inner}))/4"
                    out.append((_desc("k4b", expr, z, c=c, d=d, branch=f"{tag}{sign:+d}"), n))
        return Spectrum(out)
    if p % 4 == 1:
        c, d = solve_two_squares(q, p)
        case = "k4c" if n % 2 else "k4d"
        out = [(n, 1)]
        with mpmath.workdps(_DPS):
            consts, roots = _ferrari_roots(period_polynomial_k4(p, m))
            for label, z in roots:
                params = {k: str(v) for k, v in consts.items()}
                out.append((_desc(case, f"{label} of Psi_4 (Ferrari)", z, c=c, d=d, root=label, **params), n))
        return Spectrum(out)
    if p % 4 == 3 and m % 2 == 0:
        r = p ** (m // 2)
        if m % 4 == 0:
            return Spectrum([(n, 1), (Fraction(r - 1, 4), 3 * n), (Fraction(-3 * r - 1, 4), n)])
        return Spectrum([(n, 1), (Fraction(3 * r - 1, 4), n), (Fraction(-r - 1, 4), 3 * n)])
    raise UnsupportedCase(f"no k=4 case applies to p={p}, m={m}")


# --- k = 5, p = 1 (mod 5) --------------------------------------------------------------


@dataclass(frozen=True, order=True)
class DicksonSolution:
    x: int
    w: int
    v: int
    u: int

    def sigma(self) -> DicksonSolution:
        """The order-4 map (x, w, v, u) -> (x, -w, -u, v)."""
        return DicksonSolution(self.x, -self.w, -self.u, self.v)

    def satisfies(self, p: int, m: int) -> bool:
        x, w, v, u = self.x, self.w, self.v, self.u
        return (
            16 * p**m == x * x + 125 * w * w + 50 * v * v + 50 * u * u
            and x * w == v * v - 4 * u * v - u * u
            and x % 5 == 4
        )

    def L(self) -> int:
        x, w, v, u = self.x, self.w, self.v, self.u
        return 2 * x * (v * v + u * u) + 5 * w * (11 * v * v - 4 * v * u - 11 * u * u)

    def M(self) -> int:
        x, w, v, u = self.x, self.w, self.v, self.u
        return (
            2 * x * x * u + 7 * x * v * v + 20 * x * v * u - 3 * x * u * u
            + 125 * w**3 + 200 * w * w * v - 150 * w * w * u + 5 * w * v * v
            - 20 * w * v * u - 105 * w * u * u - 40 * v**3 - 60 * v * v * u
            + 120 * v * u * u + 20 * u**3
        )


@dataclass(frozen=True)
class DicksonSet:
    p: int
    m: int
    solutions: tuple[DicksonSolution, ...]
    unit: tuple[DicksonSolution, ...]


def solve_dickson(p: int, m: int, check_counts: bool = True) -> DicksonSet:
    """All integer solutions of Dickson's system for 16 p^m.

    ``unit`` holds the solutions with p not dividing x^2 - 125 w^2. With
    ``check_counts`` the known cardinalities (m+1)^2 and 4 are asserted.
    """
    _check_prime(p, m)
    if p % 5 != 1:
        raise ValueError("Dickson's system is used here for p = 1 (mod 5)")
    N = 16 * p**m
    vmax = math.isqrt(N // 50)
    wmax = math.isqrt(N // 125)
    vs = np.arange(-vmax, vmax + 1, dtype=object if N > 2**60 else np.int64)
    V, U = np.meshgrid(vs, vs, indexing="ij")
    keep = 50 * (V * V + U * U) <= N
    V, U = V[keep], U[keep]
    R = V * V - 4 * U * V - U * U
    found = set()
    for w in range(-wmax, wmax + 1):
        if w == 0:
            sel = R == 0
            for v, u in zip(V[sel].tolist(), U[sel].tolist()):
                rest = N - 50 * (v * v + u * u)
                s = math.isqrt(rest)
                if s * s == rest:
                    for x in {s, -s}:
                        if x % 5 == 4:
                            found.add(DicksonSolution(x, 0, v, u))
            continue
        sel = R % w == 0
        Vs, Us, Rs = V[sel], U[sel], R[sel]
        X = Rs // w
        ok = (X * X + 125 * w * w + 50 * (Vs * Vs + Us * Us) == N) & (X % 5 == 4)
        for x, v, u in zip(X[ok].tolist(), Vs[ok].tolist(), Us[ok].tolist()):
            found.add(DicksonSolution(int(x), w, int(v), int(u)))
    sols = tuple(sorted(found))
    unit = tuple(s for s in sols if (s.x * s.x - 125 * s.w * s.w) % p)
    if check_counts:
        if len(sols) != (m + 1) ** 2:
            raise AssertionError(f"|S({p},{m})| = {len(sols)}, expected {(m + 1) ** 2}")
        if len(unit) != 4:
            raise AssertionError(f"|S({p},{m})^U| = {len(unit)}, expected 4")
    return DicksonSet(p, m, sols, unit)


def g5_reduced_periods(p: int, s: int, sol: DicksonSolution) -> list[int]:
    """The five reduced periods eta* = 5 eta + 1 of Gamma(5, p^(5s)).

    ``sol`` is a solution of Dickson's system for 16 p^s with p not dividing
    x^2 - 125 w^2.
    """
    ps = p**s
    out = [Fraction(-ps * (sol.x**3 - 25 * sol.L()), 16)]
    t = sol
    for _ in range(4):
        out.append(Fraction(ps * (t.x**3 - 25 * t.M()), 64))
        t = t.sigma()
    for v in out:
        if v.denominator != 1:
            raise ArithmeticError("reduced period is not an integer")
    return [int(v) for v in out]


def closed_form_k5_p1mod5(p: int, m: int) -> Spectrum:
    """Spectrum of Gamma(5, p^m), p = 1 (mod 5), 5 | m, via Dickson's system.

    The solution is taken from S(p, m/5)^U, the exponent at which the
    reduced-period formulas have the right size (|eta*| ~ 4 sqrt(q)).
    """
    q = _check_prime(p, m)
    if p % 5 != 1 or m % 5:
        raise ValueError("needs p = 1 (mod 5) and 5 | m")
    s = m // 5
    dick = solve_dickson(p, s)
    if not dick.unit:
        raise ArithmeticError("no unit solution of Dickson's system")
    star = g5_reduced_periods(p, s, dick.unit[0])
    n = (q - 1) // 5
    return Spectrum([(n, 1)] + [(Fraction(e - 1, 5), n) for e in star])


# --- semiprimitive, Hamming, p^l + 1 ------------------------------------------------------


def closed_form_semiprimitive(k: int, p: int, m: int, complement: bool = False) -> Spectrum:
    """{[n], [l1]^n, [l2]^((k-1)n)} for a semiprimitive pair (k, p^m).

    With ``complement=True`` returns {[(k-1)n], [(k-1) l2]^n, [-1-l2]^((k-1)n)}.
    """
    from gpspectra.classify import is_semiprimitive_pair

    q = _check_prime(p, m)
    wit = is_semiprimitive_pair(k, p, m)
    if wit is None:
        raise ValueError(f"({k}, {p}^{m}) is not a semiprimitive pair")
    n = (q - 1) // k
    if k == 2:
        spec = closed_form_k2(p, m)
        return complement_spectrum(spec, n) if complement else spec
    l1, l2 = semiprimitive_eigenvalues(k, p, m, wit.sigma)
    if complement:
        return Spectrum([((k - 1) * n, 1), ((k - 1) * l2, n), (-1 - l2, (k - 1) * n)])
    return Spectrum([(n, 1), (l1, n), (l2, (k - 1) * n)])


def semiprimitive_eigenvalues(k: int, p: int, m: int, sigma: int) -> tuple[int, int]:
    r = p ** (m // 2)
    return _exact_div(sigma * (k - 1) * r - 1, k), -_exact_div(sigma * r + 1, k)


def spectrum_pl_plus_one(p: int, m: int, ell: int) -> Spectrum:
    """Spectrum of Gamma(p^l + 1, p^m), l | m, m/l even, from its own formula."""
    if m % ell or (m // ell) % 2:
        raise ValueError("needs l | m with m/l even")
    k = p**ell + 1
    q = p**m
    n = (q - 1) // k
    sigma = (-1) ** (m // (2 * ell) + 1)
    l1 = _exact_div(sigma * p ** (m // 2 + ell) - 1, k)
    l2 = -_exact_div(sigma * p ** (m // 2) + 1, k)
    return Spectrum([(n, 1), (l1, n), (l2, p**ell * n)])


def hamming_spectrum(b: int, p: int, m: int) -> Spectrum:
    """Spec H(b, p^m) = {[l p^m - b]^(C(b,l) (p^m - 1)^(b-l)) : 0 <= l <= b}."""
    if b < 1:
        raise ValueError("b must be positive")
    Q = p**m
    return Spectrum([(ell * Q - b, math.comb(b, ell) * (Q - 1) ** (b - ell)) for ell in range(b + 1)])


def closed_form(k: int, p: int, m: int) -> Spectrum | None:
    """The applicable closed form for Gamma(k, p^m), or None if there is none."""
    from gpspectra.classify import is_semiprimitive_pair

    q = p**m
    if (q - 1) % k:
        return None
    if k == 1:
        return Spectrum([(q - 1, 1), (-1, q - 1)])
    if k == 2:
        return closed_form_k2(p, m)
    if k == 3 and q >= 5:
        return closed_form_k3(p, m)
    if k == 4:
        return closed_form_k4(p, m)
    if is_semiprimitive_pair(k, p, m) is not None:
        return closed_form_semiprimitive(k, p, m)
    if k == 5 and p % 5 == 1 and m % 5 == 0:
        return closed_form_k5_p1mod5(p, m)
    return None
