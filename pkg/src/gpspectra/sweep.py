"""Invariant sweep over all (p, m, k) with q = p^m below a bound.

Each instance runs the theorem-as-test checks. Results are collected per
check as run/passed/skipped counters plus a findings list; the output is
fully deterministic (no timings, fixed ordering).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from gpspectra.classify import (
    check_integrality_consistency,
    check_rama_nonsemiprimitive_k34,
    energy_check,
    integrality_condition,
    is_hamming_gp,
    is_ramanujan,
    is_semiprimitive_pair,
    rama_classification_semiprimitive,
    srg_params,
    verify_srg_by_counting,
)
from gpspectra.cyclotomic import (
    EXACT_EXPANSION_BUDGET,
    CycInt,
    expand_periods,
    gaussian_periods,
)
from gpspectra.finite_field import Field, build_field, divisors, is_prime
from gpspectra.graph import adjacency_matrix, build_gp, diameter_waring, is_connected
from gpspectra.oracle import character_sum_eigenvalues, compare_spectra, dense_eigen_symmetric
from gpspectra.spectra import (
    closed_form,
    closed_form_semiprimitive,
    spectrum_from_periods,
    spectrum_pl_plus_one,
    spectrum_sum_graph,
    UnsupportedCase,
)

CHECKS = (
    "period_sum",
    "integrality",
    "integrality_corollary",
    "trace_zero",
    "period_polynomial",
    "generator_independence",
    "closed_form",
    "character_sums",
    "dense_eigensolver",
    "sum_rule",
    "srg_counting",
    "semiprimitive_integral",
    "ramanujan_classification",
    "ramanujan_k34",
    "waring",
    "energy",
    "pl_plus_one",
)

# which statement each check tests, for the findings report
ATTRIBUTION = {
    "period_sum": ("cyclotomic", "sum of the k Gaussian periods is -1"),
    "integrality": ("classify", "periods integral iff k | (q-1)/(p-1); k*eta+1 = 0 mod p"),
    "integrality_corollary": ("classify", "p = 1 mod k: integral iff k | m; prime k: integral iff condition"),
    "trace_zero": ("spectra", "trace of the adjacency matrix is 0"),
    "period_polynomial": ("cyclotomic", "period polynomial in Z[x], x^(k-1) coefficient 1"),
    "generator_independence": ("cyclotomic", "period multiset independent of the primitive element"),
    "closed_form": ("spectra", "closed-form spectrum equals the period spectrum"),
    "character_sums": ("oracle", "character-sum eigenvalues equal the period spectrum"),
    "dense_eigensolver": ("oracle", "dense eigenvalues equal the period spectrum"),
    "sum_rule": ("spectra", "Gamma^+ spectrum from the +/- splitting rule"),
    "srg_counting": ("classify", "semiprimitive srg parameters equal counted (e, d)"),
    "semiprimitive_integral": ("classify", "semiprimitive GP-graphs are integral srg"),
    "ramanujan_classification": ("classify", "arithmetic Ramanujan classification of semiprimitive pairs"),
    "ramanujan_k34": ("classify", "Gamma(3,q), Gamma(4,q) Ramanujan for p = 1 mod k"),
    "waring": ("graph", "diameter g(k,q) <= s <= k, with g = s for semiprimitive and Hamming"),
    "energy": ("classify", "n divides the energy of integral GP-graphs"),
    "pl_plus_one": ("spectra", "spectrum of Gamma(p^l+1, p^m)"),
}


@dataclass
class SweepConfig:
    max_q: int = 3000
    oracle_cap: int = 1024  # dense eigensolver
    char_cap: int = 2000  # character sums
    sum_cap: int = 256  # Gamma^+ dense check
    srg_cap: int = 1024
    generator_cap: int = 512
    poly_budget: int = EXACT_EXPANSION_BUDGET
    dense_method: str = "lapack"
    min_q: int = 2


@dataclass
class InstanceResult:
    p: int
    m: int
    k: int
    status: dict[str, str] = field(default_factory=dict)  # check -> pass/fail/skip
    details: dict[str, str] = field(default_factory=dict)


def prime_powers(max_q: int, min_q: int = 2) -> list[tuple[int, int]]:
    out = []
    for p in range(2, max_q + 1):
        if not is_prime(p):
            continue
        m, q = 1, p
        while q <= max_q:
            if q >= min_q:
                out.append((q, p, m))
            m += 1
            q *= p
    out.sort()
    return [(p, m) for _, p, m in out]


class _Recorder:
    def __init__(self, res: InstanceResult):
        self.res = res

    def run(self, name: str, fn: Callable[[], object]) -> None:
        try:
            outcome = fn()
        except Exception as exc:  # a crash inside a check is itself a finding
            self.res.status[name] = "fail"
            self.res.details[name] = f"{type(exc).__name__}: {exc}"
            return
        if outcome is None:
            self.res.status[name] = "skip"
        elif outcome is True:
            self.res.status[name] = "pass"
        else:
            self.res.status[name] = "fail"
            self.res.details[name] = str(outcome) if outcome is not False else "check returned false"


def _second_generator(F: Field) -> int:
    n = F.q - 1
    j = next((j for j in range(2, n) if math.gcd(j, n) == 1), None)
    return int(F.exp_table[j]) if j else int(F.exp_table[1])


def check_instance(F: Field, k: int, cfg: SweepConfig) -> InstanceResult:
    p, m, q = F.p, F.m, F.q
    n = (q - 1) // k
    res = InstanceResult(p, m, k)
    rec = _Recorder(res)
    periods = gaussian_periods(F, k)
    spec = spectrum_from_periods(F, k, periods)
    g = build_gp(p, m, k, field=F)
    connected = is_connected(g)
    wit = is_semiprimitive_pair(k, p, m)

    def period_sum():
        total = sum(periods, CycInt.from_int(p, 0))
        return total.as_rational_integer() == -1 or f"sum = {total!r}"

    def integrality():
        return check_integrality_consistency(F, k, periods)

    def integrality_corollary():
        integral = spec.is_integral
        if p % k == 1 % k and k > 1 and integral != (m % k == 0):
            return "p = 1 mod k but integrality differs from k | m"
        if integral and not integrality_condition(p, m, k):
            return "integral spectrum without the arithmetic condition"
        if is_prime(k) and integrality_condition(p, m, k) and not integral:
            return "prime k with the condition but non-integral spectrum"
        return True

    def trace_zero():
        tr = spec.trace()
        return abs(tr) <= 1e-8 or f"trace {tr}"

    def period_polynomial():
        if k * k * p * p > cfg.poly_budget and k > 64:
            return None
        psi = expand_periods(p, periods)
        if psi.degree != k or psi.coeffs[-1] != 1 or (k >= 1 and psi.coeffs[k - 1] != 1):
            return f"unexpected leading coefficients {psi.coeffs[-2:]}"
        return True

    def generator_independence():
        if q > cfg.generator_cap or q < 3:
            return None
        alt = F.with_generator(_second_generator(F))
        return Counter(periods) == Counter(gaussian_periods(alt, k))

    def closed():
        try:
            cf = closed_form(k, p, m)
        except UnsupportedCase:
            return None
        if cf is None:
            return None
        return cf.equivalent(spec) or f"closed {cf} vs periods {spec}"

    def char_sums():
        if q > cfg.char_cap:
            return None
        rep = compare_spectra(spec, character_sum_eigenvalues(F, k))
        return rep.matched or f"max deviation {rep.max_abs_deviation:.3g}"

    def dense():
        if q > cfg.oracle_cap or not g.is_undirected():
            return None
        ev = dense_eigen_symmetric(adjacency_matrix(g), cfg.dense_method)
        rep = compare_spectra(spec, ev, method=cfg.dense_method)
        return rep.matched or f"max deviation {rep.max_abs_deviation:.3g}"

    def sum_rule():
        if q > cfg.sum_cap:
            return None
        try:
            plus = spectrum_sum_graph(spec, q, n)
        except UnsupportedCase:
            return None
        A = adjacency_matrix(build_gp(p, m, k, "sum", field=F))
        rep = compare_spectra(plus, np.linalg.eigvalsh(A.astype(np.float64)))
        return rep.matched or f"max deviation {rep.max_abs_deviation:.3g}"

    def srg_counting():
        if wit is None or wit.paley_only or q > cfg.srg_cap:
            return None
        sp = srg_params(k, p, m, wit)
        counted = verify_srg_by_counting(g)
        if counted != (sp.e, sp.d):
            return f"counted {counted}, formula {(sp.e, sp.d)}"
        return sp.feasible() or "srg feasibility r(r-e-1) = (v-r-1)d fails"

    def semiprimitive_integral():
        if wit is None:
            return None
        if wit.paley_only:
            return closed_form_semiprimitive(k, p, m).equivalent(spec)
        cf = closed_form_semiprimitive(k, p, m)
        return (spec.is_integral and len(spec) == 3 and cf.equivalent(spec)) or f"{spec}"

    def ramanujan_classification():
        if wit is None:
            return None
        verdict = rama_classification_semiprimitive(k, p, m)
        direct = is_ramanujan(spec, n).is_ramanujan
        return verdict == direct or f"classification {verdict}, direct {direct}"

    def ramanujan_k34():
        if k not in (3, 4) or p % k != 1 or (k == 4 and m % 2):
            return None
        return check_rama_nonsemiprimitive_k34(p, m, k)

    def waring():
        if not connected:
            return None
        diam = diameter_waring(g)
        s = len(set(periods))
        if not diam <= s <= k:
            return f"diameter {diam}, s {s}, k {k}"
        if (wit is not None or is_hamming_gp(k, p, m) is not None) and diam != s:
            return f"diameter {diam} != s {s}"
        return True

    def energy():
        if not spec.is_integral:
            return None
        E, ok = energy_check(spec, n)
        return ok or f"energy {E} not divisible by {n}"

    def pl_plus_one():
        hits = [ell for ell in divisors(m) if p**ell + 1 == k and (m // ell) % 2 == 0]
        if not hits:
            return None
        return spectrum_pl_plus_one(p, m, hits[0]).equivalent(spec)

    for name, fn in (
        ("period_sum", period_sum),
        ("integrality", integrality),
        ("integrality_corollary", integrality_corollary),
        ("trace_zero", trace_zero),
        ("period_polynomial", period_polynomial),
        ("generator_independence", generator_independence),
        ("closed_form", closed),
        ("character_sums", char_sums),
        ("dense_eigensolver", dense),
        ("sum_rule", sum_rule),
        ("srg_counting", srg_counting),
        ("semiprimitive_integral", semiprimitive_integral),
        ("ramanujan_classification", ramanujan_classification),
        ("ramanujan_k34", ramanujan_k34),
        ("waring", waring),
        ("energy", energy),
        ("pl_plus_one", pl_plus_one),
    ):
        rec.run(name, fn)
    return res


def check_field(args: tuple[int, int, dict]) -> list[InstanceResult]:
    p, m, cfg_dict = args
    cfg = SweepConfig(**cfg_dict)
    F = build_field(p, m)
    return [check_instance(F, k, cfg) for k in divisors(F.q - 1)]


def iter_results(cfg: SweepConfig, jobs: int = 1) -> Iterator[InstanceResult]:
    tasks = [(p, m, vars(cfg)) for p, m in prime_powers(cfg.max_q, cfg.min_q)]
    if jobs <= 1:
        for t in tasks:
            yield from check_field(t)
        return
    from multiprocessing import Pool

    with Pool(jobs) as pool:
        for batch in pool.imap(check_field, tasks):  # ordered, so output is deterministic
            yield from batch


def run_sweep(cfg: SweepConfig, jobs: int = 1, progress: Callable[[InstanceResult], None] | None = None) -> dict:
    counts = {c: {"run": 0, "passed": 0, "failed": 0, "skipped": 0} for c in CHECKS}
    findings = []
    instances = 0
    for r in iter_results(cfg, jobs):
        instances += 1
        if progress:
            progress(r)
        for name in CHECKS:
            st = r.status.get(name, "skip")
            c = counts[name]
            if st == "skip":
                c["skipped"] += 1
                continue
            c["run"] += 1
            if st == "pass":
                c["passed"] += 1
            else:
                c["failed"] += 1
                module, statement = ATTRIBUTION[name]
                findings.append(
                    {
                        "check": name,
                        "module": module,
                        "statement": statement,
                        "p": r.p,
                        "m": r.m,
                        "k": r.k,
                        "q": r.p**r.m,
                        "detail": r.details.get(name, ""),
                    }
                )
    return {
        "config": {
            "max_q": cfg.max_q,
            "oracle_cap": cfg.oracle_cap,
            "char_cap": cfg.char_cap,
            "sum_cap": cfg.sum_cap,
            "srg_cap": cfg.srg_cap,
            "generator_cap": cfg.generator_cap,
            "dense_method": cfg.dense_method,
        },
        "instances": instances,
        "checks": counts,
        "findings": findings,
    }


def semiprimitive_pairs_upto(max_q: int) -> Iterator[tuple[int, int, int]]:
    """All semiprimitive (k, p, m) with p^m <= max_q, in (q, k) order."""
    for p, m in prime_powers(max_q):
        for k in divisors(p**m - 1):
            if k >= 2 and is_semiprimitive_pair(k, p, m) is not None:
                yield k, p, m
