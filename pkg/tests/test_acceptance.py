"""Acceptance criteria 1-9.

Printed reference values are stored literally below. Where a printed cell is
wrong the comparison against it is a strict xfail, and a companion test pins
the corrected value together with the evidence for it.
"""

import json
import time
from collections import Counter

import pytest

from gpspectra.classify import (
    check_integrality_consistency,
    is_ramanujan,
    is_semiprimitive_pair,
    rama_classification_semiprimitive,
    table1_semiprimitive_k,
    verify_srg_by_counting,
)
from gpspectra.cli import main, table1, table2_rows
from gpspectra.cyclotomic import IntPoly, expand_periods, gaussian_periods, reduced_period_polynomial
from gpspectra.finite_field import build_field, divisors
from gpspectra.graph import adjacency_matrix, build_gp, is_undirected
from gpspectra.oracle import character_sum_eigenvalues, compare_spectra, dense_eigen_symmetric
from gpspectra.spectra import (
    UnsupportedCase,
    closed_form,
    closed_form_k5_p1mod5,
    closed_form_semiprimitive,
    spectrum_from_periods,
)
from gpspectra.sweep import SweepConfig, prime_powers, run_sweep

# --- reference data -------------------------------------------------------------------------

# (k, p, m): t, s, then (srg, spectrum, PL column) for the graph and its complement
TABLE2 = {
    (3, 2, 4): (1, 2, ((16, 5, 0, 2), {5: 1, 1: 10, -3: 5}, "no"), ((16, 10, 6, 6), {10: 1, 2: 5, -2: 10}, "no")),
    (3, 2, 6): (1, 3, ((64, 21, 8, 6), {21: 1, 5: 21, -3: 42}, "PL_3(8)"), ((64, 42, 26, 30), {42: 1, 2: 42, -6: 21}, "PL_6(8)")),
    (3, 5, 2): (1, 1, ((25, 8, 3, 2), {8: 1, 3: 8, -2: 16}, "PL_2(5)"), ((25, 16, 9, 12), {16: 1, 1: 16, -4: 8}, "PL_4(5)")),
    (3, 5, 4): (1, 2, ((625, 208, 63, 72), {208: 1, 8: 416, -17: 208}, "no"), ((625, 416, 279, 272), {416: 1, 16: 208, -9: 416}, "no")),
    (4, 3, 4): (1, 2, ((81, 20, 1, 6), {20: 1, 2: 60, -7: 20}, "no"), ((81, 60, 45, 42), {60: 1, 6: 20, -3: 60}, "no")),
    (4, 3, 6): (1, 3, ((729, 182, 55, 42), {182: 1, 20: 182, -7: 546}, "PL_7(27)"), ((729, 546, 405, 420), {546: 1, 6: 546, -21: 182}, "PL_21(27)")),
    (4, 7, 2): (1, 1, ((49, 12, 5, 2), {12: 1, 5: 12, -2: 36}, "PL_2(7)"), ((49, 36, 25, 30), {36: 1, 1: 36, -6: 12}, "PL_6(7)")),
    (4, 7, 4): (1, 2, ((2401, 600, 131, 156), {600: 1, 12: 1800, -37: 600}, "no"), ((2401, 1800, 1332, 1355), {1800: 1, 36: 600, -13: 1800}, "no")),
    (5, 3, 4): (2, 1, ((81, 16, 7, 2), {16: 1, 7: 16, -2: 64}, "PL_2(9)"), ((81, 64, 49, 56), {64: 1, 1: 64, -8: 16}, "PL_8(9)")),
    (5, 7, 4): (2, 1, ((2401, 480, 119, 90), {480: 1, 39: 480, -10: 1920}, "PL_10(49)"), ((2401, 1920, 1560, 1529), {1920: 1, 9: 1920, -40: 480}, "PL_40(49)")),
}

# complement srg cells printed with e and d swapped
TABLE2_SRG_ERRATA = {(4, 7, 4): (2401, 1800, 1355, 1332), (5, 7, 4): (2401, 1920, 1529, 1560)}

TABLE1 = {
    (2, 2): [], (2, 4): [3], (2, 6): [3], (2, 8): [5],
    (3, 2): [], (3, 4): [2, 4, 5], (3, 6): [2, 4, 7, 14], (3, 8): [2, 4, 5, 10, 41],
    (5, 2): [2, 3], (5, 4): [2, 3, 6, 13], (5, 6): [2, 3, 6, 7, 9, 14, 18, 21, 42, 63], (5, 8): [2, 3, 6, 13, 26, 313],
    (7, 2): [2, 4], (7, 4): [2, 4, 5, 8, 10, 25], (7, 6): [2, 4, 5, 8, 10, 25, 43, 50, 86, 172], (7, 8): [2, 4, 5, 8, 10, 25, 50, 1201],
}

# corrected cells, each with the reason the printed one is wrong
TABLE1_ERRATA = {
    (3, 2): [2],  # q = 9 = 1 (mod 4) makes (2, 9) a Paley pair
    (2, 8): [3, 5],  # 3 | 2^1 + 1 with 1 | 4, and 3 != 2^4 + 1
    (7, 6): [2, 4, 8, 43, 86, 172],  # 5 does not divide 7^6 - 1
}

SWEEP_MAX_Q = 3000


def _rows():
    return {(r["k"], r["p"], r["m"]): r for r in table2_rows()}


ROWS = _rows()


def _errata(cond, reason):
    return pytest.mark.xfail(cond, reason=reason, strict=True)


# --- criterion 1: Table 2 -------------------------------------------------------------------


def _table2_params(attr):
    out = []
    for key in TABLE2:
        for part in ("graph", "complement"):
            marks = [pytest.mark.criterion(1)]
            if attr == "srg" and part == "complement" and key in TABLE2_SRG_ERRATA:
                marks.append(_errata(True, "printed complement srg has e and d swapped"))
            out.append(pytest.param(key, part, marks=marks, id=f"{key[0]}-{key[1]}^{key[2]}-{part}"))
    return out


@pytest.mark.parametrize("key,part", _table2_params("srg"))
def test_table2_srg(key, part):
    t, s, graph, comp = TABLE2[key]
    printed = graph if part == "graph" else comp
    assert tuple(ROWS[key][part]["srg"]) == printed[0]


@pytest.mark.parametrize("key,part", _table2_params("spectrum"))
def test_table2_spectrum(key, part):
    t, s, graph, comp = TABLE2[key]
    printed = graph if part == "graph" else comp
    assert {v: mult for v, mult in ROWS[key][part]["spectrum"]} == printed[1]


@pytest.mark.parametrize("key,part", _table2_params("pl"))
def test_table2_pl_type(key, part):
    t, s, graph, comp = TABLE2[key]
    printed = graph if part == "graph" else comp
    assert ROWS[key][part]["pl"] == printed[2]


@pytest.mark.criterion(1)
@pytest.mark.parametrize("key", list(TABLE2), ids=lambda k: f"{k[0]}-{k[1]}^{k[2]}")
def test_table2_t_s(key):
    t, s, _, _ = TABLE2[key]
    assert (ROWS[key]["t"], ROWS[key]["s"]) == (t, s)


@pytest.mark.criterion(1)
@pytest.mark.parametrize("key", list(TABLE2_SRG_ERRATA), ids=lambda k: f"{k[0]}-{k[1]}^{k[2]}")
def test_table2_corrected_complement_srg(key):
    k, p, m = key
    corrected = TABLE2_SRG_ERRATA[key]
    assert tuple(ROWS[key]["complement"]["srg"]) == corrected
    e, d = verify_srg_by_counting(build_gp(p, m, k, "complement"))
    assert (p**m, corrected[1], e, d) == corrected


@pytest.mark.criterion(1)
def test_table2_oracle_and_runtime():
    start = time.perf_counter()
    rows = table2_rows(verify=True)
    for r in rows:
        v = r["verify"]
        assert v["periods_match"]
        assert v["character_sums"]["matched"] and v["character_sums"]["max_abs_deviation"] <= 1e-6
        assert v["complement_character_sums"]["matched"]
    # q = 729 additionally through the self-contained Jacobi solver
    A = adjacency_matrix(build_gp(3, 6, 4))
    ev = dense_eigen_symmetric(A, "jacobi")
    rep = compare_spectra(closed_form_semiprimitive(4, 3, 6), ev, method="jacobi")
    assert rep.matched and rep.max_abs_deviation <= 1e-6
    elapsed = time.perf_counter() - start
    print(f"table 2 with oracles: {elapsed:.1f} s")
    assert elapsed < 300


# --- criterion 2: Table 1 -------------------------------------------------------------------


def _table1_params():
    out = []
    for (p, m) in TABLE1:
        marks = [pytest.mark.criterion(2)]
        if (p, m) in TABLE1_ERRATA:
            marks.append(_errata(True, f"printed cell should be {TABLE1_ERRATA[(p, m)]}"))
        out.append(pytest.param(p, m, marks=marks, id=f"p{p}-m{m}"))
    return out


@pytest.mark.parametrize("p,m", _table1_params())
def test_table1_cell(p, m):
    assert table1_semiprimitive_k(p, m) == TABLE1[(p, m)]


@pytest.mark.criterion(2)
@pytest.mark.parametrize("p,m", list(TABLE1_ERRATA), ids=lambda v: str(v))
def test_table1_corrected_cells(p, m):
    q = p**m
    got = table1_semiprimitive_k(p, m)
    assert got == TABLE1_ERRATA[(p, m)]
    # every listed k yields the 3-eigenvalue integral spectrum, checked against the periods
    F = build_field(p, m)
    for k in got:
        assert (q - 1) % k == 0
        spec = spectrum_from_periods(F, k)
        assert spec.is_integral and len(spec) == 3
        assert closed_form_semiprimitive(k, p, m).equivalent(spec)


@pytest.mark.criterion(2)
def test_table1_runtime():
    start = time.perf_counter()
    rows = table1()
    assert len(rows) == 16
    assert time.perf_counter() - start < 1.0


# --- criterion 3: Gamma(5, 11^5) ------------------------------------------------------------


@pytest.mark.criterion(3)
def test_g5_example():
    start = time.perf_counter()
    p, m, k = 11, 5, 5
    q = p**m
    n = (q - 1) // k
    F = build_field(p, m)
    periods = gaussian_periods(F, k)
    psi = expand_periods(p, periods, "exact")
    star = reduced_period_polynomial(psi, k)
    target = IntPoly.from_roots([-99, -649, -979, 451, 1276])
    assert star == target
    expected = {32210: 1, 255: n, 90: n, -20: n, -130: n, -196: n}
    from_periods = spectrum_from_periods(F, k, periods)
    assert from_periods.as_int_dict() == expected
    dickson = closed_form_k5_p1mod5(p, m)
    assert dickson.as_int_dict() == expected
    assert dickson.equivalent(from_periods)
    elapsed = time.perf_counter() - start
    print(f"Gamma(5, 11^5): {elapsed:.1f} s")
    assert elapsed < 120


# --- criterion 4: integrality sweep ---------------------------------------------------------


@pytest.mark.criterion(4)
@pytest.mark.slow
def test_integrality_sweep():
    start = time.perf_counter()
    instances, integral, failures = 0, 0, []
    for p, m in prime_powers(SWEEP_MAX_Q):
        F = build_field(p, m)
        for k in divisors(F.q - 1):
            periods = gaussian_periods(F, k)
            instances += 1
            if not check_integrality_consistency(F, k, periods):
                failures.append((p, m, k))
            if all(c.is_rational for c in periods):
                integral += 1
    elapsed = time.perf_counter() - start
    print(f"integrality: {instances} instances, {integral} integral, {elapsed:.1f} s")
    assert failures == []
    assert elapsed < 600


# --- criterion 5: closed forms ---------------------------------------------------------------


@pytest.mark.criterion(5)
@pytest.mark.slow
def test_closed_form_equivalence():
    checked = Counter()
    mismatches = []
    for p, m in prime_powers(SWEEP_MAX_Q):
        F = build_field(p, m)
        q = F.q
        for k in divisors(q - 1):
            if k == 1:
                continue
            semi = is_semiprimitive_pair(k, p, m) is not None
            try:
                cf = closed_form(k, p, m)
            except UnsupportedCase:
                cf = None
            if cf is None and not semi:
                continue
            exact = spectrum_from_periods(F, k)
            if cf is not None:
                checked[f"k={k}" if k <= 5 else "semiprimitive"] += 1
                if not cf.equivalent(exact):
                    mismatches.append(("dispatch", p, m, k))
            if semi:
                checked["semiprimitive (direct)"] += 1
                if not closed_form_semiprimitive(k, p, m).equivalent(exact):
                    mismatches.append(("semiprimitive", p, m, k))
    # k = 5 with p = 1 (mod 5) and 5 | m first occurs at 11^5, beyond 3000
    F = build_field(11, 5)
    checked["k=5 Dickson"] += 1
    if not closed_form_k5_p1mod5(11, 5).equivalent(spectrum_from_periods(F, 5)):
        mismatches.append(("dickson", 11, 5, 5))
    print("closed forms checked:", dict(sorted(checked.items())))
    assert checked["k=2"] and checked["k=3"] and checked["k=4"]
    assert mismatches == []


# --- criterion 6: oracles --------------------------------------------------------------------


@pytest.mark.criterion(6)
@pytest.mark.slow
def test_oracle_agreement():
    start = time.perf_counter()
    char_runs, dense_runs, bad = 0, 0, []
    for p, m in prime_powers(2000):
        F = build_field(p, m)
        for k in divisors(F.q - 1):
            spec = spectrum_from_periods(F, k)
            rep = compare_spectra(spec, character_sum_eigenvalues(F, k))
            char_runs += 1
            if not rep.matched:
                bad.append(("chars", p, m, k, rep.max_abs_deviation))
            g = build_gp(p, m, k, field=F)
            if F.q <= 1024 and is_undirected(g):
                ev = dense_eigen_symmetric(adjacency_matrix(g), "lapack")
                rep = compare_spectra(spec, ev, method="lapack")
                dense_runs += 1
                if not rep.matched:
                    bad.append(("dense", p, m, k, rep.max_abs_deviation))
    elapsed = time.perf_counter() - start
    print(f"oracles: {char_runs} character-sum runs, {dense_runs} dense runs, {elapsed:.1f} s")
    assert bad == []
    assert elapsed < 1200


@pytest.mark.criterion(6)
def test_jacobi_on_small_undirected_instances():
    # the self-contained solver on every undirected instance with q <= 64
    for p, m in prime_powers(64):
        F = build_field(p, m)
        for k in divisors(F.q - 1):
            g = build_gp(p, m, k, field=F)
            if not is_undirected(g):
                continue
            ev = dense_eigen_symmetric(adjacency_matrix(g), "jacobi")
            assert compare_spectra(spectrum_from_periods(F, k), ev, method="jacobi").matched, (p, m, k)


# --- criterion 7: Ramanujan classification --------------------------------------------------


@pytest.mark.criterion(7)
@pytest.mark.slow
def test_ramanujan_classification():
    start = time.perf_counter()
    pairs, disagreements, ramanujan = 0, [], 0
    for p, m in prime_powers(10**5):
        q = p**m
        for k in table1_semiprimitive_k(p, m):
            n = (q - 1) // k
            # also asserts internally that the complement passes the bound
            verdict = rama_classification_semiprimitive(k, p, m)
            direct = is_ramanujan(closed_form_semiprimitive(k, p, m), n, undirected=True).is_ramanujan
            comp = closed_form_semiprimitive(k, p, m, complement=True)
            assert is_ramanujan(comp, (k - 1) * n, undirected=True).is_ramanujan
            pairs += 1
            ramanujan += direct
            if verdict != direct:
                disagreements.append((k, p, m, verdict, direct))
    elapsed = time.perf_counter() - start
    print(f"semiprimitive pairs: {pairs}, Ramanujan: {ramanujan}, {elapsed:.1f} s")
    assert disagreements == []
    assert elapsed < 300


# --- criterion 8: structural properties -----------------------------------------------------

STRUCTURAL = (
    "period_sum",
    "period_polynomial",
    "trace_zero",
    "generator_independence",
    "waring",
    "energy",
    "srg_counting",
    "pl_plus_one",
    "integrality_corollary",
    "semiprimitive_integral",
    "ramanujan_k34",
    "sum_rule",
)


@pytest.fixture(scope="module")
def structural_sweep():
    # the oracle checks belong to criterion 6 and are switched off here
    cfg = SweepConfig(max_q=SWEEP_MAX_Q, oracle_cap=0, char_cap=0)
    start = time.perf_counter()
    summary = run_sweep(cfg)
    summary["elapsed"] = time.perf_counter() - start
    return summary


@pytest.mark.criterion(8)
@pytest.mark.slow
@pytest.mark.parametrize("check", STRUCTURAL)
def test_structural_property(structural_sweep, check):
    counts = structural_sweep["checks"][check]
    failures = [f for f in structural_sweep["findings"] if f["check"] == check]
    assert failures == []
    assert counts["run"] > 0 and counts["failed"] == 0


@pytest.mark.criterion(8)
@pytest.mark.slow
def test_structural_sweep_has_no_findings(structural_sweep):
    print(f"structural sweep: {structural_sweep['instances']} instances, {structural_sweep['elapsed']:.1f} s")
    assert structural_sweep["findings"] == []
    # Sigma eta = -1 on every instance
    assert structural_sweep["checks"]["period_sum"]["run"] == structural_sweep["instances"]


# --- criterion 9: determinism ---------------------------------------------------------------


@pytest.mark.criterion(9)
def test_sweep_is_deterministic(tmp_path):
    outs = []
    for i, jobs in enumerate(("1", "1", "2")):
        path = tmp_path / f"run{i}.json"
        code = main(["sweep", "--max-q", "128", "--jobs", jobs, "--format", "json", "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    data = json.loads(outs[0])
    assert list(data) == ["config", "instances", "checks", "findings"]
