"""Command-line front end: ``gpspectra {spectrum,classify,table,sweep}``.

Exit codes: 0 success, 1 usage error, 2 verification mismatch or findings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Any

from gpspectra.classify import (
    DisconnectedGraphError,
    energy_check,
    is_hamming_gp,
    is_integral_pred,
    is_ramanujan,
    is_semiprimitive_pair,
    srg_params,
    table1_semiprimitive_k,
)
from gpspectra.cyclotomic import CycInt
from gpspectra.finite_field import FieldSizeError, build_field, is_prime
from gpspectra.graph import adjacency_matrix, build_gp, diameter_waring, is_connected, is_undirected
from gpspectra.oracle import (
    OracleReport,
    character_sum_eigenvalues,
    compare_spectra,
    dense_eigen_symmetric,
)
from gpspectra.spectra import (
    AlgebraicDescriptor,
    Spectrum,
    UnsupportedCase,
    closed_form,
    closed_form_semiprimitive,
    complement_spectrum,
    embed,
    spectrum_from_periods,
    spectrum_sum_graph,
)
from gpspectra.sweep import SweepConfig, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2

TABLE1_PRIMES = (2, 3, 5, 7)
TABLE1_EXPONENTS = (2, 4, 6, 8)
TABLE2_ROWS = ((3, 2, 4), (3, 2, 6), (3, 5, 2), (3, 5, 4), (4, 3, 4), (4, 3, 6), (4, 7, 2), (4, 7, 4), (5, 3, 4), (5, 7, 4))


class UsageError(Exception):
    pass


# --- serialisation ---------------------------------------------------------------------


def fnum(x: float) -> float | int:
    """Round to 12 significant digits so JSON output is stable."""
    x = float(x)
    if x == 0:
        return 0.0
    return float(f"{x:.12g}")


def value_json(v) -> dict:
    z = embed(v)
    if isinstance(v, int):
        return {"kind": "int", "re": v, "im": 0, "exact": str(v)}
    if isinstance(v, CycInt):
        terms = " + ".join(f"{c}*z{v.p}^{j}" for j, c in enumerate(v.counts) if c)
        return {"kind": "complex", "re": fnum(z.real), "im": fnum(z.imag), "exact": terms}
    if isinstance(v, AlgebraicDescriptor):
        return {"kind": "descriptor", "re": fnum(z.real), "im": fnum(z.imag), "exact": v.expr}
    raise TypeError(type(v))


def spectrum_json(spec: Spectrum) -> list[dict]:
    return [{"value": value_json(v), "mult": mult} for v, mult in spec]


def oracle_json(rep: OracleReport | None) -> dict | None:
    if rep is None:
        return None
    d = rep.to_dict()
    d["max_abs_deviation"] = fnum(d["max_abs_deviation"])
    for u in d["unmatched"]:
        u["expected"] = [fnum(x) for x in u["expected"]]
        u["nearest"] = [fnum(x) for x in u["nearest"]]
        u["distance"] = fnum(u["distance"])
    return d


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def value_text(v) -> str:
    if isinstance(v, int):
        return str(v)
    z = embed(v)
    num = f"{z.real:.12g}" if abs(z.imag) < 1e-12 else f"{z.real:.12g}{z.imag:+.12g}i"
    if isinstance(v, AlgebraicDescriptor):
        return f"{num} [{v.expr}]"
    return num


def spectrum_text(spec: Spectrum) -> str:
    return "{" + ", ".join(f"[{value_text(v)}]^{mult}" for v, mult in spec) + "}"


# --- building reports ----------------------------------------------------------------------


def _validate(p: int, m: int, k: int) -> None:
    if not is_prime(p):
        raise UsageError(f"p={p} is not prime")
    if m < 1 or k < 1:
        raise UsageError("m and k must be positive")


def _spectrum_for(g, F, method: str) -> tuple[Spectrum, Spectrum | None]:
    """(spectrum used for the report, closed-form spectrum if computed)."""
    p, m, k, q, n = g.p, g.m, g.k, g.q, g.n
    base_periods = spectrum_from_periods(F, k) if method in ("periods", "both") else None
    base_closed = None
    if method in ("closed", "both"):
        base_closed = closed_form(k, p, m)
        if base_closed is None and method == "closed":
            raise UsageError(f"no closed form applies to Gamma({k}, {p}^{m})")

    def lift(spec: Spectrum) -> Spectrum:
        if g.variant == "complement":
            return complement_spectrum(spec, n)
        if g.variant == "sum":
            return spectrum_sum_graph(spec, q, n)
        return spec

    primary = lift(base_periods if base_periods is not None else base_closed)
    closed = lift(base_closed) if base_closed is not None else None
    return primary, closed


def _oracle(g, F, spec: Spectrum, dense_method: str = "jacobi") -> OracleReport:
    if g.variant == "standard":
        return compare_spectra(spec, character_sum_eigenvalues(F, g.k))
    if g.variant == "complement":
        # character sums over the complement connection set, i.e. the
        # non-zero non-k-th powers
        full = character_sum_eigenvalues(F, 1)
        ours = character_sum_eigenvalues(F, g.k)
        return compare_spectra(spec, full - ours, method="character_sums")
    A = adjacency_matrix(g)
    return compare_spectra(spec, dense_eigen_symmetric(A, dense_method), method=dense_method)


def _ramanujan_json(spec: Spectrum, degree: int, undirected: bool) -> dict:
    try:
        v = is_ramanujan(spec, degree, undirected=undirected)
    except DisconnectedGraphError as exc:
        return {"defined": False, "reason": str(exc)}
    return {
        "defined": True,
        "lambda": fnum(v.lambda_max),
        "bound_undirected": fnum(v.bound_undirected),
        "bound_directed_LP": fnum(v.bound_directed_LP),
        "undirected": v.is_ramanujan_undirected,
        "directed_classical": v.is_ramanujan_directed_classical,
        "directed_LP": v.is_ramanujan_directed_LP,
        "adjacency_normal": v.adjacency_normal,
        "ramanujan": v.is_ramanujan,
    }


def _srg_json(k: int, p: int, m: int, wit) -> dict | None:
    if wit is None or wit.paley_only:
        return None
    s = srg_params(k, p, m, wit)
    return {
        "params": list(s.params),
        "complement_params": list(s.comp_params),
        "intersection_array": list(s.intersection),
        "complement_intersection_array": list(s.comp_intersection),
        "latin": str(s.latin),
        "complement_latin": str(s.comp_latin),
        "pseudo_latin": s.latin.kind == "PL",
        "conference": s.conference,
    }


def build_report(
    p: int,
    m: int,
    k: int,
    variant: str = "standard",
    method: str = "periods",
    verify: bool = False,
    full: bool = False,
) -> tuple[dict, bool]:
    """The report record and whether every requested verification passed."""
    _validate(p, m, k)
    F = build_field(p, m)
    g = build_gp(p, m, k, variant, field=F)
    k, q, n = g.k, g.q, g.n
    ok = True
    spec, closed = _spectrum_for(g, F, method)
    if method == "both" and closed is not None and not closed.equivalent(spec):
        ok = False
    undirected = is_undirected(g)
    connected = is_connected(g)
    wit = is_semiprimitive_pair(k, p, m)
    hamming = is_hamming_gp(k, p, m)
    flags: dict[str, Any] = {
        "undirected": undirected,
        "connected": connected,
        "integral": spec.is_integral,
        "semiprimitive": wit is not None,
        "hamming": None if hamming is None else {"b": hamming[0], "m": hamming[1]},
    }
    if method == "both":
        flags["closed_form_agrees"] = None if closed is None else closed.equivalent(spec)
    if full:
        flags["integral_criterion"] = is_integral_pred(p, m, k)
        flags["witness"] = None if wit is None else {"t": wit.t, "s": wit.s, "sigma": wit.sigma}
        if variant == "standard":
            flags["waring"] = diameter_waring(g) if connected else None
            if spec.is_integral:
                E, div = energy_check(spec, n)
                flags["energy"] = {"E": E, "divisible_by_n": div}
            else:
                flags["energy"] = None
    oracle = None
    if verify:
        oracle = _oracle(g, F, spec)
        ok = ok and oracle.matched
    report = {
        "p": p,
        "m": m,
        "k": k,
        "q": q,
        "n": n,
        "variant": variant,
        "flags": flags,
        "spectrum": spectrum_json(spec),
        "srg": _srg_json(k, p, m, wit) if (full and variant == "standard") else None,
        "ramanujan": _ramanujan_json(spec, g.degree, undirected) if (connected or variant != "standard") else {
            "defined": False,
            "reason": "graph is disconnected",
        },
        "oracle": oracle_json(oracle),
    }
    report["_text_spectrum"] = spectrum_text(spec)
    return report, ok


def _strip(report: dict) -> dict:
    return {k: v for k, v in report.items() if not k.startswith("_")}


def report_text(r: dict) -> str:
    lines = [
        f"Gamma({r['k']}, {r['p']}^{r['m']})  variant={r['variant']}  q={r['q']}  n={r['n']}",
        f"spectrum: {r['_text_spectrum']}",
    ]
    for key, val in r["flags"].items():
        lines.append(f"{key}: {json.dumps(val)}")
    if r["srg"]:
        s = r["srg"]
        lines.append(f"srg: {tuple(s['params'])}  complement {tuple(s['complement_params'])}")
        lines.append(f"intersection arrays: {s['intersection_array']}  {s['complement_intersection_array']}")
        lines.append(f"Latin type: {s['latin']} / {s['complement_latin']}")
    if r["ramanujan"].get("defined"):
        ram = r["ramanujan"]
        lines.append(
            f"ramanujan: {ram['ramanujan']} (lambda={ram['lambda']}, 2sqrt(n-1)={ram['bound_undirected']}, "
            f"LP={ram['directed_LP']})"
        )
    else:
        lines.append(f"ramanujan: undefined ({r['ramanujan']['reason']})")
    if r["oracle"] is not None:
        o = r["oracle"]
        lines.append(f"oracle ({o['method']}): matched={o['matched']} max deviation={o['max_abs_deviation']}")
    return "\n".join(lines) + "\n"


def report_csv(r: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "m", "k", "q", "n", "variant", "kind", "re", "im", "exact", "mult"])
    for e in r["spectrum"]:
        v = e["value"]
        w.writerow([r["p"], r["m"], r["k"], r["q"], r["n"], r["variant"], v["kind"], v["re"], v["im"], v["exact"], e["mult"]])
    return buf.getvalue()


# --- tables --------------------------------------------------------------------------------


def table1() -> list[dict]:
    return [{"p": p, "m": m, "k": table1_semiprimitive_k(p, m)} for p in TABLE1_PRIMES for m in TABLE1_EXPONENTS]


def table2_rows(verify: bool = False, dense_cap: int = 0, dense_method: str = "lapack") -> list[dict]:
    rows = []
    for k, p, m in TABLE2_ROWS:
        wit = is_semiprimitive_pair(k, p, m)
        s = srg_params(k, p, m, wit)
        spec = closed_form_semiprimitive(k, p, m)
        comp = closed_form_semiprimitive(k, p, m, complement=True)
        entry = {
            "k": k,
            "p": p,
            "m": m,
            "t": wit.t,
            "s": wit.s,
            "graph": {
                "srg": list(s.params),
                "spectrum": [[v, mult] for v, mult in spec],
                "pl": str(s.latin) if s.latin.kind == "PL" else "no",
            },
            "complement": {
                "srg": list(s.comp_params),
                "spectrum": [[v, mult] for v, mult in comp],
                "pl": str(s.comp_latin) if s.comp_latin.kind == "PL" else "no",
            },
        }
        if verify:
            F = build_field(p, m)
            chars = character_sum_eigenvalues(F, k)
            periods = spectrum_from_periods(F, k)
            rep = compare_spectra(spec, chars)
            rep_c = compare_spectra(comp, character_sum_eigenvalues(F, 1) - chars)
            entry["verify"] = {
                "periods_match": periods.equivalent(spec),
                "character_sums": oracle_json(rep),
                "complement_character_sums": oracle_json(rep_c),
            }
            if F.q <= dense_cap:
                A = adjacency_matrix(build_gp(p, m, k, field=F))
                ev = dense_eigen_symmetric(A, dense_method)
                entry["verify"]["dense"] = oracle_json(compare_spectra(spec, ev, method=dense_method))
        rows.append(entry)
    return rows


def _table2_ok(rows: list[dict]) -> bool:
    for r in rows:
        v = r.get("verify")
        if v is None:
            continue
        if not v["periods_match"] or not v["character_sums"]["matched"] or not v["complement_character_sums"]["matched"]:
            return False
        if "dense" in v and not v["dense"]["matched"]:
            return False
    return True


def _spec_cell(spec: list) -> str:
    return "{" + ", ".join(f"[{v}]^{mult}" for v, mult in spec) + "}"


def table_text(which: int, rows: list[dict]) -> str:
    out = []
    if which == 1:
        out.append("p\\m  " + "  ".join(f"m={m}" for m in TABLE1_EXPONENTS))
        for p in TABLE1_PRIMES:
            cells = [", ".join(map(str, r["k"])) or "--" for r in rows if r["p"] == p]
            out.append(f"p={p}: " + " | ".join(cells))
        return "\n".join(out) + "\n"
    for r in rows:
        for label, part in (("G", r["graph"]), ("coG", r["complement"])):
            line = (
                f"{label}({r['k']},{r['p']}^{r['m']})  srg{tuple(part['srg'])}  {_spec_cell(part['spectrum'])}"
                f"  t={r['t']} s={r['s']}  {part['pl']}"
            )
            out.append(line)
        if "verify" in r:
            v = r["verify"]
            dense = v.get("dense")
            out.append(
                f"  verified: periods={v['periods_match']} chars={v['character_sums']['matched']}"
                f" complement={v['complement_character_sums']['matched']}"
                + (f" dense={dense['matched']}" if dense else "")
            )
    return "\n".join(out) + "\n"


def table_csv(which: int, rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if which == 1:
        w.writerow(["p", "m", "k_values"])
        for r in rows:
            w.writerow([r["p"], r["m"], " ".join(map(str, r["k"]))])
    else:
        w.writerow(["graph", "k", "p", "m", "v", "r", "e", "d", "spectrum", "t", "s", "pl"])
        for r in rows:
            for label, part in (("graph", r["graph"]), ("complement", r["complement"])):
                w.writerow([label, r["k"], r["p"], r["m"], *part["srg"], _spec_cell(part["spectrum"]), r["t"], r["s"], part["pl"]])
    return buf.getvalue()


# --- commands --------------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(_strip(report))
    if fmt == "csv":
        return report_csv(report)
    return report_text(report)


def cmd_spectrum(args) -> int:
    report, ok = build_report(args.p, args.m, args.k, args.variant, args.method, args.verify, full=False)
    _emit(_render_report(report, args.format), args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_classify(args) -> int:
    report, ok = build_report(args.p, args.m, args.k, "standard", "periods", args.verify, full=True)
    _emit(_render_report(report, args.format), args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_table(args) -> int:
    if args.which == 1:
        rows = table1()
        ok = True
    else:
        rows = table2_rows(args.verify, args.dense_cap, args.dense_method)
        ok = _table2_ok(rows)
    if args.format == "json":
        text = dumps({"table": args.which, "rows": rows})
    elif args.format == "csv":
        text = table_csv(args.which, rows)
    else:
        text = table_text(args.which, rows)
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_sweep(args) -> int:
    cfg = SweepConfig(
        max_q=args.max_q,
        oracle_cap=args.oracle_cap,
        char_cap=args.char_cap,
        sum_cap=args.sum_cap,
        srg_cap=args.srg_cap,
        dense_method=args.dense_method,
    )
    summary = run_sweep(cfg, jobs=args.jobs)
    js = dumps(summary)
    if args.findings:
        with open(args.findings, "w", encoding="utf-8") as fh:
            fh.write(js)
    if args.format == "json":
        text = js
    else:
        lines = [f"instances: {summary['instances']}"]
        for name, c in summary["checks"].items():
            lines.append(f"{name:26s} run {c['run']:6d}  passed {c['passed']:6d}  failed {c['failed']:4d}  skipped {c['skipped']:6d}")
        lines.append(f"findings: {len(summary['findings'])}")
        for f in summary["findings"]:
            lines.append(f"  [{f['module']}] {f['check']} at (p={f['p']}, m={f['m']}, k={f['k']}): {f['detail']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if not summary["findings"] else EXIT_MISMATCH


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="gpspectra", description="Spectra of generalized Paley graphs Gamma(k, q).")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt=True):
        if fmt:
            sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
        sp.add_argument("--out", default=None, help="write to FILE instead of stdout")

    def pmk(sp):
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--m", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)

    sp = sub.add_parser("spectrum", help="spectrum of one graph")
    pmk(sp)
    sp.add_argument("--variant", choices=("standard", "sum", "complement"), default="standard")
    sp.add_argument("--method", choices=("periods", "closed", "both"), default="periods")
    sp.add_argument("--verify", action="store_true", help="check against the brute-force oracle")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("classify", help="full structural report")
    pmk(sp)
    sp.add_argument("--verify", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("table", help="semiprimitive tables")
    sp.add_argument("--which", type=int, choices=(1, 2), required=True)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--dense-cap", type=int, default=0, help="also run the dense eigensolver up to this q")
    sp.add_argument("--dense-method", choices=("jacobi", "lapack"), default="jacobi")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("sweep", help="run every invariant over all q <= max-q")
    sp.add_argument("--max-q", type=int, default=3000)
    sp.add_argument("--oracle-cap", type=int, default=1024)
    sp.add_argument("--char-cap", type=int, default=2000)
    sp.add_argument("--sum-cap", type=int, default=256)
    sp.add_argument("--srg-cap", type=int, default=1024)
    sp.add_argument("--dense-method", choices=("jacobi", "lapack"), default="lapack")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--findings", default=None, help="write the JSON findings report to FILE")
    common(sp)
    sp.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"gpspectra: {exc}\n")
        return EXIT_USAGE
    except (ValueError, FieldSizeError, UnsupportedCase) as exc:
        sys.stderr.write(f"gpspectra: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
