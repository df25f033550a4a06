import pytest

CRITERIA = {
    1: "Table 2 reproduction",
    2: "Table 1 reproduction",
    3: "Gamma(5, 11^5) example",
    4: "integrality theorem sweep",
    5: "closed-form equivalence",
    6: "oracle agreement",
    7: "Ramanujan classification",
    8: "structural property suite",
    9: "determinism",
}

_outcomes: dict[int, list[tuple[str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        state = rep.outcome
        if hasattr(rep, "wasxfail"):
            state = "xfail" if rep.skipped else "xpass"
        _outcomes.setdefault(marker.args[0], []).append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            tr.write_line(f"criterion {n} ({title}): NOT RUN")
            continue
        failed = [name for name, s in results if s in ("failed", "xfail", "xpass")]
        verdict = "PASS" if not failed else "FAIL"
        extra = ""
        if failed:
            known = sum(1 for _, s in results if s == "xfail")
            extra = f" ({len(failed)} of {len(results)} checks; {known} are known errata in the printed reference)"
        tr.write_line(f"criterion {n} ({title}): {verdict}{extra}")
