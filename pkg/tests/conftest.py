import re

_CRITERIA = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or report.failed:
        prev = _CRITERIA.get(n, ("PASS", 0.0))
        status = "FAIL" if report.failed or prev[0] == "FAIL" else ("SKIP" if report.skipped else "PASS")
        _CRITERIA[n] = (status, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, secs = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  ({secs:.1f}s)")
