import re

_results: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed or report.skipped:
        _results.setdefault(int(m.group(1)), []).append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    from test_acceptance import CRITERIA
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        outcomes = _results.get(n)
        if outcomes is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {CRITERIA[n]}")
