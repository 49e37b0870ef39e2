import re

_CRITERION = re.compile(r"test_acceptance\.py::(?:\w+::)*test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Print one PASS/FAIL line per acceptance criterion that was collected."""
    outcomes: dict[int, bool] = {}
    for status, reports in terminalreporter.stats.items():
        for report in reports:
            match = _CRITERION.search(getattr(report, "nodeid", "") or "")
            if not match:
                continue
            number = int(match.group(1))
            ok = outcomes.get(number, True)
            if status in ("failed", "error", "skipped"):
                ok = False
            outcomes[number] = ok
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(outcomes):
        verdict = "PASS" if outcomes[number] else "FAIL"
        terminalreporter.write_line(f"CRITERION {number}: {verdict}")
