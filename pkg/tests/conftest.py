import os
import re
import sys

sys.path.insert(0, os.path.dirname(__file__))


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = re.search(r"test_acceptance\.py::test_criterion\[criterion_(\d+)\]", getattr(rep, "nodeid", ""))
            if m is None or (outcome == "passed" and rep.when != "call"):
                continue
            lines[int(m.group(1))] = "PASS" if outcome == "passed" else "FAIL"
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(f"{lines[k]} criterion {k}")
