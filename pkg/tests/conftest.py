import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Repeat the one-line-per-criterion acceptance report after the run.

    The acceptance tests record their PASS/FAIL lines as they execute;
    pytest's fd-level capture would otherwise hide the passing ones.
    """
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "REPORT_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
