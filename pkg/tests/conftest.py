import sys


def pytest_terminal_summary(terminalreporter):
    # reuse the module pytest already imported so the recorded results are visible
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
