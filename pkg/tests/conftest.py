# Criterion lines from test_acceptance.py, echoed in the terminal summary so
# they show up even when pytest captures stdout.
CRITERIA = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
