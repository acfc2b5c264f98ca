ACCEPTANCE_LINES: list = []


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running numerical checks")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
