"""Shared test hooks.

The acceptance tests append one scoreboard line each to
ACCEPTANCE_LINES; the terminal-summary hook echoes the block at the
end of the run, where output capture cannot swallow it.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter) -> None:
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
