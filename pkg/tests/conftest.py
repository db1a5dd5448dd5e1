import pytest

from sho.model import indicial_exponents

ALPHA_GRID = [-0.2, -0.0475, 0.0, 0.5, 1.0, 2.0]


def admissible(alpha):
    return [b for b in indicial_exponents(alpha) if b.admissible]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
