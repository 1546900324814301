import random

import pytest

from twinsphere.sphere_group import SpherePoint

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return random.Random(20240707)


def all_points(n):
    from itertools import product
    return [SpherePoint(c, n) for c in product(range(n), repeat=4) if sum(x * x for x in c) % n == 1 % n]


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
