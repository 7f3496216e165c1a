import random

import pytest

from glgray.gf import make_field
from glgray.matgroup import is_invertible

# lines recorded by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def random_invertible(q, n, rng):
    f = make_field(q)
    while True:
        X = tuple(tuple(rng.randrange(q) for _ in range(n)) for _ in range(n))
        if is_invertible(f, X):
            return X


def random_pair(q, n, rng):
    x = random_invertible(q, n, rng)
    while True:
        y = random_invertible(q, n, rng)
        if y != x:
            return x, y


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
