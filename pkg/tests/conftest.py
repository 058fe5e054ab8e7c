import random

import pytest

from discrete_el.complex import annulus, disk_grid, torus


def random_metric(rng: random.Random, keys, zero_prob=0.2):
    """Nonnegative weights with some exact zeros, never all zero."""
    m = {k: (0.0 if rng.random() < zero_prob else rng.expovariate(1.0)) for k in keys}
    if not any(m.values()):
        m[next(iter(m))] = 1.0
    return m


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture(scope="session")
def annulus38():
    return annulus(3, 8)


@pytest.fixture(scope="session")
def torus44():
    return torus(4, 4)


@pytest.fixture(scope="session")
def grid4():
    return disk_grid(4)


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def criterion(request, capsys):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def emit(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} | {detail}"
        request.config.stash[ACCEPTANCE].append(line)
        with capsys.disabled():
            print("\n" + line)
        return ok

    return emit
