import random
from collections import defaultdict

import pytest

from mtss.cff import cff_literal
from mtss.crypto import CryptoSuite

# 2-CFF(9, 12) used throughout as a golden vector
GOLDEN_ROWS = [
    [1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0],
    [1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1],
    [0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0],
    [0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 1],
    [0, 0, 1, 0, 1, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1, 0],
]


@pytest.fixture
def golden():
    return cff_literal(GOLDEN_ROWS, d=2)


@pytest.fixture
def suite():
    """Deterministic suite: sha256 plus the keyed test double."""
    return CryptoSuite.named("sha256", "test-hmac-sha256", seed=7)


@pytest.fixture
def keys(suite):
    return suite.cdss.keygen(seed=1)


@pytest.fixture
def rng():
    return random.Random(20240611)


# -- acceptance summary -------------------------------------------------

_criteria: dict[int, list[bool]] = defaultdict(list)
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, title = mark.args
    _titles[num] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        _criteria[num].append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        ok = all(_criteria[num])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {num}: {_titles[num]}")
