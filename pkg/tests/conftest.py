import random
from pathlib import Path

import pytest

from approvalkit.core import ApprovalProfile, ElectionInstance, PriorityOrder

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def random_profile(rng, m, n, density=None, allow_empty=True):
    cands = [chr(ord("a") + i) for i in range(m)]
    ballots = []
    for _ in range(n):
        p = rng.random() if density is None else density
        b = {c for c in cands if rng.random() < p}
        if not b and not allow_empty:
            b = {rng.choice(cands)}
        ballots.append(b)
    return ApprovalProfile(cands, ballots)


def random_instance(rng, max_m=10, max_n=15, allow_empty=True):
    m = rng.randint(1, max_m)
    n = rng.randint(0, max_n)
    profile = random_profile(rng, m, n, allow_empty=allow_empty)
    order = list(profile.candidates)
    rng.shuffle(order)
    return ElectionInstance(profile, rng.randint(1, m), PriorityOrder(order))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or report.failed:
        state = _criteria.setdefault(number, [title, True])
        state[1] = state[1] and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
