from pathlib import Path

import pytest

from ordsurv import Observation

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "ordsurv" / "fixtures"


def two_groups(a, b, events_a=None, events_b=None, labels=("A", "B")):
    events_a = events_a or [True] * len(a)
    events_b = events_b or [True] * len(b)
    return [Observation(t, e, labels[0]) for t, e in zip(a, events_a)] + [
        Observation(t, e, labels[1]) for t, e in zip(b, events_b)
    ]


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
