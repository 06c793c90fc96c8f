from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from combprob.document import load_measure
from combprob.events import Space
from combprob.measure import from_positive_values

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load_fixture(name: str):
    return load_measure(fixture_path(name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def five_atom():
    return load_fixture("five_atom_mixed_signs.txt")


@pytest.fixture(scope="session")
def four_atom():
    return load_fixture("four_atom_balanced.txt")


@pytest.fixture(scope="session")
def coarse():
    return load_fixture("coarse_three_atom.txt")


@pytest.fixture(scope="session")
def fair_coin():
    return load_fixture("fair_coin.json")


@pytest.fixture(scope="session")
def fair_coin_embedded():
    return from_positive_values(Space("ht"), {"h": Fraction(1, 2), "t": Fraction(1, 2)})


@pytest.fixture(scope="session")
def antievent_certain():
    return load_fixture("antievent_certain.txt")


def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_log import LOG

    if not LOG:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(LOG):
        terminalreporter.write_line(LOG[number])
