from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import pytest

from agropolicy.fiscal_core import Bill
from agropolicy.scenario import Scenario, parse_scenario

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def defaults() -> Scenario:
    return parse_scenario()


@pytest.fixture(scope="session")
def params(defaults):
    return defaults.params


@pytest.fixture(scope="session")
def bases(defaults):
    return defaults.bases


@pytest.fixture(scope="session")
def bill3131(defaults):
    assert defaults.policy.bill is Bill.BILL_3131
    return defaults.policy


@pytest.fixture(scope="session")
def bill3131d(defaults):
    return replace(defaults.policy, bill=Bill.BILL_3131D)


@pytest.fixture(scope="session")
def no_bill(defaults):
    return replace(defaults.policy, bill=Bill.NONE)
