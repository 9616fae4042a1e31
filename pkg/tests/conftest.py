import pytest

from emtensor import fixtures as fx
from oracles import boolean_order, chain_order

@pytest.fixture(scope="session")
def P():
    return fx.powerset()


@pytest.fixture(scope="session")
def Pco():
    return fx.powerset("cocartesian")


@pytest.fixture(scope="session")
def F2():
    return fx.f2()


@pytest.fixture(scope="session")
def sup_fixtures():
    """Engine algebra and oracle order for each small sup-lattice."""
    return {
        "C1": (fx.chain(1), chain_order(1)),
        "C2": (fx.chain(2), chain_order(2)),
        "C3": (fx.chain(3), chain_order(3)),
        "D4": (fx.diamond(), boolean_order(2)),
    }


def pytest_configure(config):
    # one summary line per acceptance criterion, filled in by test_acceptance
    config.acceptance_lines = {}


@pytest.fixture
def acceptance_lines(request):
    return request.config.acceptance_lines


def pytest_terminal_summary(terminalreporter, config):
    lines = config.acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
