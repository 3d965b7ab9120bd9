import pytest

from helpers import DATA, EXAMPLE_TEXT
from sgmine.eventlog import parse_log
from sgmine.sdag import reduce_to_dfg, sdag_of_sdfa
from sgmine.serialize import load_model


@pytest.fixture
def example_log():
    return parse_log(EXAMPLE_TEXT)


@pytest.fixture
def example_sdfa():
    """The running-example SDFA with the probabilities as displayed."""
    return load_model(DATA / "example_sdfa.json")


@pytest.fixture
def example_sdfa_exact():
    """The same SDFA with exact count ratios (272/1601, 1057/1329, ...)."""
    return load_model(DATA / "example_sdfa_exact.json")


@pytest.fixture
def example_sdag(example_sdfa):
    return sdag_of_sdfa(example_sdfa)


@pytest.fixture
def merged_dfg(example_sdag):
    return reduce_to_dfg(example_sdag)


@pytest.fixture
def merged_dfg_exact(example_sdfa_exact):
    return reduce_to_dfg(sdag_of_sdfa(example_sdfa_exact))


@pytest.fixture
def count_dfg():
    return load_model(DATA / "count_dfg.json")


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
