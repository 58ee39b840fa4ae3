import pytest

from exclusivity import quantum, scenario


@pytest.fixture(scope="session")
def bell222():
    return scenario.bell_222()


@pytest.fixture(scope="session")
def graph222(bell222):
    return scenario.build_exclusivity_graph(bell222)


@pytest.fixture(scope="session")
def chsh_graph():
    return scenario.chsh_event_graph()


@pytest.fixture(scope="session")
def pentagon_graph():
    return scenario.pentagon_event_graph()


@pytest.fixture(scope="session")
def construction():
    return quantum.chsh_construction()
