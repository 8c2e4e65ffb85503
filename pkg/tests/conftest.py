import pytest

from ccgrowth.dehn import DehnContext
from ccgrowth.metrics import HeisenbergOracle, get_ball
from ccgrowth.presentations import parse_presentation
from ccgrowth.rips import COMPLETE, RipsScheme, rips_presentation

HEISENBERG_SRC = "gens a b\nrel [a,[a,b]]\nrel [b,[a,b]]\n"


@pytest.fixture(scope="session")
def heis_q():
    return parse_presentation(HEISENBERG_SRC)


@pytest.fixture(scope="session")
def rips10(heis_q):
    return rips_presentation(heis_q, RipsScheme(10, COMPLETE))


@pytest.fixture(scope="session")
def rips16(heis_q):
    return rips_presentation(heis_q, RipsScheme(16, COMPLETE))


@pytest.fixture(scope="session")
def ctx10(rips10):
    return DehnContext(rips10.g_presentation)


@pytest.fixture(scope="session")
def ctx16(rips16):
    return DehnContext(rips16.g_presentation)


@pytest.fixture(scope="session")
def ball40():
    return get_ball(40)


@pytest.fixture(scope="session")
def oracle40(heis_q):
    return HeisenbergOracle(heis_q.alphabet, radius_cap=40)


@pytest.fixture(scope="session")
def heis_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("presentations") / "heisenberg.txt"
    path.write_text(HEISENBERG_SRC)
    return str(path)
