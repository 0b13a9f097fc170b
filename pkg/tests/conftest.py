import pytest

from ldpath.rdf import Variable, iri, literal
from ldpath.web import FixtureWeb, desk_fixture

EX = "http://example.org/"


def ex(local):
    return iri(EX + local)


@pytest.fixture
def desk():
    return desk_fixture()


@pytest.fixture
def desk_web(desk):
    return FixtureWeb(desk)


@pytest.fixture
def v():
    return Variable("v")
