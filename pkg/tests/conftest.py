import pytest

from data.framings import get_form
from triple_linking.linking import LinkingForm
from triple_linking.search import build_context


@pytest.fixture(scope="session")
def m0_form():
    return get_form("m0")


@pytest.fixture(scope="session")
def m0_context(m0_form):
    return build_context(m0_form)


@pytest.fixture
def hyperbolic_form():
    return LinkingForm.diagonal(3, ["1/3", "-1/3"])


@pytest.fixture
def definite_form():
    return LinkingForm.diagonal(3, ["1/3", "1/3"])
