import pytest

from radsob.profile import builtin_corpus, halfline_corpus


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


@pytest.fixture(scope="session")
def decaying_corpus():
    return halfline_corpus()
