import pytest

from app.automata.sampling import make_rng
from app.config.settings import get_settings
from app.models.alphabet import BINARY
from app.structures.boolean_algebras import build_B1_presentation, build_B2_presentation
from app.structures.fin import build_fin_automaton


@pytest.fixture
def rng():
    """Seeded generator shared by sampled tests"""
    return make_rng(7)


@pytest.fixture
def binary():
    return BINARY


@pytest.fixture
def fin():
    return build_fin_automaton()


@pytest.fixture(scope="session")
def b1():
    return build_B1_presentation()


@pytest.fixture(scope="session")
def b2():
    return build_B2_presentation()


@pytest.fixture
def settings():
    """Global settings, restored after the test"""
    settings = get_settings()
    snapshot = settings.model_copy(deep=True)
    yield settings
    settings.automata = snapshot.automata
    settings.sampling = snapshot.sampling
    settings.logging = snapshot.logging
    settings.cli = snapshot.cli
