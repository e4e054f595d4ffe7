import pytest

from app.automata import complement
from app.automata.buchi import BuchiAutomaton, word_emptiness, word_membership, word_product
from app.automata.complement import (
    breakpoint_complement,
    dual_complement,
    ramsey_complement,
    rank_complement,
    word_complement,
    word_inclusion,
)
from app.automata.sampling import random_buchi, random_lasso
from app.models.alphabet import BINARY
from app.models.words import LassoWord
from app.structures.fin import build_cofin_automaton, build_fin_automaton, build_fin_k_automaton
from app.utils.error_handling import CapacityError, InputError


def _agrees_as_complement(a, c, rng, lassos=20):
    for _ in range(lassos):
        w = random_lasso(rng, BINARY)
        if word_membership(a, w) == word_membership(c, w):
            return False
    return True


def test_complement_of_fin_is_cofin(fin):
    """The complement of finitely many 1s accepts exactly the words with infinitely many"""
    c = word_complement(fin)
    assert word_membership(c, LassoWord.of((), (0, 1)))
    assert not word_membership(c, LassoWord.of((1, 1), (0,)))
    assert word_emptiness(word_product(fin, c)) is None


@pytest.mark.parametrize("method", ["rank", "ramsey"])
def test_general_methods_on_fin(fin, rng, method):
    assert _agrees_as_complement(fin, word_complement(fin, method=method), rng)


def test_dual_needs_deterministic_input(fin, rng):
    with pytest.raises(InputError):
        dual_complement(fin)
    cofin = build_cofin_automaton()
    assert _agrees_as_complement(cofin, dual_complement(cofin), rng)


def test_breakpoint_needs_weak_input(fin, rng):
    with pytest.raises(InputError):
        breakpoint_complement(build_cofin_automaton())
    assert _agrees_as_complement(fin, breakpoint_complement(fin), rng)


def test_unknown_method(fin):
    with pytest.raises(InputError):
        word_complement(fin, method="magic")


def test_complement_budget(fin):
    with pytest.raises(CapacityError):
        rank_complement(fin, budget=1)


def test_methods_agree_on_random_automata(rng):
    """Every general construction is a complement on random small automata"""
    for _ in range(15):
        a = random_buchi(rng, BINARY, max_states=3)
        for construction in (rank_complement, ramsey_complement):
            assert _agrees_as_complement(a, construction(a), rng, lassos=10)


def test_auto_complement_random_sample(rng):
    for _ in range(25):
        a = random_buchi(rng, BINARY)
        assert _agrees_as_complement(a, word_complement(a), rng)


def test_inclusion():
    """Fin_1 is included in Fin, and Fin is not included in Fin_1"""
    assert word_inclusion(build_fin_k_automaton(1), build_fin_automaton()) is None
    witness = word_inclusion(build_fin_automaton(), build_fin_k_automaton(1))
    assert witness is not None
    assert word_membership(build_fin_automaton(), witness)
    assert not word_membership(build_fin_k_automaton(1), witness)


INFINITELY_MANY_ONES = BuchiAutomaton.build(
    BINARY,
    2,
    initial=[0],
    accepting=[1],
    transitions=[(0, 0, 0), (0, 1, 0), (0, 1, 1), (1, 1, 1), (1, 0, 0)],
)


@pytest.fixture
def constructions(monkeypatch):
    """Names of the constructions word_complement dispatches to"""
    used = []
    for name in ("dual_complement", "breakpoint_complement", "rank_complement", "ramsey_complement"):
        original = getattr(complement, name)

        def spy(a, budget=None, _original=original, _name=name):
            used.append(_name)
            return _original(a, budget)

        monkeypatch.setattr(complement, name, spy)
    return used


def test_auto_order(constructions, fin, settings):
    word_complement(build_cofin_automaton())
    word_complement(fin)
    word_complement(INFINITELY_MANY_ONES)
    settings.automata.rank_complement_max_states = 1
    word_complement(INFINITELY_MANY_ONES)
    assert constructions == ["dual_complement", "breakpoint_complement", "rank_complement", "ramsey_complement"]
