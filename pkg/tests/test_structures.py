import pytest

from app.automata.buchi import word_membership
from app.automata.sampling import random_regular_tree
from app.automata.tree import tree_is_empty, tree_membership, tree_product
from app.models.alphabet import BINARY
from app.models.trees import NodeAddress, RegularTree
from app.models.words import LassoWord
from app.structures.addresses import addresses, max_antichain, node_index, node_unindex
from app.structures.antichain import (
    antichain_oracle,
    antichain_tree,
    build_antichain_automaton,
    build_no_antichain_automaton,
    chain_tree,
    find_departure,
)
from app.structures.atomless import atomless_split
from app.structures.boolean_algebras import build_algebra
from app.structures.fin import build_fin_k_automaton, fin_chain_counterexample, fin_chain_holds
from app.utils.error_handling import InputError

FIRST_FIFTEEN = ["", "l", "r", "ll", "lr", "rl", "rr", "lll", "llr", "lrl", "lrr", "rll", "rlr", "rrl", "rrr"]


@pytest.fixture(scope="module")
def t_automaton():
    return build_antichain_automaton()


@pytest.fixture(scope="module")
def ti_automaton():
    return build_no_antichain_automaton()


def test_enumeration_order():
    assert [node_unindex(n).path for n in range(15)] == FIRST_FIFTEEN
    assert node_index("") == 0 and node_index("r") == 2 and node_index(NodeAddress(path="rl")) == 5


def test_enumeration_is_bijective():
    indices = [node_index(u) for u in addresses(8)]
    assert indices == list(range(len(indices)))
    assert all(node_unindex(n) == u for n, u in zip(indices, addresses(8)))


def test_enumeration_rejects_negative():
    with pytest.raises(InputError):
        node_unindex(-1)


def test_max_antichain():
    assert max_antichain([]) == 0
    assert max_antichain(["", "l", "ll"]) == 1
    assert max_antichain(["l", "rl", "rr", "r"]) == 3


def test_fin_k_counts_ones():
    fin2 = build_fin_k_automaton(2)
    assert word_membership(fin2, LassoWord.of((1, 0, 1), (0,)))
    assert not word_membership(fin2, LassoWord.of((1, 1, 1), (0,)))
    with pytest.raises(InputError):
        build_fin_k_automaton(-1)


@pytest.mark.parametrize("k", range(6))
def test_fin_layers_are_nested(k):
    assert fin_chain_holds(k)
    assert fin_chain_counterexample(k) is None


def test_oracle_on_witness_trees():
    assert antichain_oracle(antichain_tree()).is_infinite
    for n in range(6):
        verdict = antichain_oracle(chain_tree(n))
        assert verdict.kind == "finite" and verdict.width == 1
    assert antichain_oracle(RegularTree.constant(0)).width == 0
    assert antichain_oracle(RegularTree.constant(1)).is_infinite


def test_oracle_width_of_finite_sets():
    """1-set {l, r}: an antichain of two"""
    t = RegularTree.from_rows([(0, 1, 1), (1, 2, 2), (0, 2, 2)])
    assert antichain_oracle(t).width == 2
    assert find_departure(t) is None


def test_antichain_automata_on_witnesses(t_automaton, ti_automaton):
    assert tree_membership(t_automaton, antichain_tree())
    assert not tree_membership(ti_automaton, antichain_tree())
    for n in range(6):
        assert tree_membership(ti_automaton, chain_tree(n))
        assert not tree_membership(t_automaton, chain_tree(n))


def test_antichain_automata_are_disjoint(t_automaton, ti_automaton):
    assert tree_is_empty(tree_product(t_automaton, ti_automaton))


def test_antichain_automata_match_oracle(rng, t_automaton, ti_automaton):
    """Both automata agree with the oracle and with each other's complement"""
    for _ in range(150):
        t = random_regular_tree(rng, BINARY)
        infinite = antichain_oracle(t).is_infinite
        assert tree_membership(t_automaton, t) == infinite
        assert tree_membership(ti_automaton, t) != infinite


def test_truncations_respect_width(rng):
    for _ in range(100):
        t = random_regular_tree(rng, BINARY)
        verdict = antichain_oracle(t)
        if not verdict.is_infinite:
            assert max_antichain(t.truncate(6)) <= verdict.width


def test_word_split():
    x = LassoWord.of((1,), (1, 1, 0))
    z = atomless_split(x, "word")
    algebra = build_algebra("word")
    assert algebra.holds("subset", (z, x))
    assert not algebra.holds("eq", (z, x))
    assert not algebra.holds("zero", (z,))


def test_word_split_of_zero():
    with pytest.raises(InputError):
        atomless_split(LassoWord.of((1, 1), (0,)), "word")


@pytest.mark.parametrize("x", [RegularTree.constant(1), antichain_tree()])
def test_tree_split(x):
    z = atomless_split(x, "tree")
    assert antichain_oracle(z).is_infinite
    algebra = build_algebra("tree")
    assert algebra.holds("subset", (z, x))
    assert not algebra.holds("eq", (z, x))


def test_tree_split_of_zero():
    with pytest.raises(InputError):
        atomless_split(chain_tree(1), "tree")
    with pytest.raises(InputError):
        atomless_split(chain_tree(1), "graph")
