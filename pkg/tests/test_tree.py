import pytest

from app.automata.buchi import word_membership
from app.automata.sampling import random_buchi, random_muller, random_regular_tree
from app.automata.tree import (
    MullerTreeAutomaton,
    ParityTreeAutomaton,
    as_priority_form,
    empty_tree_automaton,
    lift_word_automaton_leftmost,
    muller_to_parity,
    tree_cylindrify,
    tree_emptiness,
    tree_is_empty,
    tree_membership,
    tree_product,
    tree_project,
    tree_reduce,
    tree_relabel,
    tree_union,
    universal_tree_automaton,
    unzip_tree,
    zip_trees,
)
from app.models.alphabet import BINARY, Alphabet
from app.models.trees import RegularTree
from app.utils.error_handling import InputError

ZEROS = RegularTree.constant(0)
ONES = RegularTree.constant(1)
ROOT_ONE = RegularTree.from_rows([(1, 1, 1), (0, 1, 1)])


@pytest.fixture
def all_zeros():
    return MullerTreeAutomaton(
        alphabet=BINARY, num_states=1, transitions=((0, 0, 0, 0),), designated=frozenset({frozenset({0})})
    )


@pytest.fixture
def root_one():
    """Trees whose root is labelled 1"""
    return MullerTreeAutomaton(
        alphabet=BINARY,
        num_states=2,
        transitions=((0, 1, 1, 1), (1, 0, 1, 1), (1, 1, 1, 1)),
        designated=frozenset({frozenset({1})}),
    )


def test_membership(all_zeros, root_one):
    assert tree_membership(all_zeros, ZEROS)
    assert not tree_membership(all_zeros, ROOT_ONE)
    assert tree_membership(root_one, ROOT_ONE)
    assert tree_membership(root_one, ONES)
    assert not tree_membership(root_one, ZEROS)


def test_membership_rejects_foreign_labels(all_zeros):
    with pytest.raises(InputError):
        tree_membership(all_zeros, RegularTree.constant(5))


def test_acceptance_needs_designated_set():
    """A run cycling through both states is rejected when only {0} is designated"""
    a = MullerTreeAutomaton(
        alphabet=BINARY,
        num_states=2,
        transitions=((0, 0, 1, 1), (1, 0, 0, 0)),
        designated=frozenset({frozenset({0})}),
    )
    assert not tree_membership(a, ZEROS)


def test_muller_to_parity_keeps_language(rng):
    for _ in range(25):
        a = random_muller(rng, BINARY, priority_form=False)
        p = muller_to_parity(a)
        assert isinstance(p, ParityTreeAutomaton)
        assert as_priority_form(a).has_priority_form
        for _ in range(5):
            t = random_regular_tree(rng, BINARY, 4)
            assert tree_membership(a, t) == tree_membership(p.as_muller(), t)


def test_emptiness_witness(root_one):
    witness = tree_emptiness(root_one)
    assert witness is not None and witness.unfold("") == 1
    assert tree_emptiness(empty_tree_automaton(BINARY)) is None
    assert tree_is_empty(empty_tree_automaton(BINARY))


def test_emptiness_random_witnesses_are_accepted(rng):
    for _ in range(25):
        a = random_muller(rng, BINARY)
        witness = tree_emptiness(a)
        if witness is not None:
            assert tree_membership(a, witness)
        assert (witness is None) == tree_is_empty(a)


def test_product_and_union(all_zeros, root_one):
    assert tree_is_empty(tree_product(all_zeros, root_one))
    either = tree_union(all_zeros, root_one)
    assert tree_membership(either, ZEROS) and tree_membership(either, ROOT_ONE)
    assert not tree_membership(either, RegularTree.from_rows([(0, 1, 1), (1, 1, 1)]))


def test_product_agrees_with_both_sides(rng):
    for _ in range(15):
        a, b = random_muller(rng, BINARY), random_muller(rng, BINARY)
        both = tree_product(a, b)
        for _ in range(5):
            t = random_regular_tree(rng, BINARY, 4)
            assert tree_membership(both, t) == (tree_membership(a, t) and tree_membership(b, t))


def test_reduce_keeps_language(rng):
    for _ in range(15):
        a = random_muller(rng, BINARY)
        reduced = tree_reduce(a)
        for _ in range(5):
            t = random_regular_tree(rng, BINARY, 4)
            assert tree_membership(a, t) == tree_membership(reduced, t)


def test_cylindrify_project_and_zip(root_one):
    wide = tree_cylindrify(root_one, 0, BINARY)
    pair = zip_trees([ZEROS, ROOT_ONE])
    assert tree_membership(wide, pair)
    assert not tree_membership(wide, zip_trees([ROOT_ONE, ZEROS]))
    assert tree_membership(tree_project(wide, 0), ROOT_ONE)
    assert unzip_tree(pair, 2) == (ZEROS, ROOT_ONE)
    assert zip_trees([ZEROS]) == ZEROS


def test_relabel_negation(all_zeros):
    ones = tree_relabel(all_zeros, BINARY, lambda b: 1 - b)
    assert tree_membership(ones, ONES)
    assert not tree_membership(ones, ZEROS)


def test_alphabet_mismatch(all_zeros):
    with pytest.raises(InputError):
        tree_product(all_zeros, universal_tree_automaton(Alphabet.of("ab")))


def test_lift_of_fin(fin):
    """Finitely many 1s on the leftmost branch"""
    lifted = lift_word_automaton_leftmost(fin)
    assert tree_membership(lifted, ZEROS)
    assert not tree_membership(lifted, ONES)
    right_ones = RegularTree.from_rows([(0, 0, 1), (1, 1, 1)])
    assert tree_membership(lifted, right_ones)


def test_lift_matches_leftmost_lasso(rng):
    for _ in range(100):
        b = random_buchi(rng, BINARY)
        t = random_regular_tree(rng, BINARY)
        assert tree_membership(lift_word_automaton_leftmost(b), t) == word_membership(b, t.leftmost_lasso())
