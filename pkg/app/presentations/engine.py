"""Kind-independent automaton operations used by validation and the FO compiler.

Each helper dispatches to the Büchi engine for word presentations and to
the tree engine for tree presentations.
"""
from typing import Optional, Sequence

from app.automata.buchi import (
    BuchiAutomaton,
    empty_automaton,
    reduce,
    universal_automaton,
    word_emptiness,
    word_product,
    word_project,
    word_relabel,
    word_union,
    unzip_lasso,
)
from app.automata.complement import word_complement
from app.automata.tree import (
    empty_tree_automaton,
    tree_emptiness,
    tree_product,
    tree_project,
    tree_reduce,
    tree_relabel,
    tree_union,
    universal_tree_automaton,
    unzip_tree,
)
from app.models.alphabet import Alphabet, Letter
from app.presentations.model import Automaton, Element, Presentation
from app.utils.error_handling import UnsupportedFragmentError


def select_tracks(source: Alphabet, target: Alphabet, positions: Sequence[int]):
    """Letter map sending a target letter to the source letter read off `positions`."""

    def pick(letter: Letter) -> Letter:
        parts = target.split(letter)
        return source.join([parts[i] for i in positions])

    return pick


def on_tracks(p: Presentation, automaton: Automaton, arity: int, positions: Sequence[int]) -> Automaton:
    """Run an automaton on some tracks of an `arity`-track input.

    Position j of `positions` names the input track read as track j of the
    automaton; positions may repeat, which yields diagonals.
    """
    target = p.tracks(arity)
    if list(positions) == list(range(arity)) and automaton.alphabet == target:
        return automaton
    relabel = word_relabel if p.kind == "word" else tree_relabel
    return relabel(automaton, target, select_tracks(automaton.alphabet, target, positions))


def intersect(p: Presentation, a: Automaton, b: Automaton) -> Automaton:
    if p.kind == "word":
        return reduce(word_product(a, b))
    return tree_reduce(tree_product(a, b))


def join(p: Presentation, a: Automaton, b: Automaton) -> Automaton:
    if p.kind == "word":
        return word_union(a, b)
    return tree_union(a, b)


def project(p: Presentation, a: Automaton, track: int) -> Automaton:
    if p.kind == "word":
        return reduce(word_project(a, track))
    return tree_project(a, track)


def negate(p: Presentation, a: Automaton) -> Automaton:
    """Complement of a word automaton; tree automata are never complemented."""
    if p.kind != "word":
        raise UnsupportedFragmentError("tree automata are not complemented; register an atom complement")
    return word_complement(a)


def universal(p: Presentation, arity: int) -> Automaton:
    if p.kind == "word":
        return universal_automaton(p.tracks(arity))
    return universal_tree_automaton(p.tracks(arity))


def nothing(p: Presentation, arity: int) -> Automaton:
    if p.kind == "word":
        return empty_automaton(p.tracks(arity))
    return empty_tree_automaton(p.tracks(arity))


def domain_power(p: Presentation, arity: int) -> Automaton:
    """Tuples whose every component lies in the domain."""
    if p.domain_universal:
        return universal(p, arity)
    result = on_tracks(p, p.domain, arity, [0])
    for i in range(1, arity):
        result = intersect(p, result, on_tracks(p, p.domain, arity, [i]))
    return result


def member(a: Automaton) -> Optional[Element]:
    """Some accepted input, or None for an empty language."""
    if isinstance(a, BuchiAutomaton):
        return word_emptiness(a)
    return tree_emptiness(a)


def split_tuple(p: Presentation, element: Element, arity: int) -> Sequence[Element]:
    if p.kind == "word":
        return unzip_lasso(element, arity)
    return unzip_tree(element, arity)
