"""Seeded random automata, words, trees and games for the differential suites.

Every generator takes a `random.Random` instance so a run is reproducible
from its seed.
"""
import itertools
import random
from typing import List, Optional

from app.automata.buchi import BuchiAutomaton
from app.automata.games import ParityGame
from app.automata.tree import MullerTreeAutomaton
from app.models.alphabet import Alphabet
from app.models.trees import RegularTree
from app.models.words import LassoWord


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_buchi(
    rng: random.Random, alphabet: Alphabet, max_states: int = 5, density: float = 0.35
) -> BuchiAutomaton:
    """Random automaton with 1..max_states states and i.i.d. transitions."""
    n = rng.randint(1, max_states)
    transitions = [
        (p, x, q)
        for p in range(n)
        for x in alphabet.letters
        for q in range(n)
        if rng.random() < density
    ]
    initial = {0} | {q for q in range(1, n) if rng.random() < 0.2}
    accepting = {q for q in range(n) if rng.random() < 0.4}
    return BuchiAutomaton.build(alphabet, n, initial, accepting, transitions)


def random_lasso(rng: random.Random, alphabet: Alphabet, max_stem: int = 6, max_loop: int = 6) -> LassoWord:
    letters = alphabet.letters
    stem = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_stem)))
    loop = tuple(rng.choice(letters) for _ in range(rng.randint(1, max_loop)))
    return LassoWord(stem=stem, loop=loop)


def random_regular_tree(rng: random.Random, alphabet: Alphabet, max_nodes: int = 6) -> RegularTree:
    """Uniform random graph with 1..max_nodes nodes and i.i.d. labels, rooted at 0."""
    n = rng.randint(1, max_nodes)
    letters = alphabet.letters
    return RegularTree(
        labels=tuple(rng.choice(letters) for _ in range(n)),
        left=tuple(rng.randrange(n) for _ in range(n)),
        right=tuple(rng.randrange(n) for _ in range(n)),
    )


def random_parity_game(
    rng: random.Random, max_vertices: int = 8, num_priorities: int = 4, max_degree: int = 2
) -> ParityGame:
    n = rng.randint(1, max_vertices)
    edges = []
    for _ in range(n):
        degree = rng.randint(1, min(max_degree, n))
        edges.append(tuple(sorted(rng.sample(range(n), degree))))
    return ParityGame(
        owner=tuple(rng.randint(0, 1) for _ in range(n)),
        priority=tuple(rng.randrange(num_priorities) for _ in range(n)),
        edges=tuple(edges),
    )


def random_muller(
    rng: random.Random,
    alphabet: Alphabet,
    max_states: int = 3,
    priority_form: Optional[bool] = None,
) -> MullerTreeAutomaton:
    """Random tree automaton with an explicit or priority-form designated family."""
    n = rng.randint(1, max_states)
    transitions = []
    for q in range(n):
        for x in alphabet.letters:
            for _ in range(rng.randint(0, 2)):
                transitions.append((q, x, rng.randrange(n), rng.randrange(n)))
    if priority_form is None:
        priority_form = rng.random() < 0.5
    if priority_form:
        return MullerTreeAutomaton(
            alphabet=alphabet,
            num_states=n,
            initial=0,
            transitions=tuple(dict.fromkeys(transitions)),
            priority=tuple(rng.randrange(4) for _ in range(n)),
        )
    subsets: List[frozenset] = [
        frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(range(n), r)
    ]
    designated = frozenset(s for s in subsets if rng.random() < 0.5)
    return MullerTreeAutomaton(
        alphabet=alphabet,
        num_states=n,
        initial=0,
        transitions=tuple(dict.fromkeys(transitions)),
        designated=designated,
    )
