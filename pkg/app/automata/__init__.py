from app.automata.buchi import (
    BuchiAutomaton,
    empty_automaton,
    is_empty,
    reduce,
    trim,
    universal_automaton,
    unzip_lasso,
    word_cylindrify,
    word_emptiness,
    word_membership,
    word_product,
    word_project,
    word_relabel,
    word_reorder,
    word_union,
    zip_lassos,
)
from app.automata.complement import word_complement, word_inclusion
from app.automata.games import GameSolution, ParityGame, solve_by_enumeration, solve_parity_game, verify_strategy
from app.automata.tree import (
    MullerTreeAutomaton,
    ParityTreeAutomaton,
    lift_word_automaton_leftmost,
    muller_to_parity,
    tree_cylindrify,
    tree_emptiness,
    tree_membership,
    tree_product,
    tree_project,
    tree_relabel,
    tree_reorder,
    tree_union,
    unzip_tree,
    zip_trees,
)

__all__ = [
    "BuchiAutomaton",
    "GameSolution",
    "MullerTreeAutomaton",
    "ParityGame",
    "ParityTreeAutomaton",
    "empty_automaton",
    "is_empty",
    "lift_word_automaton_leftmost",
    "muller_to_parity",
    "reduce",
    "solve_by_enumeration",
    "solve_parity_game",
    "tree_cylindrify",
    "tree_emptiness",
    "tree_membership",
    "tree_product",
    "tree_project",
    "tree_relabel",
    "tree_reorder",
    "tree_union",
    "unzip_tree",
    "trim",
    "universal_automaton",
    "unzip_lasso",
    "verify_strategy",
    "word_complement",
    "word_cylindrify",
    "word_emptiness",
    "word_inclusion",
    "word_membership",
    "word_product",
    "word_project",
    "word_relabel",
    "word_reorder",
    "word_union",
    "zip_lassos",
    "zip_trees",
]
