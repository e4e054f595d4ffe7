"""Presentations of the quotient boolean algebras P(N)/Fin and P({l,r}*)/I.

Elements are characteristic ω-words (word kind) or {0,1}-labelled trees
(tree kind). Two sets are identified when their symmetric difference lies
in the ideal, so every relation is the inverse image of the ideal automaton
under a letter map that computes the relevant difference pointwise.
"""
from functools import lru_cache
from typing import Callable, Dict, Optional, Tuple

from app.automata.buchi import universal_automaton, word_relabel
from app.automata.tree import universal_tree_automaton, tree_relabel
from app.models.alphabet import BINARY, Alphabet, Letter
from app.presentations.model import Automaton, Presentation, Relation
from app.structures.antichain import build_antichain_automaton, build_no_antichain_automaton
from app.structures.fin import build_cofin_automaton, build_fin_automaton
from app.utils.logger import get_logger

logger = get_logger(__name__)

# name -> (arity, letter map into the ideal's alphabet)
ALGEBRA_RELATIONS: Dict[str, Tuple[int, Callable[[Letter], int]]] = {
    "eq": (2, lambda x: x[0] ^ x[1]),
    "subset": (2, lambda x: x[0] & (1 - x[1])),
    "cap": (3, lambda x: (x[0] & x[1]) ^ x[2]),
    "cup": (3, lambda x: (x[0] | x[1]) ^ x[2]),
    "neg": (2, lambda x: (1 - x[0]) ^ x[1]),
    "zero": (1, lambda b: b),
    "one": (1, lambda b: 1 - b),
}

ALGEBRA_FUNCTIONS = {"cap": 2, "cup": 2, "neg": 1}
ALGEBRA_CONSTANTS = {"0": "zero", "1": "one"}

Relabel = Callable[[Automaton, Alphabet, Callable[[Letter], Letter]], Automaton]


def _build_algebra(
    kind: str,
    name: str,
    domain: Automaton,
    ideal: Automaton,
    co_ideal: Optional[Automaton],
    relabel: Relabel,
) -> Presentation:
    """Relations of the quotient algebra from an automaton for the ideal.

    Args:
        kind: Presentation kind
        name: Presentation name
        domain: Universal automaton over the base alphabet
        ideal: Automaton for the ideal, over {0, 1}
        co_ideal: Automaton for the complement of the ideal, registered as
            the complement of every atom
        relabel: Inverse-image operation of the matching engine
    """
    relations: Dict[str, Relation] = {}
    complements: Dict[str, Automaton] = {}
    for symbol, (arity, letter_map) in ALGEBRA_RELATIONS.items():
        target = Alphabet.power(BINARY, arity)
        relations[symbol] = Relation(arity=arity, automaton=relabel(ideal, target, letter_map))
        if co_ideal is not None:
            complements[symbol] = relabel(co_ideal, target, letter_map)
    if co_ideal is not None:
        complements["="] = complements["eq"]
    presentation = Presentation(
        kind=kind,
        name=name,
        base=BINARY,
        domain=domain,
        equality=relations["eq"].automaton,
        relations=relations,
        complements=complements,
        functions=ALGEBRA_FUNCTIONS,
        constants=ALGEBRA_CONSTANTS,
        domain_universal=True,
    )
    logger.debug(f"built {presentation.describe()}")
    return presentation


@lru_cache(maxsize=None)
def build_B1_presentation() -> Presentation:
    """P(N)/Fin as a word presentation."""
    return _build_algebra(
        "word", "B1", universal_automaton(BINARY), build_fin_automaton(), build_cofin_automaton(), word_relabel
    )


@lru_cache(maxsize=None)
def build_B2_presentation() -> Presentation:
    """P({l,r}*)/I as a tree presentation, I the sets without infinite antichains."""
    return _build_algebra(
        "tree",
        "B2",
        universal_tree_automaton(BINARY),
        build_no_antichain_automaton(),
        build_antichain_automaton(),
        tree_relabel,
    )


def build_algebra(kind: str) -> Presentation:
    return build_B1_presentation() if kind == "word" else build_B2_presentation()
