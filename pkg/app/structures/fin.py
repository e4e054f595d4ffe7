"""Büchi automata for the ideal Fin of finite sets and its layers Fin_k.

An omega-word over {0, 1} is read as the characteristic word of a set of
natural numbers.
"""
from typing import Optional

from app.automata.buchi import BuchiAutomaton
from app.automata.complement import word_inclusion
from app.models.alphabet import BINARY
from app.models.words import LassoWord
from app.utils.error_handling import InputError
from app.utils.logger import get_logger

logger = get_logger(__name__)


def build_fin_automaton() -> BuchiAutomaton:
    """Words with finitely many 1s: guess the last 1, then read only 0s."""
    return BuchiAutomaton.build(
        BINARY,
        2,
        initial=[0],
        accepting=[1],
        transitions=[(0, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1)],
    )


def build_cofin_automaton() -> BuchiAutomaton:
    """Words with infinitely many 1s; deterministic, state 1 just read a 1."""
    return BuchiAutomaton.build(
        BINARY,
        2,
        initial=[0],
        accepting=[1],
        transitions=[(q, 0, 0) for q in (0, 1)] + [(q, 1, 1) for q in (0, 1)],
    )


def build_fin_k_automaton(k: int) -> BuchiAutomaton:
    """Words with at most k letters 1; state i counts the 1s read so far."""
    if k < 0:
        raise InputError(f"k must be non-negative, got {k}")
    transitions = [(i, 0, i) for i in range(k + 1)] + [(i, 1, i + 1) for i in range(k)]
    return BuchiAutomaton.build(BINARY, k + 1, [0], range(k + 1), transitions)


def fin_chain_counterexample(k: int) -> Optional[LassoWord]:
    """A word violating Fin_k ⊆ Fin_{k+1} ⊆ Fin, or None if both inclusions hold."""
    lower, upper, fin = build_fin_k_automaton(k), build_fin_k_automaton(k + 1), build_fin_automaton()
    witness = word_inclusion(lower, upper)
    if witness is None:
        witness = word_inclusion(upper, fin)
    logger.debug(f"Fin_{k} chain check: {'holds' if witness is None else witness}")
    return witness


def fin_chain_holds(k: int) -> bool:
    return fin_chain_counterexample(k) is None
