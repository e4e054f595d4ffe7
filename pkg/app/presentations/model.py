"""Automatic presentations: a domain, an equality and named relations.

A presentation of kind ``word`` uses Büchi automata, one of kind ``tree``
uses Muller or parity tree automata. An automaton for an n-ary relation
reads the n-fold product of the base alphabet, one track per argument.
"""
from typing import Dict, List, Literal, Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.automata.buchi import BuchiAutomaton, word_membership, zip_lassos
from app.automata.tree import MullerTreeAutomaton, ParityTreeAutomaton, tree_membership, zip_trees
from app.models.alphabet import Alphabet, format_letter
from app.models.trees import RegularTree
from app.models.words import LassoWord
from app.utils.error_handling import PresentationError

Automaton = Union[BuchiAutomaton, MullerTreeAutomaton, ParityTreeAutomaton]
Element = Union[LassoWord, RegularTree]

EQUALITY = "="


def accepts(automaton: Automaton, elements: Sequence[Element]) -> bool:
    """Membership of the convolution of the elements, one per track."""
    if isinstance(automaton, BuchiAutomaton):
        return word_membership(automaton, zip_lassos(elements))
    return tree_membership(automaton, zip_trees(elements))


def element_text(element: Element) -> str:
    """One-line rendering: `stem|loop` for lassos, `label left right` rows for trees."""
    if isinstance(element, LassoWord):
        return str(element)
    rows = element.canonical()
    return "tree[" + "; ".join(f"{format_letter(a)} {l} {r}" for a, l, r in rows) + "]"


def tuple_text(elements: Sequence[Element]) -> str:
    return "(" + ", ".join(element_text(e) for e in elements) + ")"


class Relation(BaseModel):
    """A relation symbol with its arity and automaton."""
    model_config = ConfigDict(frozen=True)

    arity: int = Field(..., ge=1)
    automaton: Automaton


class Presentation(BaseModel):
    """An automatic presentation of a structure.

    The presented structure has the equality classes of accepted domain
    elements as its elements. `complements` holds automata accepting the
    complements of atoms, keyed by relation name (``=`` for equality);
    they make negated atoms available over tree presentations. Function
    symbols are given by their graph relation of the same name with one
    extra argument, constants by a unary relation.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["word", "tree"]
    name: str = ""
    base: Alphabet
    domain: Automaton
    equality: Automaton
    relations: Dict[str, Relation] = Field(default_factory=dict)
    complements: Dict[str, Automaton] = Field(default_factory=dict)
    functions: Dict[str, int] = Field(default_factory=dict, description="Function symbol -> arity")
    constants: Dict[str, str] = Field(default_factory=dict, description="Constant symbol -> unary relation")
    domain_universal: bool = Field(False, description="The domain automaton accepts every input")

    @model_validator(mode="after")
    def _check_signature(self) -> "Presentation":
        self._check_automaton("domain", self.domain, 1)
        self._check_automaton("equality", self.equality, 2)
        for name, relation in self.relations.items():
            if name == EQUALITY:
                raise PresentationError("'=' is reserved for the equality automaton")
            self._check_automaton(name, relation.automaton, relation.arity)
        for name, automaton in self.complements.items():
            self._check_automaton(f"complement of {name}", automaton, self.arity_of(name))
        for name, arity in self.functions.items():
            if self.arity_of(name) != arity + 1:
                raise PresentationError(f"function {name} needs a graph relation of arity {arity + 1}")
        for symbol, relation in self.constants.items():
            if self.arity_of(relation) != 1:
                raise PresentationError(f"constant {symbol} needs a unary relation, got {relation}")
        return self

    def _check_automaton(self, what: str, automaton: Automaton, arity: int) -> None:
        is_word = isinstance(automaton, BuchiAutomaton)
        if is_word != (self.kind == "word"):
            raise PresentationError(f"{what}: a {self.kind} presentation cannot use {type(automaton).__name__}")
        if automaton.alphabet != self.tracks(arity):
            raise PresentationError(
                f"{what}: expected {arity} track(s) over the base alphabet",
                {"expected": str(self.tracks(arity)), "found": str(automaton.alphabet)},
            )

    def tracks(self, arity: int) -> Alphabet:
        """Alphabet of an automaton reading `arity` elements side by side."""
        return Alphabet.power(self.base, max(arity, 1))

    def arity_of(self, name: str) -> int:
        if name == EQUALITY:
            return 2
        if name not in self.relations:
            raise PresentationError(f"unknown relation symbol {name!r}", {"known": ", ".join(self.symbols())})
        return self.relations[name].arity

    def atom(self, name: str) -> Automaton:
        """Automaton of a relation symbol or of equality."""
        if name == EQUALITY:
            return self.equality
        self.arity_of(name)
        return self.relations[name].automaton

    def complement(self, name: str) -> Optional[Automaton]:
        return self.complements.get(name)

    def symbols(self) -> List[str]:
        return [EQUALITY] + sorted(self.relations)

    def holds(self, name: str, elements: Sequence[Element]) -> bool:
        """Whether the atom `name` holds of the given representatives."""
        if len(elements) != self.arity_of(name):
            raise PresentationError(f"{name} takes {self.arity_of(name)} arguments, got {len(elements)}")
        return accepts(self.atom(name), elements)

    def describe(self) -> str:
        signature = ", ".join(f"{n}/{self.arity_of(n)}" for n in self.symbols())
        return f"{self.kind} presentation {self.name or '<unnamed>'} [{signature}]"
