"""Finite toy structures: a word presentation and a brute-force evaluator.

Element a of a structure with elements 0..n-1 is represented by every
ω-word that is eventually constant a. The evaluator works directly on the
finite structure and serves as the oracle for the compiler.
"""
import itertools
from typing import Dict, FrozenSet, Iterator, List, Mapping, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.automata.buchi import BuchiAutomaton
from app.fo.formula import (
    EQUALITY,
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Truth,
    Var,
    atom,
    conj,
    disj,
    exists_all,
    forall_all,
)
from app.fo.interpretations import Definition, Interpretation, component_variables
from app.models.alphabet import Alphabet
from app.models.words import LassoWord
from app.presentations.model import Presentation, Relation
from app.utils.error_handling import InputError


class RelationTable(BaseModel):
    model_config = ConfigDict(frozen=True)

    arity: int = Field(..., ge=1)
    tuples: FrozenSet[Tuple[int, ...]] = frozenset()


class ToyStructure(BaseModel):
    """A finite relational structure over the elements 0..size-1."""
    model_config = ConfigDict(frozen=True)

    size: int = Field(..., ge=1)
    relations: Dict[str, RelationTable] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_tables(self) -> "ToyStructure":
        for name, table in self.relations.items():
            for t in table.tuples:
                if len(t) != table.arity or not all(0 <= a < self.size for a in t):
                    raise InputError(f"relation {name} holds a bad tuple {t}")
        return self

    @property
    def elements(self) -> range:
        return range(self.size)


def default_toy_structure() -> ToyStructure:
    """Three elements, a unary P = {0, 2} and a binary R = {(0,1), (1,2), (2,2)}."""
    return ToyStructure(
        size=3,
        relations={
            "P": RelationTable(arity=1, tuples=frozenset({(0,), (2,)})),
            "R": RelationTable(arity=2, tuples=frozenset({(0, 1), (1, 2), (2, 2)})),
        },
    )


def pairing_toy_structure() -> ToyStructure:
    return ToyStructure(
        size=2,
        relations={
            "P": RelationTable(arity=1, tuples=frozenset({(1,)})),
            "R": RelationTable(arity=2, tuples=frozenset({(0, 1), (1, 1)})),
        },
    )


def _eventually_constant(alphabet: Alphabet, tuples: Sequence[Tuple[int, ...]]) -> BuchiAutomaton:
    """Words over `alphabet` whose tracks end constant on one of `tuples`."""
    targets = sorted(set(tuples))
    transitions = [(0, x, 0) for x in alphabet.letters]
    for i, t in enumerate(targets, start=1):
        letter = alphabet.join(t)
        transitions += [(0, letter, i), (i, letter, i)]
    return BuchiAutomaton.build(alphabet, len(targets) + 1, [0], range(1, len(targets) + 1), transitions)


def toy_presentation(structure: ToyStructure, name: str = "toy") -> Presentation:
    """Word presentation of a finite structure with registered complements."""
    base = Alphabet.of(tuple(structure.elements))

    def automaton(arity: int, tuples) -> BuchiAutomaton:
        return _eventually_constant(Alphabet.power(base, arity), tuples)

    def everything(arity: int) -> List[Tuple[int, ...]]:
        return list(itertools.product(structure.elements, repeat=arity))

    diagonal = [(a, a) for a in structure.elements]
    relations = {
        n: Relation(arity=t.arity, automaton=automaton(t.arity, t.tuples)) for n, t in structure.relations.items()
    }
    complements = {
        n: automaton(t.arity, [u for u in everything(t.arity) if u not in t.tuples])
        for n, t in structure.relations.items()
    }
    complements[EQUALITY] = automaton(2, [u for u in everything(2) if u[0] != u[1]])
    return Presentation(
        kind="word",
        name=name,
        base=base,
        domain=automaton(1, everything(1)),
        equality=automaton(2, diagonal),
        relations=relations,
        complements=complements,
    )


def element_word(a: int, stem: Sequence[int] = ()) -> LassoWord:
    return LassoWord.of(stem, (a,))


def evaluate(structure: ToyStructure, formula: Formula, assignment: Mapping[str, int]) -> bool:
    """Truth of a relational formula in the finite structure.

    Raises:
        InputError: If the formula has function terms or unknown relations
    """
    if isinstance(formula, Truth):
        return formula.value
    if isinstance(formula, Atom):
        if not all(isinstance(t, Var) for t in formula.args):
            raise InputError("the brute-force evaluator takes relational formulas only")
        values = tuple(assignment[t.name] for t in formula.args)
        if formula.relation == EQUALITY:
            return values[0] == values[1]
        if formula.relation not in structure.relations:
            raise InputError(f"unknown relation {formula.relation!r}")
        return values in structure.relations[formula.relation].tuples
    if isinstance(formula, Not):
        return not evaluate(structure, formula.body, assignment)
    if isinstance(formula, And):
        return all(evaluate(structure, p, assignment) for p in formula.parts)
    if isinstance(formula, Or):
        return any(evaluate(structure, p, assignment) for p in formula.parts)
    if isinstance(formula, (Exists, Forall)):
        outcomes = (
            evaluate(structure, formula.body, {**assignment, formula.var: a}) for a in structure.elements
        )
        return any(outcomes) if isinstance(formula, Exists) else all(outcomes)
    raise InputError(f"not a formula: {formula!r}")


def evaluate_interpreted(
    structure: ToyStructure, interpretation: Interpretation, formula: Formula, assignment: Mapping[str, Tuple[int, ...]]
) -> bool:
    """Truth of a formula in the structure interpreted in a finite one, by enumeration of tuples."""
    n = interpretation.dimension

    def holds(d: Definition, args: Sequence[Tuple[int, ...]]) -> bool:
        env: Dict[str, int] = {}
        for param, value in zip(d.params, args):
            env.update(zip(component_variables(param, n), value))
        return evaluate(structure, d.formula, env)

    tuples = [t for t in itertools.product(structure.elements, repeat=n) if holds(interpretation.domain, [t])]

    def walk(f: Formula, env: Mapping[str, Tuple[int, ...]]) -> bool:
        if isinstance(f, Truth):
            return f.value
        if isinstance(f, Atom):
            return holds(interpretation.definition(f.relation), [env[t.name] for t in f.args])
        if isinstance(f, Not):
            return not walk(f.body, env)
        if isinstance(f, And):
            return all(walk(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(walk(p, env) for p in f.parts)
        outcomes = (walk(f.body, {**env, f.var: t}) for t in tuples)
        return any(outcomes) if isinstance(f, Exists) else all(outcomes)

    return walk(formula, assignment)


def pairing_interpretation() -> Interpretation:
    """Pairs of elements with componentwise equality."""
    return Interpretation(
        name="pairing",
        dimension=2,
        domain=Definition.of("x", "true"),
        equality=Definition.of("x y", "x_0 = y_0 & x_1 = y_1"),
        relations={
            "Q": Definition.of("x", "P(x_0) & !P(x_1)"),
            "S": Definition.of("x y", "R(x_0,y_1) | x_1 = y_0"),
        },
    )


def _literals(atoms: Sequence[Atom]) -> List[Formula]:
    return [a for a in atoms] + [Not(body=a) for a in atoms]


def toy_sentences(unary: str = "P", binary: str = "R") -> Iterator[Formula]:
    """Every sentence of quantifier depth at most 2 from a fixed grammar.

    Matrices are single literals or two literals joined by & or |, over
    the atoms of the signature; prefixes are all quantifier sequences
    over x (depth 1) or x, y (depth 2).
    """
    blocks = [
        (["x"], [atom(unary, "x"), atom(binary, "x", "x"), atom(EQUALITY, "x", "x")]),
        (
            ["x", "y"],
            [
                atom(unary, "x"),
                atom(unary, "y"),
                atom(binary, "x", "y"),
                atom(binary, "y", "x"),
                atom(binary, "x", "x"),
                atom(binary, "y", "y"),
                atom(EQUALITY, "x", "y"),
            ],
        ),
    ]
    for variables, atoms in blocks:
        literals = _literals(atoms)
        matrices: List[Formula] = list(literals)
        for a, b in itertools.combinations(literals, 2):
            matrices += [conj(a, b), disj(a, b)]
        for quantifiers in itertools.product(("exists", "forall"), repeat=len(variables)):
            for matrix in matrices:
                if not matrix.free_variables() >= set(variables) and len(variables) > 1:
                    continue
                sentence = matrix
                for q, v in reversed(list(zip(quantifiers, variables))):
                    sentence = exists_all([v], sentence) if q == "exists" else forall_all([v], sentence)
                yield sentence
