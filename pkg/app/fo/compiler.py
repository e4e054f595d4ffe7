"""Compiling first-order formulas over a presentation into automata.

A formula with free variables v1 < ... < vk (sorted by name) compiles to
an automaton over k tracks accepting exactly the domain tuples that satisfy
it in the presented structure. Equality atoms use the equality automaton.
Closed subformulas compile to booleans; a sentence is decided without a
final complement. Compiled subformulas are memoized per presentation in a
CompilationCache.

Word presentations support full first-order logic: negation is complement
relative to the domain, ``forall x`` is ``not exists x not``. Tree
presentations support formulas whose negation normal form uses only
conjunction, disjunction, ``exists`` and atoms or negated atoms with a
registered complement.
"""
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.fo.formula import (
    And,
    Apply,
    Atom,
    Const,
    Exists,
    Forall,
    Formula,
    NameSupply,
    Not,
    Or,
    Term,
    Truth,
    nnf,
)
from app.fo.terms import TermFlattener, literal_parts
from app.presentations import engine
from app.presentations.model import Automaton, Element, Presentation
from app.utils.error_handling import InputError, UnsupportedFragmentError
from app.utils.logger import get_logger

logger = get_logger(__name__)


class Compiled(BaseModel):
    """A compiled subformula: a truth value, or an automaton over sorted variables."""
    model_config = ConfigDict(frozen=True)

    variables: Tuple[str, ...] = ()
    automaton: Optional[Automaton] = None
    value: Optional[bool] = None

    @property
    def is_closed(self) -> bool:
        return self.automaton is None


class Decision(BaseModel):
    """Verdict of a sentence, with witnesses for its leading existential variables."""
    verdict: bool
    witnesses: Dict[str, Element] = Field(default_factory=dict)


class CompilationCache:
    """Compiled subformulas of one presentation, shared across compilations.

    A compiled subformula is determined by its text and the presentation,
    so entries stay valid for every later formula over the same presentation.
    """

    def __init__(self, p: Presentation):
        self.presentation = p
        self.formulas: Dict[Formula, Compiled] = {}
        self.negated: Dict[str, Automaton] = {}
        self.domains: Dict[int, Automaton] = {}
        self.hits = 0

    def __len__(self) -> int:
        return len(self.formulas)


class _Compiler:
    def __init__(self, p: Presentation, cache: Optional[CompilationCache] = None):
        if cache is not None and cache.presentation is not p:
            raise InputError(f"compilation cache of {cache.presentation.name} used for {p.name}")
        self.p = p
        self.flattener = TermFlattener(p.constants, NameSupply("t"), universal_forms=p.kind == "word")
        self.cache = cache if cache is not None else CompilationCache(p)

    # signature checks

    def check_symbols(self, f: Formula) -> None:
        if isinstance(f, Atom):
            expected = self.p.arity_of(f.relation) if f.relation in self.p.symbols() else None
            if expected is None:
                raise InputError(f"unknown relation {f.relation!r}", {"known": ", ".join(self.p.symbols())})
            if expected != len(f.args):
                raise InputError(f"{f.relation} takes {expected} arguments, got {len(f.args)}")
            for t in f.args:
                self.check_term(t)
        elif isinstance(f, Not):
            self.check_symbols(f.body)
        elif isinstance(f, (And, Or)):
            for part in f.parts:
                self.check_symbols(part)
        elif isinstance(f, (Exists, Forall)):
            self.check_symbols(f.body)

    def check_term(self, t: Term) -> None:
        if isinstance(t, Const) and t.symbol not in self.p.constants:
            raise InputError(f"unknown constant {t.symbol!r}")
        if isinstance(t, Apply):
            if t.function not in self.p.functions:
                raise InputError(f"unknown function {t.function!r}")
            if self.p.functions[t.function] != len(t.args):
                raise InputError(f"{t.function} takes {self.p.functions[t.function]} arguments, got {len(t.args)}")
            for a in t.args:
                self.check_term(a)

    # compilation

    def align(self, c: Compiled, order: Sequence[str]) -> Automaton:
        """The automaton of c over the tracks `order`, new tracks ranging over the domain."""
        positions = [list(order).index(v) for v in c.variables]
        result = engine.on_tracks(self.p, c.automaton, len(order), positions)
        if not self.p.domain_universal:
            for i, v in enumerate(order):
                if v not in c.variables:
                    result = engine.intersect(self.p, result, engine.on_tracks(self.p, self.p.domain, len(order), [i]))
        return result

    def restrict(self, automaton: Automaton, arity: int) -> Automaton:
        if self.p.domain_universal:
            return automaton
        if arity not in self.cache.domains:
            self.cache.domains[arity] = engine.domain_power(self.p, arity)
        return engine.intersect(self.p, automaton, self.cache.domains[arity])

    def negated_atom(self, relation: str) -> Automaton:
        registered = self.p.complement(relation)
        if registered is not None:
            return registered
        if self.p.kind != "word":
            raise UnsupportedFragmentError(
                f"negated atom {relation} has no registered complement in tree presentation {self.p.name}"
            )
        if relation not in self.cache.negated:
            self.cache.negated[relation] = engine.negate(self.p, self.p.atom(relation))
        return self.cache.negated[relation]

    def literal(self, f: Formula) -> Compiled:
        atom, positive = literal_parts(f)
        names = [t.name for t in atom.args]
        variables = tuple(sorted(set(names)))
        positions = [variables.index(n) for n in names]
        source = self.p.atom(atom.relation) if positive else self.negated_atom(atom.relation)
        automaton = engine.on_tracks(self.p, source, len(variables), positions)
        return Compiled(variables=variables, automaton=self.restrict(automaton, len(variables)))

    def compile(self, f: Formula) -> Compiled:
        cached = self.cache.formulas.get(f)
        if cached is not None:
            self.cache.hits += 1
            return cached
        result = self.cache.formulas[f] = self._compile(f)
        return result

    def _compile(self, f: Formula) -> Compiled:
        if isinstance(f, Truth):
            return Compiled(value=f.value)
        if isinstance(f, (Atom, Not)):
            return self.literal(f)
        if isinstance(f, And):
            return self.combine([self.compile(part) for part in f.parts], conjunction=True)
        if isinstance(f, Or):
            return self.combine([self.compile(part) for part in f.parts], conjunction=False)
        if isinstance(f, Exists):
            return self.exists(f.var, self.compile(f.body))
        if isinstance(f, Forall):
            if self.p.kind != "word":
                raise UnsupportedFragmentError(f"universal quantifier over tree presentation {self.p.name}")
            return self.complement(self.exists(f.var, self.compile(nnf(f.body, negate=True))))
        raise InputError(f"not a formula: {f!r}")

    def combine(self, parts: List[Compiled], conjunction: bool) -> Compiled:
        absorbing = not conjunction
        if any(c.is_closed and c.value == absorbing for c in parts):
            return Compiled(value=absorbing)
        open_parts = [c for c in parts if not c.is_closed]
        if not open_parts:
            return Compiled(value=conjunction)
        order = tuple(sorted(set().union(*(c.variables for c in open_parts))))
        result = self.align(open_parts[0], order)
        for c in open_parts[1:]:
            other = self.align(c, order)
            result = engine.intersect(self.p, result, other) if conjunction else engine.join(self.p, result, other)
        return Compiled(variables=order, automaton=result)

    def exists(self, var: str, c: Compiled) -> Compiled:
        if c.is_closed or var not in c.variables:
            return c
        if len(c.variables) == 1:
            return Compiled(value=engine.member(c.automaton) is not None)
        index = c.variables.index(var)
        variables = c.variables[:index] + c.variables[index + 1:]
        return Compiled(variables=variables, automaton=engine.project(self.p, c.automaton, index))

    def complement(self, c: Compiled) -> Compiled:
        if c.is_closed:
            return Compiled(value=not c.value)
        automaton = self.restrict(engine.negate(self.p, c.automaton), len(c.variables))
        return Compiled(variables=c.variables, automaton=automaton)

    def prepare(self, f: Formula) -> Formula:
        self.check_symbols(f)
        return self.flattener.flatten(nnf(f))


def compile_formula(
    p: Presentation,
    formula: Formula,
    variables: Optional[Sequence[str]] = None,
    cache: Optional[CompilationCache] = None,
) -> Automaton:
    """Automaton for the tuples satisfying a formula with free variables.

    Args:
        p: Presentation the formula is read in
        formula: Formula with at least one free variable
        variables: Track order of the result; defaults to the sorted free
            variables and may list extra variables, which range over the domain
        cache: Compiled subformulas of p to reuse and extend

    Returns:
        Automaton over len(variables) tracks

    Raises:
        InputError: If a symbol is unknown or the track order misses a free variable
        UnsupportedFragmentError: If a tree formula needs a universal
            quantifier or an unregistered negated atom
        CapacityError: If the state or letter budget is exceeded
    """
    free = formula.free_variables()
    order = tuple(variables) if variables is not None else tuple(sorted(free))
    if not order:
        raise InputError("formula has no free variables; decide it as a sentence")
    if len(set(order)) != len(order) or not free <= set(order):
        raise InputError(f"track order {list(order)} does not list each free variable once", {"free": sorted(free)})
    compiler = _Compiler(p, cache)
    c = compiler.compile(compiler.prepare(formula))
    if c.is_closed:
        result = engine.domain_power(p, len(order)) if c.value else engine.nothing(p, len(order))
    else:
        result = compiler.align(c, order)
    logger.debug(f"compiled {formula} over {p.name}: {result.describe()}")
    return result


def decide_sentence(p: Presentation, sentence: Formula, cache: Optional[CompilationCache] = None) -> Decision:
    """Decide a sentence in the presented structure.

    Leading existential variables of the sentence get witnesses from the
    emptiness check. Deciding many sentences over one presentation with a
    shared cache compiles each common subformula once.

    Raises:
        InputError: If the sentence has free variables or unknown symbols
        UnsupportedFragmentError: As for compile_formula
        CapacityError: If the state or letter budget is exceeded
    """
    free = sentence.free_variables()
    if free:
        raise InputError(f"not a sentence: free variables {', '.join(sorted(free))}")
    compiler = _Compiler(p, cache)
    body = compiler.prepare(sentence)
    leading: List[str] = []
    while isinstance(body, Exists):
        leading.append(body.var)
        body = body.body
    c = compiler.compile(body)
    for var in reversed([v for v in leading if v.startswith("_")]):
        c = compiler.exists(var, c)
    if c.is_closed:
        decision = Decision(verdict=bool(c.value))
    else:
        witness = engine.member(c.automaton)
        if witness is None:
            decision = Decision(verdict=False)
        else:
            elements = engine.split_tuple(p, witness, len(c.variables))
            decision = Decision(verdict=True, witnesses=dict(zip(c.variables, elements)))
    logger.info(f"decided {sentence} over {p.name}: {decision.verdict}")
    return decision
