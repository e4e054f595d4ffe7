"""First-order interpretations and their application to presentations.

An n-dimensional interpretation represents each element of the new
structure by an n-tuple of source elements. Component i of a parameter
``x`` is the variable ``x_i`` (or ``x`` itself when n = 1). The new
presentation reads one track whose letters are n-tuples of base letters.
"""
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.automata.buchi import word_relabel
from app.automata.tree import tree_relabel
from app.config.settings import get_settings
from app.fo.compiler import CompilationCache, compile_formula
from app.fo.formula import (
    EQUALITY,
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    NameSupply,
    Not,
    Or,
    Truth,
    Var,
    conj,
    exists_all,
    forall_all,
    implies,
    nnf,
    substitute,
)
from app.fo.parser import parse_formula
from app.fo.terms import TermFlattener
from app.models.alphabet import Alphabet
from app.presentations.model import Automaton, Presentation, Relation
from app.utils.error_handling import CapacityError, InputError, UnsupportedFragmentError
from app.utils.logger import get_logger

logger = get_logger(__name__)


def component_variables(param: str, dimension: int) -> List[str]:
    return [param] if dimension == 1 else [f"{param}_{i}" for i in range(dimension)]


class Definition(BaseModel):
    """A formula defining a relation of the new structure over parameter blocks."""
    model_config = ConfigDict(frozen=True)

    params: Tuple[str, ...]
    formula: Formula

    @classmethod
    def of(cls, params: Union[str, Sequence[str]], text: str) -> "Definition":
        names = tuple(params.split()) if isinstance(params, str) else tuple(params)
        return cls(params=names, formula=parse_formula(text))

    def variables(self, dimension: int) -> List[str]:
        return [v for p in self.params for v in component_variables(p, dimension)]


class Interpretation(BaseModel):
    """An n-dimensional first-order interpretation without parameters."""
    model_config = ConfigDict(frozen=True)

    name: str
    dimension: int = Field(..., ge=1)
    domain: Definition
    equality: Definition
    relations: Dict[str, Definition] = Field(default_factory=dict)
    functions: Dict[str, int] = Field(default_factory=dict)
    constants: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_definitions(self) -> "Interpretation":
        if len(self.domain.params) != 1:
            raise InputError("the domain formula takes one parameter block")
        if len(self.equality.params) != 2:
            raise InputError("the equality formula takes two parameter blocks")
        for name, d in self.definitions():
            allowed = set(d.variables(self.dimension))
            extra = d.formula.free_variables() - allowed
            if extra:
                raise InputError(f"definition of {name} has stray free variables {sorted(extra)}")
        for name, arity in self.functions.items():
            if name not in self.relations or len(self.relations[name].params) != arity + 1:
                raise InputError(f"function {name} needs a defined graph relation of arity {arity + 1}")
        for symbol, relation in self.constants.items():
            if relation not in self.relations or len(self.relations[relation].params) != 1:
                raise InputError(f"constant {symbol} needs a defined unary relation")
        return self

    def definitions(self) -> List[Tuple[str, Definition]]:
        return [("domain", self.domain), (EQUALITY, self.equality)] + sorted(self.relations.items())

    def definition(self, relation: str) -> Definition:
        if relation == EQUALITY:
            return self.equality
        if relation not in self.relations:
            raise InputError(f"interpretation {self.name} does not define {relation!r}")
        return self.relations[relation]


def _tuple_base(p: Presentation, dimension: int) -> Alphabet:
    if dimension == 1:
        return p.base
    return Alphabet.of(Alphabet.power(p.base, dimension).letters)


def _check_letters(p: Presentation, i: Interpretation) -> None:
    limit = get_settings().automata.letter_budget
    for name, d in i.definitions():
        letters = p.base.size ** (i.dimension * len(d.params))
        if letters > limit:
            raise CapacityError(
                f"{i.name}: {name} needs {letters} letters, above the letter budget of {limit}",
                {"relation": name, "letters": letters, "budget": limit},
            )


def _compile_definition(
    p: Presentation, i: Interpretation, d: Definition, base: Alphabet, cache: CompilationCache
) -> Automaton:
    """Compile over flat component tracks, then regroup into one track per parameter."""
    flat = compile_formula(p, d.formula, d.variables(i.dimension), cache)
    if i.dimension == 1:
        return flat
    target = Alphabet.power(base, len(d.params))

    def ungroup(letter):
        parts = target.split(letter)
        return flat.alphabet.join([component for part in parts for component in part])

    relabel = word_relabel if p.kind == "word" else tree_relabel
    return relabel(flat, target, ungroup)


def apply_interpretation(p: Presentation, i: Interpretation, complements: Optional[bool] = None) -> Presentation:
    """Presentation of the structure interpreted in p.

    Args:
        p: Source presentation
        i: Interpretation to apply
        complements: Also compile the negation of every definition and register
            it as a complement; defaults to tree presentations only

    Raises:
        CapacityError: If a defined relation needs an alphabet above the letter budget
        UnsupportedFragmentError: If a tree presentation meets a formula outside its fragment
    """
    _check_letters(p, i)
    base = _tuple_base(p, i.dimension)
    cache = CompilationCache(p)
    domain = _compile_definition(p, i, i.domain, base, cache)
    equality = _compile_definition(p, i, i.equality, base, cache)
    relations = {
        name: Relation(arity=len(d.params), automaton=_compile_definition(p, i, d, base, cache))
        for name, d in sorted(i.relations.items())
    }
    negations: Dict[str, Automaton] = {}
    if complements is None:
        complements = p.kind == "tree"
    if complements:
        for name, d in i.definitions()[1:]:
            negated = Definition(params=d.params, formula=nnf(d.formula, negate=True))
            try:
                negations[name] = _compile_definition(p, i, negated, base, cache)
            except UnsupportedFragmentError:
                logger.debug(f"{i.name}: no complement for {name}")
    result = Presentation(
        kind=p.kind,
        name=f"{i.name}({p.name})",
        base=base,
        domain=domain,
        equality=equality,
        relations=relations,
        complements=negations,
        functions=i.functions,
        constants=i.constants,
        domain_universal=p.domain_universal and i.domain.formula == Truth(value=True),
    )
    logger.info(f"applied {i.name} to {p.name}: {result.describe()}")
    return result


def translate(i: Interpretation, formula: Formula, supply: Optional[NameSupply] = None) -> Formula:
    """Formula over the source structure equivalent to `formula` over the interpreted one.

    Free variables x become their components; quantifiers range over tuples
    satisfying the domain formula.
    """
    supply = supply or NameSupply("i")
    flat = TermFlattener(i.constants, supply, universal_forms=False).flatten(nnf(formula))
    return _translate(i, flat, supply)


def _instantiate(i: Interpretation, d: Definition, args: Sequence[str], supply: NameSupply) -> Formula:
    mapping = {}
    for param, arg in zip(d.params, args):
        for source, target in zip(
            component_variables(param, i.dimension), component_variables(arg, i.dimension)
        ):
            mapping[source] = Var(name=target)
    return substitute(d.formula, mapping, supply)


def _translate(i: Interpretation, f: Formula, supply: NameSupply) -> Formula:
    if isinstance(f, Truth):
        return f
    if isinstance(f, Atom):
        return _instantiate(i, i.definition(f.relation), [t.name for t in f.args], supply)
    if isinstance(f, Not):
        return Not(body=_translate(i, f.body, supply))
    if isinstance(f, (And, Or)):
        return type(f)(parts=tuple(_translate(i, part, supply) for part in f.parts))
    components = component_variables(f.var, i.dimension)
    guard = _instantiate(i, i.domain, [f.var], supply)
    body = _translate(i, f.body, supply)
    if isinstance(f, Exists):
        return exists_all(components, conj(guard, body))
    if isinstance(f, Forall):
        return forall_all(components, implies(guard, body))
    raise InputError(f"not a formula: {f!r}")


def _ring_sum(terms: Sequence[str]) -> str:
    total = terms[0]
    for term in terms[1:]:
        total = f"plus({total},{term})"
    return total


def ring_interpretation() -> Interpretation:
    """The boolean ring: symmetric difference as addition, intersection as multiplication."""
    return Interpretation(
        name="ring",
        dimension=1,
        domain=Definition.of("x", "true"),
        equality=Definition.of("x y", "x = y"),
        relations={
            "plus": Definition.of("x y z", "exists u, v, w. cup(x,y,u) & cap(x,y,v) & neg(v,w) & cap(u,w,z)"),
            "times": Definition.of("x y z", "cap(x,y,z)"),
            "zero": Definition.of("x", "x = 0"),
            "one": Definition.of("x", "x = 1"),
        },
        functions={"plus": 2, "times": 2},
        constants={"0": "zero", "1": "one"},
    )


def _entry(param: str, n: int, i: int, j: int) -> str:
    return f"{param}_{i * n + j}"


def _product_text(n: int) -> str:
    return " & ".join(
        f"{_entry('z', n, i, j)} = "
        + _ring_sum([f"times({_entry('x', n, i, k)},{_entry('y', n, k, j)})" for k in range(n)])
        for i in range(n)
        for j in range(n)
    )


def _entrywise_equality(n: int) -> str:
    return " & ".join(f"x_{k} = y_{k}" for k in range(n * n))


def _identity_text(n: int, param: str = "x") -> str:
    return " & ".join(
        f"{_entry(param, n, i, j)} = {1 if i == j else 0}" for i in range(n) for j in range(n)
    )


def matrix_interpretation(n: int) -> Interpretation:
    """The ring of n x n matrices over a ring with plus, times, 0 and 1.

    Raises:
        InputError: If n < 2
    """
    if n < 2:
        raise InputError(f"matrix rings need n >= 2, got {n}")
    size = n * n
    return Interpretation(
        name=f"matrix{n}",
        dimension=size,
        domain=Definition.of("x", "true"),
        equality=Definition.of("x y", _entrywise_equality(n)),
        relations={
            "plus": Definition.of("x y z", " & ".join(f"z_{k} = plus(x_{k},y_{k})" for k in range(size))),
            "times": Definition.of("x y z", _product_text(n)),
            "zero": Definition.of("x", " & ".join(f"x_{k} = 0" for k in range(size))),
            "one": Definition.of("x", _identity_text(n)),
        },
        functions={"plus": 2, "times": 2},
        constants={"0": "zero", "1": "one"},
    )


def unitriangular_interpretation(n: int) -> Interpretation:
    """Upper unitriangular n x n matrices under multiplication.

    Raises:
        InputError: If n < 3
    """
    if n < 3:
        raise InputError(f"unitriangular groups need n >= 3, got {n}")
    lower = [f"{_entry('x', n, i, j)} = 0" for i in range(n) for j in range(i)]
    diagonal = [f"{_entry('x', n, i, i)} = 1" for i in range(n)]
    return Interpretation(
        name=f"unitriangular{n}",
        dimension=n * n,
        domain=Definition.of("x", " & ".join(diagonal + lower)),
        equality=Definition.of("x y", _entrywise_equality(n)),
        relations={
            "mul": Definition.of("x y z", _product_text(n)),
            "id": Definition.of("x", _identity_text(n)),
        },
        functions={"mul": 2},
        constants={"1": "id"},
    )
