"""First-order formulas over a relational signature with function terms.

Formulas and terms are immutable pydantic models. Variables are plain
strings; names starting with ``_`` are reserved for generated variables.
"""
import itertools
from typing import Dict, FrozenSet, Iterable, Tuple

from pydantic import BaseModel, ConfigDict

from app.utils.error_handling import InputError

EQUALITY = "="


class Term(BaseModel):
    model_config = ConfigDict(frozen=True)

    def variables(self) -> FrozenSet[str]:
        return frozenset()


class Var(Term):
    name: str

    def variables(self) -> FrozenSet[str]:
        return frozenset({self.name})

    def __str__(self) -> str:
        return self.name


class Const(Term):
    symbol: str

    def __str__(self) -> str:
        return self.symbol


class Apply(Term):
    function: str
    args: Tuple[Term, ...]

    def variables(self) -> FrozenSet[str]:
        return frozenset().union(*(a.variables() for a in self.args))

    def __str__(self) -> str:
        return f"{self.function}({','.join(str(a) for a in self.args)})"


class Formula(BaseModel):
    model_config = ConfigDict(frozen=True)

    def free_variables(self) -> FrozenSet[str]:
        return frozenset()

    def quantifier_depth(self) -> int:
        return 0


class Truth(Formula):
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


class Atom(Formula):
    """R(t1, ..., tk); the relation ``=`` is equality."""
    relation: str
    args: Tuple[Term, ...]

    def free_variables(self) -> FrozenSet[str]:
        return frozenset().union(*(a.variables() for a in self.args))

    def __str__(self) -> str:
        if self.relation == EQUALITY and len(self.args) == 2:
            return f"{self.args[0]} = {self.args[1]}"
        return f"{self.relation}({','.join(str(a) for a in self.args)})"


class Not(Formula):
    body: Formula

    def free_variables(self) -> FrozenSet[str]:
        return self.body.free_variables()

    def quantifier_depth(self) -> int:
        return self.body.quantifier_depth()

    def __str__(self) -> str:
        return f"!{_wrap(self.body)}"


class And(Formula):
    parts: Tuple[Formula, ...]

    def free_variables(self) -> FrozenSet[str]:
        return frozenset().union(*(p.free_variables() for p in self.parts))

    def quantifier_depth(self) -> int:
        return max((p.quantifier_depth() for p in self.parts), default=0)

    def __str__(self) -> str:
        return " & ".join(_wrap(p) for p in self.parts) if self.parts else "true"


class Or(Formula):
    parts: Tuple[Formula, ...]

    def free_variables(self) -> FrozenSet[str]:
        return frozenset().union(*(p.free_variables() for p in self.parts))

    def quantifier_depth(self) -> int:
        return max((p.quantifier_depth() for p in self.parts), default=0)

    def __str__(self) -> str:
        return " | ".join(_wrap(p) for p in self.parts) if self.parts else "false"


class Exists(Formula):
    var: str
    body: Formula

    def free_variables(self) -> FrozenSet[str]:
        return self.body.free_variables() - {self.var}

    def quantifier_depth(self) -> int:
        return 1 + self.body.quantifier_depth()

    def __str__(self) -> str:
        return f"exists {self.var}. {self.body}"


class Forall(Formula):
    var: str
    body: Formula

    def free_variables(self) -> FrozenSet[str]:
        return self.body.free_variables() - {self.var}

    def quantifier_depth(self) -> int:
        return 1 + self.body.quantifier_depth()

    def __str__(self) -> str:
        return f"forall {self.var}. {self.body}"


def _wrap(f: Formula) -> str:
    if isinstance(f, (Atom, Truth, Not)):
        return str(f)
    return f"({f})"


def conj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else And(parts=tuple(parts))


def disj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else Or(parts=tuple(parts))


def implies(a: Formula, b: Formula) -> Formula:
    return Or(parts=(Not(body=a), b))


def iff(a: Formula, b: Formula) -> Formula:
    return And(parts=(implies(a, b), implies(b, a)))


def exists_all(variables: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Exists(var=v, body=body)
    return body


def forall_all(variables: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Forall(var=v, body=body)
    return body


def atom(relation: str, *names: str) -> Atom:
    return Atom(relation=relation, args=tuple(Var(name=n) for n in names))


def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form: negations only directly above atoms."""
    if isinstance(f, Truth):
        return Truth(value=f.value != negate)
    if isinstance(f, Atom):
        return Not(body=f) if negate else f
    if isinstance(f, Not):
        return nnf(f.body, not negate)
    if isinstance(f, (And, Or)):
        parts = tuple(nnf(p, negate) for p in f.parts)
        dual = isinstance(f, And) == negate
        return Or(parts=parts) if dual else And(parts=parts)
    if isinstance(f, (Exists, Forall)):
        body = nnf(f.body, negate)
        dual = isinstance(f, Exists) == negate
        return Forall(var=f.var, body=body) if dual else Exists(var=f.var, body=body)
    raise InputError(f"not a formula: {f!r}")


class NameSupply:
    """Fresh variable names ``_<prefix><n>``, deterministic per supply."""

    def __init__(self, prefix: str = "v"):
        self._prefix = prefix
        self._counter = itertools.count()

    def fresh(self) -> str:
        return f"_{self._prefix}{next(self._counter)}"


def substitute_term(t: Term, mapping: Dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Apply):
        return Apply(function=t.function, args=tuple(substitute_term(a, mapping) for a in t.args))
    return t


def substitute(f: Formula, mapping: Dict[str, Term], supply: NameSupply) -> Formula:
    """Replace free variables; bound variables are renamed apart."""
    if isinstance(f, Truth):
        return f
    if isinstance(f, Atom):
        return Atom(relation=f.relation, args=tuple(substitute_term(a, mapping) for a in f.args))
    if isinstance(f, Not):
        return Not(body=substitute(f.body, mapping, supply))
    if isinstance(f, And):
        return And(parts=tuple(substitute(p, mapping, supply) for p in f.parts))
    if isinstance(f, Or):
        return Or(parts=tuple(substitute(p, mapping, supply) for p in f.parts))
    if isinstance(f, (Exists, Forall)):
        fresh = supply.fresh()
        inner = dict(mapping)
        inner[f.var] = Var(name=fresh)
        return type(f)(var=fresh, body=substitute(f.body, inner, supply))
    raise InputError(f"not a formula: {f!r}")


def rename(f: Formula, mapping: Dict[str, str], supply: NameSupply) -> Formula:
    return substitute(f, {k: Var(name=v) for k, v in mapping.items()}, supply)
