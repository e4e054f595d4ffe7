"""Elimination of function terms and constants from formulas in negation normal form.

A function symbol f is represented by its graph relation f(x1..xk, y) and
a constant c by a unary relation, so a literal L[t] becomes
``exists u. (graph(t, u) & L[u])`` or, under a universal quantifier when
universal forms are allowed, ``forall u. (!graph(t, u) | L[u])``. Both are
equivalent because the graph relations are functional.
"""
from typing import Dict, Optional, Tuple

from app.fo.formula import (
    EQUALITY,
    And,
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
    Var,
)
from app.utils.error_handling import InputError


def literal_parts(f: Formula) -> Tuple[Atom, bool]:
    """The atom of a literal and whether it occurs positively."""
    if isinstance(f, Not):
        if not isinstance(f.body, Atom):
            raise InputError(f"not a literal: {f}")
        return f.body, False
    return f, True


class TermFlattener:
    """Rewrites every literal until all atom arguments are variables."""

    def __init__(self, constants: Dict[str, str], supply: NameSupply, universal_forms: bool = True):
        self.constants = constants
        self.supply = supply
        self.universal_forms = universal_forms

    def graph(self, t: Term, result: str) -> Atom:
        """Atom stating that `result` is the value of the term t."""
        if isinstance(t, Const):
            if t.symbol not in self.constants:
                raise InputError(f"unknown constant {t.symbol!r}")
            return Atom(relation=self.constants[t.symbol], args=(Var(name=result),))
        return Atom(relation=t.function, args=t.args + (Var(name=result),))

    def flatten(self, f: Formula, universal: bool = False) -> Formula:
        if isinstance(f, Truth):
            return f
        if isinstance(f, (And, Or)):
            return type(f)(parts=tuple(self.flatten(part, universal) for part in f.parts))
        if isinstance(f, Exists):
            return Exists(var=f.var, body=self.flatten(f.body, False))
        if isinstance(f, Forall):
            return Forall(var=f.var, body=self.flatten(f.body, True))
        atom, positive = literal_parts(f)
        if atom.relation == EQUALITY:
            left, right = atom.args
            if isinstance(left, Var) and not isinstance(right, Var):
                return self.literal(self.graph(right, left.name), positive, universal)
            if isinstance(right, Var) and not isinstance(left, Var):
                return self.literal(self.graph(left, right.name), positive, universal)
        return self.literal(atom, positive, universal)

    def literal(self, atom: Atom, positive: bool, universal: bool) -> Formula:
        index: Optional[int] = next((i for i, t in enumerate(atom.args) if not isinstance(t, Var)), None)
        if index is None:
            return atom if positive else Not(body=atom)
        fresh = self.supply.fresh()
        args = list(atom.args)
        definition = self.graph(args[index], fresh)
        args[index] = Var(name=fresh)
        literal = Atom(relation=atom.relation, args=tuple(args))
        rest = literal if positive else Not(body=literal)
        if universal and self.universal_forms:
            return Forall(var=fresh, body=self.flatten(Or(parts=(Not(body=definition), rest)), True))
        return Exists(var=fresh, body=self.flatten(And(parts=(definition, rest)), False))
