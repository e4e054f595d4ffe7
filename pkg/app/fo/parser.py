"""Parser for the formula surface syntax.

    formula  := ("forall" | "exists") var ("," var)* "." formula | iff
    iff      := imp ("<->" imp)*
    imp      := or ("->" imp)?
    or       := and ("|" and)*
    and      := unary ("&" unary)*
    unary    := "!" unary | quantified formula | "(" formula ")"
              | "true" | "false" | term ("=" | "!=") term | R(term, ...)
    term     := f(term, ...) | var | 0 | 1

Example: ``forall x. exists z. (subset(z,x) & !eq(z,x))``.
"""
import re
from typing import List, Optional, Tuple

from app.fo.formula import (
    EQUALITY,
    Apply,
    Atom,
    Const,
    Formula,
    Not,
    Term,
    Truth,
    Var,
    conj,
    disj,
    exists_all,
    forall_all,
    iff,
    implies,
)
from app.utils.error_handling import InputError

_TOKEN = re.compile(r"\s*(?:(<->|->|!=|[()!&|=,.])|([A-Za-z][A-Za-z0-9_]*)|(\d+))")
KEYWORDS = {"forall", "exists", "true", "false"}


def _tokenize(text: str) -> List[Tuple[str, int]]:
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            rest = text[pos:].lstrip()
            column = len(text) - len(rest) + 1
            raise InputError(f"unexpected character {rest[:1]!r} at column {column}")
        token = match.group(1) or match.group(2) or match.group(3)
        tokens.append((token, match.start(0) + len(match.group(0)) - len(token) + 1))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def error(self, message: str) -> InputError:
        column = self.tokens[self.pos][1] if self.pos < len(self.tokens) else len(self.text) + 1
        return InputError(f"{message} at column {column}", {"formula": self.text})

    def take(self, expected: Optional[str] = None) -> str:
        token = self.peek()
        if token is None:
            raise self.error(f"expected {expected!r}" if expected else "unexpected end of formula")
        if expected is not None and token != expected:
            raise self.error(f"expected {expected!r}, found {token!r}")
        self.pos += 1
        return token

    def identifier(self) -> str:
        token = self.take()
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", token) or token in KEYWORDS:
            self.pos -= 1
            raise self.error(f"expected a name, found {token!r}")
        return token

    def formula(self) -> Formula:
        if self.peek() in ("forall", "exists"):
            return self.quantified()
        return self.equivalence()

    def quantified(self) -> Formula:
        quantifier = self.take()
        names = [self.identifier()]
        while self.peek() == ",":
            self.take(",")
            names.append(self.identifier())
        self.take(".")
        body = self.formula()
        return forall_all(names, body) if quantifier == "forall" else exists_all(names, body)

    def equivalence(self) -> Formula:
        left = self.implication()
        while self.peek() == "<->":
            self.take()
            left = iff(left, self.implication())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        parts = [self.conjunction()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conjunction())
        return disj(*parts)

    def conjunction(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return conj(*parts)

    def unary(self) -> Formula:
        token = self.peek()
        if token == "!":
            self.take()
            return Not(body=self.unary())
        if token in ("forall", "exists"):
            return self.quantified()
        if token == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if token in ("true", "false"):
            self.take()
            return Truth(value=token == "true")
        return self.atomic()

    def atomic(self) -> Formula:
        left = self.term()
        if self.peek() in ("=", "!="):
            negated = self.take() == "!="
            equation = Atom(relation=EQUALITY, args=(left, self.term()))
            return Not(body=equation) if negated else equation
        if isinstance(left, Apply):
            return Atom(relation=left.function, args=left.args)
        raise self.error(f"{left} is a term, not a formula")

    def term(self) -> Term:
        token = self.peek()
        if token is not None and token.isdigit():
            return Const(symbol=self.take())
        name = self.identifier()
        if self.peek() != "(":
            return Var(name=name)
        self.take("(")
        args = [self.term()]
        while self.peek() == ",":
            self.take(",")
            args.append(self.term())
        self.take(")")
        return Apply(function=name, args=tuple(args))


def parse_formula(text: str) -> Formula:
    """Parse a formula.

    Raises:
        InputError: With the column of the first offending token
    """
    parser = _Parser(text)
    if parser.peek() is None:
        raise InputError("empty formula")
    result = parser.formula()
    if parser.peek() is not None:
        raise parser.error(f"unexpected {parser.peek()!r}")
    return result
