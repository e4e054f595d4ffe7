"""Splitting a nonzero element of P(N)/Fin or P({l,r}*)/I.

Given x with [x] != 0 the split returns z with 0 < [z] < [x]: an infinite
set inside x (an infinite antichain in the tree case) is found and every
second member of it is kept.
"""
from typing import List, Tuple, Union

from app.models.trees import RegularTree
from app.models.words import LassoWord
from app.structures.antichain import find_departure, shortest_directions
from app.structures.boolean_algebras import build_algebra
from app.utils.error_handling import InputError, InvariantViolation
from app.utils.logger import get_logger

logger = get_logger(__name__)

Element = Union[LassoWord, RegularTree]


def atomless_split(x: Element, kind: str) -> Element:
    """Return z with 0 < [z] < [x] in the algebra of the given kind.

    Args:
        x: Representative of a nonzero element
        kind: "word" for P(N)/Fin, "tree" for P({l,r}*)/I

    Returns:
        Representative of a strictly smaller nonzero element

    Raises:
        InputError: If x represents zero or does not match the kind
        InvariantViolation: If the result fails the strictness checks
    """
    if kind == "word":
        if not isinstance(x, LassoWord):
            raise InputError("word split needs a lasso word")
        z = _split_word(x)
    elif kind == "tree":
        if not isinstance(x, RegularTree):
            raise InputError("tree split needs a regular tree")
        z = _split_tree(x)
    else:
        raise InputError(f"unknown algebra kind {kind!r}")
    _verify_split(x, z, kind)
    return z


def _split_word(x: LassoWord) -> LassoWord:
    x.check_alphabet(build_algebra("word").base)
    loop = x.loop
    ones = loop.count(1)
    if ones == 0:
        raise InputError("cannot split the zero element", {"element": str(x)})
    if ones % 2:
        loop = loop + loop
    kept: List[int] = []
    seen = 0
    for letter in loop:
        if letter == 1:
            kept.append(1 if seen % 2 == 0 else 0)
            seen += 1
        else:
            kept.append(0)
    return LassoWord(stem=(0,) * len(x.stem), loop=tuple(kept))


def _split_tree(x: RegularTree) -> RegularTree:
    x.check_alphabet(build_algebra("tree").base)
    departure = find_departure(x)
    if departure is None:
        raise InputError("cannot split the zero element: the tree has no infinite antichain")
    u, direction = departure
    other = "r" if direction == "l" else "l"
    child = x.successor(u, direction)
    sibling = x.successor(u, other)
    to_u = shortest_directions(x, x.root, lambda n: n == u)
    back = shortest_directions(x, child, lambda n: n == u)
    to_one = shortest_directions(x, sibling, lambda n: x.labels[n] == 1)
    if to_u is None or back is None or to_one is None:
        raise InvariantViolation("departure edge without the expected paths", {"node": u})
    cycle = (direction + back) * 2
    logger.debug(f"splitting along prefix {to_u!r}, cycle {cycle!r}, exit {other}{to_one}")
    return _antichain_along(to_u, cycle, other, to_one)


def _antichain_along(prefix: str, cycle: str, exit_direction: str, tail: str) -> RegularTree:
    """Tree whose 1-set is {prefix . cycle^k . exit_direction . tail | k >= 0}."""
    rows: List[List] = []

    def node() -> int:
        rows.append([0, -1, -1])
        return len(rows) - 1

    def link(parent: int, direction: str, target: int) -> None:
        rows[parent][1 if direction == "l" else 2] = target

    path = [node() for _ in prefix]
    ring = [node() for _ in cycle]
    chain = [node() for _ in tail]
    last = node()
    rows[last][0] = 1
    zero = node()
    link(zero, "l", zero)
    link(zero, "r", zero)

    for i, d in enumerate(prefix):
        link(path[i], d, path[i + 1] if i + 1 < len(path) else ring[0])
    for i, d in enumerate(cycle):
        link(ring[i], d, ring[(i + 1) % len(ring)])
    link(ring[0], exit_direction, chain[0] if chain else last)
    for i, d in enumerate(tail):
        link(chain[i], d, chain[i + 1] if i + 1 < len(chain) else last)
    for row in rows:
        for k in (1, 2):
            if row[k] < 0:
                row[k] = zero
    return RegularTree.from_rows([tuple(r) for r in rows]).minimized()


def _verify_split(x: Element, z: Element, kind: str) -> None:
    algebra = build_algebra(kind)
    checks: Tuple[Tuple[str, bool], ...] = (
        ("z below x", algebra.holds("subset", (z, x))),
        ("z differs from x", not algebra.holds("eq", (z, x))),
        ("z nonzero", not algebra.holds("zero", (z,))),
    )
    failed = [name for name, ok in checks if not ok]
    if failed:
        raise InvariantViolation("split result is not strictly between 0 and x", {"failed": ", ".join(failed)})
