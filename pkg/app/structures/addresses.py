"""Enumeration of the nodes of the full binary tree.

Addresses are ordered by length, then lexicographically with l before r:
ε, l, r, ll, lr, rl, rr, lll, ...
"""
from functools import lru_cache
from typing import FrozenSet, Iterable, Iterator, Union

from app.models.trees import NodeAddress
from app.utils.error_handling import InputError

Address = Union[NodeAddress, str]


def _path(u: Address) -> str:
    return u.path if isinstance(u, NodeAddress) else NodeAddress(path=u).path


def node_index(u: Address) -> int:
    """Position of an address in the length-then-lexicographic order."""
    path = _path(u)
    value = 0
    for direction in path:
        value = 2 * value + (direction == "r")
    return (1 << len(path)) - 1 + value


def node_unindex(n: int) -> NodeAddress:
    """Inverse of node_index."""
    if n < 0:
        raise InputError(f"node index must be non-negative, got {n}")
    length = (n + 1).bit_length() - 1
    offset = n - ((1 << length) - 1)
    path = "".join("r" if offset >> (length - 1 - i) & 1 else "l" for i in range(length))
    return NodeAddress(path=path)


def addresses(max_length: int) -> Iterator[NodeAddress]:
    """All addresses of length at most max_length, in enumeration order."""
    for n in range((1 << (max_length + 1)) - 1):
        yield node_unindex(n)


def max_antichain(nodes: Iterable[Address]) -> int:
    """Largest set of pairwise prefix-incomparable addresses in a finite set."""
    members: FrozenSet[str] = frozenset(_path(u) for u in nodes)
    prefixes = {p[:i] for p in members for i in range(len(p) + 1)}

    @lru_cache(maxsize=None)
    def width(u: str) -> int:
        below = sum(width(u + d) for d in "lr" if u + d in prefixes)
        return max(below, 1 if u in members else 0)

    return width("") if members else 0
