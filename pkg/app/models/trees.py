from collections import deque
from functools import lru_cache
from typing import Any, Callable, Dict, FrozenSet, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.alphabet import Alphabet, Letter, format_letter
from app.models.words import LassoWord
from app.utils.error_handling import InputError


class NodeAddress(BaseModel):
    """A node of the full binary tree, written as a word over {l, r}."""
    model_config = ConfigDict(frozen=True)

    path: str = Field(default="", description="Directions from the root, e.g. 'llr'")

    @model_validator(mode="after")
    def _check_path(self) -> "NodeAddress":
        if any(c not in "lr" for c in self.path):
            raise InputError(f"node address may only use 'l' and 'r': {self.path!r}")
        return self

    @classmethod
    def parse(cls, text: str) -> "NodeAddress":
        text = text.strip()
        return cls(path="" if text in ("", "ε", "eps") else text)

    def __len__(self) -> int:
        return len(self.path)

    def child(self, direction: str) -> "NodeAddress":
        return NodeAddress(path=self.path + direction)

    def is_prefix_of(self, other: "NodeAddress") -> bool:
        return other.path.startswith(self.path)

    def comparable(self, other: "NodeAddress") -> bool:
        return self.is_prefix_of(other) or other.is_prefix_of(self)

    def __str__(self) -> str:
        return self.path or "ε"


class AntichainVerdict(BaseModel):
    """Classification of the 1-labelled node set of a regular tree."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["infinite", "finite"]
    width: Optional[int] = Field(None, description="Largest antichain size, finite verdicts only")

    @model_validator(mode="after")
    def _check_width(self) -> "AntichainVerdict":
        if self.kind == "finite" and (self.width is None or self.width < 0):
            raise InputError("a finite verdict needs a width >= 0")
        if self.kind == "infinite" and self.width is not None:
            raise InputError("an infinite verdict carries no width")
        return self

    @classmethod
    def infinite(cls) -> "AntichainVerdict":
        return cls(kind="infinite")

    @classmethod
    def finite(cls, width: int) -> "AntichainVerdict":
        return cls(kind="finite", width=width)

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    def __str__(self) -> str:
        return "infinite" if self.is_infinite else f"finite (width {self.width})"


Canonical = Tuple[Tuple[Any, int, int], ...]


@lru_cache(maxsize=4096)
def _canonical(labels: Tuple[Any, ...], left: Tuple[int, ...], right: Tuple[int, ...], root: int) -> Canonical:
    """Bisimulation-minimal graph numbered in breadth-first order from the root."""
    order: List[int] = []
    seen = {root}
    queue = deque([root])
    while queue:
        node = queue.popleft()
        order.append(node)
        for succ in (left[node], right[node]):
            if succ not in seen:
                seen.add(succ)
                queue.append(succ)

    label_ids: Dict[Any, int] = {}
    block = {n: label_ids.setdefault(labels[n], len(label_ids)) for n in order}
    while True:
        signatures: Dict[Tuple[int, int, int], int] = {}
        refined = {
            n: signatures.setdefault((block[n], block[left[n]], block[right[n]]), len(signatures))
            for n in order
        }
        if len(signatures) == len(set(block.values())):
            break
        block = refined

    numbering: Dict[int, int] = {}
    rows: List[Tuple[Any, int, int]] = []
    representative: Dict[int, int] = {}
    for n in order:
        representative.setdefault(block[n], n)
    queue = deque([block[root]])
    numbering[block[root]] = 0
    pending: List[int] = []
    while queue:
        b = queue.popleft()
        pending.append(b)
        n = representative[b]
        for succ in (block[left[n]], block[right[n]]):
            if succ not in numbering:
                numbering[succ] = len(numbering)
                queue.append(succ)
    for b in pending:
        n = representative[b]
        rows.append((labels[n], numbering[block[left[n]]], numbering[block[right[n]]]))
    return tuple(rows)


class RegularTree(BaseModel):
    """A regular infinite binary tree given by a finite labelled graph.

    Node `n` carries `labels[n]` and has successors `left[n]` and `right[n]`;
    the tree is the unfolding from `root`. Equality and hashing compare
    unfoldings, so bisimilar graphs are equal.
    """
    model_config = ConfigDict(frozen=True)

    labels: Tuple[Any, ...]
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    root: int = 0

    @model_validator(mode="after")
    def _check_graph(self) -> "RegularTree":
        n = len(self.labels)
        if n == 0:
            raise InputError("a regular tree needs at least one node")
        if len(self.left) != n or len(self.right) != n:
            raise InputError("left/right successor maps must cover every node")
        for succ in self.left + self.right:
            if not 0 <= succ < n:
                raise InputError(f"successor {succ} is not a node of the graph")
        if not 0 <= self.root < n:
            raise InputError(f"root {self.root} is not a node of the graph")
        return self

    @classmethod
    def constant(cls, label: Letter) -> "RegularTree":
        return cls(labels=(label,), left=(0,), right=(0,))

    @classmethod
    def from_rows(cls, rows: Sequence[Tuple[Letter, int, int]], root: int = 0) -> "RegularTree":
        return cls(
            labels=tuple(r[0] for r in rows),
            left=tuple(r[1] for r in rows),
            right=tuple(r[2] for r in rows),
            root=root,
        )

    @property
    def size(self) -> int:
        return len(self.labels)

    def canonical(self) -> Canonical:
        return _canonical(self.labels, self.left, self.right, self.root)

    def minimized(self) -> "RegularTree":
        return RegularTree.from_rows(self.canonical())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RegularTree):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def successor(self, node: int, direction: str) -> int:
        return self.left[node] if direction == "l" else self.right[node]

    def node_at(self, address) -> int:
        path = address.path if isinstance(address, NodeAddress) else str(address)
        node = self.root
        for direction in path:
            if direction not in "lr":
                raise InputError(f"bad direction {direction!r} in address {path!r}")
            node = self.successor(node, direction)
        return node

    def unfold(self, address) -> Letter:
        """Label of the tree at the given address."""
        return self.labels[self.node_at(address)]

    def reachable(self) -> List[int]:
        order, seen, queue = [], {self.root}, deque([self.root])
        while queue:
            node = queue.popleft()
            order.append(node)
            for succ in (self.left[node], self.right[node]):
                if succ not in seen:
                    seen.add(succ)
                    queue.append(succ)
        return order

    def truncate(self, depth: int, value: Letter = 1) -> FrozenSet[str]:
        """Addresses of length at most `depth` whose label equals `value`."""
        found = set()
        frontier = [("", self.root)]
        for _ in range(depth + 1):
            next_frontier = []
            for path, node in frontier:
                if self.labels[node] == value:
                    found.add(path)
                next_frontier.append((path + "l", self.left[node]))
                next_frontier.append((path + "r", self.right[node]))
            frontier = next_frontier
        return frozenset(found)

    def leftmost_lasso(self) -> LassoWord:
        """Labels along the leftmost branch root, l, ll, ... as a lasso."""
        position: Dict[int, int] = {}
        trail: List[int] = []
        node = self.root
        while node not in position:
            position[node] = len(trail)
            trail.append(node)
            node = self.left[node]
        start = position[node]
        labels = [self.labels[n] for n in trail]
        return LassoWord(stem=tuple(labels[:start]), loop=tuple(labels[start:]))

    def map_labels(self, fn: Callable[[Letter], Letter]) -> "RegularTree":
        return RegularTree(
            labels=tuple(fn(a) for a in self.labels), left=self.left, right=self.right, root=self.root
        )

    @classmethod
    def combine(cls, trees: Sequence["RegularTree"], fn: Callable[[Tuple[Letter, ...]], Letter]) -> "RegularTree":
        """Pointwise combination of several trees through a letter function."""
        if not trees:
            raise InputError("nothing to combine")
        start = tuple(t.root for t in trees)
        index = {start: 0}
        rows: List[Tuple[Letter, int, int]] = []
        queue = deque([start])
        while queue:
            key = queue.popleft()
            succs = []
            for direction in "lr":
                succ = tuple(t.successor(n, direction) for t, n in zip(trees, key))
                if succ not in index:
                    index[succ] = len(index)
                    queue.append(succ)
                succs.append(index[succ])
            rows.append((fn(tuple(t.labels[n] for t, n in zip(trees, key))), succs[0], succs[1]))
        return cls.from_rows(rows)

    @classmethod
    def zip(cls, trees: Sequence["RegularTree"]) -> "RegularTree":
        """Convolution of trees into one tree over tuple labels."""
        return cls.combine(trees, lambda letters: letters)

    def unzip(self, arity: int) -> Tuple["RegularTree", ...]:
        return tuple(self.map_labels(lambda a, i=i: a[i]) for i in range(arity))

    def check_alphabet(self, alphabet: Alphabet) -> None:
        for node in self.reachable():
            if self.labels[node] not in alphabet:
                raise InputError(
                    f"label {format_letter(self.labels[node])} is not in the alphabet {alphabet}"
                )
