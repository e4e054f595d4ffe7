"""Tree automata and an independent oracle for infinite antichains.

A tree t over {0, 1} stands for the set B of addresses labelled 1. B has
an infinite antichain iff some branch leaves infinitely often towards a
sibling subtree that contains a 1.
"""
from collections import deque
from typing import Dict, List, Optional, Tuple

import networkx as nx

from app.automata.tree import MullerTreeAutomaton
from app.models.alphabet import BINARY
from app.models.trees import AntichainVerdict, RegularTree
from app.utils.error_handling import InvariantViolation
from app.utils.logger import get_logger

logger = get_logger(__name__)

# States of the antichain automaton.
BRANCH, DEPARTED, OWING, FREE = 0, 1, 2, 3
# States of the no-antichain automaton.
ROOT, EMPTY, SINGLE, SPLIT = 0, 1, 2, 3

WIDTH_BOUND = 64


def build_antichain_automaton() -> MullerTreeAutomaton:
    """Trees whose 1-set contains an infinite antichain.

    The run follows a guessed branch. At each branch node it either lets the
    other child go free, or declares a departure: the branch continues in
    the DEPARTED state and the other child owes a 1 somewhere below it. A
    branch is accepted only if DEPARTED recurs; owing paths must settle.
    """
    transitions = []
    for label in (0, 1):
        for state in (BRANCH, DEPARTED):
            transitions += [
                (state, label, BRANCH, FREE),
                (state, label, FREE, BRANCH),
                (state, label, OWING, DEPARTED),
                (state, label, DEPARTED, OWING),
            ]
        transitions.append((FREE, label, FREE, FREE))
    transitions += [(OWING, 1, FREE, FREE), (OWING, 0, OWING, FREE), (OWING, 0, FREE, OWING)]
    return MullerTreeAutomaton(
        alphabet=BINARY,
        num_states=4,
        initial=BRANCH,
        transitions=tuple(transitions),
        designated=frozenset(
            {frozenset({FREE}), frozenset({DEPARTED}), frozenset({BRANCH, DEPARTED})}
        ),
    )


def build_no_antichain_automaton() -> MullerTreeAutomaton:
    """Trees whose 1-set has no infinite antichain.

    Each node guesses whether its subtree is 1-free (EMPTY). Non-empty
    subtrees either keep their 1s on one side (SINGLE) or split them over
    both children (SPLIT). A path may see SPLIT only finitely often.
    """
    empty_moves = [(EMPTY, EMPTY)]
    nonempty_moves = [(SINGLE, EMPTY), (EMPTY, SINGLE), (SPLIT, SPLIT)]
    transitions = [(EMPTY, 0, EMPTY, EMPTY)]
    for state in (SINGLE, SPLIT):
        transitions += [(state, 0, l, r) for l, r in nonempty_moves]
        transitions += [(state, 1, l, r) for l, r in nonempty_moves + empty_moves]
    transitions += [(ROOT, 0, l, r) for l, r in empty_moves + nonempty_moves]
    transitions += [(ROOT, 1, l, r) for l, r in nonempty_moves + empty_moves]
    return MullerTreeAutomaton(
        alphabet=BINARY,
        num_states=4,
        initial=ROOT,
        transitions=tuple(dict.fromkeys(transitions)),
        designated=frozenset({frozenset({EMPTY}), frozenset({SINGLE})}),
    )


def _graph(t: RegularTree) -> nx.DiGraph:
    graph = nx.DiGraph()
    for n in t.reachable():
        graph.add_edge(n, t.left[n])
        graph.add_edge(n, t.right[n])
    return graph


def _contains_one(t: RegularTree, graph: nx.DiGraph) -> Dict[int, bool]:
    ones = [n for n in graph.nodes if t.labels[n] == 1]
    has_one = {n: False for n in graph.nodes}
    for n in ones:
        has_one[n] = True
        for m in nx.ancestors(graph, n):
            has_one[m] = True
    return has_one


def find_departure(t: RegularTree) -> Optional[Tuple[int, str]]:
    """A node and branch direction on a cycle whose sibling subtree contains a 1."""
    graph = _graph(t)
    has_one = _contains_one(t, graph)
    component_of: Dict[int, int] = {}
    for cid, component in enumerate(nx.strongly_connected_components(graph)):
        for n in component:
            component_of[n] = cid
    for u in t.reachable():
        for direction, child, sibling in (("l", t.left[u], t.right[u]), ("r", t.right[u], t.left[u])):
            if component_of[child] == component_of[u] and has_one[sibling]:
                return u, direction
    return None


def antichain_oracle(t: RegularTree) -> AntichainVerdict:
    """Classify the 1-set of a regular tree over {0, 1} without automata.

    Infinite iff some cycle of the graph departs towards a subtree with a 1.
    Otherwise the width is the least fixpoint of
    width(u) = max(width(left) + width(right), [label(u) = 1]).

    Raises:
        InvariantViolation: If the fixpoint does not settle although the
            classification says finite
    """
    if find_departure(t) is not None:
        return AntichainVerdict.infinite()
    nodes = t.reachable()
    width = {n: 0 for n in nodes}
    cap = len(nodes) * (1 + WIDTH_BOUND)
    for _ in range(cap):
        updated = {
            n: max(width[t.left[n]] + width[t.right[n]], 1 if t.labels[n] == 1 else 0) for n in nodes
        }
        if updated == width:
            return AntichainVerdict.finite(width[t.root])
        width = updated
    raise InvariantViolation(
        "width fixpoint diverged on a tree classified as finite", {"nodes": len(nodes), "iterations": cap}
    )


def chain_tree(n: int) -> RegularTree:
    """Tree whose 1-set is the chain {l^n r^k | k >= 1}."""
    zero, one = n + 1, n + 2
    rows: List[Tuple[int, int, int]] = [(0, i + 1, zero) for i in range(n)]
    rows.append((0, zero, one))
    rows.append((0, zero, zero))
    rows.append((1, zero, one))
    return RegularTree.from_rows(rows)


def antichain_tree() -> RegularTree:
    """Tree whose 1-set is the antichain {l^n r | n >= 0}."""
    return RegularTree.from_rows([(0, 0, 1), (1, 2, 2), (0, 2, 2)])


def shortest_directions(t: RegularTree, source: int, target_test) -> Optional[str]:
    """Directions of a shortest path from source to a node passing target_test."""
    parent: Dict[int, Tuple[int, str]] = {}
    seen = {source}
    queue = deque([source])
    while queue:
        n = queue.popleft()
        if target_test(n):
            path = []
            while n != source:
                n, direction = parent[n]
                path.append(direction)
            return "".join(reversed(path))
        for direction in "lr":
            m = t.successor(n, direction)
            if m not in seen:
                seen.add(m)
                parent[m] = (n, direction)
                queue.append(m)
    return None
