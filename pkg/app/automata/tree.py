"""Nondeterministic Muller and parity automata on infinite binary trees.

A transition ``(q, a, ql, qr)`` lets a run in state ``q`` at a node labelled
``a`` continue with ``ql`` at the left child and ``qr`` at the right child.
The designated family of a Muller automaton is either explicit (a set of
state sets) or given by a priority map, in which case a set is designated
iff its greatest priority is even.
"""
from collections import deque
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import Field, model_validator

from app.automata.buchi import BuchiAutomaton, LetterMap, _apply_map, check_letter_budget, state_budget
from app.automata.games import EVEN, ODD, ParityGame, solve_parity_game
from app.config.settings import get_settings
from app.models.alphabet import Alphabet, Letter, format_letter
from app.models.base import FrozenModel
from app.models.trees import RegularTree
from app.utils.error_handling import Budget, InputError, InvariantViolation
from app.utils.logger import get_logger

logger = get_logger(__name__)

TreeTransition = Tuple[int, Any, int, int]


class _TreeAutomatonBase(FrozenModel):
    alphabet: Alphabet
    num_states: int = Field(..., ge=1)
    initial: int = 0
    transitions: Tuple[Tuple[int, Any, int, int], ...] = ()

    @model_validator(mode="after")
    def _check_structure(self):
        n = self.num_states
        if not 0 <= self.initial < n:
            raise InputError(f"initial state {self.initial} is not one of the {n} states")
        letters = self.alphabet.letter_set
        for q, a, ql, qr in self.transitions:
            if not all(0 <= s < n for s in (q, ql, qr)):
                raise InputError(f"transition ({q}, {ql}, {qr}) leaves the state set")
            if a not in letters:
                raise InputError(f"transition letter {format_letter(a)} is not in the alphabet")
        self._check_acceptance()
        return self

    def _check_acceptance(self) -> None:
        pass

    @property
    def states(self) -> range:
        return range(self.num_states)

    def _table(self) -> List[Dict[Letter, Tuple[Tuple[int, int], ...]]]:
        def build():
            table: List[Dict[Letter, List[Tuple[int, int]]]] = [dict() for _ in self.states]
            for q, a, ql, qr in self.transitions:
                table[q].setdefault(a, []).append((ql, qr))
            return [{a: tuple(ps) for a, ps in row.items()} for row in table]

        return self._memoized("table", build)

    def moves(self, state: int, letter: Letter) -> Tuple[Tuple[int, int], ...]:
        return self._table()[state].get(letter, ())

    def out_moves(self, state: int) -> Iterable[Tuple[Letter, int, int]]:
        for a, pairs in self._table()[state].items():
            for ql, qr in pairs:
                yield a, ql, qr

    def state_graph(self) -> nx.DiGraph:
        def build():
            g = nx.DiGraph()
            g.add_nodes_from(self.states)
            for q, _, ql, qr in self.transitions:
                g.add_edge(q, ql)
                g.add_edge(q, qr)
            return g

        return self._memoized("graph", build)


class MullerTreeAutomaton(_TreeAutomatonBase):
    """A Muller tree automaton.

    Exactly one of `designated` (explicit family) and `priority` (family of
    sets whose greatest priority is even) is given.
    """

    designated: Optional[FrozenSet[FrozenSet[int]]] = None
    priority: Optional[Tuple[int, ...]] = None

    def _check_acceptance(self) -> None:
        if (self.designated is None) == (self.priority is None):
            raise InputError("give either designated sets or a priority map")
        if self.designated is not None:
            for member in self.designated:
                if not member or not all(0 <= q < self.num_states for q in member):
                    raise InputError("designated sets must be non-empty sets of states")
        elif len(self.priority) != self.num_states or min(self.priority) < 0:
            raise InputError("priority map must give a natural number for every state")

    @property
    def has_priority_form(self) -> bool:
        return self.priority is not None

    def is_designated(self, states: FrozenSet[int]) -> bool:
        if self.designated is not None:
            return frozenset(states) in self.designated
        return max(self.priority[q] for q in states) % 2 == 0

    def describe(self) -> str:
        family = f"{len(self.designated)} sets" if self.designated is not None else "priorities"
        return (
            f"muller(states={self.num_states}, transitions={len(self.transitions)}, "
            f"designated={family}, letters={self.alphabet.size})"
        )


class ParityTreeAutomaton(_TreeAutomatonBase):
    """A parity tree automaton under the max-parity convention."""

    priority: Tuple[int, ...]

    def _check_acceptance(self) -> None:
        if len(self.priority) != self.num_states or min(self.priority) < 0:
            raise InputError("priority map must give a natural number for every state")

    @property
    def max_priority(self) -> int:
        return max(self.priority)

    def as_muller(self) -> MullerTreeAutomaton:
        return MullerTreeAutomaton(
            alphabet=self.alphabet,
            num_states=self.num_states,
            initial=self.initial,
            transitions=self.transitions,
            priority=self.priority,
        )

    def describe(self) -> str:
        return (
            f"parity(states={self.num_states}, transitions={len(self.transitions)}, "
            f"max_priority={self.max_priority}, letters={self.alphabet.size})"
        )


TreeAutomaton = Union[MullerTreeAutomaton, ParityTreeAutomaton]


def _explore_tree(
    starts: Hashable,
    expand: Callable[[Hashable], Iterable[Tuple[Letter, Hashable, Hashable]]],
    what: str,
    budget: Optional[int] = None,
) -> Tuple[List[Hashable], List[TreeTransition]]:
    """Reachable state keys (in discovery order) and numbered transitions."""
    meter = Budget(state_budget(budget), what)
    index: Dict[Hashable, int] = {starts: 0}
    keys: List[Hashable] = [starts]
    meter.charge()
    transitions: List[TreeTransition] = []
    queue = deque([starts])

    def number(key: Hashable) -> int:
        if key not in index:
            meter.charge()
            index[key] = len(keys)
            keys.append(key)
            queue.append(key)
        return index[key]

    while queue:
        key = queue.popleft()
        p = index[key]
        for letter, left, right in expand(key):
            transitions.append((p, letter, number(left), number(right)))
    return keys, list(dict.fromkeys(transitions))


def _check_same_alphabet(a: TreeAutomaton, b: TreeAutomaton) -> None:
    if a.alphabet != b.alphabet:
        raise InputError(f"alphabet mismatch: {{{a.alphabet}}} vs {{{b.alphabet}}}")


def empty_tree_automaton(alphabet: Alphabet) -> MullerTreeAutomaton:
    return MullerTreeAutomaton(alphabet=alphabet, num_states=1, initial=0, designated=frozenset())


def universal_tree_automaton(alphabet: Alphabet) -> MullerTreeAutomaton:
    return MullerTreeAutomaton(
        alphabet=alphabet,
        num_states=1,
        initial=0,
        transitions=tuple((0, a, 0, 0) for a in alphabet.letters),
        designated=frozenset({frozenset({0})}),
    )


def muller_to_parity(a: TreeAutomaton, budget: Optional[int] = None) -> ParityTreeAutomaton:
    """Equivalent parity automaton via latest appearance records.

    Records are kept per strongly connected component of the state graph
    and reset whenever a run enters a new component. A record lists the
    component's states, most recently visited first, together with the
    position the current state was moved from; the priority is
    2·(position + 1) when the prefix up to that position is designated and
    one less otherwise. States outside cyclic components get priority 0.

    Raises:
        CapacityError: If the record automaton exceeds the state budget
    """
    if isinstance(a, ParityTreeAutomaton):
        return a
    if a.has_priority_form:
        return a._memoized(
            "parity",
            lambda: ParityTreeAutomaton(
                alphabet=a.alphabet,
                num_states=a.num_states,
                initial=a.initial,
                transitions=a.transitions,
                priority=a.priority,
            ),
        )
    if budget is None:
        return a._memoized("parity", lambda: _records_to_parity(a, get_settings().automata.lar_budget))
    return _records_to_parity(a, budget)


def _records_to_parity(a: MullerTreeAutomaton, budget: Optional[int]) -> ParityTreeAutomaton:
    graph = a.state_graph()
    component_of: Dict[int, int] = {}
    members: Dict[int, Tuple[int, ...]] = {}
    for cid, component in enumerate(nx.strongly_connected_components(graph)):
        nodes = sorted(component)
        cyclic = len(nodes) > 1 or graph.has_edge(nodes[0], nodes[0])
        for q in nodes:
            component_of[q] = cid
        if cyclic:
            members[cid] = tuple(nodes)

    def enter(q: int) -> Hashable:
        cid = component_of[q]
        if cid not in members:
            return (q,)
        record = (q,) + tuple(s for s in members[cid] if s != q)
        return (q, record, 0)

    def step(key: Hashable, q2: int) -> Hashable:
        q = key[0]
        if len(key) == 1 or component_of[q2] != component_of[q]:
            return enter(q2)
        record = key[1]
        hit = record.index(q2)
        return (q2, (q2,) + record[:hit] + record[hit + 1:], hit)

    def expand(key: Hashable):
        for letter, ql, qr in a.out_moves(key[0]):
            yield letter, step(key, ql), step(key, qr)

    keys, transitions = _explore_tree(enter(a.initial), expand, "muller_to_parity", budget)

    def priority(key: Hashable) -> int:
        if len(key) == 1:
            return 0
        _, record, hit = key
        base = 2 * (hit + 1)
        return base if a.is_designated(frozenset(record[: hit + 1])) else base - 1

    result = ParityTreeAutomaton(
        alphabet=a.alphabet,
        num_states=len(keys),
        initial=0,
        transitions=tuple(transitions),
        priority=tuple(priority(k) for k in keys),
    )
    logger.debug(f"muller_to_parity: {a.describe()} -> {result.describe()}")
    return result


def as_priority_form(a: TreeAutomaton, budget: Optional[int] = None) -> MullerTreeAutomaton:
    if isinstance(a, MullerTreeAutomaton) and a.has_priority_form:
        return a
    return muller_to_parity(a, budget).as_muller()


SINK = ("sink",)


def _solve_acceptance_game(
    start: Hashable,
    expand: Callable[[Hashable], Iterable[Hashable]],
    priority_of: Callable[[Hashable], int],
    what: str,
) -> Tuple[ParityGame, Dict[Hashable, int], List[Hashable]]:
    """Build an acceptance game from keys ("even", ...) and ("odd", ...)."""
    meter = Budget(state_budget(), what)
    index: Dict[Hashable, int] = {}
    keys: List[Hashable] = []
    edges: List[List[int]] = []
    queue = deque()

    def number(key: Hashable) -> int:
        if key not in index:
            meter.charge()
            index[key] = len(keys)
            keys.append(key)
            edges.append([])
            queue.append(key)
        return index[key]

    number(start)
    while queue:
        key = queue.popleft()
        v = index[key]
        if key == SINK:
            edges[v] = [v]
            continue
        successors = [number(s) for s in expand(key)]
        edges[v] = list(dict.fromkeys(successors)) or [number(SINK)]
    game = ParityGame(
        owner=tuple(EVEN if k[0] == "even" else ODD for k in keys),
        priority=tuple(1 if k == SINK else priority_of(k) for k in keys),
        edges=tuple(tuple(e) for e in edges),
        start=0,
    )
    logger.debug(f"{what}: game with {game.num_vertices} vertices")
    return game, index, keys


def tree_membership(a: TreeAutomaton, t: RegularTree) -> bool:
    """Decide whether the automaton accepts the regular tree.

    The automaton player picks a transition matching the current label, the
    path player picks a direction; priorities come from the parity form.

    Raises:
        InputError: If the tree uses labels outside the alphabet
    """
    t.check_alphabet(a.alphabet)
    p = muller_to_parity(a)

    def expand(key):
        if key[0] == "even":
            _, q, node = key
            for ql, qr in p.moves(q, t.labels[node]):
                yield ("odd", ql, qr, node)
        else:
            _, ql, qr, node = key
            yield ("even", ql, t.left[node])
            yield ("even", qr, t.right[node])

    def priority(key) -> int:
        return p.priority[key[1]] if key[0] == "even" else 0

    game, _, _ = _solve_acceptance_game(("even", p.initial, t.root), expand, priority, "tree_membership")
    return solve_parity_game(game).winner(game.start) == EVEN


def _emptiness_game(p: ParityTreeAutomaton):
    def expand(key):
        if key[0] == "even":
            for letter, ql, qr in p.out_moves(key[1]):
                yield ("odd", letter, ql, qr)
        else:
            _, _, ql, qr = key
            yield ("even", ql)
            yield ("even", qr)

    def priority(key) -> int:
        return p.priority[key[1]] if key[0] == "even" else 0

    game, index, keys = _solve_acceptance_game(("even", p.initial), expand, priority, "tree_emptiness")
    return game, index, keys, solve_parity_game(game)


def productive_states(a: TreeAutomaton) -> FrozenSet[int]:
    """States of the parity form from which some tree is accepted."""
    p = muller_to_parity(a)
    game, index, keys, solution = _emptiness_game(p)
    return frozenset(k[1] for k in keys if k[0] == "even" and solution.winner(index[k]) == EVEN)


def tree_emptiness(a: TreeAutomaton) -> Optional[RegularTree]:
    """Return an accepted regular tree, or None if the language is empty.

    The witness is read off Even's positional strategy in the emptiness
    game and re-checked with tree_membership.

    Raises:
        InvariantViolation: If the witness is rejected
    """
    p = muller_to_parity(a)
    game, index, keys, solution = _emptiness_game(p)
    if solution.winner(game.start) != EVEN:
        return None
    moves = solution.strategy[EVEN]
    node_of: Dict[int, int] = {}
    rows: List[List[Any]] = []
    queue = deque([p.initial])
    node_of[p.initial] = 0
    rows.append([None, 0, 0])
    while queue:
        q = queue.popleft()
        choice = keys[moves[index[("even", q)]]]
        _, letter, ql, qr = choice
        children = []
        for child in (ql, qr):
            if child not in node_of:
                node_of[child] = len(rows)
                rows.append([None, 0, 0])
                queue.append(child)
            children.append(node_of[child])
        rows[node_of[q]] = [letter, children[0], children[1]]
    witness = RegularTree.from_rows([tuple(r) for r in rows]).minimized()
    if not tree_membership(p, witness):
        raise InvariantViolation("tree emptiness witness is rejected", {"automaton": p.describe()})
    return witness


def tree_is_empty(a: TreeAutomaton) -> bool:
    p = muller_to_parity(a)
    game, _, _, solution = _emptiness_game(p)
    return solution.winner(game.start) != EVEN


def tree_reduce(a: TreeAutomaton) -> MullerTreeAutomaton:
    """Priority-form automaton restricted to productive states."""
    p = muller_to_parity(a)
    good = productive_states(p)
    if p.initial not in good:
        return empty_tree_automaton(p.alphabet)

    def expand(q):
        for letter, ql, qr in p.out_moves(q):
            if ql in good and qr in good:
                yield letter, ql, qr

    keys, transitions = _explore_tree(p.initial, expand, "tree_reduce")
    return MullerTreeAutomaton(
        alphabet=p.alphabet,
        num_states=len(keys),
        initial=0,
        transitions=tuple(transitions),
        priority=tuple(p.priority[q] for q in keys),
    )


def tree_product(a: TreeAutomaton, b: TreeAutomaton, budget: Optional[int] = None) -> MullerTreeAutomaton:
    """Intersection of two tree automata.

    Both sides are brought to parity form and run in lockstep. A monitor
    remembers, for every priority e of the first automaton, the largest
    priority of the second automaton seen since the first automaton last
    showed a priority of at least e. Visiting first-automaton priority d
    emits d·K + 1 for odd d and d·K + memory[d] for even d, with K even and
    larger than every second-automaton priority; the largest emitted value
    seen infinitely often is even iff both runs are accepting.

    Raises:
        InputError: If the alphabets differ
        CapacityError: If the product exceeds the state budget
    """
    _check_same_alphabet(a, b)
    pa, pb = muller_to_parity(a, budget), muller_to_parity(b, budget)
    top_a = pa.max_priority
    top_b = pb.max_priority
    scale = top_b + 2 if top_b % 2 == 0 else top_b + 1

    def emit(qa: int, qb: int, memory: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...]]:
        da, db = pa.priority[qa], pb.priority[qb]
        seen = tuple(max(m, db) for m in memory)
        value = da * scale + 1 if da % 2 else da * scale + seen[da]
        return value, tuple(-1 if e <= da or e % 2 else seen[e] for e in range(top_a + 1))

    def expand(key):
        qa, qb, memory = key
        _, after = emit(qa, qb, memory)
        table_b = pb._table()[qb]
        for letter, pairs_a in pa._table()[qa].items():
            for la, ra in pairs_a:
                for lb, rb in table_b.get(letter, ()):
                    yield letter, (la, lb, after), (ra, rb, after)

    start = (pa.initial, pb.initial, tuple(-1 for _ in range(top_a + 1)))
    keys, transitions = _explore_tree(start, expand, "tree_product", budget)
    result = MullerTreeAutomaton(
        alphabet=pa.alphabet,
        num_states=len(keys),
        initial=0,
        transitions=tuple(transitions),
        priority=tuple(emit(*k)[0] for k in keys),
    )
    logger.debug(f"tree_product: {result.describe()}")
    return result


def tree_union(a: TreeAutomaton, b: TreeAutomaton) -> MullerTreeAutomaton:
    """Union via a fresh initial state choosing either automaton's first move."""
    _check_same_alphabet(a, b)
    explicit = (
        isinstance(a, MullerTreeAutomaton)
        and isinstance(b, MullerTreeAutomaton)
        and not a.has_priority_form
        and not b.has_priority_form
    )
    if not explicit:
        a, b = as_priority_form(a), as_priority_form(b)
    shift_a, shift_b = 1, 1 + a.num_states
    transitions: List[TreeTransition] = []
    for source, shift in ((a, shift_a), (b, shift_b)):
        for q, x, ql, qr in source.transitions:
            transitions.append((q + shift, x, ql + shift, qr + shift))
            if q == source.initial:
                transitions.append((0, x, ql + shift, qr + shift))
    num_states = 1 + a.num_states + b.num_states
    if explicit:
        designated = frozenset(
            frozenset(q + shift for q in member)
            for source, shift in ((a, shift_a), (b, shift_b))
            for member in source.designated
        )
        return MullerTreeAutomaton(
            alphabet=a.alphabet,
            num_states=num_states,
            initial=0,
            transitions=tuple(dict.fromkeys(transitions)),
            designated=designated,
        )
    return MullerTreeAutomaton(
        alphabet=a.alphabet,
        num_states=num_states,
        initial=0,
        transitions=tuple(dict.fromkeys(transitions)),
        priority=(0,) + a.priority + b.priority,
    )


def tree_project(a: TreeAutomaton, track: int) -> TreeAutomaton:
    """Existentially remove one track of the labels."""
    alphabet = a.alphabet.drop_track(track)

    def drop(letter: Letter) -> Letter:
        parts = a.alphabet.split(letter)
        return alphabet.join(parts[:track] + parts[track + 1:])

    return _rebuild(a, alphabet, ((q, drop(x), ql, qr) for q, x, ql, qr in a.transitions))


def tree_cylindrify(a: TreeAutomaton, position: int, new_track: Alphabet) -> TreeAutomaton:
    """Insert unconstrained label tracks at the given position."""
    alphabet = a.alphabet.insert_track(position, new_track)
    check_letter_budget(alphabet, "tree_cylindrify")
    extra = [new_track.split(y) for y in new_track.letters]
    transitions = []
    for q, x, ql, qr in a.transitions:
        parts = a.alphabet.split(x)
        for ys in extra:
            transitions.append((q, alphabet.join(parts[:position] + ys + parts[position:]), ql, qr))
    return _rebuild(a, alphabet, transitions)


def tree_relabel(a: TreeAutomaton, target: Alphabet, letter_map: LetterMap) -> TreeAutomaton:
    """Inverse image of the tree language under a letter-to-letter map.

    Raises:
        InputError: If the map is partial or leaves a's alphabet
    """
    check_letter_budget(target, "tree_relabel")
    preimage: Dict[Letter, List[Letter]] = {}
    for y in target.letters:
        x = _apply_map(letter_map, y)
        if x is None:
            raise InputError(f"letter map is undefined on {format_letter(y)}")
        if x not in a.alphabet:
            raise InputError(f"letter map sends {format_letter(y)} outside the alphabet")
        preimage.setdefault(x, []).append(y)
    return _rebuild(
        a, target, ((q, y, ql, qr) for q, x, ql, qr in a.transitions for y in preimage.get(x, ()))
    )


def tree_reorder(a: TreeAutomaton, order: Sequence[int]) -> TreeAutomaton:
    """Permute label tracks: track j of the result is track order[j] of the input."""
    alphabet = a.alphabet.permute(order)

    def move(letter: Letter) -> Letter:
        parts = a.alphabet.split(letter)
        return alphabet.join([parts[i] for i in order])

    return _rebuild(a, alphabet, ((q, move(x), ql, qr) for q, x, ql, qr in a.transitions))


def _rebuild(a: TreeAutomaton, alphabet: Alphabet, transitions: Iterable[TreeTransition]) -> TreeAutomaton:
    data = a.model_dump(exclude={"alphabet", "transitions"})
    return type(a)(alphabet=alphabet, transitions=tuple(dict.fromkeys(transitions)), **data)


def lift_word_automaton_leftmost(b: BuchiAutomaton) -> MullerTreeAutomaton:
    """Tree automaton running a Büchi automaton along the leftmost branch.

    States are the Büchi states, a free state for everything off the
    leftmost branch and a fresh initial state. Priorities: accepting Büchi
    states 2, other Büchi states 1, the free state 2, the initial state 0.
    """
    n = b.num_states
    free, init = n, n + 1
    transitions: List[TreeTransition] = []
    for q, x, q2 in b.transitions:
        transitions.append((q, x, q2, free))
        if q in b.initial:
            transitions.append((init, x, q2, free))
    for x in b.alphabet.letters:
        transitions.append((free, x, free, free))
    priority = tuple(2 if q in b.accepting else 1 for q in b.states) + (2, 0)
    return MullerTreeAutomaton(
        alphabet=b.alphabet,
        num_states=n + 2,
        initial=init,
        transitions=tuple(dict.fromkeys(transitions)),
        priority=priority,
    )


def zip_trees(trees: Sequence[RegularTree]) -> RegularTree:
    return trees[0] if len(trees) == 1 else RegularTree.zip(trees)


def unzip_tree(tree: RegularTree, arity: int) -> Tuple[RegularTree, ...]:
    return (tree,) if arity == 1 else tree.unzip(arity)
