"""Nondeterministic Büchi automata over finite (product) alphabets.

States are the integers ``0 .. num_states - 1``. Every operation returns a
fresh automaton; inputs are never modified.
"""
from collections import deque
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import Field, model_validator

from app.config.settings import get_settings
from app.models.alphabet import Alphabet, Letter, format_letter
from app.models.base import FrozenModel
from app.models.words import LassoWord
from app.utils.error_handling import Budget, CapacityError, InputError, InvariantViolation
from app.utils.logger import get_logger

logger = get_logger(__name__)

Transition = Tuple[int, Any, int]
LetterMap = Union[Callable[[Letter], Optional[Letter]], Dict[Letter, Letter]]


class BuchiAutomaton(FrozenModel):
    """A nondeterministic Büchi automaton.

    A run is accepting when it visits a state of `accepting` infinitely often.
    """

    alphabet: Alphabet
    num_states: int = Field(..., ge=0)
    initial: FrozenSet[int] = frozenset()
    accepting: FrozenSet[int] = frozenset()
    transitions: Tuple[Tuple[int, Any, int], ...] = ()

    @model_validator(mode="after")
    def _check_structure(self) -> "BuchiAutomaton":
        n = self.num_states
        for q in self.initial | self.accepting:
            if not 0 <= q < n:
                raise InputError(f"state {q} is not one of the {n} states")
        letters = self.alphabet.letter_set
        for p, a, q in self.transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise InputError(f"transition {p} -> {q} leaves the state set")
            if a not in letters:
                raise InputError(f"transition letter {format_letter(a)} is not in the alphabet")
        return self

    @classmethod
    def build(
        cls,
        alphabet: Alphabet,
        num_states: int,
        initial: Iterable[int],
        accepting: Iterable[int],
        transitions: Iterable[Transition],
    ) -> "BuchiAutomaton":
        """Construct an automaton, dropping duplicate transitions."""
        return cls(
            alphabet=alphabet,
            num_states=num_states,
            initial=frozenset(initial),
            accepting=frozenset(accepting),
            transitions=tuple(dict.fromkeys(transitions)),
        )

    @property
    def states(self) -> range:
        return range(self.num_states)

    @property
    def size(self) -> int:
        return self.num_states

    def _table(self) -> List[Dict[Letter, Tuple[int, ...]]]:
        def build():
            table: List[Dict[Letter, List[int]]] = [dict() for _ in self.states]
            for p, a, q in self.transitions:
                table[p].setdefault(a, []).append(q)
            return [{a: tuple(qs) for a, qs in row.items()} for row in table]

        return self._memoized("table", build)

    def successors(self, state: int, letter: Letter) -> Tuple[int, ...]:
        return self._table()[state].get(letter, ())

    def out_edges(self, state: int) -> Iterable[Tuple[Letter, int]]:
        for a, qs in self._table()[state].items():
            for q in qs:
                yield a, q

    def post(self, states: Iterable[int], letter: Letter) -> FrozenSet[int]:
        table = self._table()
        return frozenset(q for p in states for q in table[p].get(letter, ()))

    def state_graph(self) -> nx.DiGraph:
        def build():
            g = nx.DiGraph()
            g.add_nodes_from(self.states)
            g.add_edges_from((p, q) for p, _, q in self.transitions)
            return g

        return self._memoized("graph", build)

    def describe(self) -> str:
        return (
            f"buchi(states={self.num_states}, transitions={len(self.transitions)}, "
            f"accepting={len(self.accepting)}, letters={self.alphabet.size})"
        )


def state_budget(override: Optional[int] = None) -> int:
    return override if override is not None else get_settings().automata.state_budget


def check_letter_budget(alphabet: Alphabet, what: str) -> None:
    limit = get_settings().automata.letter_budget
    if alphabet.size > limit:
        logger.warning(f"{what}: alphabet of {alphabet.size} letters exceeds the letter budget")
        raise CapacityError(
            f"{what} needs an alphabet of {alphabet.size} letters, above the letter budget of {limit}",
            {"letters": alphabet.size, "budget": limit},
        )


def explore(
    alphabet: Alphabet,
    starts: Sequence[Hashable],
    expand: Callable[[Hashable], Iterable[Tuple[Letter, Hashable]]],
    is_accepting: Callable[[Hashable], bool],
    what: str,
    budget: Optional[int] = None,
) -> Tuple[BuchiAutomaton, Dict[Hashable, int]]:
    """Build the reachable part of an implicitly given automaton.

    Args:
        alphabet: Alphabet of the result
        starts: Initial state keys
        expand: Maps a state key to its (letter, successor key) pairs
        is_accepting: Acceptance predicate on state keys
        what: Operation name for budget messages
        budget: State budget, defaults to the configured one

    Returns:
        The automaton and the numbering of state keys

    Raises:
        CapacityError: If more states than the budget are reached
    """
    meter = Budget(state_budget(budget), what)
    index: Dict[Hashable, int] = {}
    queue = deque()
    for key in starts:
        if key not in index:
            meter.charge()
            index[key] = len(index)
            queue.append(key)
    transitions: List[Transition] = []
    accepting = set()
    while queue:
        key = queue.popleft()
        p = index[key]
        if is_accepting(key):
            accepting.add(p)
        for letter, succ in expand(key):
            if succ not in index:
                meter.charge()
                index[succ] = len(index)
                queue.append(succ)
            transitions.append((p, letter, index[succ]))
    result = BuchiAutomaton.build(
        alphabet, len(index), (index[k] for k in starts), accepting, transitions
    )
    logger.debug(f"{what}: {result.describe()}")
    return result, index


def empty_automaton(alphabet: Alphabet) -> BuchiAutomaton:
    return BuchiAutomaton.build(alphabet, 0, (), (), ())


def universal_automaton(alphabet: Alphabet) -> BuchiAutomaton:
    return BuchiAutomaton.build(alphabet, 1, (0,), (0,), ((0, a, 0) for a in alphabet.letters))


def _check_same_alphabet(a: BuchiAutomaton, b: BuchiAutomaton) -> None:
    if a.alphabet != b.alphabet:
        raise InputError(f"alphabet mismatch: {{{a.alphabet}}} vs {{{b.alphabet}}}")


def _nontrivial(graph: nx.DiGraph, component: Iterable[Any]) -> bool:
    component = list(component)
    return len(component) > 1 or graph.has_edge(component[0], component[0])


def word_membership(a: BuchiAutomaton, w: LassoWord) -> bool:
    """Decide whether the automaton accepts the lasso stem . loop^omega.

    Searches the product of the automaton with the lasso positions for a
    reachable cycle through an accepting state.

    Raises:
        InputError: If the lasso uses letters outside the alphabet
    """
    w.check_alphabet(a.alphabet)
    w = w.normalized()
    s, n = len(w.stem), len(w.stem) + len(w.loop)
    word = w.stem + w.loop

    def next_pos(i: int) -> int:
        return i + 1 if i + 1 < n else s

    graph = nx.DiGraph()
    starts = [(q, 0) for q in sorted(a.initial)]
    seen = set(starts)
    queue = deque(starts)
    while queue:
        q, i = queue.popleft()
        graph.add_node((q, i))
        for r in a.successors(q, word[i]):
            succ = (r, next_pos(i))
            graph.add_edge((q, i), succ)
            if succ not in seen:
                seen.add(succ)
                queue.append(succ)
    for component in nx.strongly_connected_components(graph):
        if _nontrivial(graph, component) and any(q in a.accepting for q, _ in component):
            return True
    return False


def _reachable(a: BuchiAutomaton) -> set:
    graph = a.state_graph()
    found = set(a.initial)
    for q in a.initial:
        found |= nx.descendants(graph, q)
    return found


def _cycle_states(a: BuchiAutomaton) -> set:
    """States lying on some cycle of the state graph."""
    graph = a.state_graph()
    on_cycle = set()
    for component in nx.strongly_connected_components(graph):
        if _nontrivial(graph, component):
            on_cycle |= component
    return on_cycle


def _shortest_loop(a: BuchiAutomaton, source: int) -> Optional[List[Letter]]:
    """Letters of a shortest nonempty path from source back to itself."""
    parent: Dict[int, Tuple[int, Letter]] = {}
    queue = deque([source])
    while queue and source not in parent:
        p = queue.popleft()
        for letter, q in a.out_edges(p):
            if q not in parent:
                parent[q] = (p, letter)
                queue.append(q)
    if source not in parent:
        return None
    letters: List[Letter] = []
    node = source
    while True:
        p, letter = parent[node]
        letters.append(letter)
        if p == source:
            break
        node = p
    letters.reverse()
    return letters


def _shortest_stem(a: BuchiAutomaton, target: int) -> List[Letter]:
    if target in a.initial:
        return []
    parent: Dict[int, Tuple[int, Letter]] = {}
    seen = set(a.initial)
    queue = deque(sorted(a.initial))
    while queue:
        p = queue.popleft()
        if p == target:
            break
        for letter, q in a.out_edges(p):
            if q not in seen:
                seen.add(q)
                parent[q] = (p, letter)
                queue.append(q)
    letters: List[Letter] = []
    node = target
    while node not in a.initial:
        node, letter = parent[node]
        letters.append(letter)
    letters.reverse()
    return letters


def word_emptiness(a: BuchiAutomaton) -> Optional[LassoWord]:
    """Return an accepted lasso, or None if the language is empty.

    The witness loops through the lowest-numbered reachable accepting state
    on a cycle, with a shortest stem and then a shortest loop.

    Raises:
        InvariantViolation: If the extracted witness is not accepted
    """
    reachable = _reachable(a)
    on_cycle = _cycle_states(a)
    for f in sorted(a.accepting):
        if f not in reachable or f not in on_cycle:
            continue
        stem = _shortest_stem(a, f)
        loop = _shortest_loop(a, f)
        witness = LassoWord(stem=tuple(stem), loop=tuple(loop))
        if not word_membership(a, witness):
            raise InvariantViolation(f"emptiness witness {witness} is rejected", {"automaton": a.describe()})
        return witness
    return None


def is_empty(a: BuchiAutomaton) -> bool:
    reachable = _reachable(a)
    on_cycle = _cycle_states(a)
    return not any(f in reachable and f in on_cycle for f in a.accepting)


def is_deterministic(a: BuchiAutomaton) -> bool:
    return len(a.initial) <= 1 and all(len(qs) <= 1 for row in a._table() for qs in row.values())


def is_complete(a: BuchiAutomaton) -> bool:
    """At least one initial state and a successor for every state and letter."""
    letters = a.alphabet.letters
    return bool(a.initial) and all(row.get(x) for row in a._table() for x in letters)


def is_weak(a: BuchiAutomaton) -> bool:
    """Every cyclic strongly connected component is entirely accepting or entirely not."""
    graph = a.state_graph()
    for component in nx.strongly_connected_components(graph):
        if _nontrivial(graph, component):
            marks = {q in a.accepting for q in component}
            if len(marks) > 1:
                return False
    return True


def accepts_everywhere(a: BuchiAutomaton) -> bool:
    return len(a.accepting) == a.num_states


def _renumber(a: BuchiAutomaton, keep: Sequence[int], block: Optional[Dict[int, int]] = None) -> BuchiAutomaton:
    if block is None:
        block = {q: i for i, q in enumerate(keep)}
    kept = set(keep)
    return BuchiAutomaton.build(
        a.alphabet,
        len(set(block.values())),
        (block[q] for q in a.initial if q in kept),
        (block[q] for q in a.accepting if q in kept),
        ((block[p], x, block[q]) for p, x, q in a.transitions if p in kept and q in kept),
    )


def trim(a: BuchiAutomaton) -> BuchiAutomaton:
    """Keep states that are reachable and can reach an accepting cycle."""
    graph = a.state_graph()
    reachable = _reachable(a)
    good = {f for f in a.accepting if f in reachable} & _cycle_states(a)
    useful = set(good)
    for f in good:
        useful |= nx.ancestors(graph, f)
    keep = sorted(reachable & useful)
    return _renumber(a, keep)


def reduce(a: BuchiAutomaton) -> BuchiAutomaton:
    """Trim, then merge forward-bisimilar states."""
    a = trim(a)
    if a.num_states == 0:
        return a
    block = {q: int(q in a.accepting) for q in a.states}
    count = len(set(block.values()))
    while True:
        signatures: Dict[Any, int] = {}
        refined = {}
        for q in a.states:
            moves = frozenset((x, block[r]) for x, r in a.out_edges(q))
            refined[q] = signatures.setdefault((block[q], moves), len(signatures))
        block = refined
        if len(signatures) == count:
            break
        count = len(signatures)
    if count == a.num_states:
        return a
    order: Dict[int, int] = {}
    for q in a.states:
        order.setdefault(block[q], len(order))
    return _renumber(a, list(a.states), {q: order[block[q]] for q in a.states})


def word_union(a: BuchiAutomaton, b: BuchiAutomaton) -> BuchiAutomaton:
    """Disjoint union with merged initial sets."""
    _check_same_alphabet(a, b)
    k = a.num_states
    return BuchiAutomaton.build(
        a.alphabet,
        k + b.num_states,
        set(a.initial) | {q + k for q in b.initial},
        set(a.accepting) | {q + k for q in b.accepting},
        list(a.transitions) + [(p + k, x, q + k) for p, x, q in b.transitions],
    )


def word_product(a: BuchiAutomaton, b: BuchiAutomaton, budget: Optional[int] = None) -> BuchiAutomaton:
    """Intersection of two Büchi languages.

    Uses the synchronous product when one side accepts in every state or both
    sides are weak, and the two-copy product otherwise.

    Raises:
        InputError: If the alphabets differ
        CapacityError: If the product exceeds the state budget
    """
    _check_same_alphabet(a, b)
    letters = a.alphabet.letters

    if accepts_everywhere(a) or accepts_everywhere(b) or (is_weak(a) and is_weak(b)):
        def expand(key):
            p, q = key
            for x in letters:
                for p2 in a.successors(p, x):
                    for q2 in b.successors(q, x):
                        yield x, (p2, q2)

        starts = [(p, q) for p in sorted(a.initial) for q in sorted(b.initial)]
        result, _ = explore(
            a.alphabet,
            starts,
            expand,
            lambda key: key[0] in a.accepting and key[1] in b.accepting,
            "word_product",
            budget,
        )
        return result

    def expand_copies(key):
        p, q, c = key
        if c == 0 and p in a.accepting:
            c2 = 1
        elif c == 1 and q in b.accepting:
            c2 = 0
        else:
            c2 = c
        for x in letters:
            for p2 in a.successors(p, x):
                for q2 in b.successors(q, x):
                    yield x, (p2, q2, c2)

    starts = [(p, q, 0) for p in sorted(a.initial) for q in sorted(b.initial)]
    result, _ = explore(
        a.alphabet,
        starts,
        expand_copies,
        lambda key: key[2] == 1 and key[1] in b.accepting,
        "word_product",
        budget,
    )
    return result


def word_project(a: BuchiAutomaton, track: int) -> BuchiAutomaton:
    """Existentially remove one track.

    Raises:
        InputError: If the track index is invalid or the alphabet has one track
    """
    alphabet = a.alphabet.drop_track(track)

    def drop(letter: Letter) -> Letter:
        parts = a.alphabet.split(letter)
        return alphabet.join(parts[:track] + parts[track + 1:])

    return BuchiAutomaton.build(
        alphabet,
        a.num_states,
        a.initial,
        a.accepting,
        ((p, drop(x), q) for p, x, q in a.transitions),
    )


def word_cylindrify(a: BuchiAutomaton, position: int, new_track: Alphabet) -> BuchiAutomaton:
    """Insert unconstrained tracks at the given position.

    Raises:
        InputError: If the position is out of range
        CapacityError: If the new alphabet exceeds the letter budget
    """
    alphabet = a.alphabet.insert_track(position, new_track)
    check_letter_budget(alphabet, "word_cylindrify")
    extra = [new_track.split(y) for y in new_track.letters]
    transitions = []
    for p, x, q in a.transitions:
        parts = a.alphabet.split(x)
        for ys in extra:
            transitions.append((p, alphabet.join(parts[:position] + ys + parts[position:]), q))
    return BuchiAutomaton.build(alphabet, a.num_states, a.initial, a.accepting, transitions)


def _apply_map(letter_map: LetterMap, letter: Letter) -> Optional[Letter]:
    if isinstance(letter_map, dict):
        return letter_map.get(letter)
    return letter_map(letter)


def word_relabel(a: BuchiAutomaton, target: Alphabet, letter_map: LetterMap) -> BuchiAutomaton:
    """Inverse image of the language under a letter-to-letter map.

    Args:
        a: Source automaton
        target: Alphabet of the result
        letter_map: Total map from target letters to letters of `a`

    Raises:
        InputError: If the map is undefined on some target letter or leaves a's alphabet
        CapacityError: If the target alphabet exceeds the letter budget
    """
    check_letter_budget(target, "word_relabel")
    preimage: Dict[Letter, List[Letter]] = {}
    for y in target.letters:
        x = _apply_map(letter_map, y)
        if x is None:
            raise InputError(f"letter map is undefined on {format_letter(y)}")
        if x not in a.alphabet:
            raise InputError(f"letter map sends {format_letter(y)} outside the alphabet")
        preimage.setdefault(x, []).append(y)
    transitions = [(p, y, q) for p, x, q in a.transitions for y in preimage.get(x, ())]
    return BuchiAutomaton.build(target, a.num_states, a.initial, a.accepting, transitions)


def word_reorder(a: BuchiAutomaton, order: Sequence[int]) -> BuchiAutomaton:
    """Permute tracks: track j of the result is track order[j] of the input."""
    alphabet = a.alphabet.permute(order)

    def move(letter: Letter) -> Letter:
        parts = a.alphabet.split(letter)
        return alphabet.join([parts[i] for i in order])

    return BuchiAutomaton.build(
        alphabet, a.num_states, a.initial, a.accepting, ((p, move(x), q) for p, x, q in a.transitions)
    )


def zip_lassos(words: Sequence[LassoWord]) -> LassoWord:
    return words[0] if len(words) == 1 else LassoWord.zip(words)


def unzip_lasso(word: LassoWord, arity: int) -> Tuple[LassoWord, ...]:
    return (word,) if arity == 1 else word.unzip(arity)
