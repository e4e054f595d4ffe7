"""Büchi complementation.

`word_complement` dispatches between four constructions:

- ``dual``: complete deterministic inputs, co-Büchi guess of the last visit.
- ``breakpoint``: weak inputs, deterministic subset/breakpoint automaton.
- ``rank``: tight level rankings, the general reference construction.
- ``ramsey``: transition profiles and linked pairs, for larger inputs.
"""
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from app.automata.buchi import (
    BuchiAutomaton,
    explore,
    is_complete,
    is_deterministic,
    is_weak,
    reduce,
    word_emptiness,
    word_product,
    _cycle_states,
)
from app.config.settings import get_settings
from app.models.words import LassoWord
from app.utils.error_handling import Budget, InputError
from app.utils.logger import get_logger

logger = get_logger(__name__)

METHODS = ("auto", "rank", "dual", "breakpoint", "ramsey")


def word_complement(a: BuchiAutomaton, method: str = "auto", budget: Optional[int] = None) -> BuchiAutomaton:
    """Automaton for the complement language.

    Args:
        a: Input automaton
        method: One of auto, rank, dual, breakpoint, ramsey
        budget: State budget, defaults to the configured one

    Returns:
        A reduced automaton accepting exactly the rejected words

    Raises:
        InputError: If the method does not apply to the input
        CapacityError: If the construction exceeds the state budget
    """
    if method not in METHODS:
        raise InputError(f"unknown complementation method {method!r}")
    if method == "auto":
        if is_deterministic(a) and is_complete(a):
            method = "dual"
        else:
            a = reduce(a)
            if is_weak(a):
                method = "breakpoint"
            elif a.num_states <= get_settings().automata.rank_complement_max_states:
                method = "rank"
            else:
                method = "ramsey"
    logger.debug(f"complementing {a.describe()} with method {method}")
    construction = {
        "rank": rank_complement,
        "dual": dual_complement,
        "breakpoint": breakpoint_complement,
        "ramsey": ramsey_complement,
    }[method]
    return reduce(construction(a, budget))


def word_inclusion(a: BuchiAutomaton, b: BuchiAutomaton) -> Optional[LassoWord]:
    """Decide L(a) ⊆ L(b); returns a word of L(a) \\ L(b), or None."""
    return word_emptiness(word_product(a, word_complement(b)))


def dual_complement(a: BuchiAutomaton, budget: Optional[int] = None) -> BuchiAutomaton:
    """Complement of a complete deterministic automaton.

    Copy 0 follows the run; copy 1 guesses that no accepting state is
    visited anymore and only allows non-accepting states.
    """
    if not (is_deterministic(a) and is_complete(a)):
        raise InputError("the dual construction needs a complete deterministic automaton")
    letters = a.alphabet.letters
    (q0,) = tuple(a.initial)

    def expand(key):
        q, copy = key
        for x in letters:
            (r,) = a.successors(q, x)
            if copy == 0:
                yield x, (r, 0)
            if r not in a.accepting:
                yield x, (r, 1)

    starts = [(q0, 0)] + ([(q0, 1)] if q0 not in a.accepting else [])
    result, _ = explore(a.alphabet, starts, expand, lambda key: key[1] == 1, "dual_complement", budget)
    return result


def breakpoint_complement(a: BuchiAutomaton, budget: Optional[int] = None) -> BuchiAutomaton:
    """Complement of a weak automaton.

    A weak run is accepting iff it ends up in an accepting cycle component,
    so the complement asks every run to leave those components infinitely
    often; O holds the runs that still owe such a visit since the last
    breakpoint.
    """
    if not is_weak(a):
        raise InputError("the breakpoint construction needs a weak automaton")
    good = _cycle_states(a) & set(a.accepting)
    bad = frozenset(q for q in a.states if q not in good)
    letters = a.alphabet.letters

    def expand(key):
        subset, owing = key
        for x in letters:
            nxt = a.post(subset, x)
            source = a.post(owing, x) if owing else nxt
            yield x, (nxt, source - bad)

    start = (frozenset(a.initial), frozenset())
    result, _ = explore(a.alphabet, [start], expand, lambda key: not key[1], "breakpoint_complement", budget)
    return result


Ranking = Tuple[Tuple[int, int], ...]


def _tight_rankings(
    states: List[int],
    accepting: FrozenSet[int],
    k: int,
    bounds: Optional[Dict[int, int]] = None,
) -> Iterator[Ranking]:
    """Level rankings of `states` with maximal rank 2k-1 using every odd rank below it.

    Accepting states get even ranks; `bounds` caps individual ranks.
    """
    top = 2 * k - 1
    odd = set(range(1, top + 1, 2))
    free_after = [0] * (len(states) + 1)
    for i in range(len(states) - 1, -1, -1):
        free_after[i] = free_after[i + 1] + (states[i] not in accepting)

    def extend(i: int, chosen: List[Tuple[int, int]], missing: FrozenSet[int]) -> Iterator[Ranking]:
        if len(missing) > free_after[i]:
            return
        if i == len(states):
            yield tuple(chosen)
            return
        q = states[i]
        cap = top if bounds is None else min(top, bounds[q])
        for r in range(cap + 1):
            if q in accepting and r % 2:
                continue
            chosen.append((q, r))
            yield from extend(i + 1, chosen, missing - {r})
            chosen.pop()

    yield from extend(0, [], frozenset(odd))


def rank_complement(a: BuchiAutomaton, budget: Optional[int] = None) -> BuchiAutomaton:
    """Complement by tight level rankings.

    Phase-one states are subsets of states. A run may jump to a phase-two
    state (S, O, f) whose ranking f is tight; afterwards rankings must not
    increase along transitions and keep the same maximal rank. Accepting
    states are the phase-two states with an empty obligation set O.
    """
    letters = a.alphabet.letters
    accepting = a.accepting
    meter = Budget(budget if budget is not None else get_settings().automata.state_budget, "rank_complement")

    def jumps(subset: FrozenSet[int]):
        states = sorted(subset)
        if not states:
            yield ("rank", (), frozenset(), 0)
            return
        for k in range(1, sum(q not in accepting for q in states) + 1):
            for f in _tight_rankings(states, accepting, k):
                meter.charge()
                yield ("rank", f, frozenset(), k)

    def expand(key):
        if key[0] == "subset":
            subset = key[1]
            for x in letters:
                nxt = a.post(subset, x)
                yield x, ("subset", nxt)
                for target in jumps(nxt):
                    yield x, target
            return
        _, f, owing, k = key
        for x in letters:
            bounds: Dict[int, int] = {}
            for q, r in f:
                for q2 in a.successors(q, x):
                    bounds[q2] = min(bounds.get(q2, r), r)
            nxt = sorted(bounds)
            if not nxt:
                if k == 0:
                    yield x, key
                continue
            if k == 0:
                continue
            pool = a.post(owing, x) if owing else frozenset(nxt)
            for f2 in _tight_rankings(nxt, accepting, k, bounds):
                meter.charge()
                even = {q for q, r in f2 if r % 2 == 0}
                yield x, ("rank", f2, frozenset(pool & even), k)

    starts = [("subset", frozenset(a.initial))] + list(jumps(frozenset(a.initial)))
    result, _ = explore(
        a.alphabet,
        starts,
        expand,
        lambda key: key[0] == "rank" and not key[2],
        "rank_complement",
        budget,
    )
    return result


Profile = Tuple[Tuple[int, ...], Tuple[int, ...]]


def _letter_profile(a: BuchiAutomaton, x) -> Profile:
    reach, acc = [], []
    for p in a.states:
        mask = 0
        acc_mask = 0
        for q in a.successors(p, x):
            mask |= 1 << q
            if p in a.accepting or q in a.accepting:
                acc_mask |= 1 << q
        reach.append(mask)
        acc.append(acc_mask)
    return tuple(reach), tuple(acc)


def _compose(first: Profile, second: Profile) -> Profile:
    reach_a, acc_a = first
    reach_b, acc_b = second
    reach, acc = [], []
    for p in range(len(reach_a)):
        mask = 0
        acc_mask = 0
        bits = reach_a[p]
        q = 0
        while bits:
            if bits & 1:
                mask |= reach_b[q]
                acc_mask |= acc_b[q]
                if acc_a[p] >> q & 1:
                    acc_mask |= reach_b[q]
            bits >>= 1
            q += 1
        reach.append(mask)
        acc.append(acc_mask)
    return tuple(reach), tuple(acc)


def ramsey_complement(a: BuchiAutomaton, budget: Optional[int] = None) -> BuchiAutomaton:
    """Complement via transition profiles of finite words.

    Every omega-word factors as u v1 v2 ... with all v_i sharing one
    idempotent profile e and profile(u) . e = profile(u). Whether such a
    factorization is accepted depends on the profile pair only, so the
    complement is the union of the rejecting pairs.
    """
    letters = a.alphabet.letters
    meter = Budget(budget if budget is not None else get_settings().automata.state_budget, "ramsey_complement")
    letter_profiles = {x: _letter_profile(a, x) for x in letters}

    monoid: Dict[Profile, None] = {}
    frontier = []
    for prof in letter_profiles.values():
        if prof not in monoid:
            meter.charge()
            monoid[prof] = None
            frontier.append(prof)
    while frontier:
        m = frontier.pop()
        for prof in letter_profiles.values():
            m2 = _compose(m, prof)
            if m2 not in monoid:
                meter.charge()
                monoid[m2] = None
                frontier.append(m2)
    elements = list(monoid)
    logger.debug(f"transition monoid has {len(elements)} profiles")

    def accepted(s: Profile, e: Profile) -> bool:
        reach_s = 0
        for p in a.initial:
            reach_s |= s[0][p]
        return any(reach_s >> q & 1 and e[1][q] >> q & 1 for q in a.states)

    idempotents = [e for e in elements if _compose(e, e) == e]
    targets: Dict[Profile, List[Profile]] = {}
    for s in elements:
        for e in idempotents:
            if _compose(s, e) == s and not accepted(s, e):
                targets.setdefault(s, []).append(e)

    def expand(key):
        if key[0] == "pre":
            m = key[1]
            for x in letters:
                m2 = letter_profiles[x] if m is None else _compose(m, letter_profiles[x])
                yield x, ("pre", m2)
                for e in targets.get(m2, ()):
                    yield x, ("loop", e, None)
            return
        _, e, m = key
        for x in letters:
            m2 = letter_profiles[x] if m is None else _compose(m, letter_profiles[x])
            yield x, ("loop", e, m2)
            if m2 == e:
                yield x, ("loop", e, None)

    result, _ = explore(
        a.alphabet,
        [("pre", None)],
        expand,
        lambda key: key[0] == "loop" and key[2] is None,
        "ramsey_complement",
        budget,
    )
    return result
