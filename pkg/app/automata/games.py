"""Two-player parity games under the max-parity convention.

Player 0 (Even) wins a play iff the greatest priority occurring infinitely
often is even. Vertices are the integers ``0 .. n - 1``.
"""
import itertools
from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx
from pydantic import BaseModel, Field, model_validator

from app.models.base import FrozenModel
from app.utils.error_handling import CapacityError, InputError, InvariantViolation
from app.utils.logger import get_logger

logger = get_logger(__name__)

EVEN, ODD = 0, 1


class ParityGame(FrozenModel):
    """A parity game arena with a designated start vertex."""

    owner: Tuple[int, ...] = Field(..., description="Player (0 or 1) owning each vertex")
    priority: Tuple[int, ...] = Field(..., description="Priority of each vertex")
    edges: Tuple[Tuple[int, ...], ...] = Field(..., description="Successors of each vertex")
    start: int = 0

    @model_validator(mode="after")
    def _check_arena(self) -> "ParityGame":
        n = len(self.owner)
        if len(self.priority) != n or len(self.edges) != n:
            raise InputError("owner, priority and edges must describe the same vertices")
        if n and not 0 <= self.start < n:
            raise InputError(f"start vertex {self.start} is not in the game")
        for v in range(n):
            if self.owner[v] not in (EVEN, ODD):
                raise InputError(f"vertex {v} has owner {self.owner[v]}, expected 0 or 1")
            if self.priority[v] < 0:
                raise InputError(f"vertex {v} has a negative priority")
            if not self.edges[v]:
                raise InputError(f"vertex {v} has no outgoing edge")
            for w in self.edges[v]:
                if not 0 <= w < n:
                    raise InputError(f"edge {v} -> {w} leaves the game")
        return self

    @property
    def num_vertices(self) -> int:
        return len(self.owner)

    @property
    def vertices(self) -> range:
        return range(self.num_vertices)

    def predecessors(self) -> List[List[int]]:
        def build():
            preds: List[List[int]] = [[] for _ in self.vertices]
            for v in self.vertices:
                for w in self.edges[v]:
                    preds[w].append(v)
            return preds

        return self._memoized("preds", build)

    def compacted(self) -> "ParityGame":
        """Same game with priorities renumbered densely, preserving order and parity."""
        distinct = sorted(set(self.priority))
        mapping: Dict[int, int] = {}
        value = distinct[0] % 2 if distinct else 0
        for previous, p in zip([None] + distinct, distinct):
            if previous is not None and p % 2 != previous % 2:
                value += 1
            mapping[p] = value
        return ParityGame(
            owner=self.owner,
            priority=tuple(mapping[p] for p in self.priority),
            edges=self.edges,
            start=self.start,
        )


class GameSolution(BaseModel):
    """Winning regions and positional winning strategies of both players."""

    win: Tuple[FrozenSet[int], FrozenSet[int]]
    strategy: Tuple[Dict[int, int], Dict[int, int]]

    def winner(self, vertex: int) -> int:
        return EVEN if vertex in self.win[EVEN] else ODD


def attractor(
    game: ParityGame, arena: FrozenSet[int], target: Iterable[int], player: int
) -> Tuple[Set[int], Dict[int, int]]:
    """Vertices of `arena` from which `player` can force a visit to `target`.

    Returns:
        The attractor and an attracting move for each of the player's vertices in it
    """
    attr = set(target) & arena
    strategy: Dict[int, int] = {}
    remaining = {
        v: sum(1 for w in game.edges[v] if w in arena)
        for v in arena
        if game.owner[v] != player
    }
    preds = game.predecessors()
    queue = deque(attr)
    while queue:
        w = queue.popleft()
        for v in preds[w]:
            if v not in arena or v in attr:
                continue
            if game.owner[v] == player:
                attr.add(v)
                strategy[v] = w
                queue.append(v)
            else:
                remaining[v] -= 1
                if remaining[v] == 0:
                    attr.add(v)
                    queue.append(v)
    return attr, strategy


def _zielonka(game: ParityGame, arena: FrozenSet[int]) -> Tuple[List[Set[int]], List[Dict[int, int]]]:
    if not arena:
        return [set(), set()], [{}, {}]
    top = max(game.priority[v] for v in arena)
    p = top % 2
    opponent = 1 - p
    tops = {v for v in arena if game.priority[v] == top}
    attr, attr_moves = attractor(game, arena, tops, p)
    win, strategy = _zielonka(game, arena - frozenset(attr))

    if not win[opponent]:
        moves = dict(strategy[p])
        moves.update(attr_moves)
        for v in tops:
            if game.owner[v] == p:
                moves[v] = next(w for w in game.edges[v] if w in arena)
        result_win: List[Set[int]] = [set(), set()]
        result_win[p] = set(arena)
        result_moves: List[Dict[int, int]] = [{}, {}]
        result_moves[p] = {v: w for v, w in moves.items() if game.owner[v] == p}
        return result_win, result_moves

    lost, lost_moves = attractor(game, arena, win[opponent], opponent)
    win2, strategy2 = _zielonka(game, arena - frozenset(lost))
    result_win = [set(), set()]
    result_win[p] = win2[p]
    result_win[opponent] = win2[opponent] | lost
    result_moves = [{}, {}]
    result_moves[p] = dict(strategy2[p])
    opponent_moves = dict(strategy2[opponent])
    opponent_moves.update({v: w for v, w in strategy[opponent].items() if v in win[opponent]})
    opponent_moves.update(lost_moves)
    result_moves[opponent] = opponent_moves
    return result_win, result_moves


def solve_parity_game(game: ParityGame) -> GameSolution:
    """Solve a parity game with Zielonka's recursive algorithm.

    Args:
        game: The game to solve

    Returns:
        Winning regions that partition the vertices, with positional strategies
    """
    compact = game.compacted()
    win, strategy = _zielonka(compact, frozenset(compact.vertices))
    logger.debug(
        f"solved game with {game.num_vertices} vertices: "
        f"{len(win[EVEN])} won by Even, {len(win[ODD])} by Odd"
    )
    return GameSolution(
        win=(frozenset(win[EVEN]), frozenset(win[ODD])),
        strategy=(
            {v: w for v, w in strategy[EVEN].items() if v in win[EVEN]},
            {v: w for v, w in strategy[ODD].items() if v in win[ODD]},
        ),
    )


def _opponent_wins(game: ParityGame, player: int, choice: Dict[int, int]) -> Set[int]:
    """Vertices from which the opponent wins once `player` commits to `choice`.

    Vertices of `player` without a choice keep all their edges. The opponent
    wins from v iff v reaches a cycle whose largest priority has the
    opponent's parity.
    """
    opponent = 1 - player
    graph = nx.DiGraph()
    graph.add_nodes_from(game.vertices)
    for v in game.vertices:
        if game.owner[v] == player and v in choice:
            graph.add_edge(v, choice[v])
        else:
            graph.add_edges_from((v, w) for w in game.edges[v])
    goals: Set[int] = set()
    for p in sorted(set(game.priority)):
        if p % 2 != opponent:
            continue
        low = graph.subgraph([v for v in game.vertices if game.priority[v] <= p])
        for component in nx.strongly_connected_components(low):
            nontrivial = len(component) > 1 or any(low.has_edge(v, v) for v in component)
            if nontrivial and any(game.priority[v] == p for v in component):
                goals |= component
    winners = set(goals)
    for v in goals:
        winners |= nx.ancestors(graph, v)
    return winners


def solve_by_enumeration(game: ParityGame, max_strategies: int = 1 << 16) -> GameSolution:
    """Reference solver enumerating Even's positional strategies.

    Raises:
        CapacityError: If there are more than `max_strategies` strategies
    """
    even_vertices = [v for v in game.vertices if game.owner[v] == EVEN]
    count = 1
    for v in even_vertices:
        count *= len(game.edges[v])
    if count > max_strategies:
        raise CapacityError(
            f"{count} positional strategies exceed the enumeration limit of {max_strategies}",
            {"strategies": count},
        )
    win_even: Set[int] = set()
    for moves in itertools.product(*(game.edges[v] for v in even_vertices)):
        choice = dict(zip(even_vertices, moves))
        win_even |= set(game.vertices) - _opponent_wins(game, EVEN, choice)
    win_odd = set(game.vertices) - win_even
    return GameSolution(win=(frozenset(win_even), frozenset(win_odd)), strategy=({}, {}))


def verify_strategy(game: ParityGame, solution: GameSolution) -> bool:
    """Re-check both positional strategies against all counter-strategies.

    The regions must partition the vertices, every winning vertex of its
    owner must carry a move staying in the region, and the opponent must
    not win from the region once the strategy is fixed.
    """
    win_even, win_odd = solution.win
    if win_even & win_odd or len(win_even | win_odd) != game.num_vertices:
        return False
    for player in (EVEN, ODD):
        region = solution.win[player]
        moves = solution.strategy[player]
        for v in region:
            if game.owner[v] == player:
                w = moves.get(v)
                if w is None or w not in game.edges[v] or w not in region:
                    return False
        if _opponent_wins(game, player, moves) & region:
            return False
    return True


def check_solution(game: ParityGame, solution: GameSolution) -> None:
    if not verify_strategy(game, solution):
        raise InvariantViolation("parity game strategies failed verification", {"vertices": game.num_vertices})
