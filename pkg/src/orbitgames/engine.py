"""Finite two-player games that are open for Player I and closed for Player II.

Player II wins a play if it never enters an unsafe position.  A position
with no moves is lost by its owner when the owner is II and won by II when
the owner is I.  Solving computes Player I's attractor to the unsafe set;
the stage at which a position enters the attractor is its rank.

Rank conventions: unsafe positions and II-owned dead ends have rank 0,
and otherwise

    rank(p) = 1 + min(rank(q) for q in moves(p))   if p is owned by I
    rank(p) = 1 + max(rank(q) for q in moves(p))   if p is owned by II

with ``math.inf`` on positions Player II wins.
"""
from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

INF = math.inf


class Player(str, enum.Enum):
    I = "I"
    II = "II"

    @property
    def opponent(self) -> "Player":
        return Player.II if self is Player.I else Player.I


class ArenaError(ValueError):
    pass


@dataclass(frozen=True)
class Arena:
    owner: tuple[Player, ...]
    moves: tuple[tuple[int, ...], ...]
    safe: tuple[bool, ...]
    initial: int = 0
    labels: tuple[str, ...] | None = None

    def __len__(self) -> int:
        return len(self.owner)

    @property
    def positions(self) -> range:
        return range(len(self.owner))

    def label(self, p: int) -> str:
        return self.labels[p] if self.labels else str(p)

    def validate(self) -> None:
        n = len(self.owner)
        if len(self.moves) != n or len(self.safe) != n:
            raise ArenaError("owner, moves and safe must have the same length")
        if not 0 <= self.initial < n:
            raise ArenaError(f"initial position {self.initial} out of range")
        for p, succ in enumerate(self.moves):
            for q in succ:
                if not 0 <= q < n:
                    raise ArenaError(f"dangling move {p} -> {q}")

    def with_moves(self, p: int, succ: Iterable[int]) -> "Arena":
        moves = list(self.moves)
        moves[p] = tuple(succ)
        return Arena(self.owner, tuple(moves), self.safe, self.initial, self.labels)


def build_arena(
    initial: Hashable,
    owner: Callable[[Hashable], Player],
    successors: Callable[[Hashable], Iterable[Hashable]],
    safe: Callable[[Hashable], bool],
    label: Callable[[Hashable], str] | None = None,
) -> tuple[Arena, list]:
    """Explore the positions reachable from ``initial``.

    Unsafe positions end the play, so their successors are not explored.
    Returns the arena and the list of states indexed by position.
    """
    index = {initial: 0}
    states = [initial]
    moves: list[tuple[int, ...]] = []
    owners, safes = [], []
    queue = deque([initial])
    while queue:
        s = queue.popleft()
        ok = bool(safe(s))
        owners.append(owner(s))
        safes.append(ok)
        succ = []
        if ok:
            for t in successors(s):
                if t not in index:
                    index[t] = len(states)
                    states.append(t)
                    queue.append(t)
                j = index[t]
                if j not in succ:
                    succ.append(j)
        moves.append(tuple(succ))
    labels = tuple(label(s) for s in states) if label else None
    return Arena(tuple(owners), tuple(moves), tuple(safes), 0, labels), states


@dataclass(frozen=True)
class SolveResult:
    winner: tuple[Player, ...]
    rank: tuple[float, ...]  # int, or INF on positions Player II wins

    def wins(self, p: int) -> Player:
        return self.winner[p]


def solve_closed_game(arena: Arena) -> SolveResult:
    """Winner and rank of every position, by backward attractor iteration."""
    arena.validate()
    n = len(arena)
    preds: list[list[int]] = [[] for _ in range(n)]
    for p, succ in enumerate(arena.moves):
        for q in succ:
            preds[q].append(p)
    rank = [INF] * n
    # II-owned positions: count of moves still outside the attractor
    remaining = [len(succ) for succ in arena.moves]
    frontier = []
    for p in range(n):
        if not arena.safe[p] or (arena.owner[p] is Player.II and not arena.moves[p]):
            rank[p] = 0
            frontier.append(p)
    stage = 0
    while frontier:
        stage += 1
        nxt = []
        for q in frontier:
            for p in preds[q]:
                if rank[p] != INF or not arena.safe[p]:
                    continue
                if arena.owner[p] is Player.I:
                    rank[p] = stage
                    nxt.append(p)
                else:
                    remaining[p] -= 1
                    if remaining[p] == 0:
                        rank[p] = stage
                        nxt.append(p)
        frontier = nxt
    winner = tuple(Player.II if r == INF else Player.I for r in rank)
    return SolveResult(winner, tuple(rank))


@dataclass(frozen=True)
class Strategy:
    player: Player
    choice: Mapping[int, int] = field(default_factory=dict)

    def __call__(self, p: int) -> int:
        return self.choice[p]


def extract_strategy(arena: Arena, result: SolveResult, player: Player | str) -> Strategy:
    """Positional winning strategy for ``player`` on its winning region.

    Ties go to the lowest-index move.  Player II stays inside its winning
    region; Player I always moves to a position of strictly smaller rank.
    """
    player = Player(player)
    if result.winner[arena.initial] is not player:
        raise ValueError(f"Player {player.value} does not win from the initial position")
    choice = {}
    for p in arena.positions:
        if arena.owner[p] is not player or result.winner[p] is not player or not arena.safe[p]:
            continue
        succ = sorted(arena.moves[p])
        if player is Player.II:
            pick = next((q for q in succ if result.winner[q] is Player.II), None)
        else:
            pick = next((q for q in succ if result.rank[q] < result.rank[p]), None)
        if pick is not None:
            choice[p] = pick
    return Strategy(player, choice)


def relation_at_rank(arenas, alpha: int, results=None):
    """Related-at-``alpha`` flags for a family of arenas.

    An arena is related at ``alpha`` unless Player I wins its initial
    position with rank strictly below ``alpha``.  Accepts a sequence or a
    mapping; ``results`` may carry precomputed solutions with the same keys.
    """
    if isinstance(arenas, Mapping):
        keys = list(arenas)
    else:
        keys = list(range(len(arenas)))
    out = {}
    for k in keys:
        res = results[k] if results is not None else solve_closed_game(arenas[k])
        out[k] = not res.rank[arenas[k].initial] < alpha
    return out if isinstance(arenas, Mapping) else [out[k] for k in keys]


def bounded_play_check(arena: Arena, depth: int, start: int | None = None) -> Player:
    """Winner of the game truncated after ``depth`` moves, by backward induction.

    Player II wins any play that survives ``depth`` moves.  Used as an
    oracle for :func:`solve_closed_game`.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    arena.validate()
    memo: dict[tuple[int, int], Player] = {}

    def value(p: int, d: int) -> Player:
        key = (p, d)
        if key in memo:
            return memo[key]
        if not arena.safe[p]:
            v = Player.I
        elif d == 0:
            v = Player.II
        else:
            outcomes = [value(q, d - 1) for q in arena.moves[p]]
            me = arena.owner[p]
            if not outcomes:
                v = Player.I if me is Player.II else Player.II
            elif me in outcomes:
                v = me
            else:
                v = me.opponent
        memo[key] = v
        return v

    return value(arena.initial if start is None else start, depth)
