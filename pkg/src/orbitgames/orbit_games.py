"""Becker-embedding and Hjorth-isomorphism games on finite instances.

Player I's infinitely many choices of neighbourhoods are cut down to basis
sets and filter-chain elements.  Smaller sets only shrink Player II's
options, so by default Player I is restricted further to the single
smallest choice (``full_choice=False``); ``full_choice=True`` keeps every
basic choice and is used to cross-check that reduction.

Both games come in two flavours sharing one arena builder: group actions,
where a constraint is a pair ``(U, V)`` of an open set and an identity
neighbourhood, and groupoids, where a constraint is a single basic set of
arrows.  For an action groupoid with its rectangle basis the two agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .engine import Arena, Player, Strategy, build_arena, extract_strategy, solve_closed_game
from .groupoids import FiniteGroupoid, groupoid_local_orbit, groupoid_orbit_partition
from .spaces import FiniteSpace, GroupAction, category_report, closure, orbit_partition


def _fmt(s: Iterable[int]) -> str:
    return "{" + ",".join(str(i) for i in sorted(s)) + "}"


def local_orbit(action: GroupAction, x: int, U: Iterable[int], V: Iterable[int]) -> frozenset:
    """Smallest subset of ``U`` containing ``x`` and closed under ``V``-steps that stay in ``U``."""
    U, V = frozenset(U), frozenset(V)
    if x not in U:
        raise ValueError(f"point {x} is not in U={_fmt(U)}")
    orbit = {x}
    stack = [x]
    while stack:
        z = stack.pop()
        for g in V:
            w = action.act(g, z)
            if w in U and w not in orbit:
                orbit.add(w)
                stack.append(w)
    return frozenset(orbit)


# --------------------------------------------------------------------------
# turbulence


@dataclass(frozen=True)
class PointTurbulence:
    point: int
    dense_orbit: bool
    turbulent: bool
    meager_orbit: bool
    witness_failures: tuple[tuple[frozenset, frozenset], ...]

    def as_dict(self) -> dict:
        return {
            "point": self.point,
            "dense_orbit": self.dense_orbit,
            "turbulent": self.turbulent,
            "meager_orbit": self.meager_orbit,
            "witness_failures": [{"U": sorted(U), "V": sorted(V)} for U, V in self.witness_failures],
        }


@dataclass(frozen=True)
class TurbulenceReport:
    points: tuple[PointTurbulence, ...]
    preturbulent: bool
    turbulent_action: bool

    def as_dict(self) -> dict:
        return {
            "points": [p.as_dict() for p in self.points],
            "preturbulent": self.preturbulent,
            "turbulent_action": self.turbulent_action,
        }


def turbulence_report(action: GroupAction) -> TurbulenceReport:
    space, group = action.space, action.group
    rows = []
    for x in range(space.n_points):
        orb = action.orbit(x)
        rep = category_report(space, orb)
        core = space.cores[x]
        failures = []
        for U in space.neighbourhoods(x):
            for V in group.filter_chain:
                if not core <= closure(space, local_orbit(action, x, U, V)):
                    failures.append((U, V))
        rows.append(PointTurbulence(x, rep.is_dense, rep.is_dense and not failures, rep.is_meager, tuple(failures)))
    pre = all(r.turbulent for r in rows)
    return TurbulenceReport(tuple(rows), pre, pre and all(r.meager_orbit for r in rows))


# --------------------------------------------------------------------------
# arena construction shared by actions and groupoids


@dataclass(frozen=True)
class _Board:
    whole: Hashable
    choices: Callable[[int], list]
    step: Callable[[int, Hashable], Iterable[int]]
    local: Callable[[int, Hashable], frozenset]
    contains: Callable[[Hashable, int], bool]
    show: Callable[[Hashable], str]


def _action_board(action: GroupAction, full_choice: bool) -> _Board:
    space, group = action.space, action.group
    whole = (space.points, group.elements)
    chain = group.filter_chain or (group.elements,)

    def choices(z):
        if full_choice:
            return [(U, V) for U in space.neighbourhoods(z) for V in chain]
        return [(space.cores[z], chain[-1])]

    def step(z, c):
        return sorted({action.act(g, z) for g in c[1]})

    def show(c):
        if c == whole:
            return "U=X,V=G"
        return f"U={_fmt(c[0])},V={_fmt(c[1])}"

    return _Board(whole, choices, step, lambda z, c: local_orbit(action, z, c[0], c[1]),
                  lambda c, z: z in c[0], show)


def _groupoid_board(g: FiniteGroupoid, full_choice: bool) -> _Board:
    whole = g.arrows

    def choices(z):
        if full_choice:
            return [B for B in g.basis if z in B]
        return [g.arrow_cores[z]]

    def step(z, A):
        return sorted({g.rng[a] for a in A if g.src[a] == z})

    def show(A):
        return "A=G" if A == whole else f"A={_fmt(A)}"

    return _Board(whole, choices, step, lambda z, A: groupoid_local_orbit(g, z, A),
                  lambda A, z: z in A, show)


def _becker_arena(board: _Board, x: int, y: int) -> Arena:
    # ("I", z, c): z is the current translate of y, c Player I's last choice
    # ("II", z, c, c2): Player II moves inside c, Player I has announced c2
    def owner(s):
        return Player.I if s[0] == "I" else Player.II

    def succ(s):
        if s[0] == "I":
            return [("II", s[1], s[2], c) for c in board.choices(x)]
        return [("I", w, s[3]) for w in board.step(s[1], s[2])]

    def safe(s):
        return s[0] != "I" or board.contains(s[2], s[1])

    def label(s):
        if s[0] == "I":
            return f"I to move: z={s[1]} ({board.show(s[2])})"
        return f"II to move: z={s[1]}, step in {board.show(s[2])}, must land in {board.show(s[3])}"

    arena, _ = build_arena(("I", y, board.whole), owner, succ, safe, label)
    return arena


def _hjorth_arena(board: _Board, x: int, y: int) -> Arena:
    # Ix:  I picks a constraint around x      ("Ix", x, y, cy)
    # IIy: II moves y in its local orbit       ("IIy", x, y, cy, cx)
    # Iy:  I picks a constraint around y       ("Iy", x, y, cx)
    # IIx: II moves x in its local orbit       ("IIx", x, y, cx, cy)
    def owner(s):
        return Player.I if s[0] in ("Ix", "Iy") else Player.II

    def succ(s):
        tag = s[0]
        if tag == "Ix":
            return [("IIy", s[1], s[2], s[3], c) for c in board.choices(s[1])]
        if tag == "IIy":
            return [("Iy", s[1], w, s[4]) for w in sorted(board.local(s[2], s[3]))]
        if tag == "Iy":
            return [("IIx", s[1], s[2], s[3], c) for c in board.choices(s[2])]
        return [("Ix", w, s[2], s[4]) for w in sorted(board.local(s[1], s[3]))]

    def safe(s):
        if s[0] == "Ix":
            return board.contains(s[3], s[1])
        if s[0] == "Iy":
            return board.contains(s[3], s[2])
        return True

    def label(s):
        tag = s[0]
        if tag == "Ix":
            return f"I to choose around x={s[1]}; y={s[2]} ({board.show(s[3])})"
        if tag == "Iy":
            return f"I to choose around y={s[2]}; x={s[1]} ({board.show(s[3])})"
        if tag == "IIy":
            return f"II to move y={s[2]} within {board.show(s[3])}, landing in {board.show(s[4])}; x={s[1]}"
        return f"II to move x={s[1]} within {board.show(s[3])}, landing in {board.show(s[4])}; y={s[2]}"

    arena, _ = build_arena(("Ix", x, y, board.whole), owner, succ, safe, label)
    return arena


# --------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class BeckerVerdict:
    x: int
    y: int
    ii_wins: bool
    witness: int | None = None
    strategy: Strategy | None = None

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "ii_wins": self.ii_wins, "witness": self.witness}


@dataclass(frozen=True)
class HjorthVerdict:
    x: int
    y: int
    ii_wins: bool
    strategy: Strategy | None = None

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "ii_wins": self.ii_wins}


def _check_points(space: FiniteSpace, *pts: int) -> None:
    for p in pts:
        space.check_point(p)


def becker_arena(action: GroupAction, x: int, y: int, full_choice: bool = False) -> Arena:
    """Arena of the embedding game of ``x`` into ``y``.

    Player I announces a neighbourhood ``U`` of ``x`` and an identity
    neighbourhood ``V``; Player II then applies an element of the previously
    announced ``V`` (anything on the first move) to the current translate of
    ``y`` and must land in ``U``.
    """
    _check_points(action.space, x, y)
    return _becker_arena(_action_board(action, full_choice), x, y)


def becker_witness(action: GroupAction, x: int, y: int) -> int | None:
    """Least group element ``h`` with ``h.y`` in the core of ``x``."""
    core = action.space.cores[x]
    return next((h for h in range(action.group.order) if action.act(h, y) in core), None)


def _verdict_from_arena(arena: Arena) -> tuple[bool, Strategy | None]:
    res = solve_closed_game(arena)
    wins = res.winner[arena.initial] is Player.II
    return wins, extract_strategy(arena, res, Player.II) if wins else None


def becker_embeddable(action: GroupAction, x: int, y: int, full_choice: bool = False) -> BeckerVerdict:
    wins, strat = _verdict_from_arena(becker_arena(action, x, y, full_choice))
    return BeckerVerdict(x, y, wins, becker_witness(action, x, y), strat)


def hjorth_arena(action: GroupAction, x: int, y: int, full_choice: bool = False) -> Arena:
    """Arena of the back-and-forth local-orbit game between ``x`` and ``y``.

    Player II's y-moves range over the local orbit of the current ``y`` for
    the pending y-constraint (the whole orbit on the first move) and must
    land in Player I's latest x-neighbourhood; x-moves are symmetric.
    """
    _check_points(action.space, x, y)
    return _hjorth_arena(_action_board(action, full_choice), x, y)


def hjorth_isomorphic(action: GroupAction, x: int, y: int, full_choice: bool = False) -> HjorthVerdict:
    wins, strat = _verdict_from_arena(hjorth_arena(action, x, y, full_choice))
    return HjorthVerdict(x, y, wins, strat)


def groupoid_becker_arena(g: FiniteGroupoid, x: int, y: int, full_choice: bool = False) -> Arena:
    g.check_object(x)
    g.check_object(y)
    return _becker_arena(_groupoid_board(g, full_choice), x, y)


def groupoid_becker_embeddable(g: FiniteGroupoid, x: int, y: int, full_choice: bool = False) -> BeckerVerdict:
    wins, strat = _verdict_from_arena(groupoid_becker_arena(g, x, y, full_choice))
    core = g.arrow_cores[x]
    witness = next((a for a in range(g.n_arrows) if g.src[a] == y and g.rng[a] in core), None)
    return BeckerVerdict(x, y, wins, witness, strat)


def groupoid_hjorth_arena(g: FiniteGroupoid, x: int, y: int, full_choice: bool = False) -> Arena:
    g.check_object(x)
    g.check_object(y)
    return _hjorth_arena(_groupoid_board(g, full_choice), x, y)


def groupoid_hjorth_isomorphic(g: FiniteGroupoid, x: int, y: int, full_choice: bool = False) -> HjorthVerdict:
    wins, strat = _verdict_from_arena(groupoid_hjorth_arena(g, x, y, full_choice))
    return HjorthVerdict(x, y, wins, strat)


def becker_relation(action: GroupAction, full_choice: bool = False) -> dict[tuple[int, int], bool]:
    n = action.space.n_points
    return {(x, y): becker_embeddable(action, x, y, full_choice).ii_wins for x in range(n) for y in range(n)}


def hjorth_relation(action: GroupAction, full_choice: bool = False) -> dict[tuple[int, int], bool]:
    n = action.space.n_points
    return {(x, y): hjorth_isomorphic(action, x, y, full_choice).ii_wins for x in range(n) for y in range(n)}


def groupoid_becker_relation(g: FiniteGroupoid, full_choice: bool = False) -> dict[tuple[int, int], bool]:
    return {(x, y): groupoid_becker_embeddable(g, x, y, full_choice).ii_wins for x in g.objects for y in g.objects}


def groupoid_hjorth_relation(g: FiniteGroupoid, full_choice: bool = False) -> dict[tuple[int, int], bool]:
    return {(x, y): groupoid_hjorth_isomorphic(g, x, y, full_choice).ii_wins for x in g.objects for y in g.objects}


# --------------------------------------------------------------------------
# orbit-quotient graphs


class OrbitInvarianceError(RuntimeError):
    pass


@dataclass(frozen=True)
class OrbitQuotientGraph:
    vertices: tuple[frozenset, ...]
    edges: frozenset  # (i, j) index pairs; i <= j for hjorth graphs
    kind: str

    def has_edge(self, i: int, j: int) -> bool:
        if self.kind == "hjorth" and i > j:
            i, j = j, i
        return (i, j) in self.edges

    def representative(self, i: int) -> int:
        return min(self.vertices[i])

    def vertex_of(self, point: int) -> int:
        return next(i for i, b in enumerate(self.vertices) if point in b)

    def loops_only(self) -> bool:
        return all(i == j for i, j in self.edges)

    def is_complete(self) -> bool:
        k = len(self.vertices)
        return all(self.has_edge(i, j) for i in range(k) for j in range(k))

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [sorted(b) for b in self.vertices],
            "edges": [[self.representative(i), self.representative(j)] for i, j in sorted(self.edges)],
        }


def quotient_graph(blocks: Sequence[frozenset], relation: Mapping[tuple[int, int], bool], kind: str,
                   check: bool = True) -> OrbitQuotientGraph:
    """Graph on ``blocks`` induced by a point relation known on all pairs."""
    blocks = tuple(sorted((frozenset(b) for b in blocks), key=min))
    edges = set()
    for i, A in enumerate(blocks):
        for j, B in enumerate(blocks):
            val = relation[(min(A), min(B))]
            if check:
                for a in A:
                    for b in B:
                        if relation[(a, b)] != val:
                            raise OrbitInvarianceError(f"{kind} relation not orbit invariant at ({a}, {b})")
            if val:
                edges.add((i, j) if kind == "becker" else (min(i, j), max(i, j)))
    return OrbitQuotientGraph(blocks, frozenset(edges), kind)


def becker_digraph(action: GroupAction, full_choice: bool = False) -> OrbitQuotientGraph:
    return quotient_graph(orbit_partition(action), becker_relation(action, full_choice), "becker")


def hjorth_graph(action: GroupAction, full_choice: bool = False) -> OrbitQuotientGraph:
    return quotient_graph(orbit_partition(action), hjorth_relation(action, full_choice), "hjorth")


def groupoid_becker_digraph(g: FiniteGroupoid, full_choice: bool = False) -> OrbitQuotientGraph:
    return quotient_graph(groupoid_orbit_partition(g), groupoid_becker_relation(g, full_choice), "becker")


def groupoid_hjorth_graph(g: FiniteGroupoid, full_choice: bool = False) -> OrbitQuotientGraph:
    return quotient_graph(groupoid_orbit_partition(g), groupoid_hjorth_relation(g, full_choice), "hjorth")


def quotient_homomorphism_check(mapping, g1: OrbitQuotientGraph, g2: OrbitQuotientGraph):
    """Whether ``mapping`` (vertex index -> vertex index) sends edges to edges.

    Returns ``(True, None)`` or ``(False, (i, j))`` with a violating edge of ``g1``.
    """
    if g1.kind != g2.kind:
        raise ValueError(f"cannot map a {g1.kind} graph into a {g2.kind} graph")
    m = dict(mapping) if isinstance(mapping, Mapping) else dict(enumerate(mapping))
    for i in range(len(g1.vertices)):
        if i not in m or not 0 <= m[i] < len(g2.vertices):
            raise ValueError(f"vertex {i} is not mapped into the target graph")
    for i, j in sorted(g1.edges):
        if not g2.has_edge(m[i], m[j]):
            return False, (i, j)
    return True, None


# --------------------------------------------------------------------------
# obstruction criterion


@dataclass(frozen=True)
class ObstructionVerdict:
    verdict: bool
    exhibit: tuple[tuple[frozenset, tuple[int, int] | None], ...]  # (C, witness pair)
    failing: frozenset | None

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "exhibit": [{"C": sorted(C), "witness": list(w) if w else None} for C, w in self.exhibit],
            "failing": sorted(self.failing) if self.failing is not None else None,
        }


def _obstruction(space: FiniteSpace, blocks: Sequence[frozenset], related: Mapping[tuple[int, int], bool],
                 names: Sequence[int] | None = None) -> ObstructionVerdict:
    names = names if names is not None else list(range(space.n_points))
    blocks = sorted(blocks, key=min)
    block_of = {p: i for i, b in enumerate(blocks) for p in b}
    exhibit = []
    failing = None
    for r in range(1, len(blocks) + 1):
        for combo in combinations(range(len(blocks)), r):
            C = frozenset().union(*(blocks[i] for i in combo))
            if not category_report(space, C).is_dense:
                continue
            w = next(((x, y) for x in sorted(C) for y in sorted(C)
                      if block_of[x] != block_of[y] and related[(x, y)]), None)
            Cn = frozenset(names[p] for p in C)
            exhibit.append((Cn, (names[w[0]], names[w[1]]) if w else None))
            if w is None and failing is None:
                failing = Cn
    return ObstructionVerdict(failing is None, tuple(exhibit), failing)


def cli_obstruction_check(action: GroupAction, relation: Mapping[tuple[int, int], bool] | None = None) -> ObstructionVerdict:
    """Does every invariant dense set contain a Becker edge between distinct orbits?

    At finite scale every subset is G-delta, so the invariant dense G-delta
    sets are exactly the dense unions of orbits.
    """
    rel = relation if relation is not None else becker_relation(action)
    return _obstruction(action.space, orbit_partition(action), rel)


def groupoid_obstruction_check(g: FiniteGroupoid) -> ObstructionVerdict:
    idx = {o: i for i, o in enumerate(g.objects)}
    rel = {(idx[x], idx[y]): v for (x, y), v in groupoid_becker_relation(g).items()}
    blocks = [frozenset(idx[o] for o in b) for b in groupoid_orbit_partition(g)]
    return _obstruction(g.object_space(), blocks, rel, names=g.objects)
