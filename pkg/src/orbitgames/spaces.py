"""Finite topological spaces, finite topological groups and their actions.

A finite space is given by a basis of open sets.  Every point ``x`` has a
smallest open neighbourhood, its *core*; closures, interiors and the
category notions used elsewhere are all computed from cores.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence


def _fs(items: Iterable[int]) -> frozenset:
    return frozenset(int(i) for i in items)


@dataclass(frozen=True)
class Violation:
    """One broken invariant, with the tuple that witnesses it."""

    kind: str
    witness: tuple
    message: str = ""

    def as_dict(self) -> dict:
        return {"kind": self.kind, "witness": list(self.witness), "message": self.message}


@dataclass(frozen=True)
class FiniteSpace:
    n_points: int
    basis: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(_fs(b) for b in self.basis))

    @property
    def points(self) -> frozenset:
        return frozenset(range(self.n_points))

    @cached_property
    def cores(self) -> tuple[frozenset, ...]:
        out = []
        for x in range(self.n_points):
            core = self.points
            for b in self.basis:
                if x in b:
                    core = core & b
            out.append(core)
        return tuple(out)

    def is_open(self, A: Iterable[int]) -> bool:
        A = _fs(A)
        return all(self.cores[a] <= A for a in A)

    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.cores)

    def open_sets(self) -> list[frozenset]:
        """All open sets, by brute force over subsets (fine up to ~12 points)."""
        return [s for s in all_subsets(range(self.n_points)) if self.is_open(s)]

    def neighbourhoods(self, x: int) -> list[frozenset]:
        return [b for b in self.basis if x in b]

    def check_point(self, x: int) -> None:
        if not (isinstance(x, int) and 0 <= x < self.n_points):
            raise IndexError(f"point {x!r} out of range for a {self.n_points}-point space")

    def check_set(self, A: Iterable[int]) -> frozenset:
        A = _fs(A)
        for a in A:
            self.check_point(a)
        return A

    @classmethod
    def discrete(cls, n: int) -> "FiniteSpace":
        return cls(n, tuple(frozenset({i}) for i in range(n)))

    @classmethod
    def indiscrete(cls, n: int) -> "FiniteSpace":
        return cls(n, (frozenset(range(n)),))

    @classmethod
    def sierpinski(cls) -> "FiniteSpace":
        return cls(2, (frozenset({1}), frozenset({0, 1})))

    @classmethod
    def from_preorder(cls, n: int, leq) -> "FiniteSpace":
        """Alexandrov topology: open sets are the up-sets of ``leq``.

        The basis is the set of principal up-sets, i.e. the cores.
        """
        basis = []
        for x in range(n):
            up = frozenset(y for y in range(n) if leq(x, y))
            if up not in basis:
                basis.append(up)
        return cls(n, tuple(basis))


def all_subsets(items: Iterable[int]) -> list[frozenset]:
    items = list(items)
    return [frozenset(c) for r in range(len(items) + 1) for c in combinations(items, r)]


def core_open(space: FiniteSpace, x: int) -> frozenset:
    """Smallest open set containing ``x``."""
    space.check_point(x)
    return space.cores[x]


def closure(space: FiniteSpace, A: Iterable[int]) -> frozenset:
    A = space.check_set(A)
    return frozenset(z for z in range(space.n_points) if space.cores[z] & A)


def interior(space: FiniteSpace, A: Iterable[int]) -> frozenset:
    A = space.check_set(A)
    return space.points - closure(space, space.points - A)


@dataclass(frozen=True)
class PointSetReport:
    set: frozenset
    is_open: bool
    is_closed: bool
    is_dense: bool
    is_comeager: bool
    is_meager: bool

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["set"] = sorted(self.set)
        return d


def _is_dense(space: FiniteSpace, A: frozenset) -> bool:
    return all(b & A for b in space.basis if b)


def _is_comeager(space: FiniteSpace, A: frozenset) -> bool:
    # the interior is the largest open subset, and density is upward closed
    return _is_dense(space, interior(space, A))


def category_report(space: FiniteSpace, A: Iterable[int]) -> PointSetReport:
    """Topological and category flags for ``A``.

    Comeager means "contains a dense open set"; meager means the complement
    is comeager.
    """
    A = space.check_set(A)
    comp = space.points - A
    return PointSetReport(
        set=A,
        is_open=space.is_open(A),
        is_closed=space.is_open(comp),
        is_dense=_is_dense(space, A),
        is_comeager=_is_comeager(space, A),
        is_meager=_is_comeager(space, comp),
    )


@dataclass(frozen=True)
class TopGroup:
    """A finite group together with a descending chain of identity neighbourhoods."""

    order: int
    mult: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    filter_chain: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "mult", tuple(tuple(int(v) for v in row) for row in self.mult))
        object.__setattr__(self, "inv", tuple(int(v) for v in self.inv))
        object.__setattr__(self, "filter_chain", tuple(_fs(v) for v in self.filter_chain))

    @property
    def elements(self) -> frozenset:
        return frozenset(range(self.order))

    @property
    def smallest_neighbourhood(self) -> frozenset:
        return self.filter_chain[-1] if self.filter_chain else self.elements

    @property
    def hausdorff(self) -> bool:
        return self.smallest_neighbourhood == frozenset({self.identity})

    def m(self, g: int, h: int) -> int:
        return self.mult[g][h]

    def translates(self) -> list[frozenset]:
        """Chain elements together with all their left translates, deduplicated."""
        out: list[frozenset] = []
        for V in self.filter_chain:
            for g in range(self.order):
                gV = frozenset(self.mult[g][v] for v in V)
                if gV not in out:
                    out.append(gV)
        return out

    def with_chain(self, chain: Sequence[Iterable[int]]) -> "TopGroup":
        return TopGroup(self.order, self.mult, self.identity, self.inv, tuple(_fs(c) for c in chain))


@dataclass(frozen=True)
class GroupAction:
    group: TopGroup
    space: FiniteSpace
    table: tuple[tuple[int, ...], ...]  # table[g][x] = g.x

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(int(v) for v in row) for row in self.table))

    def act(self, g: int, x: int) -> int:
        return self.table[g][x]

    def image(self, g: int, A: Iterable[int]) -> frozenset:
        return frozenset(self.table[g][a] for a in A)

    def orbit(self, x: int) -> frozenset:
        return frozenset(self.table[g][x] for g in range(self.group.order))


def orbit_partition(action: GroupAction) -> list[frozenset]:
    """Orbits of the action, sorted by least element."""
    seen: set[int] = set()
    blocks = []
    for x in range(action.space.n_points):
        if x in seen:
            continue
        orb = action.orbit(x)
        seen |= orb
        blocks.append(orb)
    return blocks


def validate_space(space: FiniteSpace) -> list[Violation]:
    out: list[Violation] = []
    n = space.n_points
    if n <= 0:
        out.append(Violation("space.empty", (), "space has no points"))
        return out
    for i, b in enumerate(space.basis):
        bad = [p for p in b if not 0 <= p < n]
        if bad:
            out.append(Violation("space.basis_range", (i, bad[0]), "basis set mentions a missing point"))
    if out:
        return out
    covered = frozenset().union(*space.basis) if space.basis else frozenset()
    for x in range(n):
        if x not in covered:
            out.append(Violation("space.cover", (x,), "point lies in no basis set"))
    # unions of basis sets closed under pairwise intersection
    for i, j in combinations(range(len(space.basis)), 2):
        A, B = space.basis[i], space.basis[j]
        for p in sorted(A & B):
            if not any(p in C and C <= A & B for C in space.basis):
                out.append(Violation("space.intersection", (i, j, p),
                                     "intersection of basis sets is not a union of basis sets"))
                break
    return out


def validate_group(group: TopGroup) -> list[Violation]:
    out: list[Violation] = []
    n = group.order
    if n <= 0:
        return [Violation("group.empty", (), "group has no elements")]
    if len(group.mult) != n or any(len(r) != n for r in group.mult):
        return [Violation("group.table_shape", (n,), "multiplication table is not order x order")]
    if len(group.inv) != n:
        return [Violation("group.inv_shape", (n,), "inverse table has wrong length")]
    if not 0 <= group.identity < n:
        return [Violation("group.identity_range", (group.identity,), "identity out of range")]
    for g, row in enumerate(group.mult):
        for h, v in enumerate(row):
            if not 0 <= v < n:
                return [Violation("group.table_range", (g, h, v), "product out of range")]
    e = group.identity
    for g in range(n):
        if group.mult[e][g] != g or group.mult[g][e] != g:
            out.append(Violation("group.identity", (g,), "identity is not neutral"))
        gi = group.inv[g]
        if not 0 <= gi < n or group.mult[g][gi] != e or group.mult[gi][g] != e:
            out.append(Violation("group.inverse", (g,), "inverse table is wrong"))
    for a, b, c in product(range(n), repeat=3):
        if group.mult[group.mult[a][b]][c] != group.mult[a][group.mult[b][c]]:
            out.append(Violation("group.associativity", (a, b, c), "(ab)c != a(bc)"))
            break
    chain = group.filter_chain
    if not chain or chain[0] != group.elements:
        out.append(Violation("group.chain_top", (), "filter chain must start with the whole group"))
    for i, V in enumerate(chain):
        if e not in V:
            out.append(Violation("group.chain_identity", (i,), "chain element misses the identity"))
        if any(not 0 <= v < n for v in V):
            out.append(Violation("group.chain_range", (i,), "chain element mentions a missing element"))
        if i and not V <= chain[i - 1]:
            out.append(Violation("group.chain_descending", (i - 1, i), "chain is not descending"))
    return out


def validate_instance(action: GroupAction) -> list[Violation]:
    """Every violated invariant of the space, the group and the action.

    An empty list means the instance is valid.
    """
    out = validate_space(action.space) + validate_group(action.group)
    if out:
        return out
    space, group = action.space, action.group
    n, k = space.n_points, group.order
    if len(action.table) != k or any(len(r) != n for r in action.table):
        return [Violation("action.table_shape", (k, n), "action table is not order x n_points")]
    for g, row in enumerate(action.table):
        for x, y in enumerate(row):
            if not 0 <= y < n:
                return [Violation("action.table_range", (g, x, y), "image out of range")]
    for x in range(n):
        if action.act(group.identity, x) != x:
            out.append(Violation("action.identity", (x,), "identity moves a point"))
    for g, h, x in product(range(k), range(k), range(n)):
        if action.act(g, action.act(h, x)) != action.act(group.m(g, h), x):
            out.append(Violation("action.compatibility", (g, h, x), "g.(h.x) != (gh).x"))
            break
    for g in range(k):
        for i, b in enumerate(space.basis):
            img = action.image(g, b)
            if not space.is_open(img):
                out.append(Violation("action.homeomorphism", (g, i), f"image {sorted(img)} of basis set is not open"))
    return out


def continuity_violations(action: GroupAction) -> list[Violation]:
    """Points where the action map G x X -> X fails to be jointly continuous.

    The group carries the topology generated by left translates of its
    filter chain.  Not part of :func:`validate_instance`: actions by
    homeomorphisms that are not jointly continuous are still accepted, but
    their action groupoids fail the open-inversion axiom.
    """
    G, X = action.group, action.space
    tr = G.translates()
    out = []
    for g in range(G.order):
        gcore = frozenset.intersection(*[T for T in tr if g in T]) if tr else G.elements
        for x in range(X.n_points):
            target = X.cores[action.act(g, x)]
            bad = next(((h, z) for h in sorted(gcore) for z in sorted(X.cores[x])
                        if action.act(h, z) not in target), None)
            if bad:
                out.append(Violation("action.continuity", (g, x) + bad,
                                     "action map is not continuous at (g, x)"))
    return out
