"""Finite groupoids with a topology on arrows.

Objects are the identity arrows, so an object is just an arrow index that
appears in ``objects``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Mapping

from .spaces import FiniteSpace, GroupAction, Violation, validate_instance


@dataclass(frozen=True)
class FiniteGroupoid:
    n_arrows: int
    objects: tuple[int, ...]
    src: tuple[int, ...]
    rng: tuple[int, ...]
    comp: Mapping[tuple[int, int], int]
    inv: tuple[int, ...]
    basis: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(sorted(int(o) for o in self.objects)))
        object.__setattr__(self, "src", tuple(int(v) for v in self.src))
        object.__setattr__(self, "rng", tuple(int(v) for v in self.rng))
        object.__setattr__(self, "inv", tuple(int(v) for v in self.inv))
        object.__setattr__(self, "comp", {(int(a), int(b)): int(c) for (a, b), c in dict(self.comp).items()})
        object.__setattr__(self, "basis", tuple(frozenset(int(a) for a in b) for b in self.basis))

    def __hash__(self):
        return hash((self.n_arrows, self.objects, self.src, self.rng, self.inv, self.basis,
                     tuple(sorted(self.comp.items()))))

    def __eq__(self, other):
        if not isinstance(other, FiniteGroupoid):
            return NotImplemented
        return (self.n_arrows, self.objects, self.src, self.rng, self.inv, self.basis, self.comp) == (
            other.n_arrows, other.objects, other.src, other.rng, other.inv, other.basis, other.comp)

    @property
    def arrows(self) -> frozenset:
        return frozenset(range(self.n_arrows))

    @cached_property
    def object_set(self) -> frozenset:
        return frozenset(self.objects)

    def object_index(self, obj: int) -> int:
        return self.objects.index(obj)

    @cached_property
    def arrow_cores(self) -> tuple[frozenset, ...]:
        out = []
        for a in range(self.n_arrows):
            core = self.arrows
            for b in self.basis:
                if a in b:
                    core &= b
            out.append(core)
        return tuple(out)

    def is_open(self, A: Iterable[int]) -> bool:
        A = frozenset(A)
        return all(self.arrow_cores[a] <= A for a in A)

    def object_space(self) -> FiniteSpace:
        """The unit space as a FiniteSpace; point ``i`` is ``objects[i]``."""
        idx = {o: i for i, o in enumerate(self.objects)}
        basis = []
        for b in self.basis:
            trace = frozenset(idx[a] for a in b if a in idx)
            if trace and trace not in basis:
                basis.append(trace)
        return FiniteSpace(len(self.objects), tuple(basis))

    def product_set(self, A: Iterable[int], B: Iterable[int]) -> frozenset:
        """AB = {ab : a in A, b in B, s(a) = r(b)}."""
        B = list(B)
        return frozenset(self.comp[(a, b)] for a in A for b in B if self.src[a] == self.rng[b])

    def check_object(self, x: int) -> None:
        if x not in self.object_set:
            raise ValueError(f"arrow {x!r} is not an object")


def validate_groupoid(g: FiniteGroupoid) -> list[Violation]:
    """Every violated groupoid axiom, with witnesses; empty means valid."""
    out: list[Violation] = []
    n = g.n_arrows
    if n <= 0 or not g.objects:
        return [Violation("groupoid.empty", (), "groupoid has no arrows or no objects")]
    if len(g.src) != n or len(g.rng) != n or len(g.inv) != n:
        return [Violation("groupoid.shape", (n,), "src, rng and inv must have one entry per arrow")]
    for a in range(n):
        for name, arr in (("src", g.src), ("rng", g.rng), ("inv", g.inv)):
            if not 0 <= arr[a] < n:
                return [Violation(f"groupoid.{name}_range", (a,), f"{name} out of range")]
    objs = g.object_set
    for o in g.objects:
        if not 0 <= o < n:
            return [Violation("groupoid.object_range", (o,), "object out of range")]
    for a in range(n):
        if g.src[a] not in objs or g.rng[a] not in objs:
            out.append(Violation("groupoid.endpoint", (a,), "source or range is not an object"))
    for o in g.objects:
        if g.src[o] != o or g.rng[o] != o:
            out.append(Violation("groupoid.object_loop", (o,), "object is not a loop at itself"))
    if out:
        return out
    for (a, b), c in g.comp.items():
        if not (0 <= a < n and 0 <= b < n and 0 <= c < n):
            out.append(Violation("groupoid.comp_range", (a, b, c), "composition entry out of range"))
        elif g.src[a] != g.rng[b]:
            out.append(Violation("groupoid.comp_extra", (a, b), "composition defined on a non-composable pair"))
    if out:
        return out
    for a, b in product(range(n), repeat=2):
        if g.src[a] == g.rng[b] and (a, b) not in g.comp:
            out.append(Violation("groupoid.comp_missing", (a, b), "composable pair has no composite"))
    if out:
        return out
    for (a, b), c in g.comp.items():
        if g.src[c] != g.src[b] or g.rng[c] != g.rng[a]:
            out.append(Violation("groupoid.comp_endpoints", (a, b), "composite has wrong source or range"))
    for a in range(n):
        if g.comp[(g.rng[a], a)] != a or g.comp[(a, g.src[a])] != a:
            out.append(Violation("groupoid.identity", (a,), "identity arrow is not neutral"))
        ai = g.inv[a]
        if g.src[ai] != g.rng[a] or g.rng[ai] != g.src[a]:
            out.append(Violation("groupoid.inverse_endpoints", (a,), "inverse does not swap source and range"))
        elif g.comp[(ai, a)] != g.src[a] or g.comp[(a, ai)] != g.rng[a]:
            out.append(Violation("groupoid.inverse", (a,), "inverse does not compose to an identity"))
    for a, b, c in product(range(n), repeat=3):
        if g.src[a] == g.rng[b] and g.src[b] == g.rng[c]:
            if g.comp[(g.comp[(a, b)], c)] != g.comp[(a, g.comp[(b, c)])]:
                out.append(Violation("groupoid.associativity", (a, b, c), "(ab)c != a(bc)"))
                break
    # topology
    for i, B in enumerate(g.basis):
        if any(not 0 <= a < n for a in B):
            return out + [Violation("groupoid.basis_range", (i,), "basis set mentions a missing arrow")]
    covered = frozenset().union(*g.basis) if g.basis else frozenset()
    for a in range(n):
        if a not in covered:
            out.append(Violation("groupoid.cover", (a,), "arrow lies in no basis set"))
    for i, j in combinations(range(len(g.basis)), 2):
        A, B = g.basis[i], g.basis[j]
        for p in sorted(A & B):
            if not any(p in C and C <= A & B for C in g.basis):
                out.append(Violation("groupoid.intersection", (i, j, p),
                                     "intersection of basis sets is not a union of basis sets"))
                break
    if out:
        return out
    for i, B in enumerate(g.basis):
        if not g.is_open(g.inv[a] for a in B):
            out.append(Violation("groupoid.inverse_open", (i,), "inverse of a basis set is not open"))
    for i, j in product(range(len(g.basis)), repeat=2):
        if not g.is_open(g.product_set(g.basis[i], g.basis[j])):
            out.append(Violation("groupoid.composition_open", (i, j), "product of basis sets is not open"))
    return out


def action_groupoid(action: GroupAction) -> FiniteGroupoid:
    """The action groupoid of ``action``.

    Arrow ``(h, x)`` is stored at index ``h * n_points + x``; its source is
    the object ``(1, x)`` and its range ``(1, h.x)``.  The basis consists of
    the rectangles ``V x U`` with ``V`` a left translate of a filter-chain
    element and ``U`` a basis set of the space.
    """
    bad = validate_instance(action)
    if bad:
        raise ValueError(f"invalid action: {bad[0].kind} {bad[0].witness}")
    G, X = action.group, action.space
    n = X.n_points
    e = G.identity

    def arrow(h: int, x: int) -> int:
        return h * n + x

    N = G.order * n
    src, rng, inv = [0] * N, [0] * N, [0] * N
    for h in range(G.order):
        for x in range(n):
            a = arrow(h, x)
            src[a] = arrow(e, x)
            rng[a] = arrow(e, action.act(h, x))
            inv[a] = arrow(G.inv[h], action.act(h, x))
    comp = {}
    for h, x, h2, y in product(range(G.order), range(n), range(G.order), range(n)):
        if x == action.act(h2, y):
            comp[(arrow(h, x), arrow(h2, y))] = arrow(G.m(h, h2), y)
    basis = []
    for V in G.translates():
        for U in X.basis:
            rect = frozenset(arrow(h, x) for h in V for x in U)
            if rect not in basis:
                basis.append(rect)
    return FiniteGroupoid(N, tuple(arrow(e, x) for x in range(n)), tuple(src), tuple(rng), comp,
                          tuple(inv), tuple(basis))


def restrict_groupoid(g: FiniteGroupoid, X: Iterable[int]) -> FiniteGroupoid:
    """The restriction to the object set ``X``, with arrows renumbered in order."""
    X = frozenset(X)
    if not X <= g.object_set:
        raise ValueError(f"{sorted(X - g.object_set)} are not objects")
    keep = [a for a in range(g.n_arrows) if g.src[a] in X and g.rng[a] in X]
    new = {a: i for i, a in enumerate(keep)}
    comp = {(new[a], new[b]): new[c] for (a, b), c in g.comp.items() if a in new and b in new}
    basis = []
    for B in g.basis:
        t = frozenset(new[a] for a in B if a in new)
        if t and t not in basis:
            basis.append(t)
    return FiniteGroupoid(
        len(keep),
        tuple(new[o] for o in g.objects if o in X),
        tuple(new[g.src[a]] for a in keep),
        tuple(new[g.rng[a]] for a in keep),
        comp,
        tuple(new[g.inv[a]] for a in keep),
        tuple(basis),
    )


def groupoid_local_orbit(g: FiniteGroupoid, x: int, U: Iterable[int]) -> frozenset:
    """Smallest set of objects in ``U`` containing ``x`` and closed under arrows of ``U``."""
    U = frozenset(U)
    if x not in U or x not in g.object_set:
        raise ValueError(f"object {x!r} is not in the given arrow set")
    targets = U & g.object_set
    arrows = [a for a in U if g.rng[a] in targets]
    orbit = {x}
    changed = True
    while changed:
        changed = False
        for a in arrows:
            if g.src[a] in orbit and g.rng[a] not in orbit:
                orbit.add(g.rng[a])
                changed = True
    return frozenset(orbit)


def groupoid_orbit(g: FiniteGroupoid, x: int) -> frozenset:
    return frozenset(g.rng[a] for a in range(g.n_arrows) if g.src[a] == x)


def groupoid_orbit_partition(g: FiniteGroupoid) -> list[frozenset]:
    seen: set[int] = set()
    blocks = []
    for o in g.objects:
        if o in seen:
            continue
        orb = groupoid_orbit(g, o)
        seen |= orb
        blocks.append(orb)
    return blocks


def group_as_groupoid(mult, identity: int, inv, basis=None) -> FiniteGroupoid:
    n = len(mult)
    comp = {(a, b): mult[a][b] for a in range(n) for b in range(n)}
    basis = basis if basis is not None else [frozenset(range(n))]
    return FiniteGroupoid(n, (identity,), (identity,) * n, (identity,) * n, comp, tuple(inv), tuple(basis))


def pair_groupoid(k: int, basis=None) -> FiniteGroupoid:
    """Arrow ``(i, j)`` from ``j`` to ``i`` stored at ``i * k + j``; discrete by default."""
    N = k * k
    objects = tuple(i * k + i for i in range(k))
    src = tuple((a % k) * k + (a % k) for a in range(N))
    rng = tuple((a // k) * k + (a // k) for a in range(N))
    comp = {}
    for i, j, l in product(range(k), repeat=3):
        comp[(i * k + j, j * k + l)] = i * k + l
    inv = tuple((a % k) * k + a // k for a in range(N))
    if basis is None:
        basis = [frozenset({a}) for a in range(N)]
    return FiniteGroupoid(N, objects, src, rng, comp, inv, tuple(basis))


def disjoint_union(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    off = g1.n_arrows
    comp = dict(g1.comp)
    comp.update({(a + off, b + off): c + off for (a, b), c in g2.comp.items()})
    return FiniteGroupoid(
        g1.n_arrows + g2.n_arrows,
        g1.objects + tuple(o + off for o in g2.objects),
        g1.src + tuple(s + off for s in g2.src),
        g1.rng + tuple(r + off for r in g2.rng),
        comp,
        g1.inv + tuple(i + off for i in g2.inv),
        g1.basis + tuple(frozenset(a + off for a in b) for b in g2.basis),
    )
