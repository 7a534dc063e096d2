"""Small instances: named fixtures and the exhaustive catalog.

The catalog crosses one representative of every topology on at most four
points (up to homeomorphism) with the groups 1, Z2, Z3, Z2xZ2 and S3,
each carrying one or more subgroup filter chains, and all actions of the
group by homeomorphisms.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

from .spaces import FiniteSpace, GroupAction, TopGroup

CATALOG_CAP = 5000


@dataclass(frozen=True)
class Instance:
    name: str
    action: GroupAction


def _group_from_perms(perms: list[tuple[int, ...]]) -> tuple[list[list[int]], list[int]]:
    """Multiplication table (g*h = g after h) and inverses of a permutation group.

    ``perms[0]`` must be the identity.
    """
    index = {p: i for i, p in enumerate(perms)}
    mult = [[index[tuple(g[h[i]] for i in range(len(h)))] for h in perms] for g in perms]
    inv = [next(j for j in range(len(perms)) if mult[i][j] == 0) for i in range(len(perms))]
    return mult, inv


def _subgroup_of(mult, gens) -> frozenset:
    sub = {0} | set(gens)
    while True:
        new = {mult[a][b] for a in sub for b in sub} | sub
        if new == sub:
            return frozenset(sub)
        sub = new


def make_group(name: str, chain: str = "hausdorff") -> TopGroup:
    """One of the catalog groups.

    ``chain`` is ``"hausdorff"`` (ends in the trivial subgroup, passing
    through a proper subgroup when there is one), ``"indiscrete"`` (just the
    whole group) or ``"subgroup"`` (whole group, then a proper nontrivial
    subgroup, stopping there).
    """
    name = name.upper()
    if name in ("1", "TRIVIAL"):
        perms = [(0,)]
        mid = None
    elif name == "Z2":
        perms = [(0, 1), (1, 0)]
        mid = None
    elif name == "Z3":
        perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
        mid = None
    elif name in ("Z2XZ2", "V4", "Z2Z2"):
        perms = [(0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)]
        mid = [1]
    elif name == "S3":
        perms = [tuple(p) for p in permutations(range(3))]
        mid = [perms.index((1, 2, 0))]
    else:
        raise KeyError(f"unknown group {name!r}")
    mult, inv = _group_from_perms(perms)
    n = len(perms)
    whole = frozenset(range(n))
    sub = _subgroup_of(mult, mid) if mid else None
    if chain == "hausdorff":
        chain_sets = [whole] + ([sub] if sub else []) + ([frozenset({0})] if n > 1 else [])
    elif chain == "indiscrete":
        chain_sets = [whole]
    elif chain == "subgroup":
        if sub is None:
            raise KeyError(f"group {name} has no proper nontrivial subgroup in the catalog")
        chain_sets = [whole, sub]
    else:
        raise KeyError(f"unknown chain kind {chain!r}")
    return TopGroup(n, mult, 0, inv, tuple(chain_sets))


GROUP_VARIANTS: tuple[tuple[str, str], ...] = (
    ("1", "hausdorff"),
    ("Z2", "hausdorff"), ("Z2", "indiscrete"),
    ("Z3", "hausdorff"), ("Z3", "indiscrete"),
    ("Z2xZ2", "hausdorff"), ("Z2xZ2", "subgroup"), ("Z2xZ2", "indiscrete"),
    ("S3", "hausdorff"), ("S3", "subgroup"), ("S3", "indiscrete"),
)


def _preorders(n: int):
    """All preorders on range(n) as frozensets of pairs (x, y) meaning x <= y."""
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    for bits in product((False, True), repeat=len(pairs)):
        rel = {(x, x) for x in range(n)} | {p for p, b in zip(pairs, bits) if b}
        if all((x, z) in rel for (x, y) in rel for (w, z) in rel if y == w):
            yield frozenset(rel)


@lru_cache(maxsize=None)
def topologies(n: int) -> tuple[FiniteSpace, ...]:
    """One space per homeomorphism class of topologies on ``n`` points."""
    seen = set()
    out = []
    for rel in _preorders(n):
        canon = min(tuple(sorted((p[a], p[b]) for a, b in rel)) for p in permutations(range(n)))
        if canon in seen:
            continue
        seen.add(canon)
        out.append(FiniteSpace.from_preorder(n, lambda a, b, rel=rel: (a, b) in rel))
    out.sort(key=lambda s: (-sum(len(b) == 1 for b in s.cores), sorted(map(sorted, s.basis))))
    return tuple(out)


def _generators(group: TopGroup) -> list[int]:
    gens: list[int] = []
    span = frozenset({group.identity})
    for g in range(group.order):
        if g not in span:
            gens.append(g)
            span = _subgroup_of(group.mult, gens)
    return gens


def actions(group: TopGroup, space: FiniteSpace):
    """All actions of ``group`` on ``space`` by homeomorphisms, as tables."""
    n = space.n_points
    gens = _generators(group)
    # express every element as a word in the generators (product applied right to left)
    words = {group.identity: ()}
    frontier = [group.identity]
    while frontier:
        nxt = []
        for w in frontier:
            for i, s in enumerate(gens):
                g = group.m(s, w)
                if g not in words:
                    words[g] = (i,) + words[w]
                    nxt.append(g)
        frontier = nxt
    perms = [p for p in permutations(range(n))
             if all(space.is_open(p[b] for b in B) for B in space.basis)]
    pairs = [(g, h, group.m(g, h)) for g in range(group.order) for h in range(group.order)]
    for images in product(perms, repeat=len(gens)):
        table = []
        for g in range(group.order):
            img = list(range(n))
            for i in reversed(words[g]):
                img = [images[i][z] for z in img]
            table.append(tuple(img))
        if all(table[g][table[h][x]] == table[gh][x] for g, h, gh in pairs for x in range(n)):
            yield GroupAction(group, space, tuple(table))


def _describe(space: FiniteSpace) -> str:
    if space.is_discrete():
        return f"discrete{space.n_points}"
    if len(space.basis) == 1:
        return f"indiscrete{space.n_points}"
    return f"top{space.n_points}[" + "|".join("".join(map(str, sorted(b))) for b in space.basis) + "]"


@lru_cache(maxsize=None)
def catalog(cap: int = CATALOG_CAP, max_points: int = 4) -> tuple[Instance, ...]:
    """The exhaustive small-instance catalog, smallest spaces first, capped at ``cap``."""
    out = []
    for n in range(1, max_points + 1):
        for ti, space in enumerate(topologies(n)):
            for gname, chain in GROUP_VARIANTS:
                group = make_group(gname, chain)
                for ai, act in enumerate(actions(group, space)):
                    out.append(Instance(f"{_describe(space)}/{gname}-{chain}/a{ai}", act))
                    if len(out) >= cap:
                        return tuple(out)
    return tuple(out)


def fixtures() -> dict[str, GroupAction]:
    """The named desk instances used throughout the docs and tests."""
    triv = make_group("1")
    z2 = make_group("Z2")
    z3 = make_group("Z3")
    return {
        "sierpinski-trivial": GroupAction(triv, FiniteSpace.sierpinski(), ((0, 1),)),
        "indiscrete-trivial": GroupAction(triv, FiniteSpace.indiscrete(2), ((0, 1),)),
        "discrete2-trivial": GroupAction(triv, FiniteSpace.discrete(2), ((0, 1),)),
        "discrete3-trivial": GroupAction(triv, FiniteSpace.discrete(3), ((0, 1, 2),)),
        "z2-swap": GroupAction(z2, FiniteSpace.discrete(2), ((0, 1), (1, 0))),
        "z2-trivial-action": GroupAction(z2, FiniteSpace.discrete(2), ((0, 1), (0, 1))),
        "z3-rotation": GroupAction(z3, FiniteSpace.discrete(3), ((0, 1, 2), (1, 2, 0), (2, 0, 1))),
    }


CATALOGS = ("fixtures", "basic", "catalog", "discrete-hausdorff")


def basic_catalog(max_points: int = 4) -> list[Instance]:
    """Discrete, Sierpinski and indiscrete spaces crossed with every group variant."""
    spaces = [FiniteSpace.discrete(n) for n in range(1, max_points + 1)]
    spaces.append(FiniteSpace.sierpinski())
    spaces += [FiniteSpace.indiscrete(n) for n in range(2, max_points + 1)]
    out = []
    for space in spaces:
        name = "sierpinski" if space == FiniteSpace.sierpinski() else _describe(space)
        for gname, chain in GROUP_VARIANTS:
            group = make_group(gname, chain)
            for ai, act in enumerate(actions(group, space)):
                out.append(Instance(f"{name}/{gname}-{chain}/a{ai}", act))
    return out


def named_catalog(name: str) -> list[Instance]:
    if name == "fixtures":
        return [Instance(k, v) for k, v in fixtures().items()]
    if name == "basic":
        return basic_catalog()
    if name == "catalog":
        return list(catalog())
    if name == "discrete-hausdorff":
        return [i for i in catalog() if i.action.space.is_discrete() and i.action.group.hausdorff]
    raise KeyError(f"unknown catalog {name!r}; choose from {', '.join(CATALOGS)}")
