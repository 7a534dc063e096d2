"""Concrete instance families with brute-force oracles.

* finite relational structures under the logic action (atomic fragment):
  embeddings and isomorphisms, each decided both by a game and by search;
* the Friedman-Stanley jump on finite sequences;
* conjugacy of diagonal unitaries with symbolic eigenvalues.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import permutations, product
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

from .engine import Player, build_arena, solve_closed_game


class LanguageMismatch(ValueError):
    pass


class NotInjective(ValueError):
    pass


@dataclass(frozen=True)
class RelStructure:
    universe_size: int
    language: tuple[tuple[str, int], ...]
    interpretation: Mapping[str, frozenset]

    def __post_init__(self):
        object.__setattr__(self, "language", tuple((str(r), int(k)) for r, k in self.language))
        interp = {}
        for name, arity in self.language:
            tuples = frozenset(tuple(int(v) for v in t) for t in self.interpretation.get(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} has the wrong arity for {name}/{arity}")
                if any(not 0 <= v < self.universe_size for v in t):
                    raise ValueError(f"tuple {t} leaves the universe of size {self.universe_size}")
            interp[name] = tuples
        extra = set(self.interpretation) - set(interp)
        if extra:
            raise ValueError(f"relations {sorted(extra)} are not in the language")
        object.__setattr__(self, "interpretation", interp)

    def __hash__(self):
        return hash((self.universe_size, self.language, tuple(sorted(self.interpretation.items()))))

    def holds(self, name: str, t: tuple) -> bool:
        return t in self.interpretation[name]


def graph(n: int, edges: Iterable[tuple[int, int]], symmetric: bool = True, name: str = "E") -> RelStructure:
    """Structure with one binary relation; ``symmetric`` adds reversed edges."""
    es = set()
    for a, b in edges:
        es.add((a, b))
        if symmetric:
            es.add((b, a))
    return RelStructure(n, ((name, 2),), {name: frozenset(es)})


def _same_language(a: RelStructure, b: RelStructure) -> None:
    if a.language != b.language:
        raise LanguageMismatch(f"languages differ: {a.language} vs {b.language}")


def _respects(a: RelStructure, b: RelStructure, m: Sequence[int], new: int | None = None) -> bool:
    """Does the partial map ``i -> m[i]`` preserve and reflect every atomic relation?

    With ``new`` given, only tuples mentioning that index of the domain are checked.
    """
    dom = range(len(m))
    for name, arity in a.language:
        Ra, Rb = a.interpretation[name], b.interpretation[name]
        for t in product(dom, repeat=arity):
            if new is not None and new not in t:
                continue
            if (t in Ra) != (tuple(m[i] for i in t) in Rb):
                return False
    return True


def f_embedding_exists(a: RelStructure, b: RelStructure) -> tuple[bool, tuple[int, ...] | None]:
    """Brute force over injections of a's universe into b's."""
    _same_language(a, b)
    for m in permutations(range(b.universe_size), a.universe_size):
        if _respects(a, b, m):
            return True, m
    return False, None


def isomorphism_exists(a: RelStructure, b: RelStructure) -> tuple[bool, tuple[int, ...] | None]:
    _same_language(a, b)
    if a.universe_size != b.universe_size:
        return False, None
    return f_embedding_exists(a, b)


def logic_becker_arena(a: RelStructure, b: RelStructure):
    """Player I demands one more element of ``a``; Player II extends the partial embedding.

    States are ``("I", m)`` and ``("II", m)`` with ``m`` the tuple of images
    of a's first ``len(m)`` elements.
    """
    _same_language(a, b)
    na, nb = a.universe_size, b.universe_size

    def succ(s):
        tag, m = s
        if tag == "I":
            return [("II", m)] if len(m) < na else []
        return [("I", m + (j,)) for j in range(nb) if j not in m]

    def safe(s):
        tag, m = s
        return tag == "II" or not m or _respects(a, b, m, new=len(m) - 1)

    def label(s):
        tag, m = s
        pairs = ", ".join(f"{i}->{j}" for i, j in enumerate(m))
        return f"{tag} to move; map {{{pairs}}}"

    arena, _ = build_arena(("I", ()), lambda s: Player.I if s[0] == "I" else Player.II, succ, safe, label)
    return arena


def logic_becker_game(a: RelStructure, b: RelStructure) -> bool:
    arena = logic_becker_arena(a, b)
    return solve_closed_game(arena).winner[arena.initial] is Player.II


def logic_hjorth_arena(a: RelStructure, b: RelStructure):
    """Back-and-forth game: Player I picks an unmatched element on either side,
    Player II answers on the other side, and the matching must stay a partial
    isomorphism.

    States: ``("I", pairs)`` or ``("II", pairs, side, element)`` with
    ``pairs`` a sorted tuple of matched ``(a_elt, b_elt)``.
    """
    _same_language(a, b)
    na, nb = a.universe_size, b.universe_size

    def ok(pairs):
        dom = [p[0] for p in pairs]
        img = [p[1] for p in pairs]
        for name, arity in a.language:
            Ra, Rb = a.interpretation[name], b.interpretation[name]
            for t in product(range(len(pairs)), repeat=arity):
                if (tuple(dom[i] for i in t) in Ra) != (tuple(img[i] for i in t) in Rb):
                    return False
        return True

    def succ(s):
        pairs = s[1]
        used_a = {p[0] for p in pairs}
        used_b = {p[1] for p in pairs}
        if s[0] == "I":
            return ([("II", pairs, "a", i) for i in range(na) if i not in used_a]
                    + [("II", pairs, "b", j) for j in range(nb) if j not in used_b])
        _, _, side, e = s
        if side == "a":
            return [("I", tuple(sorted(pairs + ((e, j),)))) for j in range(nb) if j not in used_b]
        return [("I", tuple(sorted(pairs + ((i, e),)))) for i in range(na) if i not in used_a]

    def safe(s):
        return s[0] == "II" or ok(s[1])

    def label(s):
        pairs = ", ".join(f"{i}~{j}" for i, j in s[1])
        if s[0] == "I":
            return f"I to pick; matched {{{pairs}}}"
        return f"II to answer {s[2]}{s[3]}; matched {{{pairs}}}"

    arena, _ = build_arena(("I", ()), lambda s: Player.I if s[0] == "I" else Player.II, succ, safe, label)
    return arena


def logic_hjorth_game(a: RelStructure, b: RelStructure) -> bool:
    arena = logic_hjorth_arena(a, b)
    return solve_closed_game(arena).winner[arena.initial] is Player.II


# --------------------------------------------------------------------------
# sequences and the jump


@dataclass(frozen=True)
class SeqInstance:
    entries: tuple[Hashable, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def injective(self) -> bool:
        return len(set(self.entries)) == len(self.entries)

    @property
    def range(self) -> frozenset:
        return frozenset(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def _seq(x) -> SeqInstance:
    return x if isinstance(x, SeqInstance) else SeqInstance(tuple(x))


def _need_injective(*seqs: SeqInstance) -> None:
    for s in seqs:
        if not s.injective:
            raise NotInjective(f"sequence {list(s.entries)} has repeated entries")


def shift(y) -> SeqInstance:
    """Unilateral shift: drop the first entry."""
    y = _seq(y)
    return SeqInstance(y.entries[1:])


def eq_plus(x, y) -> bool:
    return _seq(x).range == _seq(y).range


def ran_subset(x, y) -> bool:
    x, y = _seq(x), _seq(y)
    _need_injective(x, y)
    return x.range <= y.range


def symbolic_becker_arena(x, y):
    """Player I demands agreement on one more coordinate of ``x``; Player II
    picks a fresh coordinate of ``y`` carrying the same letter.

    States: ``("I", inj)`` / ``("II", inj)``, ``inj[k]`` the coordinate of
    ``y`` assigned to coordinate ``k`` of ``x``.
    """
    x, y = _seq(x), _seq(y)
    _need_injective(x, y)
    X, Y = x.entries, y.entries

    def succ(s):
        tag, inj = s
        if tag == "I":
            return [("II", inj)] if len(inj) < len(X) else []
        return [("I", inj + (j,)) for j in range(len(Y)) if j not in inj]

    def safe(s):
        tag, inj = s
        return tag == "II" or not inj or Y[inj[-1]] == X[len(inj) - 1]

    arena, _ = build_arena(("I", ()), lambda s: Player.I if s[0] == "I" else Player.II, succ, safe,
                           lambda s: f"{s[0]} to move; assigned {list(s[1])}")
    return arena


def symbolic_becker_seq(x, y) -> bool:
    arena = symbolic_becker_arena(x, y)
    return solve_closed_game(arena).winner[arena.initial] is Player.II


# --------------------------------------------------------------------------
# diagonal unitaries


@dataclass(frozen=True)
class DiagUnitary:
    eigenvalues: tuple[Hashable, ...]

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(self.eigenvalues))

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class DiagCheck:
    eq_plus: bool
    conjugate: bool
    agree: bool
    permutation: tuple[int, ...] | None = None

    def as_dict(self) -> dict:
        return {"eq_plus": self.eq_plus, "conjugate": self.conjugate, "agree": self.agree,
                "permutation": list(self.permutation) if self.permutation else None}


def _diag_values(labels: Sequence[Hashable], selfadjoint: bool):
    """Distinct exact scalars for distinct labels: integer codes, or points of [0, 1]."""
    table = {lab: i for i, lab in enumerate(sorted(set(labels), key=repr))}
    if selfadjoint:
        k = len(table)
        return {lab: Fraction(i, max(k - 1, 1)) for lab, i in table.items()}
    return {lab: i + 1 for lab, i in table.items()}


@lru_cache(maxsize=None)
def _permutation_matrices(n: int) -> tuple[tuple[tuple[int, ...], np.ndarray], ...]:
    out = []
    for sigma in permutations(range(n)):
        P = np.zeros((n, n), dtype=np.int64)
        P[np.arange(n), sigma] = 1
        out.append((sigma, P))
    return tuple(out)


def unitarily_conjugate(lam, mu, selfadjoint: bool = False) -> tuple[bool, tuple[int, ...] | None]:
    """Search for a permutation matrix P with P diag(lam) P^-1 = diag(mu)."""
    lam = lam.eigenvalues if isinstance(lam, DiagUnitary) else tuple(lam)
    mu = mu.eigenvalues if isinstance(mu, DiagUnitary) else tuple(mu)
    if len(lam) != len(mu):
        raise ValueError(f"dimension mismatch: {len(lam)} vs {len(mu)}")
    vals = _diag_values(lam + mu, selfadjoint)
    dtype = object if selfadjoint else np.int64
    D1 = np.diag(np.array([vals[v] for v in lam], dtype=dtype))
    D2 = np.diag(np.array([vals[v] for v in mu], dtype=dtype))
    for sigma, P in _permutation_matrices(len(lam)):
        if selfadjoint:
            P = P.astype(object)
        # P is orthogonal, so its inverse is its transpose
        if np.array_equal(P @ D1 @ P.T, D2):
            return True, sigma
    return False, None


def diag_reduction_check(lam, mu, selfadjoint: bool = False) -> DiagCheck:
    lam, mu = _seq(lam), _seq(mu)
    if len(lam) != len(mu):
        raise ValueError(f"length mismatch: {len(lam)} vs {len(mu)}")
    _need_injective(lam, mu)
    eq = eq_plus(lam, mu)
    conj, sigma = unitarily_conjugate(lam.entries, mu.entries, selfadjoint)
    return DiagCheck(eq, conj, eq == conj, sigma)
