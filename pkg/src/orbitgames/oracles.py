"""Oracle-equivalence sweeps: every game verdict against an independent check.

Each sweep returns the list of mismatches (empty when everything agrees).
The oracles here never build an arena.
"""
from __future__ import annotations

import random
from itertools import permutations, product
from typing import Iterable, Sequence

from .catalog import Instance, catalog
from .models import (RelStructure, diag_reduction_check, eq_plus, f_embedding_exists, isomorphism_exists,
                     logic_becker_game, logic_hjorth_game, ran_subset, shift, symbolic_becker_seq)
from .orbit_games import becker_relation, hjorth_relation
from .spaces import GroupAction

FAMILIES = ("spaces", "logic", "sequences", "diag")
LETTERS = "abcdef"


def becker_closed_form(action: GroupAction, x: int, y: int) -> bool:
    cores = action.space.cores
    return any(action.act(g, y) in cores[x] for g in range(action.group.order))


def hjorth_closed_form(action: GroupAction, x: int, y: int) -> bool:
    """Valid for Hausdorff groups only."""
    cores = action.space.cores
    return any(action.act(g, y) in cores[x] and x in cores[action.act(g, y)] for g in range(action.group.order))


def spaces_sweep(instances: Iterable[Instance] | None = None) -> list[dict]:
    out = []
    for inst in instances if instances is not None else catalog():
        a = inst.action
        B = becker_relation(a)
        H = hjorth_relation(a) if a.group.hausdorff else None
        for (x, y), v in B.items():
            if v != becker_closed_form(a, x, y):
                out.append({"instance": inst.name, "game": "becker", "pair": [x, y], "solver": v})
            if H is not None and H[(x, y)] != hjorth_closed_form(a, x, y):
                out.append({"instance": inst.name, "game": "hjorth", "pair": [x, y], "solver": H[(x, y)]})
    return out


def binary_structures(n: int) -> list[RelStructure]:
    """All interpretations of one binary relation E on an n-element universe."""
    cells = [(i, j) for i in range(n) for j in range(n)]
    return [RelStructure(n, (("E", 2),), {"E": frozenset(c for c, b in zip(cells, bits) if b)})
            for bits in product((False, True), repeat=len(cells))]


def logic_corpus(exhaustive_upto: int = 3, samples: int = 1000, sample_size: int = 4,
                 seed: int = 0) -> list[tuple[RelStructure, RelStructure]]:
    """All pairs on universes up to ``exhaustive_upto`` plus random pairs on ``sample_size``."""
    small = [s for n in range(1, exhaustive_upto + 1) for s in binary_structures(n)]
    pairs = [(a, b) for a in small for b in small]
    if samples:
        rng = random.Random(seed)
        def rand_struct(n):
            cells = [(i, j) for i in range(n) for j in range(n)]
            return RelStructure(n, (("E", 2),), {"E": frozenset(c for c in cells if rng.random() < 0.5)})

        for _ in range(samples):
            a = rand_struct(rng.randint(1, sample_size))
            b = rand_struct(sample_size)
            if rng.random() < 0.3:
                # a relabelled copy of b, so isomorphic pairs are not vanishingly rare
                p = list(range(sample_size))
                rng.shuffle(p)
                a = RelStructure(sample_size, b.language,
                                 {"E": frozenset((p[i], p[j]) for i, j in b.interpretation["E"])})
            pairs.append((a, b))
    return pairs


def logic_sweep(pairs: Sequence[tuple[RelStructure, RelStructure]]) -> list[dict]:
    out = []
    for k, (a, b) in enumerate(pairs):
        emb, _ = f_embedding_exists(a, b)
        if logic_becker_game(a, b) != emb:
            out.append({"pair": k, "game": "becker", "oracle": emb})
        iso, _ = isomorphism_exists(a, b)
        if logic_hjorth_game(a, b) != iso:
            out.append({"pair": k, "game": "hjorth", "oracle": iso})
    return out


def injective_sequences(max_len: int = 4, letters: str = LETTERS) -> list[tuple[str, ...]]:
    return [s for k in range(max_len + 1) for s in permutations(letters, k)]


def sequence_sweep(max_len: int = 4, letters: str = LETTERS) -> list[dict]:
    seqs = injective_sequences(max_len, letters)
    out = []
    for x in seqs:
        for y in seqs:
            if symbolic_becker_seq(x, y) != ran_subset(x, y):
                out.append({"x": list(x), "y": list(y), "oracle": ran_subset(x, y)})
    for y in seqs:
        if not y:
            continue
        sy = shift(y)
        # injective sequences have a unique head, so the shift lands in a different orbit
        if not (symbolic_becker_seq(sy, y) and not eq_plus(sy, y)):
            out.append({"shift_of": list(y)})
    return out


def diag_sweep(max_len: int = 4, letters: str = LETTERS, selfadjoint: bool = False) -> list[dict]:
    seqs = injective_sequences(max_len, letters)
    by_len: dict[int, list] = {}
    for s in seqs:
        by_len.setdefault(len(s), []).append(s)
    out = []
    for group in by_len.values():
        for lam in group:
            for mu in group:
                chk = diag_reduction_check(lam, mu, selfadjoint)
                if not chk.agree:
                    out.append({"lambda": list(lam), "mu": list(mu), **chk.as_dict()})
    return out


def run_family(family: str, quick: bool = False) -> list[dict]:
    if family == "spaces":
        return spaces_sweep(catalog()[:300] if quick else None)
    if family == "logic":
        return logic_sweep(logic_corpus(2, 100) if quick else logic_corpus())
    if family == "sequences":
        return sequence_sweep(3 if quick else 4)
    if family == "diag":
        return diag_sweep(3 if quick else 4)
    raise KeyError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
