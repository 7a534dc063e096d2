"""Command-line front end.

Exit status: 0 success, 1 oracle-diff mismatches, 2 parse errors,
3 semantic validation failures, 4 I/O errors.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence, TextIO

from . import catalog as cat
from .engine import INF, Player, extract_strategy, relation_at_rank, solve_closed_game
from .groupoids import action_groupoid, groupoid_orbit_partition, groupoid_local_orbit, validate_groupoid
from .io import InstanceDoc, ParseError, dumps, emit_doc, emit_dot, read_doc
from .models import diag_reduction_check, eq_plus, f_embedding_exists, isomorphism_exists, logic_becker_game, \
    logic_hjorth_game, ran_subset, symbolic_becker_seq
from .orbit_games import (becker_arena, becker_embeddable, cli_obstruction_check, groupoid_becker_arena,
                          groupoid_becker_embeddable, groupoid_hjorth_arena,
                          groupoid_hjorth_isomorphic, groupoid_obstruction_check,
                          hjorth_arena, hjorth_isomorphic, local_orbit, quotient_graph, turbulence_report)
from .oracles import FAMILIES, run_family
from .spaces import continuity_violations, orbit_partition, validate_instance

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_SEMANTIC, EXIT_IO = 0, 1, 2, 3, 4


class SemanticError(ValueError):
    pass


def workers() -> int:
    try:
        n = int(os.environ.get("ORBITGAMES_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, min(n, os.cpu_count() or 1))


def pmap(fn: Callable, items: Sequence) -> list:
    """Ordered map, over a process pool when ORBITGAMES_THREADS allows it."""
    n = workers()
    if n <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n))))


# --------------------------------------------------------------------------
# helpers


def _load(path: str) -> InstanceDoc:
    return read_doc(path)


def _need_action(doc: InstanceDoc):
    act = doc.action
    if act is None:
        raise SemanticError("instance needs space, group and action sections")
    bad = validate_instance(act)
    if bad:
        v = bad[0]
        raise SemanticError(f"invalid instance: {v.kind} at {list(v.witness)}: {v.message}")
    return act


def _need_groupoid(doc: InstanceDoc):
    if doc.groupoid is not None:
        g = doc.groupoid
    else:
        g = action_groupoid(_need_action(doc))
    bad = validate_groupoid(g)
    if bad and doc.groupoid is not None:
        v = bad[0]
        raise SemanticError(f"invalid groupoid: {v.kind} at {list(v.witness)}: {v.message}")
    return g


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise SemanticError(f"expected a comma-separated list of integers, got {text!r}") from exc


def _pairs(args, n_points: int, objects: Sequence[int] | None = None) -> list[tuple[int, int]]:
    pts = list(objects) if objects is not None else list(range(n_points))
    if args.all:
        return [(x, y) for x in pts for y in pts]
    if args.x is None or args.y is None:
        raise SemanticError("give a pair X Y or --all")
    for p in (args.x, args.y):
        if p not in pts:
            raise SemanticError(f"{p} is not a point of the instance")
    return [(args.x, args.y)]


def _becker_task(job):
    kind, obj, x, y, full = job
    if kind == "action":
        return becker_embeddable(obj, x, y, full).as_dict()
    return groupoid_becker_embeddable(obj, x, y, full).as_dict()


def _hjorth_task(job):
    kind, obj, x, y, full = job
    if kind == "action":
        return hjorth_isomorphic(obj, x, y, full).as_dict()
    return groupoid_hjorth_isomorphic(obj, x, y, full).as_dict()


def _target(args, doc):
    if args.groupoid:
        g = _need_groupoid(doc)
        return "groupoid", g, 0, list(g.objects)
    a = _need_action(doc)
    return "action", a, a.space.n_points, None


# --------------------------------------------------------------------------
# commands


def cmd_validate(args, out: TextIO) -> int:
    doc = _load(args.instance)
    report: dict = {"name": doc.name}
    bad = []
    if doc.action is not None:
        bad = validate_instance(doc.action)
        report["instance"] = [v.as_dict() for v in bad]
        report["continuity"] = [] if bad else [v.as_dict() for v in continuity_violations(doc.action)]
    if doc.groupoid is not None:
        gbad = validate_groupoid(doc.groupoid)
        report["groupoid"] = [v.as_dict() for v in gbad]
        bad = bad + gbad
    report["valid"] = not bad
    out.write(dumps(report))
    return EXIT_OK if not bad else EXIT_SEMANTIC


def cmd_orbits(args, out: TextIO) -> int:
    doc = _load(args.instance)
    if args.groupoid:
        blocks = groupoid_orbit_partition(_need_groupoid(doc))
    else:
        blocks = orbit_partition(_need_action(doc))
    out.write(dumps({"orbits": sorted(sorted(b) for b in blocks)}))
    return EXIT_OK


def cmd_becker(args, out: TextIO) -> int:
    doc = _load(args.instance)
    kind, obj, n, objs = _target(args, doc)
    jobs = [(kind, obj, x, y, args.full_choice) for x, y in _pairs(args, n, objs)]
    out.write(dumps({"becker": pmap(_becker_task, jobs)}))
    return EXIT_OK


def cmd_hjorth(args, out: TextIO) -> int:
    doc = _load(args.instance)
    kind, obj, n, objs = _target(args, doc)
    jobs = [(kind, obj, x, y, args.full_choice) for x, y in _pairs(args, n, objs)]
    out.write(dumps({"hjorth": pmap(_hjorth_task, jobs)}))
    return EXIT_OK


def cmd_local_orbit(args, out: TextIO) -> int:
    doc = _load(args.instance)
    U = _ints(args.U)
    try:
        if args.groupoid:
            g = _need_groupoid(doc)
            res = groupoid_local_orbit(g, args.x, U)
        else:
            a = _need_action(doc)
            if args.V is None:
                raise SemanticError("local-orbit on an action needs V")
            a.space.check_point(args.x)
            a.space.check_set(U)
            res = local_orbit(a, args.x, U, _ints(args.V))
    except (ValueError, IndexError) as exc:
        raise SemanticError(str(exc)) from exc
    out.write(dumps({"x": args.x, "U": sorted(U), "V": sorted(_ints(args.V)) if args.V else None,
                     "local_orbit": sorted(res)}))
    return EXIT_OK


def cmd_turbulence(args, out: TextIO) -> int:
    a = _need_action(_load(args.instance))
    out.write(dumps(turbulence_report(a).as_dict()))
    return EXIT_OK


def _relation(kind: str, target, obj, pairs, full: bool) -> dict:
    task = _becker_task if kind == "becker" else _hjorth_task
    res = pmap(task, [(target, obj, x, y, full) for x, y in pairs])
    return {(r["x"], r["y"]): r["ii_wins"] for r in res}


def cmd_graphs(args, out: TextIO) -> int:
    doc = _load(args.instance)
    target, obj, n, objs = _target(args, doc)
    pts = objs if objs is not None else list(range(n))
    blocks = groupoid_orbit_partition(obj) if target == "groupoid" else orbit_partition(obj)
    rel = _relation(args.kind, target, obj, [(x, y) for x in pts for y in pts], args.full_choice)
    graph = quotient_graph(blocks, rel, args.kind)
    out.write(emit_dot(graph) if args.format == "dot" else dumps(graph.as_dict()))
    return EXIT_OK


def cmd_obstruction(args, out: TextIO) -> int:
    doc = _load(args.instance)
    if args.groupoid:
        res = groupoid_obstruction_check(_need_groupoid(doc))
    else:
        a = _need_action(doc)
        n = a.space.n_points
        res = cli_obstruction_check(a, _relation("becker", "action", a, [(x, y) for x in range(n) for y in range(n)], False))
    out.write(dumps(res.as_dict()))
    return EXIT_OK


def _arena_for(args, doc):
    target, obj, n, objs = _target(args, doc)
    x, y = _pairs(args, n, objs)[0]
    if args.game == "becker":
        build = becker_arena if target == "action" else groupoid_becker_arena
    else:
        build = hjorth_arena if target == "action" else groupoid_hjorth_arena
    return build(obj, x, y, args.full_choice), x, y


def _rank_json(r: float):
    return "inf" if r == INF else int(r)


def cmd_ranks(args, out: TextIO) -> int:
    doc = _load(args.instance)
    args.all = False
    arena, x, y = _arena_for(args, doc)
    res = solve_closed_game(arena)
    n = len(arena)
    related = [relation_at_rank([arena], alpha, [res])[0] for alpha in range(n + 1)]
    out.write(dumps({
        "game": args.game, "x": x, "y": y, "positions": n,
        "winner": res.winner[arena.initial].value,
        "rank": _rank_json(res.rank[arena.initial]),
        "related_at": {str(alpha): v for alpha, v in enumerate(related)},
    }))
    return EXIT_OK


def cmd_models(args, out: TextIO) -> int:
    doc = _load(args.instance)
    if not doc.structures and not doc.sequences:
        raise SemanticError("instance has no structures or sequences section")
    report: dict = {}
    if doc.structures:
        rows = []
        for ka, a in doc.structures.items():
            for kb, b in doc.structures.items():
                emb, m = f_embedding_exists(a, b)
                rows.append({"a": ka, "b": kb, "becker_game": logic_becker_game(a, b), "embedding": emb,
                             "injection": list(m) if m else None,
                             "hjorth_game": logic_hjorth_game(a, b), "isomorphic": isomorphism_exists(a, b)[0]})
        report["structures"] = rows
    if doc.sequences:
        rows = []
        for kx, x in doc.sequences.items():
            for ky, y in doc.sequences.items():
                row = {"x": kx, "y": ky, "eq_plus": eq_plus(x, y)}
                if x.injective and y.injective:
                    row["ran_subset"] = ran_subset(x, y)
                    row["becker_game"] = symbolic_becker_seq(x, y)
                    if len(x) == len(y):
                        row["diag"] = diag_reduction_check(x, y).as_dict()
                rows.append(row)
        report["sequences"] = rows
    out.write(dumps(report))
    return EXIT_OK


def _family_task(job):
    family, quick = job
    return run_family(family, quick)


def cmd_oracle_diff(args, out: TextIO) -> int:
    families = list(FAMILIES) if args.family == "all" else [args.family]
    results = pmap(_family_task, [(f, args.quick) for f in families])
    report = {f: {"mismatches": len(r), "counterexamples": r[:20]} for f, r in zip(families, results)}
    out.write(dumps(report))
    return EXIT_MISMATCH if any(results) else EXIT_OK


def cmd_gen(args, out: TextIO) -> int:
    try:
        insts = cat.named_catalog(args.catalog)
    except KeyError as exc:
        raise SemanticError(str(exc.args[0])) from exc
    docs = [InstanceDoc.from_action(i.action, i.name) for i in insts]
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        for k, doc in enumerate(docs):
            safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in doc.name)
            (d / f"{k:04d}_{safe}.json").write_text(emit_doc(doc), encoding="utf-8")
        out.write(dumps({"catalog": args.catalog, "written": len(docs), "directory": str(d)}))
    else:
        out.write("[\n" + ",\n".join(emit_doc(doc).rstrip("\n") for doc in docs) + "\n]\n")
    return EXIT_OK


def cmd_play(args, out: TextIO, inp: TextIO | None = None) -> int:
    inp = inp or sys.stdin
    doc = _load(args.instance)
    args.all = False
    arena, x, y = _arena_for(args, doc)
    res = solve_closed_game(arena)
    human = Player(args.as_)
    engine = human.opponent
    strategies = {}
    for pl in Player:
        if res.winner[arena.initial] is pl:
            strategies[pl] = extract_strategy(arena, res, pl)
    verdict = res.winner[arena.initial]
    out.write(f"{args.game} game on ({x}, {y}); you are Player {human.value}.\n")
    out.write(f"Solver verdict: Player {verdict.value} wins (rank {_rank_json(res.rank[arena.initial])}).\n")
    p = arena.initial
    moves_made = 0
    while True:
        if not arena.safe[p]:
            out.write(f"Position unsafe: {arena.label(p)}\nResult: Player I wins.\n")
            return EXIT_OK
        succ = list(arena.moves[p])
        owner = arena.owner[p]
        if not succ:
            winner = Player.I if owner is Player.II else Player.II
            out.write(f"Player {owner.value} has no move at: {arena.label(p)}\nResult: Player {winner.value} wins.\n")
            return EXIT_OK
        if moves_made >= args.max_moves:
            out.write(f"Stopped after {moves_made} moves with Player II still safe.\nResult: Player II survives.\n")
            return EXIT_OK
        if owner is human:
            out.write(f"\n{arena.label(p)}\n")
            for k, q in enumerate(succ, 1):
                out.write(f"  {k}) {arena.label(q)}\n")
            while True:
                out.write("move> ")
                out.flush()
                line = inp.readline()
                if not line:
                    out.write("\nEnd of input.\n")
                    return EXIT_OK
                line = line.strip()
                if not inp.isatty():
                    out.write(line + "\n")  # keep piped transcripts readable
                if line in ("q", "quit"):
                    out.write("Quit.\n")
                    return EXIT_OK
                if line.isdigit() and 1 <= int(line) <= len(succ):
                    p = succ[int(line) - 1]
                    break
                out.write(f"illegal move {line!r}: choose a number from 1 to {len(succ)}\n")
        else:
            if engine in strategies and p in strategies[engine].choice:
                q = strategies[engine](p)
            elif engine is Player.II:
                # losing: delay as long as possible
                q = max(succ, key=lambda s: (res.rank[s], -s))
            else:
                q = min(succ)
            out.write(f"Engine (Player {engine.value}) plays: {arena.label(q)}\n")
            p = q
        moves_made += 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orbitgames", description="Orbit games on finite instances.")
    sub = ap.add_subparsers(dest="command", required=True)

    def inst(p):
        p.add_argument("instance", help="instance document (JSON)")

    def grp(p):
        p.add_argument("--groupoid", action="store_true",
                       help="use the groupoid section (or the action groupoid when absent)")

    def pair(p, allow_all=True):
        p.add_argument("x", type=int, nargs="?")
        p.add_argument("y", type=int, nargs="?")
        if allow_all:
            p.add_argument("--all", action="store_true", help="every ordered pair")
        p.add_argument("--full-choice", action="store_true", help="let Player I use every basic neighbourhood")

    p = sub.add_parser("validate", help="check every invariant of an instance")
    inst(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("orbits", help="orbit partition")
    inst(p); grp(p)
    p.set_defaults(func=cmd_orbits)

    for name, fn in (("becker", cmd_becker), ("hjorth", cmd_hjorth)):
        p = sub.add_parser(name, help=f"{name} game verdicts")
        inst(p); pair(p); grp(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("local-orbit", help="local orbit O(x, U, V)")
    inst(p)
    p.add_argument("x", type=int)
    p.add_argument("U", help="comma-separated points (arrows with --groupoid)")
    p.add_argument("V", nargs="?", help="comma-separated group elements")
    grp(p)
    p.set_defaults(func=cmd_local_orbit)

    p = sub.add_parser("turbulence", help="turbulence report")
    inst(p)
    p.set_defaults(func=cmd_turbulence)

    p = sub.add_parser("graphs", help="Becker digraph or Hjorth graph")
    inst(p); grp(p)
    p.add_argument("--kind", choices=("becker", "hjorth"), required=True)
    p.add_argument("--format", choices=("dot", "structured"), default="structured")
    p.add_argument("--full-choice", action="store_true")
    p.set_defaults(func=cmd_graphs)

    p = sub.add_parser("obstruction", help="CLI-classifiability obstruction check")
    inst(p); grp(p)
    p.set_defaults(func=cmd_obstruction)

    for name, fn in (("ranks", cmd_ranks), ("play", cmd_play)):
        p = sub.add_parser(name, help="rank hierarchy at a pair" if name == "ranks" else "play against the solver")
        inst(p); pair(p, allow_all=False); grp(p)
        p.add_argument("--game", choices=("becker", "hjorth"), default="hjorth")
        if name == "play":
            p.add_argument("--as", dest="as_", choices=("I", "II"), required=True)
            p.add_argument("--max-moves", type=int, default=40)
        p.set_defaults(func=fn)

    p = sub.add_parser("models", help="logic-action and sequence checks for the structures/sequences sections")
    inst(p)
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("oracle-diff", help="oracle-equivalence sweep")
    p.add_argument("--family", choices=FAMILIES + ("all",), required=True)
    p.add_argument("--quick", action="store_true", help="smaller corpus")
    p.set_defaults(func=cmd_oracle_diff)

    p = sub.add_parser("gen", help="emit catalog instances")
    p.add_argument("--catalog", required=True, help=f"one of {', '.join(cat.CATALOGS)}")
    p.add_argument("--out", help="directory to write one document per instance")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, inp: TextIO | None = None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.func is cmd_play:
            return cmd_play(args, out, inp)
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (SemanticError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
