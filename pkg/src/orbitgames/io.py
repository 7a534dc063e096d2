"""Instance documents (JSON) and DOT output.

An instance document is one JSON object with optional sections::

    {
      "name": "sierpinski-trivial",
      "space":  {"n_points": 2, "basis": [[1], [0, 1]]},
      "group":  {"order": 1, "mult": [[0]], "identity": 0, "inv": [0],
                 "filter_chain": [[0]]},
      "action": {"table": [[0, 1]]},
      "groupoid": {"n_arrows": 1, "objects": [true], "src": [0], "rng": [0],
                   "comp": [[0, 0, 0]], "inv": [0], "basis": [[0]]},
      "structures": {"language": [["E", 2]],
                     "items": {"a": {"universe_size": 2, "relations": {"E": [[0, 1]]}}}},
      "sequences": {"x": ["a", "b"], "y": ["b", "a"]}
    }

``mult`` is row-major: ``mult[g][h]`` is the product ``gh``.  A flat list of
``order * order`` entries is accepted on input.  ``action.table[g][x]`` is
``g.x``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .groupoids import FiniteGroupoid
from .models import RelStructure, SeqInstance
from .orbit_games import OrbitQuotientGraph
from .spaces import FiniteSpace, GroupAction, TopGroup


class ParseError(ValueError):
    """Malformed instance document (exit status 2)."""


@dataclass(frozen=True)
class InstanceDoc:
    name: str = ""
    space: FiniteSpace | None = None
    group: TopGroup | None = None
    table: tuple[tuple[int, ...], ...] | None = None
    groupoid: FiniteGroupoid | None = None
    language: tuple[tuple[str, int], ...] | None = None
    structures: Mapping[str, RelStructure] = field(default_factory=dict)
    sequences: Mapping[str, SeqInstance] = field(default_factory=dict)

    @property
    def action(self) -> GroupAction | None:
        if self.space is None or self.group is None or self.table is None:
            return None
        return GroupAction(self.group, self.space, self.table)

    @classmethod
    def from_action(cls, action: GroupAction, name: str = "") -> "InstanceDoc":
        return cls(name=name, space=action.space, group=action.group, table=action.table)


def _req(d: Mapping, key: str, where: str):
    if not isinstance(d, Mapping) or key not in d:
        raise ParseError(f"{where}: missing field {key!r}")
    return d[key]


def _int(v, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"{where}: expected an integer, got {v!r}")
    return v


def _int_list(v, where: str) -> list[int]:
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected a list, got {type(v).__name__}")
    return [_int(x, where) for x in v]


def _int_lists(v, where: str) -> list[list[int]]:
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected a list of lists")
    return [_int_list(x, where) for x in v]


def _parse_mult(v, order: int) -> list[list[int]]:
    if isinstance(v, list) and v and all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        if len(v) != order * order:
            raise ParseError(f"group.mult: flat table needs {order * order} entries, got {len(v)}")
        return [v[i * order:(i + 1) * order] for i in range(order)]
    return _int_lists(v, "group.mult")


def parse_doc(data: Any) -> InstanceDoc:
    """Build an :class:`InstanceDoc` from decoded JSON; raises :class:`ParseError`."""
    if not isinstance(data, Mapping):
        raise ParseError("instance document must be a JSON object")
    name = data.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name must be a string")
    space = group = table = groupoid = language = None
    structures: dict[str, RelStructure] = {}
    sequences: dict[str, SeqInstance] = {}
    if "space" in data:
        s = data["space"]
        space = FiniteSpace(_int(_req(s, "n_points", "space"), "space.n_points"),
                            tuple(frozenset(b) for b in _int_lists(_req(s, "basis", "space"), "space.basis")))
    if "group" in data:
        g = data["group"]
        order = _int(_req(g, "order", "group"), "group.order")
        group = TopGroup(
            order,
            tuple(tuple(r) for r in _parse_mult(_req(g, "mult", "group"), order)),
            _int(g.get("identity", 0), "group.identity"),
            tuple(_int_list(_req(g, "inv", "group"), "group.inv")),
            tuple(frozenset(c) for c in _int_lists(_req(g, "filter_chain", "group"), "group.filter_chain")),
        )
    if "action" in data:
        table = tuple(tuple(r) for r in _int_lists(_req(data["action"], "table", "action"), "action.table"))
    if "groupoid" in data:
        gd = data["groupoid"]
        n = _int(_req(gd, "n_arrows", "groupoid"), "groupoid.n_arrows")
        flags = _req(gd, "objects", "groupoid")
        if not isinstance(flags, list) or len(flags) != n or not all(isinstance(f, bool) for f in flags):
            raise ParseError("groupoid.objects: expected one boolean flag per arrow")
        comp = {}
        for t in _int_lists(_req(gd, "comp", "groupoid"), "groupoid.comp"):
            if len(t) != 3:
                raise ParseError(f"groupoid.comp: entries are [a, b, ab] triples, got {t}")
            comp[(t[0], t[1])] = t[2]
        groupoid = FiniteGroupoid(
            n,
            tuple(i for i, f in enumerate(flags) if f),
            tuple(_int_list(_req(gd, "src", "groupoid"), "groupoid.src")),
            tuple(_int_list(_req(gd, "rng", "groupoid"), "groupoid.rng")),
            comp,
            tuple(_int_list(_req(gd, "inv", "groupoid"), "groupoid.inv")),
            tuple(frozenset(b) for b in _int_lists(_req(gd, "basis", "groupoid"), "groupoid.basis")),
        )
    if "structures" in data:
        st = data["structures"]
        lang = _req(st, "language", "structures")
        if not isinstance(lang, list) or not all(isinstance(r, list) and len(r) == 2 for r in lang):
            raise ParseError("structures.language: expected [name, arity] pairs")
        language = tuple((str(r), _int(k, "structures.language")) for r, k in lang)
        items = _req(st, "items", "structures")
        if not isinstance(items, Mapping):
            raise ParseError("structures.items must be an object")
        for key, item in items.items():
            rels = item.get("relations", {}) if isinstance(item, Mapping) else None
            if not isinstance(rels, Mapping):
                raise ParseError(f"structures.items.{key}.relations must be an object")
            try:
                structures[key] = RelStructure(
                    _int(_req(item, "universe_size", f"structures.items.{key}"), "universe_size"),
                    language,
                    {r: frozenset(tuple(t) for t in _int_lists(ts, f"structures.items.{key}")) for r, ts in rels.items()},
                )
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(f"structures.items.{key}: {exc}") from exc
    if "sequences" in data:
        sq = data["sequences"]
        if not isinstance(sq, Mapping):
            raise ParseError("sequences must be an object of letter lists")
        for key, letters in sq.items():
            if not isinstance(letters, list) or not all(isinstance(c, (str, int)) and not isinstance(c, bool) for c in letters):
                raise ParseError(f"sequences.{key}: expected a list of letters")
            sequences[key] = SeqInstance(tuple(letters))
    return InstanceDoc(name, space, group, table, groupoid, language, structures, sequences)


def doc_to_dict(doc: InstanceDoc) -> dict:
    out: dict[str, Any] = {"name": doc.name}
    if doc.space is not None:
        out["space"] = {"n_points": doc.space.n_points, "basis": [sorted(b) for b in doc.space.basis]}
    if doc.group is not None:
        g = doc.group
        out["group"] = {"order": g.order, "mult": [list(r) for r in g.mult], "identity": g.identity,
                        "inv": list(g.inv), "filter_chain": [sorted(c) for c in g.filter_chain]}
    if doc.table is not None:
        out["action"] = {"table": [list(r) for r in doc.table]}
    if doc.groupoid is not None:
        gd = doc.groupoid
        out["groupoid"] = {
            "n_arrows": gd.n_arrows,
            "objects": [a in gd.object_set for a in range(gd.n_arrows)],
            "src": list(gd.src), "rng": list(gd.rng),
            "comp": [[a, b, c] for (a, b), c in sorted(gd.comp.items())],
            "inv": list(gd.inv),
            "basis": [sorted(b) for b in gd.basis],
        }
    if doc.structures:
        lang = doc.language or next(iter(doc.structures.values())).language
        out["structures"] = {
            "language": [[r, k] for r, k in lang],
            "items": {key: {"universe_size": s.universe_size,
                            "relations": {r: sorted(list(t) for t in ts) for r, ts in s.interpretation.items()}}
                      for key, s in doc.structures.items()},
        }
    if doc.sequences:
        out["sequences"] = {k: list(s.entries) for k, s in doc.sequences.items()}
    return out


def dumps(obj: Any) -> str:
    """Deterministic JSON text used for every structured output."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def emit_doc(doc: InstanceDoc) -> str:
    return json.dumps(doc_to_dict(doc), indent=2) + "\n"


def loads_doc(text: str) -> InstanceDoc:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return parse_doc(data)


def read_doc(path: str) -> InstanceDoc:
    with open(path, encoding="utf-8") as fh:
        return loads_doc(fh.read())


def emit_dot(graph: OrbitQuotientGraph) -> str:
    """DOT text for an orbit-quotient graph.

    Nodes are named by the least point of each orbit, in increasing order;
    Becker edges are directed from ``[x]`` to ``[y]`` when ``x`` embeds into ``y``.
    """
    directed = graph.kind == "becker"
    arrow = "->" if directed else "--"
    order = sorted(range(len(graph.vertices)), key=graph.representative)
    lines = [f"{'digraph' if directed else 'graph'} {graph.kind} {{"]
    for i in order:
        rep = graph.representative(i)
        members = ",".join(str(p) for p in sorted(graph.vertices[i]))
        lines.append(f'  "{rep}" [label="[{rep}] = {{{members}}}"];')
    edges = sorted((graph.representative(i), graph.representative(j)) for i, j in graph.edges)
    for a, b in edges:
        lines.append(f'  "{a}" {arrow} "{b}" [class="{graph.kind}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
