"""JSON documents for graphs and coloring instances, and class expressions.

Class expressions follow ``class := color | color "(" class ("," class)* ")"``
with children in increasing color order and no whitespace.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import AndOrGraph, ClassTree, FormatError, RawGraph, RawNode
from .dp import FORBIDDEN, ColoringInstance, GroupingMap

NAME = re.compile(r"[^\s(),]+")


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from None


def _expect(cond: bool, where: str, what: str) -> None:
    if not cond:
        raise FormatError(f"{where}: {what}")


def parse_graph(text: str) -> RawGraph:
    doc = _load(text)
    _expect(isinstance(doc, dict), "document", "expected an object")
    colors = doc.get("colors", [])
    _expect(isinstance(colors, list) and all(isinstance(c, str) for c in colors),
            "colors", "expected a list of names")
    for i, c in enumerate(colors):
        _expect(NAME.fullmatch(c) is not None, f"colors[{i}]", f"bad color name {c!r}")
    nodes = []
    raw_nodes = doc.get("nodes")
    _expect(isinstance(raw_nodes, list), "nodes", "expected a list")
    for i, n in enumerate(raw_nodes):
        where = f"nodes[{i}]"
        _expect(isinstance(n, dict), where, "expected an object")
        _expect(set(n) <= {"id", "kind", "color", "origin"}, where, f"unknown keys {sorted(set(n) - {'id', 'kind', 'color', 'origin'})}")
        _expect(_is_id(n.get("id")), where, "id must be a nonnegative integer")
        _expect(n.get("kind") in ("and", "or"), where, "kind must be \"and\" or \"or\"")
        color = n.get("color")
        _expect(color is None or isinstance(color, str), where, "color must be a name")
        origin = n.get("origin")
        _expect(origin is None or _is_id(origin), where, "origin must be a nonnegative integer")
        nodes.append(RawNode(n["id"], n["kind"], color, origin))
    arcs = []
    raw_arcs = doc.get("arcs", [])
    _expect(isinstance(raw_arcs, list), "arcs", "expected a list")
    known = {n.id for n in nodes}
    for i, a in enumerate(raw_arcs):
        where = f"arcs[{i}]"
        _expect(isinstance(a, list) and len(a) == 2 and all(map(_is_id, a)), where,
                "expected [from_id, to_id]")
        for end in a:
            _expect(end in known, where, f"unknown node id {end}")
        arcs.append((a[0], a[1]))
    return RawGraph(colors, nodes, arcs)


def _is_id(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def graph_document(raw: RawGraph) -> dict:
    nodes = []
    for n in sorted(raw.nodes, key=lambda n: n.id):
        entry = {"id": n.id, "kind": n.kind}
        if n.color is not None:
            entry["color"] = n.color
        if n.origin is not None:
            entry["origin"] = n.origin
        nodes.append(entry)
    return {"colors": list(raw.colors), "nodes": nodes, "arcs": [list(a) for a in sorted(raw.arcs)]}


def dump_graph(graph) -> str:
    """Canonical text of a graph (AndOrGraph or RawGraph): one node or arc per line."""
    raw = graph.to_raw() if isinstance(graph, AndOrGraph) else graph
    doc = graph_document(raw)
    lines = ["{", f'  "colors": {json.dumps(doc["colors"])},', '  "nodes": [']
    lines += [f"    {json.dumps(n)}," for n in doc["nodes"]]
    _strip_comma(lines)
    lines += ["  ],", '  "arcs": [']
    lines += [f"    {json.dumps(a)}," for a in doc["arcs"]]
    _strip_comma(lines)
    lines += ["  ]", "}"]
    return "\n".join(lines) + "\n"


def _strip_comma(lines: List[str]) -> None:
    if lines[-1].endswith(","):
        lines[-1] = lines[-1][:-1]


def format_class(tree: ClassTree, names: Sequence[str]) -> str:
    return tree.format(names)


def parse_class(text: str, names: Sequence[str]) -> ClassTree:
    index = {n: i for i, n in enumerate(names)}
    pos = 0

    def name() -> int:
        nonlocal pos
        m = NAME.match(text, pos)
        if not m:
            raise FormatError(f"class expression: color name expected at offset {pos}")
        if m.group() not in index:
            raise FormatError(f"class expression: unknown color {m.group()!r}")
        pos = m.end()
        return index[m.group()]

    def node() -> ClassTree:
        nonlocal pos
        color = name()
        kids = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids.append(node())
            while pos < len(text) and text[pos] == ",":
                pos += 1
                kids.append(node())
            if pos >= len(text) or text[pos] != ")":
                raise FormatError(f"class expression: ')' expected at offset {pos}")
            pos += 1
        try:
            return ClassTree(color, tuple(kids))
        except ValueError as exc:
            raise FormatError(f"class expression: {exc}") from None

    tree = node()
    if pos != len(text):
        raise FormatError(f"class expression: trailing input at offset {pos}")
    return tree


def _cost(value, where: str):
    if value == "forbidden":
        return FORBIDDEN
    if isinstance(value, bool):
        raise FormatError(f"{where}: bad cost {value!r}")
    try:
        cost = Fraction(str(value)) if isinstance(value, (int, float, str)) else None
    except ValueError:
        cost = None
    if cost is None or cost < 0:
        raise FormatError(f"{where}: cost must be a nonnegative number, a fraction string or \"forbidden\"")
    return cost


def parse_instance(text: str) -> Tuple[ColoringInstance, Optional[GroupingMap]]:
    """Read a coloring instance document; the grouping is optional."""
    doc = _load(text)
    _expect(isinstance(doc, dict), "document", "expected an object")
    colors = doc.get("colors")
    _expect(isinstance(colors, list) and colors and all(isinstance(c, str) for c in colors),
            "colors", "expected a nonempty list of names")
    _expect(len(set(colors)) == len(colors), "colors", "duplicate color")
    children, allowed, fixed = {}, {}, {}

    def walk(n, where):
        _expect(isinstance(n, dict) and "id" in n, where, "tree node needs an id")
        v = str(n["id"])
        _expect(NAME.fullmatch(v) is not None, where, f"bad node id {v!r}")
        _expect(v not in children, where, f"duplicate node id {v!r}")
        kids = n.get("children", [])
        _expect(isinstance(kids, list), where, "children must be a list")
        children[v] = []
        if "allowed" in n:
            _expect(isinstance(n["allowed"], list) and set(n["allowed"]) <= set(colors), where,
                    "allowed must list declared colors")
            allowed[v] = list(n["allowed"])
        if "fixed" in n:
            _expect(n["fixed"] in colors, where, f"fixed color {n['fixed']!r} not declared")
            fixed[v] = n["fixed"]
        for i, k in enumerate(kids):
            children[v].append(walk(k, f"{where}.children[{i}]"))
        return v

    root = walk(doc.get("tree"), "tree")
    symmetric = doc.get("symmetric", True)
    pair_cost = {}
    for i, entry in enumerate(doc.get("pair_costs", [])):
        where = f"pair_costs[{i}]"
        _expect(isinstance(entry, dict) and entry.get("a") in colors and entry.get("b") in colors,
                where, "expected {a, b, cost} over declared colors")
        cost = _cost(entry.get("cost"), where)
        pair_cost[(entry["a"], entry["b"])] = cost
        if symmetric:
            pair_cost[(entry["b"], entry["a"])] = cost
    default = _cost(doc.get("default_cost", 0), "default_cost")
    try:
        instance = ColoringInstance(root, children, colors, pair_cost, default, allowed, fixed)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    grouping = None
    if "grouping" in doc:
        g = doc["grouping"]
        _expect(isinstance(g, dict) and isinstance(g.get("map"), dict), "grouping", "expected {map, order}")
        _expect(set(g["map"]) == set(colors), "grouping.map", "must assign a group to every color")
        order = g.get("order") or list(dict.fromkeys(g["map"][c] for c in colors))
        for x in order:
            _expect(isinstance(x, str) and NAME.fullmatch(x) is not None, "grouping.order", f"bad group name {x!r}")
        try:
            grouping = GroupingMap(dict(g["map"]), list(order))
        except ValueError as exc:
            raise FormatError(f"grouping: {exc}") from None
    return instance, grouping
