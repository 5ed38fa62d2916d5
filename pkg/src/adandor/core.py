"""Acyclic decomposable AND/OR graphs, their solution subtrees and projection.

Node ids are arbitrary nonnegative integers chosen by whoever builds the
graph; every report and every returned structure refers to them directly.
Colors are stored as indices into ``color_names``, so comparing two colors
is comparing two ints.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

AND = "and"
OR = "or"

# colors are indices into the declared color list, which fixes their order
ColorId = int
ColorTuple = Tuple[int, ...]


class FormatError(ValueError):
    """Malformed graph description (as opposed to an invariant violation)."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class InvalidGraphError(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(str(v) for v in report.violations))


class ColoringRequiredError(ValueError):
    pass


@dataclass(frozen=True)
class RawNode:
    id: int
    kind: str
    color: Optional[str] = None
    origin: Optional[int] = None


@dataclass
class RawGraph:
    """Unvalidated graph description, as read from a document."""

    colors: List[str]
    nodes: List[RawNode]
    arcs: List[Tuple[int, int]]


@dataclass(frozen=True)
class Violation:
    rule: str
    nodes: Tuple[int, ...]
    message: str = ""

    def __str__(self) -> str:
        ids = ",".join(map(str, self.nodes))
        text = f"{self.rule} at [{ids}]"
        return f"{text}: {self.message}" if self.message else text


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_format(raw: RawGraph) -> None:
    if len(set(raw.colors)) != len(raw.colors):
        raise FormatError("duplicate color name in color order")
    declared = set(raw.colors)
    seen = set()
    for node in raw.nodes:
        if not isinstance(node.id, int) or isinstance(node.id, bool) or node.id < 0:
            raise FormatError(f"node id {node.id!r} is not a nonnegative integer")
        if node.id in seen:
            raise FormatError(f"duplicate node id {node.id}")
        seen.add(node.id)
        if node.kind not in (AND, OR):
            raise FormatError(f"node {node.id}: unknown kind {node.kind!r}")
        if node.color is not None:
            if node.kind == AND:
                raise FormatError(f"node {node.id}: AND nodes carry no color")
            if node.color not in declared:
                raise FormatError(f"node {node.id}: color {node.color!r} not in the declared color order")
    arcs = set()
    for k, (u, v) in enumerate(raw.arcs):
        for end in (u, v):
            if end not in seen:
                raise FormatError(f"arc #{k} ({u} -> {v}) references unknown node {end}")
        if (u, v) in arcs:
            raise FormatError(f"arc #{k} ({u} -> {v}) is duplicated")
        arcs.add((u, v))


def _topological_order(ids: Iterable[int], children: Mapping[int, Sequence[int]]) -> List[int]:
    """Parents before children.  Raises CycleError."""
    ts = TopologicalSorter({v: () for v in ids})
    for u, kids in children.items():
        for v in kids:
            ts.add(v, u)
    return list(ts.static_order())


def _descendant_bits(order: Sequence[int], children: Mapping[int, Sequence[int]]) -> Dict[int, int]:
    """Reachability sets (node included) as int bitsets over positions in ``order``."""
    pos = {v: i for i, v in enumerate(order)}
    desc: Dict[int, int] = {}
    for v in reversed(order):
        bits = 1 << pos[v]
        for c in children[v]:
            bits |= desc[c]
        desc[v] = bits
    return desc


def validate_graph(raw: RawGraph) -> ValidationReport:
    """Check every ad-AND/OR invariant; raise FormatError for malformed input."""
    _check_format(raw)
    kind = {n.id: n.kind for n in raw.nodes}
    color = {n.id: n.color for n in raw.nodes}
    children: Dict[int, List[int]] = {v: [] for v in kind}
    indeg = dict.fromkeys(kind, 0)
    report = ValidationReport()
    for u, v in raw.arcs:
        children[u].append(v)
        indeg[v] += 1
        if kind[u] == kind[v]:
            report.violations.append(
                Violation("bipartite", (u, v), f"arc joins two {kind[u].upper()} nodes"))

    try:
        order = _topological_order(kind, children)
    except CycleError as exc:
        cycle = tuple(dict.fromkeys(exc.args[1]))
        report.violations.append(Violation("acyclic", cycle, "directed cycle"))
        order = None

    for v in sorted(kind):
        if kind[v] != AND:
            continue
        if indeg[v] == 0:
            report.violations.append(Violation("and-in-degree", (v,), "AND node without parent"))
        if not children[v]:
            report.violations.append(Violation("and-out-degree", (v,), "AND node without children"))

    if order is not None:
        desc = _descendant_bits(order, children)
        for v in sorted(kind):
            if kind[v] != AND:
                continue
            kids = children[v]
            for i in range(len(kids)):
                for j in range(i + 1, len(kids)):
                    if desc[kids[i]] & desc[kids[j]]:
                        report.violations.append(Violation(
                            "decomposable", (v, kids[i], kids[j]),
                            "children reach a common node"))

    if all(color[v] is not None for v in kind if kind[v] == OR):
        for v in sorted(kind):
            if kind[v] != AND:
                continue
            by_color: Dict[str, int] = {}
            for c in children[v]:
                if color[c] in by_color:
                    report.violations.append(Violation(
                        "distinct child colors", (v, by_color[color[c]], c),
                        f"two children colored {color[c]}"))
                else:
                    by_color[color[c]] = c
    return report


class AndOrGraph:
    """A validated, immutable ad-AND/OR graph.

    Build one with :func:`build_graph`; the constructor assumes the input
    already passed :func:`validate_graph`.
    """

    def __init__(self, raw: RawGraph, labels: Optional[Mapping[int, object]] = None):
        self.color_names: Tuple[str, ...] = tuple(raw.colors)
        color_index = {name: i for i, name in enumerate(self.color_names)}
        self.kind: Dict[int, str] = {n.id: n.kind for n in raw.nodes}
        self.color: Dict[int, int] = {
            n.id: color_index[n.color] for n in raw.nodes if n.color is not None}
        origin = {n.id: n.origin for n in raw.nodes if n.origin is not None}
        self.origin: Optional[Dict[int, int]] = origin or None
        self.labels: Dict[int, object] = dict(labels or {})
        kids: Dict[int, List[int]] = {v: [] for v in self.kind}
        parents: Dict[int, List[int]] = {v: [] for v in self.kind}
        for u, v in raw.arcs:
            kids[u].append(v)
            parents[v].append(u)
        self.colored = all(v in self.color for v in self.kind if self.kind[v] == OR)
        if self.colored:
            for v, cs in kids.items():
                cs.sort(key=lambda c: (self.color.get(c, -1), c))
        else:
            for cs in kids.values():
                cs.sort()
        self.children: Dict[int, Tuple[int, ...]] = {v: tuple(cs) for v, cs in kids.items()}
        self.parents: Dict[int, Tuple[int, ...]] = {v: tuple(sorted(ps)) for v, ps in parents.items()}
        self.ids: Tuple[int, ...] = tuple(sorted(self.kind))
        self.goal_nodes: Tuple[int, ...] = tuple(
            v for v in self.ids if self.kind[v] == OR and not self.children[v])
        self.start_nodes: Tuple[int, ...] = tuple(
            v for v in self.ids
            if self.kind[v] == OR and self.children[v] and not self.parents[v])
        self.order: Tuple[int, ...] = tuple(_topological_order(self.ids, self.children))

    def __len__(self) -> int:
        return len(self.kind)

    def __repr__(self) -> str:
        return f"AndOrGraph({len(self)} nodes, {len(self.start_nodes)} start nodes)"

    def is_and(self, v: int) -> bool:
        return self.kind[v] == AND

    def is_goal(self, v: int) -> bool:
        return self.kind[v] == OR and not self.children[v]

    def color_tuple(self, x: int) -> Tuple[int, ...]:
        """Sorted colors of the children of AND node ``x``."""
        return tuple(self.color[c] for c in self.children[x])

    def arcs(self) -> List[Tuple[int, int]]:
        return [(u, v) for u in self.ids for v in self.children[u]]

    def to_raw(self) -> RawGraph:
        names = self.color_names
        nodes = [
            RawNode(v, self.kind[v],
                    names[self.color[v]] if v in self.color else None,
                    self.origin.get(v) if self.origin else None)
            for v in self.ids
        ]
        return RawGraph(list(names), nodes, self.arcs())

    def require_coloring(self) -> None:
        if not self.colored:
            missing = [v for v in self.ids if self.kind[v] == OR and v not in self.color][:5]
            raise ColoringRequiredError(f"graph is not fully e-colored (uncolored: {missing})")

    def sub(self, roots: Iterable[int]) -> "Subproblem":
        return Subproblem(self, tuple(sorted(set(roots))))

    def reachable(self, roots: Iterable[int]) -> List[int]:
        seen = set()
        stack = list(roots)
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(self.children[v])
        return [v for v in self.order if v in seen]


AdAndOrGraph = AndOrGraph


def ensure_recursion_depth(graph: "AndOrGraph") -> None:
    """Raise the interpreter's recursion limit to fit walks along the longest path.

    Enumeration, projection and marking recurse once or a few times per
    level of a solution; long chains would otherwise hit the default limit.
    """
    need = 4 * len(graph) + 1000
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def build_graph(raw: RawGraph, labels: Optional[Mapping[int, object]] = None) -> AndOrGraph:
    report = validate_graph(raw)
    if not report.ok:
        raise InvalidGraphError(report)
    return AndOrGraph(raw, labels)


@dataclass(frozen=True)
class Subproblem:
    """The part of ``graph`` reachable from ``roots``, with ``roots`` as start set."""

    graph: AndOrGraph
    roots: Tuple[int, ...]

    def __post_init__(self):
        if not self.roots:
            raise ValueError("a subproblem needs at least one root")
        for v in self.roots:
            if self.graph.kind.get(v) != OR:
                raise ValueError(f"root {v} is not an OR+ node of the graph")


def as_subproblem(obj) -> Subproblem:
    if isinstance(obj, Subproblem):
        return obj
    return Subproblem(obj, obj.start_nodes) if obj.start_nodes else _EmptySub(obj)


class _EmptySub:
    # a graph without start nodes has no solutions
    def __init__(self, graph):
        self.graph = graph
        self.roots = ()


class SolutionSubtree:
    """One solution subtree: a start node plus the AND child chosen at each OR node."""

    __slots__ = ("graph", "root", "chosen", "node_set")

    def __init__(self, graph: AndOrGraph, root: int, chosen: Mapping[int, int], node_set: frozenset):
        self.graph = graph
        self.root = root
        self.chosen = dict(chosen)
        self.node_set = node_set

    def __eq__(self, other):
        return isinstance(other, SolutionSubtree) and self.node_set == other.node_set

    def __hash__(self):
        return hash(self.node_set)

    def __len__(self):
        return len(self.node_set)

    def __repr__(self):
        return f"SolutionSubtree(root={self.root}, nodes={sorted(self.node_set)})"

    def check(self) -> None:
        """Assert the solution-subtree conditions and tree shape against the graph.

        AND nodes may have several parents, so an OR node of the solution can
        have a second AND child inside the node set; the tree is rebuilt from
        the recorded choices instead of read off the node set.
        """
        g = self.graph
        assert not g.is_and(self.root), "root must be an OR+ node"
        seen = []
        stack = [self.root]
        while stack:
            v = stack.pop()
            seen.append(v)
            if g.is_and(v):
                stack.extend(g.children[v])
            elif not g.is_goal(v):
                x = self.chosen.get(v)
                assert x in g.children[v], f"OR {v} has no valid chosen AND child"
                stack.append(x)
        assert len(seen) == len(set(seen)), "some node is reached twice"
        assert frozenset(seen) == self.node_set, "node set does not match the chosen tree"


def count_solutions(sub) -> int:
    """Number of solution subtrees of G/O, exact."""
    sub = as_subproblem(sub)
    g = sub.graph
    count: Dict[int, int] = {}
    for v in reversed(g.reachable(sub.roots)):
        kids = g.children[v]
        if not kids:
            count[v] = 1
        elif g.is_and(v):
            n = 1
            for c in kids:
                n *= count[c]
            count[v] = n
        else:
            count[v] = sum(count[c] for c in kids)
    return sum(count[r] for r in sub.roots)


def max_solution_size(sub) -> int:
    """Largest node count of a solution subtree of G/O (0 when there is none)."""
    sub = as_subproblem(sub)
    g = sub.graph
    size: Dict[int, int] = {}
    for v in reversed(g.reachable(sub.roots)):
        kids = g.children[v]
        if not kids:
            size[v] = 1
        elif g.is_and(v):
            size[v] = 1 + sum(size[c] for c in kids)
        else:
            size[v] = 1 + max(size[c] for c in kids)
    return max((size[r] for r in sub.roots), default=0)


def enumerate_solutions(sub) -> Iterator[SolutionSubtree]:
    """Backtracking DFS over OR choices; each solution is produced exactly once."""
    sub = as_subproblem(sub)
    g = sub.graph
    ensure_recursion_depth(g)
    chosen: Dict[int, int] = {}
    nodes: List[int] = []

    def extend(pending: Tuple[int, ...]):
        if not pending:
            yield
            return
        o, rest = pending[-1], pending[:-1]
        nodes.append(o)
        if g.is_goal(o):
            yield from extend(rest)
        else:
            for x in g.children[o]:
                chosen[o] = x
                nodes.append(x)
                yield from extend(rest + g.children[x])
                nodes.pop()
            del chosen[o]
        nodes.pop()

    for root in sub.roots:
        for _ in extend((root,)):
            yield SolutionSubtree(g, root, chosen, frozenset(nodes))


@dataclass(frozen=True, order=False)
class ClassTree:
    """Canonical colored rooted tree: children sorted by strictly increasing color."""

    color: int
    children: Tuple["ClassTree", ...] = ()

    def __post_init__(self):
        cs = [c.color for c in self.children]
        if any(a >= b for a, b in zip(cs, cs[1:])):
            raise ValueError("children of a class tree need strictly increasing colors")
        # trees are dict keys during marking; hashing deep trees each time is quadratic
        object.__setattr__(self, "_hash", hash((self.color, self.children)))

    def __hash__(self):
        return self._hash

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def tuple(self) -> Tuple[int, ...]:
        return tuple(c.color for c in self.children)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def key(self):
        """Nested-tuple sort key: root color, children's color tuple, then children."""
        return (self.color, self.tuple, tuple(c.key() for c in self.children))

    def format(self, names: Sequence[str]) -> str:
        if not self.children:
            return names[self.color]
        return names[self.color] + "(" + ",".join(c.format(names) for c in self.children) + ")"


def project(t: SolutionSubtree) -> ClassTree:
    """Contract the AND nodes of a solution; colors come from its OR+ nodes."""
    g = t.graph
    g.require_coloring()
    ensure_recursion_depth(g)

    def build(o: int) -> ClassTree:
        if g.is_goal(o):
            return ClassTree(g.color[o])
        x = t.chosen[o]
        kids = sorted((build(c) for c in g.children[x]), key=lambda c: c.color)
        return ClassTree(g.color[o], tuple(kids))

    return build(t.root)
