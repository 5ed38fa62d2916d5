"""Restriction of an e-colored graph to the solutions of a single class.

Marks are kept on (graph node, class node) pairs rather than on graph nodes.
A node reachable at two different positions of the same class (through
different solutions) would otherwise keep the AND children of both
positions, and the marked subgraph would admit solutions of other classes.
The restricted graph is therefore built over the marked pairs; each of its
nodes records the original node it stands for in ``graph.origin``.  When
every node is met at one position only, this is exactly the subgraph of
marked nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .core import (AND, OR, AndOrGraph, ClassTree, FormatError, RawGraph, RawNode,
                   SolutionSubtree, count_solutions, ensure_recursion_depth,
                   enumerate_solutions)

Pair = Tuple[int, ClassTree]


@dataclass
class MarkedGraph:
    base: AndOrGraph
    tree: ClassTree
    marked: Dict[Pair, bool]

    def is_marked(self, node: int, v: ClassTree) -> bool:
        return self.marked.get((node, v), False)

    def marked_nodes(self) -> set:
        return {s for (s, _), m in self.marked.items() if m}


def mark(graph: AndOrGraph, t: ClassTree, roots: Optional[Sequence[int]] = None) -> MarkedGraph:
    graph.require_coloring()
    ensure_recursion_depth(graph)
    _check_colors(graph, t)
    g = graph
    marked: Dict[Pair, bool] = {}

    def visit_or(s: int, v: ClassTree) -> bool:
        key = (s, v)
        if key in marked:
            return marked[key]
        if g.is_goal(s):
            ok = v.is_leaf
        else:
            ok = False
            for x in g.children[s]:
                if g.color_tuple(x) == v.tuple and visit_and(x, v):
                    ok = True
        marked[key] = ok
        return ok

    def visit_and(x: int, v: ClassTree) -> bool:
        key = (x, v)
        if key in marked:
            return marked[key]
        # both sides are sorted by color, so children pair up positionally
        results = [visit_or(s, w) for s, w in zip(g.children[x], v.children)]
        marked[key] = all(results)
        return marked[key]

    for s0 in _roots(g, t, roots):
        visit_or(s0, t)
    return MarkedGraph(graph, t, marked)


def _roots(g: AndOrGraph, t: ClassTree, roots: Optional[Sequence[int]]) -> List[int]:
    return [s for s in (g.start_nodes if roots is None else sorted(set(roots))) if g.color[s] == t.color]


def _check_colors(graph: AndOrGraph, t: ClassTree) -> None:
    stack = [t]
    while stack:
        v = stack.pop()
        if not 0 <= v.color < len(graph.color_names):
            raise FormatError(f"class color index {v.color} is not in the graph's color order")
        stack.extend(v.children)


def restrict_to_class(graph: AndOrGraph, t: ClassTree, roots: Optional[Sequence[int]] = None) -> AndOrGraph:
    """Graph whose solution subtrees are exactly the solutions of ``graph`` projecting to ``t``.

    Only marked pairs reachable from a marked start pair are kept, so the
    result has no AND node without parent and no spurious start node.  If
    ``t`` is not a class of ``graph`` the result is empty.  ``roots``
    replaces the start nodes when given (classes of G/roots).
    """
    mg = mark(graph, t, roots)
    g = graph
    ids: Dict[Pair, int] = {}
    nodes: List[RawNode] = []
    arcs: List[Tuple[int, int]] = []
    labels = {}

    def node_id(pair: Pair) -> int:
        if pair not in ids:
            ids[pair] = len(ids)
            s = pair[0]
            color = g.color_names[g.color[s]] if g.kind[s] == OR else None
            nodes.append(RawNode(ids[pair], g.kind[s], color, s))
            if s in g.labels:
                labels[ids[pair]] = g.labels[s]
        return ids[pair]

    tops = [(s0, t) for s0 in _roots(g, t, roots) if mg.is_marked(s0, t)]
    stack = list(reversed(tops))
    done = set()
    for r in tops:
        node_id(r)
    while stack:
        pair = stack.pop()
        if pair in done:
            continue
        done.add(pair)
        s, v = pair
        if g.kind[s] == AND:
            kids = list(zip(g.children[s], v.children))
        else:
            kids = [(x, v) for x in g.children[s] if mg.is_marked(x, v)]
        for kid in kids:
            arcs.append((node_id(pair), node_id(kid)))
        stack.extend(reversed(kids))
    raw = RawGraph(list(g.color_names), nodes, arcs)
    return AndOrGraph(raw, labels)


def _lift(sol: SolutionSubtree, graph: AndOrGraph, restricted: AndOrGraph) -> SolutionSubtree:
    back = restricted.origin or {}
    return SolutionSubtree(
        graph, back[sol.root],
        {back[o]: back[x] for o, x in sol.chosen.items()},
        frozenset(back[v] for v in sol.node_set),
    )


def _solutions_root_set(restricted: AndOrGraph):
    # a restriction to a single-node class consists of bare goal nodes
    return restricted.sub(restricted.start_nodes or restricted.ids) if len(restricted) else restricted


def count_in_class(graph: AndOrGraph, t: ClassTree, roots: Optional[Sequence[int]] = None) -> int:
    return count_solutions(_solutions_root_set(restrict_to_class(graph, t, roots)))


def enumerate_in_class(graph: AndOrGraph, t: ClassTree,
                       roots: Optional[Sequence[int]] = None) -> Iterator[SolutionSubtree]:
    """Solutions of ``graph`` (in its own node ids) that project to ``t``."""
    restricted = restrict_to_class(graph, t, roots)
    for sol in enumerate_solutions(_solutions_root_set(restricted)):
        yield _lift(sol, graph, restricted)
