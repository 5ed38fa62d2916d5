"""Random test inputs: e-colored ad-AND/OR graphs and tree-coloring instances."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .core import AND, OR, AndOrGraph, RawGraph, RawNode, build_graph, count_solutions
from .dp import FORBIDDEN, ColoringInstance, GroupingMap


def random_raw_graph(rng: random.Random, max_or: int = 25, n_colors: int = 4,
                     share_and: float = 0.25, depth_bias: float = 0.0) -> RawGraph:
    """Grow a graph bottom up, so it is acyclic and decomposable by construction.

    New AND nodes pick children with distinct colors and disjoint
    descendant sets among existing OR+ nodes; sharing of OR+ nodes between
    AND nodes (and of AND nodes between OR nodes) is frequent.  A positive
    ``depth_bias`` prefers recently created children, giving deeper graphs
    with many more solutions.
    """
    colors = [f"c{i}" for i in range(n_colors)]
    kind, color, children, desc = {}, {}, {}, {}
    ors: List[int] = []
    ands: List[int] = []

    def new(k: str, c: Optional[str] = None) -> int:
        v = len(kind)
        kind[v], children[v] = k, []
        if c is not None:
            color[v] = c
        return v

    n_or = rng.randint(3, max_or)
    n_goals = rng.randint(1, max(1, min(6, n_or - 2)))
    for _ in range(n_goals):
        v = new(OR, rng.choice(colors))
        desc[v] = 1 << v
        ors.append(v)
    for _ in range(n_or - n_goals):
        o = new(OR, rng.choice(colors))
        picked = set()
        for _ in range(rng.choice((1, 1, 2, 2, 3))):
            if ands and rng.random() < share_and:
                picked.add(rng.choice(ands))
                continue
            x = new(AND)
            rank = {c: i / len(ors) for i, c in enumerate(ors)}
            pool = sorted(ors, key=lambda c: rng.random() - depth_bias * rank[c])
            used_colors, reach = set(), 0
            width = rng.randint(1, 3)
            for c in pool:
                if len(children[x]) >= width:
                    break
                if color[c] not in used_colors and not (desc[c] & reach):
                    children[x].append(c)
                    used_colors.add(color[c])
                    reach |= desc[c]
            desc[x] = reach | (1 << x)
            ands.append(x)
            picked.add(x)
        children[o] = sorted(picked)
        desc[o] = (1 << o)
        for x in picked:
            desc[o] |= desc[x]
        ors.append(o)
    nodes = [RawNode(v, kind[v], color.get(v)) for v in sorted(kind)]
    arcs = [(u, v) for u in sorted(kind) for v in children[u]]
    return RawGraph(colors, nodes, arcs)


def random_graph(rng: random.Random, max_or: int = 25, n_colors: int = 4,
                 max_solutions: int = 2 ** 16, share_and: float = 0.25,
                 depth_bias: float = 0.0) -> AndOrGraph:
    """A validated random graph with at most ``max_solutions`` solution subtrees."""
    while True:
        g = build_graph(random_raw_graph(rng, max_or, n_colors, share_and, depth_bias))
        if count_solutions(g) <= max_solutions:
            return g


@dataclass
class CorpusConfig:
    """Seeded graph corpus; every second graph uses ``depth_bias``."""

    seed: int = 20240601
    size: int = 240
    max_or: int = 25
    max_colors: int = 4
    max_solutions: int = 2 ** 16
    share_and: float = 0.4
    depth_bias: float = 2.0

    def graphs(self) -> List[AndOrGraph]:
        rng = random.Random(self.seed)
        return [random_graph(rng, self.max_or, rng.randint(1, self.max_colors), self.max_solutions,
                             self.share_and, self.depth_bias if i % 2 else 0.0)
                for i in range(self.size)]


def random_coloring_instance(rng: random.Random, max_nodes: int = 8, max_colors: int = 4,
                             forbid: float = 0.15) -> ColoringInstance:
    n = rng.randint(1, max_nodes)
    nodes = [f"v{i}" for i in range(n)]
    children = {v: [] for v in nodes}
    for i in range(1, n):
        children[nodes[rng.randrange(i)]].append(nodes[i])
    colors = [f"k{i}" for i in range(rng.randint(1, max_colors))]
    pair_cost = {}
    for a in colors:
        for b in colors:
            pair_cost[(a, b)] = FORBIDDEN if rng.random() < forbid else Fraction(rng.randint(0, 3), rng.choice((1, 1, 2)))
    allowed, fixed = {}, {}
    for v in nodes:
        if rng.random() < 0.3:
            allowed[v] = rng.sample(colors, rng.randint(1, len(colors)))
        if not children[v] and rng.random() < 0.5:
            fixed[v] = rng.choice(allowed.get(v, colors))
    return ColoringInstance(nodes[0], children, colors, pair_cost, 0, allowed, fixed)


def random_grouping(rng: random.Random, colors) -> GroupingMap:
    groups = [f"g{i}" for i in range(rng.randint(1, len(colors)))]
    mapping = {c: rng.choice(groups) for c in colors}
    order = [x for x in groups if x in mapping.values()]
    rng.shuffle(order)
    return GroupingMap(mapping, order)
