"""Dynamic programming on trees, compiled into ad-AND/OR graphs.

A DP instance is a bottom-up tree automaton with an additive incremental
cost.  Its table is the usual min-sum recurrence; the graph construction
keeps one OR+ node per feasible state and one AND node per rule, and the
pruning step keeps only the arcs that achieve the optimum.  Costs are exact
(ints or Fractions); ``INF`` marks infeasible states.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from itertools import product
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .core import AND, OR, AndOrGraph, InvalidGraphError, RawGraph, RawNode, build_graph

INF = math.inf

State = Hashable
IncrementalCost = Callable[[Tuple[State, ...], Hashable], Fraction]
DpTable = Dict[State, object]


class UnsupportedInstanceError(ValueError):
    pass


class NoSolutionError(ValueError):
    pass


class GroupingError(ValueError):
    def __init__(self, message: str, witness: Optional[int] = None):
        self.witness = witness
        super().__init__(message)


class Rule(NamedTuple):
    """Transition (q_1, ..., q_n, a, q).  A leaf rule has ``children == (q0,)``."""

    children: Tuple[State, ...]
    symbol: Hashable
    target: State


@dataclass
class TreeAutomaton:
    states: Sequence[State]
    rules: Sequence[Rule]
    initial: State
    finals: FrozenSet[State]
    alphabet: Optional[Mapping[Hashable, int]] = None  # symbol -> rank, checked when given

    def __post_init__(self):
        known = set(self.states)
        if self.initial not in known:
            raise ValueError("initial state is not a state")
        for rule in self.rules:
            for q in rule.children + (rule.target,):
                if q not in known:
                    raise ValueError(f"rule {rule} uses unknown state {q!r}")
            if rule.target == self.initial:
                raise ValueError(f"rule {rule} leads into the initial state")
            if self.initial in rule.children and not self.is_leaf_rule(rule):
                raise ValueError(f"initial state may only appear alone, in (q0, a, q): {rule}")
            if self.alphabet is not None:
                rank = 0 if self.is_leaf_rule(rule) else len(rule.children)
                if self.alphabet.get(rule.symbol) != rank:
                    raise ValueError(f"symbol {rule.symbol!r} used with rank {rank}")
        if not set(self.finals) <= known:
            raise ValueError("final states must be states")

    def is_leaf_rule(self, rule: Rule) -> bool:
        return rule.children == (self.initial,)

    def post_order(self) -> List[State]:
        """States ordered so that every rule's children come before its target."""
        ts = TopologicalSorter({q: () for q in self.states})
        for rule in self.rules:
            if not self.is_leaf_rule(rule):
                ts.add(rule.target, *rule.children)
        try:
            return list(ts.static_order())
        except CycleError as exc:
            raise UnsupportedInstanceError(
                f"state dependencies are cyclic ({exc.args[1]}); no DP order exists") from None


@dataclass
class DpResult:
    table: DpTable
    optimum: object

    @property
    def feasible(self) -> bool:
        return self.optimum != INF


def _rule_value(automaton, cost, rule, table):
    if automaton.is_leaf_rule(rule):
        return 0
    total = 0
    for q in rule.children:
        total = total + table[q]
    if total == INF:
        return INF
    return total + cost(rule.children, rule.symbol)


def evaluate_dp(automaton: TreeAutomaton, cost: IncrementalCost) -> DpResult:
    into: Dict[State, List[Rule]] = {q: [] for q in automaton.states}
    for rule in automaton.rules:
        into[rule.target].append(rule)
    table: Dict[State, object] = {}
    for q in automaton.post_order():
        if q == automaton.initial:
            table[q] = 0
            continue
        table[q] = min((_rule_value(automaton, cost, r, table) for r in into[q]), default=INF)
    optimum = min((table[q] for q in automaton.finals), default=INF)
    return DpResult(table, optimum)


@dataclass
class ValuedGraph:
    """Graph of the unpruned construction; OR+ nodes carry their state in ``label``."""

    kind: Dict[int, str] = field(default_factory=dict)
    children: Dict[int, List[int]] = field(default_factory=dict)
    value: Dict[int, object] = field(default_factory=dict)
    label: Dict[int, object] = field(default_factory=dict)
    node_of: Dict[State, int] = field(default_factory=dict)
    finals: Tuple[int, ...] = ()

    def add(self, kind: str, value, label) -> int:
        v = len(self.kind)
        self.kind[v] = kind
        self.children[v] = []
        self.value[v] = value
        self.label[v] = label
        return v


def build_valued_graph(automaton: TreeAutomaton, cost: IncrementalCost) -> ValuedGraph:
    """Goal node per leaf rule, AND node per rule, one OR node per other state.

    States without any derivation get no node, and neither do the rules
    using them.  A state reachable both through leaf rules and other rules,
    or through several leaf rules, has no single OR+ node and is rejected.
    """
    into: Dict[State, List[Rule]] = {q: [] for q in automaton.states}
    for rule in automaton.rules:
        into[rule.target].append(rule)
    vg = ValuedGraph()
    for q in automaton.post_order():
        if q == automaton.initial or not into[q]:
            continue
        leaf = [r for r in into[q] if automaton.is_leaf_rule(r)]
        if leaf:
            if len(into[q]) > 1:
                raise UnsupportedInstanceError(f"state {q!r} needs a single leaf rule and nothing else")
            vg.node_of[q] = vg.add(OR, 0, q)
            continue
        ands = []
        for rule in into[q]:
            if any(c not in vg.node_of for c in rule.children):
                continue
            kids = [vg.node_of[c] for c in rule.children]
            value = sum((vg.value[k] for k in kids), 0) + cost(rule.children, rule.symbol)
            x = vg.add(AND, value, rule)
            vg.children[x] = kids
            ands.append(x)
        if not ands:
            continue
        o = vg.add(OR, min(vg.value[x] for x in ands), q)
        vg.children[o] = ands
        vg.node_of[q] = o
    vg.finals = tuple(vg.node_of[q] for q in automaton.finals if q in vg.node_of)
    return vg


@dataclass
class PrunedGraph:
    """Optimal part of a DP graph; its solutions are those of G/roots."""

    graph: AndOrGraph
    roots: Tuple[int, ...]
    optimum: object


def _close(a, b, tol) -> bool:
    return a == b if not tol else abs(a - b) <= tol


def prune_optimal(vg: ValuedGraph, tol: float = 0) -> PrunedGraph:
    """Keep optimal finals, drop OR->AND arcs that miss the OR value, drop unreachable nodes.

    With ``tol`` > 0 values are compared with that absolute tolerance
    (float costs); the default is exact comparison.
    """
    if not vg.finals:
        raise NoSolutionError("no final state is feasible")
    optimum = min(vg.value[f] for f in vg.finals)
    if optimum == INF:
        raise NoSolutionError("no final state is feasible")
    roots = sorted(f for f in vg.finals if _close(vg.value[f], optimum, tol))
    kept: Dict[int, List[int]] = {}
    stack = list(roots)
    while stack:
        v = stack.pop()
        if v in kept:
            continue
        if vg.kind[v] == OR:
            kids = [x for x in vg.children[v] if _close(vg.value[x], vg.value[v], tol)]
        else:
            kids = list(vg.children[v])
        kept[v] = kids
        stack.extend(kids)
    nodes = [RawNode(v, vg.kind[v]) for v in sorted(kept)]
    arcs = [(u, v) for u in sorted(kept) for v in kept[u]]
    raw = RawGraph([], nodes, arcs)
    labels = {v: vg.label[v] for v in kept if vg.kind[v] == OR}
    try:
        graph = build_graph(raw, labels)
    except InvalidGraphError as exc:
        raise UnsupportedInstanceError(f"pruned graph is not an ad-AND/OR graph: {exc}") from None
    return PrunedGraph(graph, tuple(roots), optimum)


def solve(automaton: TreeAutomaton, cost: IncrementalCost, tol: float = 0) -> PrunedGraph:
    return prune_optimal(build_valued_graph(automaton, cost), tol)


# ---------------------------------------------------------------------------
# Optimal tree coloring


class ColorState(NamedTuple):
    node: Hashable
    color: Hashable


INITIAL = ColorState(None, None)
FORBIDDEN = None


@dataclass
class ColoringInstance:
    """Rooted ordered tree with per-node allowed colors and a per-edge pair cost.

    ``pair_cost[(child_color, parent_color)]`` is the cost of an edge, or
    ``FORBIDDEN``; missing pairs fall back to ``default_cost``.
    """

    root: Hashable
    children: Mapping[Hashable, Sequence[Hashable]]
    colors: Sequence[Hashable]
    pair_cost: Mapping[Tuple[Hashable, Hashable], object] = field(default_factory=dict)
    default_cost: object = 0
    allowed: Mapping[Hashable, Sequence[Hashable]] = field(default_factory=dict)
    fixed: Mapping[Hashable, Hashable] = field(default_factory=dict)

    def __post_init__(self):
        for v, c in self.fixed.items():
            if c not in self.allowed_colors(v, ignore_fixed=True):
                raise ValueError(f"fixed color {c!r} of node {v!r} is not allowed there")

    def kids(self, v) -> Sequence[Hashable]:
        return self.children.get(v, ())

    def preorder(self) -> List[Hashable]:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(list(self.kids(v))))
        return out

    def allowed_colors(self, v, ignore_fixed: bool = False) -> List[Hashable]:
        if not ignore_fixed and v in self.fixed:
            return [self.fixed[v]]
        allowed = self.allowed.get(v)
        return [c for c in self.colors if allowed is None or c in allowed]

    def cost(self, child_color, parent_color):
        return self.pair_cost.get((child_color, parent_color), self.default_cost)

    def score(self, coloring: Mapping[Hashable, Hashable]):
        """Total edge cost of a full coloring, or FORBIDDEN if it is not feasible."""
        total = 0
        for v in self.preorder():
            if coloring[v] not in self.allowed_colors(v):
                return FORBIDDEN
            for u in self.kids(v):
                p = self.cost(coloring[u], coloring[v])
                if p is FORBIDDEN:
                    return FORBIDDEN
                total += p
        return total


def sankoff_instance(root, children: Mapping[Hashable, Sequence[Hashable]],
                     leaf_states: Mapping[Hashable, Hashable], alphabet: Sequence[Hashable],
                     substitution: Callable[[Hashable, Hashable], object]) -> ColoringInstance:
    """Small-parsimony labeling of one site: leaves fixed, inner nodes free.

    ``substitution(a, b)`` is the cost of an edge whose ends carry a and b.
    """
    pair_cost = {(a, b): substitution(a, b) for a in alphabet for b in alphabet}
    return ColoringInstance(root, children, list(alphabet), pair_cost, fixed=dict(leaf_states))


def t_coloring_instance(root, children: Mapping[Hashable, Sequence[Hashable]], colors: Sequence[Hashable],
                        forbidden: Iterable[Tuple[Hashable, Hashable]] = (),
                        lists: Optional[Mapping[Hashable, Sequence[Hashable]]] = None,
                        distances: Iterable[int] = ()) -> ColoringInstance:
    """List T-coloring as a zero-cost coloring problem with forbidden edges.

    Adjacent nodes may not carry a pair in ``forbidden`` (either way round),
    nor integer colors whose difference lies in ``distances``.
    """
    bad = {frozenset(pair) for pair in forbidden}
    distances = set(distances)
    pair_cost = {}
    for a in colors:
        for b in colors:
            off = (frozenset((a, b)) in bad) or (bool(distances) and abs(a - b) in distances)
            pair_cost[(a, b)] = FORBIDDEN if off else 0
    return ColoringInstance(root, children, list(colors), pair_cost, allowed=dict(lists or {}))


def compile_tree_coloring(instance: ColoringInstance) -> Tuple[TreeAutomaton, IncrementalCost]:
    """One state per (node, allowed color); one rule per color choice of a node and its children."""
    states = [INITIAL]
    rules = []
    for v in reversed(instance.preorder()):
        kids = list(instance.kids(v))
        for c in instance.allowed_colors(v):
            states.append(ColorState(v, c))
            if not kids:
                rules.append(Rule((INITIAL,), (c, 0), ColorState(v, c)))
                continue
            options = [
                [ColorState(u, cu) for cu in instance.allowed_colors(u)
                 if instance.cost(cu, c) is not FORBIDDEN]
                for u in kids
            ]
            for combo in product(*options):
                rules.append(Rule(tuple(combo), (c, len(kids)), ColorState(v, c)))
    finals = frozenset(ColorState(instance.root, c) for c in instance.allowed_colors(instance.root))

    def cost(children: Tuple[ColorState, ...], symbol) -> object:
        parent = symbol[0]
        return sum((instance.cost(q.color, parent) for q in children), 0)

    return TreeAutomaton(states, rules, INITIAL, finals), cost


def decode_coloring(graph: AndOrGraph, node_set) -> Dict[Hashable, Hashable]:
    """Coloring carried by the OR+ nodes of one solution of a compiled coloring graph."""
    return {graph.labels[v].node: graph.labels[v].color for v in node_set if v in graph.labels}


@dataclass
class GroupingMap:
    group_of: Mapping[Hashable, Hashable]
    order: Sequence[Hashable]

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise ValueError("duplicate group in group order")
        missing = set(self.group_of.values()) - set(self.order)
        if missing:
            raise ValueError(f"groups {sorted(map(str, missing))} missing from the group order")

    @classmethod
    def identity(cls, colors: Sequence[Hashable]) -> "GroupingMap":
        return cls({c: c for c in colors}, list(colors))

    def __call__(self, color):
        return self.group_of[color]


@dataclass
class GroupedGraph:
    graph: AndOrGraph
    roots: Tuple[int, ...]
    slots: Tuple[Hashable, ...]
    groups: Tuple[Hashable, ...]

    def decode(self, color: int) -> Tuple[Optional[Hashable], Hashable]:
        """(slot, group) of a color index; the slot is None without positional colors."""
        if not self.slots:
            return None, self.groups[color]
        i, j = divmod(color, len(self.groups))
        return self.slots[i], self.groups[j]

    def labeling(self, tree) -> Dict[Hashable, Hashable]:
        """Slot -> group assignment described by a class tree (positional colors only)."""
        out = {}
        stack = [tree]
        while stack:
            v = stack.pop()
            slot, group = self.decode(v.color)
            out[slot] = group
            stack.extend(v.children)
        return out


def apply_grouping(pruned: PrunedGraph, grouping: GroupingMap,
                   slots: Optional[Sequence[Hashable]] = None, positional: bool = True) -> GroupedGraph:
    """Color every OR+ node by the group of its state's color.

    With ``positional`` (the default) the color is the pair (slot, group),
    the slot being the tree node the state belongs to; colors are ordered
    by slot position in ``slots`` and then by group order.  Siblings are then
    always distinct.  Without it the bare group is used, and a grouping that
    puts two siblings in one group is rejected.
    """
    g = pruned.graph
    groups = tuple(grouping.order)
    gindex = {x: i for i, x in enumerate(groups)}
    states = {v: g.labels[v] for v in g.ids if g.kind[v] == OR}
    for v, q in states.items():
        if grouping(q.color) not in gindex:
            raise GroupingError(f"color {q.color!r} has no group")
    if positional:
        if slots is None:
            slots = list(dict.fromkeys(states[v].node for v in g.order if v in states))
        slots = tuple(slots)
        sindex = {s: i for i, s in enumerate(slots)}
        names = [f"{s}:{x}" for s in slots for x in groups]
        color = {v: names[sindex[q.node] * len(groups) + gindex[grouping(q.color)]]
                 for v, q in states.items()}
    else:
        slots = ()
        names = [str(x) for x in groups]
        color = {v: names[gindex[grouping(q.color)]] for v, q in states.items()}
    if len(set(names)) != len(names):
        raise GroupingError("group names collide once written out")
    raw = g.to_raw()
    raw.colors = names
    raw.nodes = [RawNode(n.id, n.kind, color.get(n.id)) for n in raw.nodes]
    try:
        graph = build_graph(raw, g.labels)
    except InvalidGraphError as exc:
        bad = next((v for v in exc.report.violations if v.rule == "distinct child colors"),
                   exc.report.violations[0])
        raise GroupingError(f"grouping breaks the e-coloring: {bad}", witness=bad.nodes[0]) from None
    return GroupedGraph(graph, pruned.roots, slots, groups)
