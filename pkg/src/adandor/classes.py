"""Polynomial-delay enumeration of the equivalence classes of an e-colored graph.

Classes of G/O (O a set of same-colored OR+ nodes) are produced in increasing
order by a successor function.  The successor of a class is computed on a
cursor: a tree of frames mirroring the class, where every frame remembers
its root tuple index, the compatible node sets of its children and the set
of nodes of O that root a solution of its class.  Advancing touches only the
frames whose class changes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .core import AndOrGraph, ClassTree, Subproblem, ensure_recursion_depth


def compare_classes(a: ClassTree, b: ClassTree) -> int:
    """-1, 0 or 1 as ``a`` precedes, equals or follows ``b``.

    Root colors decide first, then the color tuples of the children
    (lexicographically, a tuple that runs out first being the smaller), then
    the child subtrees from left to right.  A single-node tree therefore
    precedes every other tree with its root color, and all trees sharing a
    root color tuple are consecutive, which is what the successor below
    relies on.
    """
    if a.color != b.color:
        return -1 if a.color < b.color else 1
    ta, tb = a.tuple, b.tuple
    if ta != tb:
        return -1 if ta < tb else 1
    for x, y in zip(a.children, b.children):
        c = compare_classes(x, y)
        if c:
            return c
    return 0


@dataclass(frozen=True)
class TuplePartition:
    """AND children of O grouped by the sorted color tuple of their children.

    ``tuples[l]`` is the l-th tuple in lexicographic order, ``and_children[l]``
    the AND nodes realizing it and ``grandchildren[l][i]`` their children of
    color ``tuples[l][i]``.  Indices are 0-based.
    """

    tuples: Tuple[Tuple[int, ...], ...]
    and_children: Tuple[Tuple[int, ...], ...]
    grandchildren: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def __len__(self) -> int:
        return len(self.tuples)


def partition_children(sub: Subproblem) -> TuplePartition:
    g = sub.graph
    by_tuple: Dict[Tuple[int, ...], set] = {}
    for o in sub.roots:
        for x in g.children[o]:
            by_tuple.setdefault(g.color_tuple(x), set()).add(x)
    tuples = tuple(sorted(by_tuple))
    ands = tuple(tuple(sorted(by_tuple[t])) for t in tuples)
    grand = tuple(
        tuple(tuple(sorted({g.children[x][i] for x in xs})) for i in range(len(t)))
        for t, xs in zip(tuples, ands)
    )
    return TuplePartition(tuples, ands, grand)


def compatible_nodes(sub: Subproblem, r: int, prefix: Sequence[Sequence[int]],
                     partition: Optional[TuplePartition] = None) -> Tuple[int, ...]:
    """Nodes of the (k+1)-th grandchildren set of tuple ``r`` compatible with a prefix.

    ``prefix`` holds the root sets of the first k child classes.  A node is
    kept when some AND node of tuple ``r`` has it as a child and has its i-th
    child inside the i-th root set for every i < k.
    """
    part = partition or partition_children(sub)
    g = sub.graph
    k = len(prefix)
    xs = _surviving(g, part.and_children[r], prefix)
    return tuple(sorted({g.children[x][k] for x in xs}))


def _surviving(g: AndOrGraph, xs: Sequence[int], prefix: Sequence[Sequence[int]]) -> List[int]:
    sets = [set(p) for p in prefix]
    return [x for x in xs if all(g.children[x][i] in s for i, s in enumerate(sets))]


class ClassWithRootSet(NamedTuple):
    tree: ClassTree
    root_set: Tuple[int, ...]


class ContractViolation(ValueError):
    """The class handed to ``next_class`` is not a class of the subproblem."""


class _Frame:
    # r == -1 marks the single-node class
    __slots__ = ("roots", "part", "r", "kids", "xs", "root_set", "is_last", "tree")

    def __init__(self, roots: Tuple[int, ...], part: TuplePartition):
        self.roots = roots
        self.part = part
        self.r = -1
        self.kids: List[_Frame] = []
        self.xs: List[List[int]] = []
        self.root_set: Tuple[int, ...] = ()
        self.is_last = False
        self.tree: Optional[ClassTree] = None


class ClassEnumerator:
    """Successor machinery over one graph.

    ``calls`` counts every invocation of the successor routine, top level
    included; ``delays`` records, per emitted class, how many recursive
    invocations were needed to produce it.
    """

    def __init__(self, graph: AndOrGraph):
        graph.require_coloring()
        ensure_recursion_depth(graph)
        self.graph = graph
        self._partitions: Dict[Tuple[int, ...], TuplePartition] = {}
        self.calls = 0
        self.delays: List[int] = []

    def partition(self, roots: Tuple[int, ...]) -> TuplePartition:
        part = self._partitions.get(roots)
        if part is None:
            part = self._partitions[roots] = partition_children(Subproblem(self.graph, roots))
        return part

    def _new_frame(self, roots: Tuple[int, ...]) -> _Frame:
        return _Frame(roots, self.partition(roots))

    def _color(self, frame: _Frame) -> int:
        return self.graph.color[frame.roots[0]]

    # successor of the empty class
    def _first(self, roots: Tuple[int, ...]) -> _Frame:
        self.calls += 1
        frame = self._new_frame(roots)
        goals = tuple(o for o in roots if self.graph.is_goal(o))
        if goals:
            frame.root_set = goals
            frame.tree = ClassTree(self._color(frame))
            frame.is_last = len(frame.part) == 0
        else:
            self._start_tuple(frame, 0)
        return frame

    def _advance(self, frame: _Frame) -> bool:
        self.calls += 1
        if frame.is_last:
            return False
        if frame.r == -1:
            self._start_tuple(frame, 0)
            return True
        # the largest child whose class has a successor within its compatible set
        ell = next((i for i in reversed(range(len(frame.kids))) if not frame.kids[i].is_last), None)
        if ell is None:
            self._start_tuple(frame, frame.r + 1)
            return True
        advanced = self._advance(frame.kids[ell])
        assert advanced
        del frame.kids[ell + 1:]
        del frame.xs[ell + 1:]
        self._fill(frame, ell)
        return True

    def _start_tuple(self, frame: _Frame, r: int) -> None:
        frame.r = r
        frame.kids = []
        frame.xs = [list(frame.part.and_children[r])]
        self._fill(frame, -1)

    def _fill(self, frame: _Frame, ell: int) -> None:
        """Complete the children after position ``ell`` with their smallest compatible classes."""
        g = self.graph
        tup = frame.part.tuples[frame.r]
        if ell >= 0:
            kid = frame.kids[ell]
            keep = set(kid.root_set)
            frame.xs.append([x for x in frame.xs[ell] if g.children[x][ell] in keep])
        for i in range(ell + 1, len(tup)):
            xs = frame.xs[i]
            compat = tuple(sorted({g.children[x][i] for x in xs}))
            kid = self._first(compat)
            frame.kids.append(kid)
            keep = set(kid.root_set)
            frame.xs.append([x for x in xs if g.children[x][i] in keep])
        self._finish(frame)

    def _finish(self, frame: _Frame) -> None:
        g = self.graph
        roots = set(frame.roots)
        frame.root_set = tuple(sorted({p for x in frame.xs[-1] for p in g.parents[x] if p in roots}))
        frame.tree = ClassTree(self._color(frame), tuple(k.tree for k in frame.kids))
        frame.is_last = frame.r == len(frame.part) - 1 and all(k.is_last for k in frame.kids)

    def _rebuild(self, tree: ClassTree, roots: Tuple[int, ...]) -> _Frame:
        """Recreate the cursor of an already known class of G/roots."""
        g = self.graph
        frame = self._new_frame(roots)
        if tree.color != self._color(frame):
            raise ContractViolation("root color differs from the subproblem color")
        if tree.is_leaf:
            goals = tuple(o for o in roots if g.is_goal(o))
            if not goals:
                raise ContractViolation("single-node class but no goal node among the roots")
            frame.root_set, frame.tree = goals, tree
            frame.is_last = len(frame.part) == 0
            return frame
        try:
            frame.r = frame.part.tuples.index(tree.tuple)
        except ValueError:
            raise ContractViolation(f"no AND child realizes the color tuple {tree.tuple}") from None
        frame.xs = [list(frame.part.and_children[frame.r])]
        for i, child in enumerate(tree.children):
            xs = frame.xs[i]
            kid = self._rebuild(child, tuple(sorted({g.children[x][i] for x in xs})))
            frame.kids.append(kid)
            keep = set(kid.root_set)
            frame.xs.append([x for x in xs if g.children[x][i] in keep])
        self._finish(frame)
        if not frame.root_set:
            raise ContractViolation("children are not simultaneously realizable")
        return frame

    def _top(self, step) -> Optional[_Frame]:
        before = self.calls
        frame = step()
        if frame is not None:
            self.delays.append(self.calls - before - 1)
        return frame

    def next_class(self, current: Optional[ClassTree], roots: Sequence[int]) -> Optional[ClassWithRootSet]:
        roots = tuple(sorted(set(roots)))
        colors = {self.graph.color[o] for o in roots}
        if len(colors) != 1:
            raise ValueError("roots must be nonempty and share one color")
        if current is None:
            frame = self._top(lambda: self._first(roots))
        else:
            frame = self._rebuild(current, roots)
            frame = self._top(lambda: frame if self._advance(frame) else None)
        return None if frame is None else ClassWithRootSet(frame.tree, frame.root_set)

    def classes(self, roots: Optional[Sequence[int]] = None) -> Iterator[ClassWithRootSet]:
        """All classes reachable from ``roots`` (default: the start nodes), in increasing order."""
        g = self.graph
        roots = g.start_nodes if roots is None else tuple(sorted(set(roots)))
        for _, group in groupby(sorted(roots, key=lambda o: (g.color[o], o)), key=g.color.__getitem__):
            group = tuple(group)
            frame = self._top(lambda: self._first(group))
            yield ClassWithRootSet(frame.tree, frame.root_set)
            while self._top(lambda: frame if self._advance(frame) else None) is not None:
                yield ClassWithRootSet(frame.tree, frame.root_set)


def next_class(current, sub: Subproblem) -> Optional[ClassWithRootSet]:
    """Successor of ``current`` among the classes of ``sub``; ``None`` plays both
    the empty marker (as input) and the exhausted marker (as output)."""
    if isinstance(current, ClassWithRootSet):
        current = current.tree
    return ClassEnumerator(sub.graph).next_class(current, sub.roots)


def enumerate_classes(graph: AndOrGraph, roots: Optional[Sequence[int]] = None) -> Iterator[ClassWithRootSet]:
    return ClassEnumerator(graph).classes(roots)
