"""Acceptance criteria, one test each; every test also prints a PASS/FAIL line.

Run ``python tests/test_acceptance.py`` for the lines alone.
"""
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from adandor import (ClassEnumerator, ClassTree, apply_grouping, compare_classes, compile_tree_coloring,  # noqa: E402
                     count_in_class, count_solutions, decode_coloring, enumerate_in_class,
                     enumerate_classes, enumerate_solutions, max_solution_size, partition_children,
                     solve)
from adandor.dp import NoSolutionError  # noqa: E402
from adandor.generate import CorpusConfig, random_coloring_instance, random_grouping  # noqa: E402
from conftest import load, report_criterion  # noqa: E402
from oracles import brute_classes, optimal_colorings, solutions_by_class  # noqa: E402

pytestmark = pytest.mark.acceptance

N_GRAPHS = 240
N_INSTANCES = 150
N_PAIRS = 12000
TIME_LIMIT = 60.0


_CORPUS = []


def get_corpus():
    if not _CORPUS:
        _CORPUS.extend(CorpusConfig(size=N_GRAPHS).graphs())
    return _CORPUS


def roots_by_color(g):
    out = {}
    for o in g.start_nodes:
        out.setdefault(g.color[o], []).append(o)
    return [out[c] for c in sorted(out)]


def criterion_1():
    start = time.perf_counter()
    bad = 0
    n_classes = 0
    graphs = get_corpus()
    biggest = max(count_solutions(g) for g in graphs)
    for g in graphs:
        got = list(enumerate_classes(g))
        want = [x for roots in roots_by_color(g) for x in brute_classes(g.sub(roots))]
        bad += got != want
        n_classes += len(got)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < TIME_LIMIT and len(graphs) >= 200
    return report_criterion(1, ok, f"{len(graphs)} graphs (up to {biggest} solutions), {n_classes} classes, {bad} mismatches, {elapsed:.1f}s")


def criterion_2():
    bad = 0
    for g in get_corpus():
        bad += sum(count_in_class(g, t) for t, _ in enumerate_classes(g)) != count_solutions(g)
    return report_criterion(2, bad == 0, f"{bad} graphs with unequal totals")


def criterion_3():
    bad = checked = 0
    for g in get_corpus():
        by_class = solutions_by_class(g)
        for t, _ in enumerate_classes(g):
            checked += 1
            bad += set(enumerate_in_class(g, t)) != by_class[t]
    return report_criterion(3, bad == 0, f"{checked} classes, {bad} mismatches")


def criterion_4():
    violations = worst = 0
    for g in get_corpus():
        en = ClassEnumerator(g)
        list(en.classes())
        s = max_solution_size(g)
        violations += sum(d > s for d in en.delays)
        worst = max([worst] + [d / s for d in en.delays if s])
    return report_criterion(4, violations == 0, f"{violations} violations, max calls/s = {worst:.2f}")


def criterion_5():
    g = load("fig3.graph")
    w, x, y, z = (g.color_names.index(c) for c in "wxyz")
    p = partition_children(g.sub([1, 2]))
    ok = (p.tuples == ((w, y), (x, y), (x, y, z))
          and p.and_children == ((6,), (4, 5), (3,))
          and p.grandchildren == (((12,), (11,)), ((9, 10), (8, 11)), ((9,), (8,), (7,))))
    return report_criterion(5, ok, f"tuples {p.tuples}, Ch {p.and_children}, C {p.grandchildren}")


def criterion_6():
    n = len(list(enumerate_classes(load("fig2.graph"))))
    return report_criterion(6, n == 5, f"{n} classes")


def instances():
    rng = random.Random(777)
    return [random_coloring_instance(rng, max_nodes=8, max_colors=4) for _ in range(N_INSTANCES)]


def key(coloring):
    return tuple(sorted(coloring.items()))


def criterion_7():
    start = time.perf_counter()
    bad = feasible = 0
    for inst in instances():
        best, winners = optimal_colorings(inst)
        try:
            pruned = solve(*compile_tree_coloring(inst))
        except NoSolutionError:
            bad += best is not None
            continue
        feasible += 1
        decoded = [decode_coloring(pruned.graph, s.node_set)
                   for s in enumerate_solutions(pruned.graph.sub(pruned.roots))]
        bad += not (pruned.optimum == best
                    and all(inst.score(c) == best for c in decoded)
                    and len(decoded) == len(winners)
                    and sorted(map(key, decoded)) == sorted(map(key, winners)))
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < TIME_LIMIT
    return report_criterion(7, ok, f"{N_INSTANCES} instances ({feasible} feasible), {bad} mismatches, {elapsed:.1f}s")


def criterion_8():
    rng = random.Random(778)
    bad = total = 0
    for inst in instances():
        best, winners = optimal_colorings(inst)
        if best is None:
            continue
        pruned = solve(*compile_tree_coloring(inst))
        for _ in range(3):
            grouping = random_grouping(rng, inst.colors)
            grouped = apply_grouping(pruned, grouping, slots=inst.preorder())
            got = [tuple(grouped.labeling(t)[v] for v in inst.preorder())
                   for t, _ in enumerate_classes(grouped.graph, grouped.roots)]
            want = {tuple(grouping(w[v]) for v in inst.preorder()) for w in winners}
            total += 1
            bad += len(got) != len(set(got)) or set(got) != want
    return report_criterion(8, bad == 0, f"{total} (instance, grouping) pairs, {bad} mismatches")


def random_tree(rng, n_colors, depth, color=None):
    color = rng.randrange(n_colors) if color is None else color
    kids = sorted(rng.sample(range(n_colors), rng.randint(0, n_colors))) if depth else []
    return ClassTree(color, tuple(random_tree(rng, n_colors, depth - 1, c) for c in kids))


def criterion_9():
    rng = random.Random(99)
    bad = 0
    for _ in range(N_PAIRS):
        # small color sets and depths make equal and near-equal pairs common
        a, b, c = (random_tree(rng, rng.randint(1, 3), rng.randint(0, 3)) for _ in range(3))
        ab, ba, bc, ac = (compare_classes(a, b), compare_classes(b, a),
                          compare_classes(b, c), compare_classes(a, c))
        bad += ab != -ba
        bad += (ab == 0) != (a == b)
        bad += ab <= 0 and bc <= 0 and ac > 0
        bad += ab not in (-1, 0, 1)
    return report_criterion(9, bad == 0, f"{N_PAIRS} random triples, {bad} law violations")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_criterion(criterion):
    assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
