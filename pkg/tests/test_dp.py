from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adandor import (INF, ColoringInstance, GroupingError, GroupingMap, NoSolutionError, Rule,
                     TreeAutomaton, UnsupportedInstanceError, apply_grouping, build_valued_graph,
                     compile_tree_coloring, count_solutions, decode_coloring, enumerate_classes,
                     enumerate_solutions, evaluate_dp, sankoff_instance, solve,
                     t_coloring_instance)
from adandor.generate import random_grouping
from oracles import optimal_colorings, sankoff_vectors
from strategies import coloring_instances


def zero(children, symbol):
    return 0


def test_single_leaf_rule():
    a = TreeAutomaton(["q0", "q"], [Rule(("q0",), "a", "q")], "q0", frozenset({"q"}))
    assert evaluate_dp(a, zero).optimum == 0
    pruned = solve(a, zero)
    assert pruned.optimum == 0 and count_solutions(pruned.graph.sub(pruned.roots)) == 1


def test_cheaper_rule_wins():
    rules = [Rule(("q0",), "a", "p"), Rule(("p",), "f", "q"), Rule(("p",), "g", "q")]
    a = TreeAutomaton(["q0", "p", "q"], rules, "q0", frozenset({"q"}))
    weights = {"f": 1, "g": 2}
    result = evaluate_dp(a, lambda kids, sym: weights[sym])
    assert result.table == {"q0": 0, "p": 0, "q": 1}
    pruned = solve(a, lambda kids, sym: weights[sym])
    (sol,) = enumerate_solutions(pruned.graph.sub(pruned.roots))
    used = [pruned.graph.labels.get(v) for v in sol.node_set]
    assert "p" in used and "q" in used


def test_unreachable_state_is_infinite():
    rules = [Rule(("q0",), "a", "p"), Rule(("r",), "f", "q")]
    a = TreeAutomaton(["q0", "p", "q", "r"], rules, "q0", frozenset({"q"}))
    result = evaluate_dp(a, zero)
    assert result.table["q"] == INF and not result.feasible
    with pytest.raises(NoSolutionError):
        solve(a, zero)


def test_cyclic_dependencies_rejected():
    rules = [Rule(("q0",), "a", "p"), Rule(("p",), "f", "q"), Rule(("q",), "g", "p")]
    a = TreeAutomaton(["q0", "p", "q"], rules, "q0", frozenset({"q"}))
    with pytest.raises(UnsupportedInstanceError):
        evaluate_dp(a, zero)


def test_rank_checked_against_alphabet():
    with pytest.raises(ValueError):
        TreeAutomaton(["q0", "q"], [Rule(("q0",), "a", "q")], "q0", frozenset({"q"}), {"a": 2})


def flip_cost(colors):
    return {(a, b): (0 if a == b else 1) for a in colors for b in colors}


def cherry(**kw):
    colors = ["a", "b"]
    return ColoringInstance("r", {"r": ["u", "v"]}, colors, flip_cost(colors),
                            fixed={"u": "a", "v": "b"}, **kw)


def test_cherry_optimum_and_count():
    pruned = solve(*compile_tree_coloring(cherry()))
    assert pruned.optimum == 1
    sols = list(enumerate_solutions(pruned.graph.sub(pruned.roots)))
    roots = sorted(decode_coloring(pruned.graph, s.node_set)["r"] for s in sols)
    assert roots == ["a", "b"]


def test_single_edge_two_free_nodes():
    inst = ColoringInstance("r", {"r": ["u"]}, ["a", "b"], flip_cost(["a", "b"]))
    pruned = solve(*compile_tree_coloring(inst))
    assert pruned.optimum == 0
    assert count_solutions(pruned.graph.sub(pruned.roots)) == 2


def test_single_node_tree():
    inst = ColoringInstance("r", {}, ["x", "y"], allowed={"r": ["x"]})
    pruned = solve(*compile_tree_coloring(inst))
    assert pruned.optimum == 0
    (sol,) = enumerate_solutions(pruned.graph.sub(pruned.roots))
    assert decode_coloring(pruned.graph, sol.node_set) == {"r": "x"}


def test_forbidden_pair_path():
    inst = t_coloring_instance("a", {"a": ["b"], "b": ["c"]}, ["x", "y"], forbidden=[("x", "x")])
    pruned = solve(*compile_tree_coloring(inst))
    got = {tuple(decode_coloring(pruned.graph, s.node_set)[v] for v in "abc")
           for s in enumerate_solutions(pruned.graph.sub(pruned.roots))}
    assert got == {("x", "y", "x"), ("y", "x", "y"), ("x", "y", "y"), ("y", "y", "x"), ("y", "y", "y")}


def test_list_t_coloring_path():
    # adjacent colors must differ by more than 1
    inst = t_coloring_instance("v0", {"v0": ["v1"], "v1": ["v2"]}, [0, 1, 2], distances={0, 1})
    pruned = solve(*compile_tree_coloring(inst))
    colorings = sorted(tuple(sorted(decode_coloring(pruned.graph, s.node_set).items()))
                       for s in enumerate_solutions(pruned.graph.sub(pruned.roots)))
    assert pruned.optimum == 0
    assert colorings == [(("v0", 0), ("v1", 2), ("v2", 0)), (("v0", 2), ("v1", 0), ("v2", 2))]


def test_lists_restrict_colors():
    inst = t_coloring_instance("v0", {"v0": ["v1"]}, [0, 1, 2, 3], distances={0, 1},
                               lists={"v0": [1], "v1": [1, 2, 3]})
    pruned = solve(*compile_tree_coloring(inst))
    (sol,) = enumerate_solutions(pruned.graph.sub(pruned.roots))
    assert decode_coloring(pruned.graph, sol.node_set) == {"v0": 1, "v1": 3}


def test_list_t_coloring_infeasible():
    inst = t_coloring_instance("v0", {"v0": ["v1"]}, [0, 1], distances={0, 1})
    with pytest.raises(NoSolutionError):
        solve(*compile_tree_coloring(inst))


def test_one_group_collapses_cherry_to_one_class():
    pruned = solve(*compile_tree_coloring(cherry()))
    grouped = apply_grouping(pruned, GroupingMap({"a": "all", "b": "all"}, ["all"]))
    classes = list(enumerate_classes(grouped.graph, grouped.roots))
    assert len(classes) == 1
    assert grouped.labeling(classes[0].tree) == {"r": "all", "u": "all", "v": "all"}


def test_identity_grouping_keeps_both_cherry_colorings():
    pruned = solve(*compile_tree_coloring(cherry()))
    grouped = apply_grouping(pruned, GroupingMap.identity(["a", "b"]), slots=["r", "u", "v"])
    assert len(list(enumerate_classes(grouped.graph, grouped.roots))) == 2


def test_bare_groups_can_break_the_coloring():
    pruned = solve(*compile_tree_coloring(cherry()))
    with pytest.raises(GroupingError) as exc:
        apply_grouping(pruned, GroupingMap({"a": "all", "b": "all"}, ["all"]), positional=False)
    assert pruned.graph.is_and(exc.value.witness)


def transition_transversion(a, b):
    purine = {"A", "G"}
    return 0 if a == b else 1 if (a in purine) == (b in purine) else 2


def test_sankoff_cherry_vectors():
    inst = sankoff_instance("r", {"r": ["u", "v"]}, {"u": "A", "v": "C"}, "ACGT", transition_transversion)
    automaton, cost = compile_tree_coloring(inst)
    vg = build_valued_graph(automaton, cost)
    got = {q.color: vg.value[v] for q, v in vg.node_of.items() if q.node == "r"}
    assert got == {"A": 2, "C": 2, "G": 3, "T": 3}
    assert got == sankoff_vectors(inst)["r"]


def test_purine_pyrimidine_grouping():
    tree = {"r": ["x", "l3"], "x": ["l1", "l2"]}
    inst = sankoff_instance("r", tree, {"l1": "A", "l2": "G", "l3": "C"}, "ACGT", transition_transversion)
    pruned = solve(*compile_tree_coloring(inst))
    best, winners = optimal_colorings(inst)
    assert pruned.optimum == best == 3
    grouping = GroupingMap({"A": "R", "G": "R", "C": "Y", "T": "Y"}, ["R", "Y"])
    grouped = apply_grouping(pruned, grouping, slots=inst.preorder())
    got = {tuple(sorted(grouped.labeling(t).items()))
           for t, _ in enumerate_classes(grouped.graph, grouped.roots)}
    want = {tuple(sorted((v, grouping(c)) for v, c in w.items())) for w in winners}
    assert got == want
    assert len(winners) > len(got)


@settings(max_examples=100, deadline=None)
@given(coloring_instances())
def test_table_satisfies_recurrence(inst):
    automaton, cost = compile_tree_coloring(inst)
    table = evaluate_dp(automaton, cost).table
    into = {}
    for rule in automaton.rules:
        into.setdefault(rule.target, []).append(rule)
    for q, value in table.items():
        if q == automaton.initial:
            assert value == 0
            continue
        options = []
        for rule in into.get(q, []):
            if automaton.is_leaf_rule(rule):
                options.append(0)
            elif all(table[c] != INF for c in rule.children):
                options.append(sum(table[c] for c in rule.children) + cost(rule.children, rule.symbol))
        assert value == min(options, default=INF)


@settings(max_examples=100, deadline=None)
@given(coloring_instances())
def test_table_matches_sankoff_vectors(inst):
    automaton, cost = compile_tree_coloring(inst)
    table = evaluate_dp(automaton, cost).table
    vectors = sankoff_vectors(inst)
    for v, vec in vectors.items():
        for c in inst.allowed_colors(v):
            assert table[(v, c)] == vec.get(c, INF)


@settings(max_examples=100, deadline=None)
@given(coloring_instances())
def test_valued_graph_values_equal_table(inst):
    automaton, cost = compile_tree_coloring(inst)
    table = evaluate_dp(automaton, cost).table
    vg = build_valued_graph(automaton, cost)
    for q, v in vg.node_of.items():
        assert vg.value[v] == table[q]
    assert {q for q in table if table[q] != INF and q != automaton.initial} == set(vg.node_of)


@settings(max_examples=100, deadline=None)
@given(coloring_instances())
def test_pruned_graph_holds_exactly_the_optimal_colorings(inst):
    best, winners = optimal_colorings(inst)
    automaton, cost = compile_tree_coloring(inst)
    if best is None:
        with pytest.raises(NoSolutionError):
            solve(automaton, cost)
        return
    pruned = solve(automaton, cost)
    assert pruned.optimum == best
    decoded = [decode_coloring(pruned.graph, s.node_set)
               for s in enumerate_solutions(pruned.graph.sub(pruned.roots))]
    assert all(inst.score(c) == best for c in decoded)
    key = lambda c: tuple(sorted(c.items(), key=repr))  # noqa: E731
    assert sorted(map(key, decoded)) == sorted(map(key, winners))


@settings(max_examples=100, deadline=None)
@given(coloring_instances(), st.randoms(use_true_random=False))
def test_grouped_classes_match_brute_force(inst, rnd):
    best, winners = optimal_colorings(inst)
    if best is None:
        return
    grouping = random_grouping(rnd, inst.colors)
    grouped = apply_grouping(solve(*compile_tree_coloring(inst)), grouping, slots=inst.preorder())
    got = [tuple(grouped.labeling(t)[v] for v in inst.preorder())
           for t, _ in enumerate_classes(grouped.graph, grouped.roots)]
    assert len(got) == len(set(got))
    assert set(got) == {tuple(grouping(w[v]) for v in inst.preorder()) for w in winners}


def test_fraction_costs_stay_exact():
    colors = ["a", "b"]
    cost = {("a", "a"): Fraction(1, 3), ("b", "b"): Fraction(1, 3),
            ("a", "b"): Fraction(1, 2), ("b", "a"): Fraction(1, 2)}
    inst = ColoringInstance("r", {"r": ["u", "v", "w"]}, colors, cost)
    assert solve(*compile_tree_coloring(inst)).optimum == 1
