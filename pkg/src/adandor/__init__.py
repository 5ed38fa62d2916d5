"""Polynomial-delay enumeration of equivalence classes of solutions in
acyclic decomposable AND/OR graphs, and a front end for tree DP."""

from .core import (AND, OR, AdAndOrGraph, AndOrGraph, ClassTree, ColorId, ColoringRequiredError,
                   ColorTuple, FormatError, InvalidGraphError, RawGraph, RawNode, SolutionSubtree, Subproblem,
                   ValidationReport, Violation, build_graph, count_solutions,
                   enumerate_solutions, max_solution_size, project, validate_graph)
from .classes import (ClassEnumerator, ClassWithRootSet, ContractViolation, TuplePartition,
                      compare_classes, compatible_nodes, enumerate_classes, next_class,
                      partition_children)
from .restrict import MarkedGraph, count_in_class, enumerate_in_class, mark, restrict_to_class
from .dp import (INF, ColoringInstance, ColorState, DpResult, DpTable, GroupedGraph, GroupingError,
                 GroupingMap, IncrementalCost, NoSolutionError, PrunedGraph, Rule, TreeAutomaton,
                 UnsupportedInstanceError, ValuedGraph, apply_grouping, build_valued_graph,
                 compile_tree_coloring, decode_coloring, evaluate_dp, prune_optimal, sankoff_instance,
                 solve, t_coloring_instance)
from .formats import dump_graph, format_class, parse_class, parse_graph, parse_instance
from .cli import run_command

__version__ = "0.1.0"
