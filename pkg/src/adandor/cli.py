"""Count, enumerate and classify solutions of e-colored ad-AND/OR graphs.

Exit status: 0 success, 1 invariant violation, 2 usage or parse error,
3 no solution.
"""
from __future__ import annotations

import argparse
import random
import sys
from typing import List, Optional

from .classes import ContractViolation, enumerate_classes
from .core import (ColoringRequiredError, FormatError, InvalidGraphError, build_graph,
                   count_solutions, enumerate_solutions, validate_graph)
from .dp import (GroupingError, GroupingMap, NoSolutionError, UnsupportedInstanceError,
                 apply_grouping, compile_tree_coloring, solve)
from .formats import dump_graph, parse_class, parse_graph, parse_instance
from .generate import random_raw_graph
from .restrict import count_in_class, restrict_to_class

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_NO_SOLUTION = 0, 1, 2, 3


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(line: str) -> None:
    print(line, flush=True)


def _load_graph(path: str):
    return build_graph(parse_graph(_read(path)))


def cmd_validate(args) -> int:
    report = validate_graph(parse_graph(_read(args.graph)))
    if report.ok:
        _emit("OK")
        return EXIT_OK
    for v in report.violations:
        _emit(str(v))
    return EXIT_INVALID


def cmd_count(args) -> int:
    _emit(str(count_solutions(_load_graph(args.graph))))
    return EXIT_OK


def cmd_solutions(args) -> int:
    for sol in enumerate_solutions(_load_graph(args.graph)):
        _emit(" ".join(map(str, sorted(sol.node_set))))
    return EXIT_OK


def cmd_classes(args) -> int:
    g = _load_graph(args.graph)
    for tree, roots in enumerate_classes(g):
        fields = [tree.format(g.color_names)]
        if args.with_counts:
            fields.append(str(count_in_class(g, tree)))
        if args.with_rootset:
            fields.append(",".join(map(str, roots)))
        _emit(" ".join(fields))
    return EXIT_OK


def cmd_restrict(args) -> int:
    g = _load_graph(args.graph)
    restricted = restrict_to_class(g, parse_class(args.cls, g.color_names))
    sys.stdout.write(dump_graph(restricted))
    return EXIT_OK


def cmd_class_count(args) -> int:
    g = _load_graph(args.graph)
    _emit(str(count_in_class(g, parse_class(args.cls, g.color_names))))
    return EXIT_OK


def cmd_solve(args) -> int:
    instance, grouping = parse_instance(_read(args.instance))
    pruned = solve(*compile_tree_coloring(instance))
    _emit(str(pruned.optimum))
    if args.count:
        _emit(str(count_solutions(pruned.graph.sub(pruned.roots))))
    if args.classes:
        grouping = grouping or GroupingMap.identity(instance.colors)
        grouped = apply_grouping(pruned, grouping, slots=instance.preorder())
        g = grouped.graph
        for tree, _ in enumerate_classes(g, grouped.roots):
            fields = [tree.format(g.color_names)]
            if args.with_counts:
                fields.append(str(count_in_class(g, tree, grouped.roots)))
            _emit(" ".join(fields))
    return EXIT_OK


def cmd_generate(args) -> int:
    raw = random_raw_graph(random.Random(args.seed), args.max_or, args.colors)
    sys.stdout.write(dump_graph(raw))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adandor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def graph_cmd(name, func, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("graph", help="graph document (JSON), '-' for stdin")
        sp.set_defaults(func=func)
        return sp

    graph_cmd("validate", cmd_validate, "check the ad-AND/OR and e-coloring invariants")
    graph_cmd("count", cmd_count, "number of solution subtrees")
    graph_cmd("solutions", cmd_solutions, "one solution per line, as sorted node ids")
    sp = graph_cmd("classes", cmd_classes, "equivalence classes in increasing order")
    sp.add_argument("--with-counts", action="store_true", help="append the class size")
    sp.add_argument("--with-rootset", action="store_true", help="append the start nodes rooting the class")
    for name, func, help in (("restrict", cmd_restrict, "graph of the solutions of one class"),
                             ("class-count", cmd_class_count, "number of solutions of one class")):
        sp = graph_cmd(name, func, help)
        sp.add_argument("--class", dest="cls", required=True, metavar="EXPR", help="class expression")

    sp = sub.add_parser("solve", help="optimal tree coloring")
    sp.add_argument("instance", help="instance document (JSON), '-' for stdin")
    sp.add_argument("--count", action="store_true", help="also print the number of optimal colorings")
    sp.add_argument("--classes", action="store_true", help="stream the grouped classes of optimal colorings")
    sp.add_argument("--with-counts", action="store_true", help="append the class size (with --classes)")
    sp.set_defaults(func=cmd_solve)

    # test tooling, deliberately left out of the help listing
    sp = sub.add_parser("generate")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--max-or", type=int, default=25)
    sp.add_argument("--colors", type=int, default=4)
    sp.set_defaults(func=cmd_generate)
    return p


def run_command(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand; output goes to stdout and the exit status is returned."""
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, ContractViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidGraphError, ColoringRequiredError, GroupingError, UnsupportedInstanceError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION


def main(argv: Optional[List[str]] = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
