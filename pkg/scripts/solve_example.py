"""Optimal labelings of a coloring instance, grouped into classes.

    python scripts/solve_example.py data/dna.instance

Prints the optimum, then every class of optimal labelings (under the
document's grouping) followed by the labelings it contains.
"""
import argparse
import sys
from pathlib import Path

from adandor import (GroupingMap, apply_grouping, compile_tree_coloring, count_solutions,
                     decode_coloring, enumerate_classes, enumerate_in_class, parse_instance, solve)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("instance", nargs="?", default=str(Path(__file__).parent.parent / "data" / "dna.instance"))
    p.add_argument("--limit", type=int, default=5, help="labelings shown per class")
    args = p.parse_args(argv)

    instance, grouping = parse_instance(Path(args.instance).read_text())
    grouping = grouping or GroupingMap.identity(instance.colors)
    pruned = solve(*compile_tree_coloring(instance))
    order = instance.preorder()
    print(f"optimum {pruned.optimum}, {count_solutions(pruned.graph.sub(pruned.roots))} optimal labelings")

    grouped = apply_grouping(pruned, grouping, slots=order)
    g = grouped.graph
    for i, (tree, _) in enumerate(enumerate_classes(g, grouped.roots), 1):
        groups = grouped.labeling(tree)
        print(f"class {i}: " + " ".join(f"{v}={groups[v]}" for v in order))
        for j, sol in enumerate(enumerate_in_class(g, tree, grouped.roots)):
            if j == args.limit:
                print("    ...")
                break
            labels = decode_coloring(g, sol.node_set)
            print("    " + " ".join(f"{v}={labels[v]}" for v in order))
    return 0


if __name__ == "__main__":
    sys.exit(main())
