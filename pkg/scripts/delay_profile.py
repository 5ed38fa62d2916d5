"""Time per class on graphs whose solutions vastly outnumber their classes.

The ladder of depth d has 2^d solutions but a single class, since both
alternatives at every rung look the same once colors are read off.  Class
enumeration time grows with the class size only, while brute-force
enumeration doubles per rung.
"""
import argparse
import sys
import time

from adandor import (AND, OR, RawGraph, RawNode, build_graph, count_solutions, enumerate_classes,
                     enumerate_solutions)


def ladder(depth):
    nodes, arcs = [RawNode(0, OR, "r")], []
    top = 0
    for _ in range(depth):
        a, b, nxt = len(nodes), len(nodes) + 1, len(nodes) + 2
        nodes += [RawNode(a, AND), RawNode(b, AND), RawNode(nxt, OR, "r")]
        arcs += [(top, a), (top, b), (a, nxt), (b, nxt)]
        top = nxt
    return build_graph(RawGraph(["r"], nodes, arcs))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--max-depth", type=int, default=200)
    p.add_argument("--brute-limit", type=int, default=16, help="largest depth enumerated by brute force")
    args = p.parse_args(argv)
    print(f"{'depth':>5} {'solutions':>62} {'classes':>7} {'class s':>9} {'brute s':>9}")
    d = 2
    while d <= args.max_depth:
        g = ladder(d)
        t0 = time.perf_counter()
        n = sum(1 for _ in enumerate_classes(g))
        dt = time.perf_counter() - t0
        brute = "-"
        if d <= args.brute_limit:
            t0 = time.perf_counter()
            sum(1 for _ in enumerate_solutions(g))
            brute = f"{time.perf_counter() - t0:9.4f}"
        print(f"{d:5} {count_solutions(g):62} {n:7} {dt:9.4f} {brute:>9}")
        d *= 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
