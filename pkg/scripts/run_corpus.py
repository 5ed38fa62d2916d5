"""Enumerate the classes of a seeded random corpus and summarize.

    python scripts/run_corpus.py --size 240 --csv corpus.csv
"""
import argparse
import csv
import sys
import time
from dataclasses import asdict

from adandor import ClassEnumerator, count_solutions, max_solution_size
from adandor.generate import CorpusConfig


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = CorpusConfig()
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--size", type=int, default=defaults.size)
    p.add_argument("--max-or", type=int, default=defaults.max_or)
    p.add_argument("--depth-bias", type=float, default=defaults.depth_bias)
    p.add_argument("--csv", help="write one row per graph")
    args = p.parse_args(argv)
    cfg = CorpusConfig(seed=args.seed, size=args.size, max_or=args.max_or, depth_bias=args.depth_bias)
    print(asdict(cfg))

    rows = []
    start = time.perf_counter()
    for i, g in enumerate(cfg.graphs()):
        en = ClassEnumerator(g)
        t0 = time.perf_counter()
        n_classes = sum(1 for _ in en.classes())
        rows.append({
            "graph": i, "nodes": len(g), "solutions": count_solutions(g), "classes": n_classes,
            "max_size": max_solution_size(g), "max_delay_calls": max(en.delays, default=0),
            "seconds": round(time.perf_counter() - t0, 6),
        })
    total = time.perf_counter() - start

    sols = sum(r["solutions"] for r in rows)
    classes = sum(r["classes"] for r in rows)
    print(f"graphs {len(rows)}  solutions {sols}  classes {classes}  "
          f"compression {sols / max(classes, 1):.2f}x  wall {total:.2f}s")
    worst = max(rows, key=lambda r: r["max_delay_calls"] / max(r["max_size"], 1))
    print(f"worst delay: {worst['max_delay_calls']} calls against max solution size {worst['max_size']}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
