#!/usr/bin/env python3
"""Survey the small ranks: classes, stabilizer orders, wall structure,
and the kernel verdict, printed as one table row per (rank, group).

Typical session:

    python scripts/run_survey.py --max-n 5
    python scripts/run_survey.py --max-n 6 --allow-long   # slow
"""

import argparse
import sys
import time

sys.path.insert(0, "src")

from vorcycle.complexes import build_complex
from vorcycle.enumeration import enumerate_perfect_forms
from vorcycle.homology import (
    is_orientation_preserving,
    verify_gl_even_vanishing,
    verify_top_cycle,
)


def survey_row(n, group, allow_long):
    start = time.monotonic()
    graph = enumerate_perfect_forms(n, group, allow_long=allow_long)
    cx = build_complex(graph)
    if is_orientation_preserving(group, n):
        report = verify_top_cycle(cx)
        verdict = ("generator" if report.ok
                   else f"UNEXPECTED kernel_dim={report.kernel_dim}")
    else:
        report = verify_gl_even_vanishing(cx)
        verdict = "vanishes" if report.ok else "UNEXPECTED"
    elapsed = time.monotonic() - start
    labels = ",".join(node.label for node in graph.nodes)
    orders = ",".join(str(node.stab_order) for node in graph.nodes)
    return (f"n={n} {group:2} | classes={len(graph.nodes)} ({labels}) "
            f"| orders={orders} | walls={len(cx.walls)} "
            f"(kept {len(cx.kept_walls)}) | kernel_dim={report.kernel_dim} "
            f"{verdict} | {elapsed:.1f}s")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=5)
    parser.add_argument("--groups", default="sl,gl")
    parser.add_argument("--allow-long", action="store_true")
    args = parser.parse_args()
    groups = args.groups.split(",")
    for n in range(2, args.max_n + 1):
        for group in groups:
            print(survey_row(n, group, args.allow_long), flush=True)


if __name__ == "__main__":
    main()
