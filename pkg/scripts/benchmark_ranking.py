#!/usr/bin/env python3
"""Timing sweep for the ranking rounds and the sparsifier on seeded
sparse random graphs.  Prints one row per instance."""

import argparse
import time

from treerank.graph import gen_random
from treerank.ranking import SearchStats, compute_ranking
from treerank.sparsify import build_sparsifier, recover


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="500,1000,2000,3000")
    ap.add_argument("--avg-degree", type=float, default=2.0)
    ap.add_argument("--r", type=int, default=2)
    ap.add_argument("--m", type=int, default=3)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'n':>6} {'edges':>7} {'rank_s':>8} {'max_exp':>8} {'build_s':>8} {'roundtrip':>9}")
    for n in sizes:
        g = gen_random(n, args.avg_degree / max(1, n - 1), args.seed)
        stats = SearchStats()
        t0 = time.time()
        compute_ranking(g, args.r, args.m, stats)
        rank_s = time.time() - t0
        t0 = time.time()
        sg = build_sparsifier(g, 1, 2)
        build_s = time.time() - t0
        ok = recover(sg) == g
        print(
            f"{n:>6} {g.edge_count():>7} {rank_s:>8.2f} "
            f"{stats.max_nodes_per_search:>8} {build_s:>8.2f} {str(ok):>9}"
        )


if __name__ == "__main__":
    main()
