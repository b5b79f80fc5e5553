#!/usr/bin/env python3
"""Before/after statistics for the sparsifier on structured families.

Each row reports the input, the flips taken, and the output shape; every
run re-verifies the exact recovery round trip.
"""

from treerank.graph import gen_halfgraph, make_graph
from treerank.sparsify import build_sparsifier, recover


def complete(n):
    return make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def bipartite(a, b):
    return make_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def main() -> None:
    cases = [
        ("K_30", complete(30), 2, 2),
        ("K_15,15", bipartite(15, 15), 0, 1),
        ("K_40,40", bipartite(40, 40), 0, 1),
        ("halfgraph_12", gen_halfgraph(12), 1, 2),
    ]
    print(f"{'case':<14} {'n':>4} {'m':>5} -> {'n_s':>4} {'m_s':>5} {'flips':>6} {'apexes':>7} {'exact':>6}")
    for name, g, k, h in cases:
        sg = build_sparsifier(g, k, h)
        ok = recover(sg) == g
        print(
            f"{name:<14} {g.n:>4} {g.edge_count():>5} -> {sg.graph.n:>4} "
            f"{sg.graph.edge_count():>5} {len(sg.flipped_pairs):>6} "
            f"{len(sg.apex):>7} {str(ok):>6}"
        )


if __name__ == "__main__":
    main()
