"""Shared corpus builders and independent oracles for the test suite.

The oracles here deliberately use different algorithms than the library
(subset enumeration, relational-algebra formula evaluation) so agreement
is meaningful.
"""

from __future__ import annotations

import math
import random
from itertools import combinations, product

from treerank.graph import Graph, gen_random, make_graph

INF = math.inf


# ---------------------------------------------------------------------------
# Structured families.


def complete_graph(n: int) -> Graph:
    return make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return make_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def cycle(n: int) -> Graph:
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return make_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs: Graph) -> Graph:
    total = sum(g.n for g in graphs)
    edges = []
    preds: dict[str, set[int]] = {}
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        for name, vs in g.predicates.items():
            preds.setdefault(name, set()).update(v + offset for v in vs)
        offset += g.n
    return make_graph(total, edges, preds)


def permute_graph(g: Graph, perm: list[int]) -> Graph:
    edges = [(perm[u], perm[v]) for u, v in g.edges()]
    preds = {name: [perm[v] for v in vs] for name, vs in g.predicates.items()}
    return make_graph(g.n, edges, preds)


def seeded_random_graphs(count: int, max_n: int, seed: int, min_n: int = 1) -> list[Graph]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(min_n, max_n)
        p = rng.random()
        out.append(gen_random(n, p, seed * 1000 + i))
    return out


# ---------------------------------------------------------------------------
# Independent ranking oracle: the declarative fixed point, with the
# separator question answered by plain subset enumeration.


def _ball(g: Graph, v: int, r: int, removed: set[int]) -> set[int]:
    seen = {v}
    frontier = [v]
    for _ in range(r):
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if w not in seen and w not in removed:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def rank_oracle(g: Graph, r: int, m: int) -> tuple[float, ...]:
    ranks: dict[int, float] = {v: INF for v in range(g.n)}
    k = 0
    while any(x == INF for x in ranks.values()):
        k += 1
        newly = []
        for v in range(g.n):
            if ranks[v] != INF:
                continue
            others = [u for u in range(g.n) if u != v]
            if _separable(g, v, r, m, others, ranks, k):
                newly.append(v)
        if not newly:
            break
        for v in newly:
            ranks[v] = k
    return tuple(ranks[v] for v in range(g.n))


def _separable(g, v, r, m, others, ranks, k) -> bool:
    for size in range(m + 1):
        for s in combinations(others, size):
            ball = _ball(g, v, r, set(s))
            if all(ranks[u] < k for u in ball if u != v):
                return True
    return False


# ---------------------------------------------------------------------------
# Independent formula evaluation by relational algebra over assignment
# tuples (satisfying-set semantics), for cross-checking the recursive
# evaluator on tiny graphs.

from treerank import fo  # noqa: E402


def eval_reference(g: Graph, f: fo.Formula, assignment: dict[str, int]) -> bool:
    rel, vs = _sat(g, f)
    key = tuple(assignment[v] for v in vs)
    return key in rel


def _sat(g: Graph, f: fo.Formula) -> tuple[set[tuple[int, ...]], tuple[str, ...]]:
    dom = range(g.n)
    if isinstance(f, fo.Edge):
        if f.x == f.y:
            return set(), (f.x,)
        vs = tuple(sorted((f.x, f.y)))
        rel = {
            ((a, b) if vs[0] == f.x else (b, a))
            for a in dom
            for b in g.adj[a]
        }
        return rel, vs
    if isinstance(f, fo.Eq):
        if f.x == f.y:
            return {(a,) for a in dom}, (f.x,)
        vs = tuple(sorted((f.x, f.y)))
        return {(a, a) for a in dom}, vs
    if isinstance(f, fo.Pred):
        marked = g.predicates.get(f.name, frozenset())
        return {(a,) for a in marked}, (f.x,)
    if isinstance(f, fo.Const):
        return ({()} if f.value else set()), ()
    if isinstance(f, fo.Not):
        rel, vs = _sat(g, f.f)
        full = set(product(dom, repeat=len(vs)))
        return full - rel, vs
    if isinstance(f, (fo.And, fo.Or)):
        rels = [_sat(g, p) for p in f.parts]
        all_vs = tuple(sorted(set(v for _, vs in rels for v in vs)))
        expanded = [_expand(g, rel, vs, all_vs) for rel, vs in rels]
        out = expanded[0]
        for e in expanded[1:]:
            out = out & e if isinstance(f, fo.And) else out | e
        return out, all_vs
    if isinstance(f, (fo.Exists, fo.Forall)):
        rel, vs = _sat(g, f.f)
        if f.var not in vs:
            if isinstance(f, fo.Exists):
                return (rel if g.n > 0 else set()), vs
            if g.n == 0:
                return set(product(dom, repeat=len(vs))), vs
            return rel, vs
        i = vs.index(f.var)
        rest = vs[:i] + vs[i + 1 :]
        groups: dict[tuple[int, ...], set[int]] = {}
        for t in rel:
            groups.setdefault(t[:i] + t[i + 1 :], set()).add(t[i])
        if isinstance(f, fo.Exists):
            return set(groups), rest
        full_dom = set(dom)
        return {t for t, vals in groups.items() if vals == full_dom}, rest
    raise TypeError(f)


def _expand(g, rel, vs, target_vs):
    extra = [v for v in target_vs if v not in vs]
    idx = {v: i for i, v in enumerate(vs)}
    out = set()
    for t in rel:
        for ext in product(range(g.n), repeat=len(extra)):
            env = dict(zip(extra, ext))
            env.update({v: t[idx[v]] for v in vs})
            out.add(tuple(env[v] for v in target_vs))
    return out


def random_formula(rng: random.Random, depth: int, variables=("x", "y", "z")) -> fo.Formula:
    atoms = [
        lambda: fo.Edge(rng.choice(variables), rng.choice(variables)),
        lambda: fo.Eq(rng.choice(variables), rng.choice(variables)),
        lambda: fo.Pred(rng.choice(("R", "B")), rng.choice(variables)),
        lambda: fo.TRUE,
        lambda: fo.FALSE,
    ]
    if depth == 0:
        return rng.choice(atoms)()
    kind = rng.randrange(5)
    if kind == 0:
        return fo.Not(random_formula(rng, depth - 1, variables))
    if kind == 1:
        return fo.And(
            tuple(random_formula(rng, depth - 1, variables) for _ in range(rng.randint(2, 3)))
        )
    if kind == 2:
        return fo.Or(
            tuple(random_formula(rng, depth - 1, variables) for _ in range(rng.randint(2, 3)))
        )
    if kind == 3:
        return fo.Exists(rng.choice(variables), random_formula(rng, depth - 1, variables))
    return fo.Forall(rng.choice(variables), random_formula(rng, depth - 1, variables))
