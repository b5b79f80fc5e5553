"""Near-twin relation, half-graph detection, and constructive extraction.

Two vertices are k-near-twins when their open neighborhoods differ in at
most k elements.  NT_k(G) joins every such pair; its connected components
drive the sparsifier.  In graphs without a large semi-induced half-graph,
same-component pairs are provably close in the near-twin metric, and the
extraction here runs that proof forward: given a near-twin path whose
endpoints differ too much, it produces an order-t half-graph witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

from .errors import ScaleExceeded
from .graph import Graph, make_graph


def symdiff(g: Graph, u: int, v: int) -> int:
    """Size of the symmetric difference of the open neighborhoods."""
    if u == v:
        raise ValueError("near-twin difference is undefined for a vertex and itself")
    return len(g.adj[u] ^ g.adj[v])


@dataclass(frozen=True)
class NearTwinView:
    """NT_k(G) with its connected-component partition."""

    k: int
    nt_graph: Graph
    components: tuple[tuple[int, ...], ...]


def neartwin_view(g: Graph, k: int) -> NearTwinView:
    """Materialize NT_k(G).  Quadratic in n; meant for desk-scale graphs.

    Components are listed in order of their smallest member, members in
    id order.
    """
    if k < 0:
        raise ValueError("threshold must be nonnegative")
    edges = []
    degs = [g.degree(v) for v in range(g.n)]
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if abs(degs[u] - degs[v]) > k:
                continue
            if len(g.adj[u] ^ g.adj[v]) <= k:
                edges.append((u, v))
    nt = make_graph(g.n, edges)
    return NearTwinView(k, nt, _components(nt))


def _components(g: Graph) -> tuple[tuple[int, ...], ...]:
    seen: set[int] = set()
    comps = []
    for v in range(g.n):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


@lru_cache(maxsize=None)
def g_bound(c: int, k: int, t: int) -> int:
    """Surplus-neighborhood recurrence: g(c,k,1) = c and
    g(c,k,t) = g(c,k,t-1)*(t-1) + k + c."""
    if t < 1:
        raise ValueError("need t >= 1")
    if t == 1:
        return c
    return g_bound(c, k, t - 1) * (t - 1) + k + c


def h_bound(k: int, t: int) -> int:
    """Near-twin closeness bound for half-graph-free components:
    2 * g_bound(t+1, k, t)."""
    return 2 * g_bound(t + 1, k, t)


@dataclass(frozen=True)
class HalfgraphWitness:
    """Vertices u_1..u_t, w_1..w_t with edge(u_i, w_j) iff i <= j."""

    u: tuple[int, ...]
    w: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.u)


def validate_halfgraph(g: Graph, wit: HalfgraphWitness) -> None:
    """Check the semi-induced half-graph pattern; raises ValueError."""
    t = len(wit.u)
    if len(wit.w) != t:
        raise ValueError("sides must have equal length")
    all_vs = wit.u + wit.w
    if len(set(all_vs)) != 2 * t:
        raise ValueError("witness vertices are not distinct")
    for i in range(t):
        for j in range(t):
            has = g.has_edge(wit.u[i], wit.w[j])
            if has != (i <= j):
                raise ValueError(
                    f"edge(u_{i+1}, w_{j+1}) is {has}, expected {i <= j}"
                )


def find_halfgraph(g: Graph, t: int, cap_nodes: int = 500_000) -> Optional[HalfgraphWitness]:
    """Backtracking search for a semi-induced half-graph of order t.

    Chooses u_1, w_1, u_2, w_2, ...: u_i must avoid w_1..w_{i-1}, and w_i
    must be adjacent to u_1..u_i.  Candidates are tried degree-descending
    (ties by id).  Aborts with ScaleExceeded past the node cap.
    """
    if t < 1:
        raise ValueError("order must be >= 1")
    if 2 * t > g.n:
        return None
    by_degree = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    used: set[int] = set()
    us: list[int] = []
    ws: list[int] = []
    budget = [cap_nodes]

    def place_u() -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise ScaleExceeded("find_halfgraph", "node cap")
        i = len(us)
        if i == t:
            return True
        for cand in by_degree:
            if cand in used:
                continue
            if any(cand in g.adj[w] for w in ws):
                continue
            us.append(cand)
            used.add(cand)
            if place_w():
                return True
            used.discard(cand)
            us.pop()
        return False

    def place_w() -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise ScaleExceeded("find_halfgraph", "node cap")
        for cand in by_degree:
            if cand in used:
                continue
            if any(cand not in g.adj[u] for u in us):
                continue
            ws.append(cand)
            used.add(cand)
            if place_u():
                return True
            used.discard(cand)
            ws.pop()
        return False

    if place_u():
        return HalfgraphWitness(tuple(us), tuple(ws))
    return None


@dataclass(frozen=True)
class HalfgraphExtraction:
    """Successful extraction: the witness plus its audit trail.

    x_chain[i] is the nested candidate set attached to w[i]; the chain
    certifies the selection of the u side.
    """

    u: tuple[int, ...]
    w: tuple[int, ...]
    x_chain: tuple[frozenset[int], ...]

    def witness(self) -> HalfgraphWitness:
        return HalfgraphWitness(self.u, self.w)


@dataclass(frozen=True)
class ExtractionFailure:
    """A precondition or chain property that failed, with its index."""

    stage: str  # "precondition" or "property-1" / "property-2" / "property-3"
    message: str


def extract_halfgraph(
    g: Graph,
    nt_path: Sequence[int],
    k: int,
    t: int,
    c: Optional[int] = None,
) -> Union[HalfgraphExtraction, ExtractionFailure]:
    """Run the constructive argument along a near-twin path.

    nt_path must be a simple path v_1..v_m in NT_k(g) and the surplus set
    S = N(v_m) \\ N(v_1) must have at least g_bound(c, k, t) elements,
    with c >= t + 1 (default t + 1).  On success returns the w/X chain
    plus the selected u side; every free choice takes the smallest id.
    """
    if c is None:
        c = t + 1
    if t < 1 or c < t + 1:
        raise ValueError("need t >= 1 and c >= t + 1")
    path = list(nt_path)
    if len(path) < 1 or len(set(path)) != len(path):
        return ExtractionFailure("precondition", "input is not a simple path")
    for a, b in zip(path, path[1:]):
        if symdiff(g, a, b) > k:
            return ExtractionFailure(
                "precondition", f"consecutive vertices ({a},{b}) are not {k}-near-twins"
            )
    s = g.adj[path[-1]] - g.adj[path[0]]
    need = g_bound(c, k, t)
    if len(s) < need:
        return ExtractionFailure(
            "precondition", f"surplus set has {len(s)} vertices, need {need}"
        )

    chain = _build_chain(g, path, s, c, k, t)
    if isinstance(chain, ExtractionFailure):
        return chain
    ws = [w for w, _ in chain]
    xs = [x for _, x in chain]

    check = _check_chain(g, s, ws, xs, c)
    if check is not None:
        return check

    # u_i: smallest id in X_i avoiding w_1..w_t and all neighborhoods of
    # w_1..w_{i-1}; the chain properties guarantee at least one choice.
    w_set = set(ws)
    us: list[int] = []
    for i in range(t):
        pool = [
            x
            for x in sorted(xs[i])
            if x not in w_set and all(x not in g.adj[ws[j]] for j in range(i))
        ]
        if not pool:
            return ExtractionFailure("property-3", f"no admissible u_{i+1} in X_{i+1}")
        us.append(pool[0])
    return HalfgraphExtraction(tuple(us), tuple(ws), tuple(xs))


def _build_chain(
    g: Graph,
    path: list[int],
    s: frozenset[int],
    c: int,
    k: int,
    t: int,
) -> Union[list[tuple[int, frozenset[int]]], ExtractionFailure]:
    if t == 1:
        return [(path[-1], s)]
    threshold = g_bound(c, k, t - 1)
    q = None
    for idx, v in enumerate(path):
        if len(s & g.adj[v]) >= threshold:
            q = idx
            break
    if q is None or q == len(path) - 1:
        return ExtractionFailure(
            "precondition", f"no proper path prefix meets the g({c},{k},{t-1}) threshold"
        )
    sub = _build_chain(g, path[: q + 1], s & g.adj[path[q]], c, k, t - 1)
    if isinstance(sub, ExtractionFailure):
        return sub
    return sub + [(path[-1], s)]


def _check_chain(
    g: Graph,
    s: frozenset[int],
    ws: list[int],
    xs: list[frozenset[int]],
    c: int,
) -> Optional[ExtractionFailure]:
    """Independent validation of the three chain properties."""
    t = len(ws)
    if len(set(ws)) != t:
        return ExtractionFailure("property-1", "chain vertices are not distinct")
    for i in range(t):
        if not xs[i] <= (g.adj[ws[i]] & s):
            return ExtractionFailure(
                "property-1", f"X_{i+1} escapes N(w_{i+1}) intersected with S"
            )
        if i > 0 and not xs[i - 1] <= xs[i]:
            return ExtractionFailure("property-2", f"X_{i} is not contained in X_{i+1}")
        overlap = sum(len(xs[i] & g.adj[ws[j]]) for j in range(i))
        if len(xs[i]) < overlap + c:
            return ExtractionFailure(
                "property-3", f"X_{i+1} counting inequality fails ({len(xs[i])} < {overlap}+{c})"
            )
    return None


def nt_path(g: Graph, k: int, u: int, v: int) -> Optional[list[int]]:
    """Shortest path from u to v in NT_k(g), by BFS over symdiff checks."""
    if u == v:
        return [u]
    parent = {u: -1}
    frontier = [u]
    while frontier:
        nxt = []
        for a in frontier:
            for b in range(g.n):
                if b in parent or b == a:
                    continue
                if symdiff(g, a, b) <= k:
                    parent[b] = a
                    if b == v:
                        path = [v]
                        while path[-1] != u:
                            path.append(parent[path[-1]])
                        path.reverse()
                        return path
                    nxt.append(b)
        frontier = nxt
    return None


def extract_halfgraph_for_pair(
    g: Graph,
    k: int,
    t: int,
    u: int,
    v: int,
    c: Optional[int] = None,
) -> Union[HalfgraphExtraction, ExtractionFailure]:
    """Extraction driver for a same-component pair differing too much.

    Orients the pair so the surplus side is large enough, finds a
    near-twin path between them, and extracts.
    """
    if c is None:
        c = t + 1
    need = g_bound(c, k, t)
    if len(g.adj[v] - g.adj[u]) >= need:
        lo, hi = u, v
    elif len(g.adj[u] - g.adj[v]) >= need:
        lo, hi = v, u
    else:
        return ExtractionFailure(
            "precondition", f"neither one-sided difference reaches {need}"
        )
    path = nt_path(g, k, lo, hi)
    if path is None:
        return ExtractionFailure("precondition", "vertices share no near-twin path")
    return extract_halfgraph(g, path, k, t, c)
