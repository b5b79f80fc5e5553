"""Class membership checks: bounded-exception degree and near-coverage.

A parameter function supplies per-radius bounds under a budget contract:
asked for its value at radius r with budget n, it either returns the
value (guaranteed <= n) or reports that the value exceeds n.  Checks
skip radii whose bounds overflow the budget, where the condition holds
trivially.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Optional

from .errors import ScaleExceeded
from .graph import Graph, closed_ball, induced
from .neartwin import symdiff


@dataclass(frozen=True)
class ParamFunction:
    """Evaluable per-radius bound with an overflow verdict.

    Built-in kinds: "const" (params=(c,)), "linear" (params=(a, b) for
    a*r + b), "exp2" (2**r), "tower" (tower of twos of height r), and
    "table" (finite lookup; missing radii count as overflow).
    """

    kind: str
    params: tuple[int, ...] = ()
    table: Mapping[int, Optional[int]] = field(default_factory=dict)

    def eval(self, r: int, n: int) -> Optional[int]:
        """Value at radius r if it is <= n, else None ("exceeds n")."""
        if r < 0 or n < 0:
            raise ValueError("need r >= 0 and n >= 0")
        if self.kind == "const":
            v = self.params[0]
        elif self.kind == "linear":
            a, b = self.params
            v = a * r + b
        elif self.kind == "exp2":
            v = 1
            for _ in range(r):
                v *= 2
                if v > n:
                    return None
        elif self.kind == "tower":
            v = 1
            for _ in range(r):
                if v > 64 or 2**v > n:
                    return None
                v = 2**v
        elif self.kind == "table":
            got = self.table.get(r)
            if got is None:
                return None
            v = got
        else:
            raise ValueError(f"unknown parameter function kind {self.kind!r}")
        return v if v <= n else None

    def spec(self) -> str:
        if self.kind == "const":
            return f"const:{self.params[0]}"
        if self.kind == "linear":
            return f"linear:{self.params[0]},{self.params[1]}"
        if self.kind in ("exp2", "tower"):
            return self.kind
        return "table:" + json.dumps({str(r): v for r, v in sorted(self.table.items())})


def const_fn(c: int) -> ParamFunction:
    return ParamFunction("const", (c,))


def linear_fn(a: int, b: int) -> ParamFunction:
    return ParamFunction("linear", (a, b))


def table_fn(values: Mapping[int, Optional[int]]) -> ParamFunction:
    return ParamFunction("table", (), dict(values))


def parse_param_function(spec: str) -> ParamFunction:
    """Parse the mini-language: const:5 | linear:a,b | exp2 | tower | table:{...}."""
    if spec == "exp2":
        return ParamFunction("exp2")
    if spec == "tower":
        return ParamFunction("tower")
    if spec.startswith("const:"):
        return const_fn(int(spec.split(":", 1)[1]))
    if spec.startswith("linear:"):
        a, b = spec.split(":", 1)[1].split(",")
        return linear_fn(int(a), int(b))
    if spec.startswith("table:"):
        raw = json.loads(spec.split(":", 1)[1])
        return table_fn({int(k): v for k, v in raw.items()})
    raise ValueError(f"bad parameter function spec {spec!r}")


@dataclass(frozen=True)
class ClassSpec:
    """Bounded-exception degree class: at most f(r) vertices of degree
    more than d(r) inside every radius-r ball."""

    f: ParamFunction
    d: ParamFunction


@dataclass(frozen=True)
class LabdResult:
    ok: bool
    certificate: Optional[tuple[int, int, tuple[int, ...]]] = None  # (r, v, offenders)


def labd_check(g: Graph, spec: ClassSpec, r_max: Optional[int] = None) -> LabdResult:
    """Check the bounded-exception degree condition for all r up to n.

    Radii where either bound exceeds n are trivially satisfied and
    skipped.  Passing r_max truncates the scan, which is a strictly
    weaker check (fewer radii inspected).  On failure, returns the first
    (r, v) with the offending high-degree set.
    """
    n = g.n
    limit = n if r_max is None else min(r_max, n)
    degs = [g.degree(v) for v in range(n)]
    dist = [_bfs_distances(g, v) for v in range(n)]
    for r in range(limit + 1):
        f_r = spec.f.eval(r, n)
        d_r = spec.d.eval(r, n)
        if f_r is None or d_r is None:
            continue
        for v in range(n):
            offenders = [
                u for u, du in dist[v].items() if du <= r and degs[u] > d_r
            ]
            if len(offenders) > f_r:
                return LabdResult(False, (r, v, tuple(sorted(offenders))))
    return LabdResult(True)


def _bfs_distances(g: Graph, v: int) -> dict[int, int]:
    d = {v: 0}
    frontier = [v]
    step = 0
    while frontier:
        step += 1
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if w not in d:
                    d[w] = step
                    nxt.append(w)
        frontier = nxt
    return d


@dataclass(frozen=True)
class NearCoveredResult:
    ok: bool
    exact: bool
    # On a False verdict: m+1 vertices that are pairwise not k-near-twins.
    certificate: Optional[tuple[int, ...]] = None


def near_covered_check(
    g: Graph,
    k: int,
    m: int,
    exact: bool = True,
    cap_nodes: int = 2_000_000,
) -> NearCoveredResult:
    """Is every set of pairwise non-k-near-twins of size at most m?

    Exact mode searches for m+1 vertices that are pairwise not
    k-near-twins (an independent set in NT_k); verdicts are exact but the
    search is capped.  Greedy mode builds one maximal set by smallest-id
    choice: its False verdicts are sound, its True verdicts heuristic
    (flagged by exact=False in the result).
    """
    if k < 0 or m < 0:
        raise ValueError("need k >= 0 and m >= 0")
    nt_adj = _nt_adjacency(g, k)
    if not exact:
        chosen: list[int] = []
        for v in range(g.n):
            if all(u not in nt_adj[v] for u in chosen):
                chosen.append(v)
        if len(chosen) > m:
            return NearCoveredResult(False, False, tuple(chosen[: m + 1]))
        return NearCoveredResult(True, False)
    found = _independent_set_of_size(nt_adj, m + 1, cap_nodes)
    if found is not None:
        return NearCoveredResult(False, True, tuple(sorted(found)))
    return NearCoveredResult(True, True)


def _nt_adjacency(g: Graph, k: int) -> list[frozenset[int]]:
    adj: list[set[int]] = [set() for _ in range(g.n)]
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if symdiff(g, u, v) <= k:
                adj[u].add(v)
                adj[v].add(u)
    return [frozenset(s) for s in adj]


def _independent_set_of_size(
    nt_adj: list[frozenset[int]],
    target: int,
    cap_nodes: int,
) -> Optional[list[int]]:
    """Find `target` pairwise non-adjacent vertices, or prove none exist."""
    n = len(nt_adj)
    budget = [cap_nodes]
    chosen: list[int] = []

    def grow(start: int) -> bool:
        budget[0] -= 1
        if budget[0] < 0:
            raise ScaleExceeded("near_covered_check", "node cap")
        if len(chosen) == target:
            return True
        if len(chosen) + (n - start) < target:
            return False
        for v in range(start, n):
            if any(v in nt_adj[u] for u in chosen):
                continue
            chosen.append(v)
            if grow(v + 1):
                return True
            chosen.pop()
        return False

    if grow(0):
        return list(chosen)
    return None


def near_covered_bruteforce(g: Graph, k: int, m: int, cap_n: int = 12) -> bool:
    """Oracle by full subset enumeration; desk scale only."""
    if g.n > cap_n:
        raise ScaleExceeded("near_covered_bruteforce", f"n={g.n}")
    nt_adj = _nt_adjacency(g, k)
    for size in range(m + 1, g.n + 1):
        for combo in combinations(range(g.n), size):
            if all(v not in nt_adj[u] for u, v in combinations(combo, 2)):
                return False
    return True


@dataclass(frozen=True)
class LocalNearCoveredResult:
    ok: bool
    exact: bool
    # On failure: (r, ball center, offending vertices in g's ids).
    certificate: Optional[tuple[int, int, tuple[int, ...]]] = None


def locally_near_covered_check(
    g: Graph,
    kf: ParamFunction,
    mf: ParamFunction,
    r_max: int,
    exact: bool = True,
    cap_nodes: int = 2_000_000,
) -> LocalNearCoveredResult:
    """Check near-coverage of every radius-r ball for r <= r_max.

    Radii where k(r) or m(r) overflows the budget n are trivially
    satisfied.  Near-twin differences are computed inside the induced
    ball subgraph, not the host graph.
    """
    n = g.n
    all_exact = True
    for r in range(r_max + 1):
        k_r = kf.eval(r, n)
        m_r = mf.eval(r, n)
        if k_r is None or m_r is None or m_r >= n:
            continue
        for v in range(n):
            ball = closed_ball(g, v, r)
            sub, remap = induced(g, ball)
            res = near_covered_check(sub, k_r, m_r, exact=exact, cap_nodes=cap_nodes)
            all_exact = all_exact and res.exact
            if not res.ok:
                back = {i: orig for orig, i in remap.items()}
                cert = tuple(sorted(back[i] for i in res.certificate))
                return LocalNearCoveredResult(False, res.exact, (r, v, cert))
    return LocalNearCoveredResult(True, all_exact)


def no_ladder_bound(k2: int, m2: int) -> int:
    """Half-graph order excluded by radius-2 near-coverage:
    m2*k2 + m2 + 1."""
    return m2 * k2 + m2 + 1
