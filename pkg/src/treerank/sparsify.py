"""The sparsifier: flip heavy near-twin components and mark them for
exact recovery.

Vertices are partitioned by the connected components of NT_k(G).  A pair
of parts (possibly equal) is mutually heavy when both have at least
5h+1 vertices and some vertex of one has more than 2h neighbors in the
other.  The construction flips every mutually heavy pair and attaches a
marked apex vertex to each heavy part; apexes of a flipped distinct pair
are joined, and a self-flipped part's apex carries a second mark.  The
marks pin down exactly which pairs were complemented, so recovery is
exact on every input graph, class member or not.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Optional

from .errors import ScaleExceeded
from .graph import Graph, make_graph, s_flip, s_flip_classes
from .labd import ClassSpec, labd_check
from .neartwin import symdiff


@dataclass(frozen=True)
class PartPartition:
    """Connected components of NT_k(G), each sorted, ordered by minimum."""

    k: int
    parts: tuple[tuple[int, ...], ...]

    def part_of(self) -> dict[int, int]:
        out = {}
        for i, p in enumerate(self.parts):
            for v in p:
                out[v] = i
        return out


def component_partition(g: Graph, k: int) -> PartPartition:
    """NT_k components without materializing the near-twin graph.

    Near-twin pairs either share a neighbor (enumerated through common
    neighbors) or have degree sum at most k (united through the pool of
    low-degree vertices), so a disjoint-set pass over those candidates
    suffices.  Near-linear on sparse graphs.
    """
    if k < 0:
        raise ValueError("threshold must be nonnegative")
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    checked: set[tuple[int, int]] = set()
    for w in range(g.n):
        nbrs = sorted(g.adj[w])
        for i, u in enumerate(nbrs):
            for v in nbrs[i + 1 :]:
                key = (u, v)
                if key in checked:
                    continue
                checked.add(key)
                if len(g.adj[u] ^ g.adj[v]) <= k:
                    union(u, v)

    # Pairs with no common neighbor differ in exactly deg(u) + deg(v)
    # elements.  All vertices of degree <= k/2 are pairwise near-twins;
    # a vertex of larger degree joins them iff some pooled vertex has
    # degree <= k - deg(v).
    degs = [g.degree(v) for v in range(g.n)]
    core = [v for v in range(g.n) if 2 * degs[v] <= k]
    for a, b in zip(core, core[1:]):
        union(a, b)
    if core:
        core_min_by_deg = min(core, key=lambda v: degs[v])
        for v in range(g.n):
            if 2 * degs[v] > k and degs[v] + degs[core_min_by_deg] <= k:
                union(v, core_min_by_deg)

    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(find(v), []).append(v)
    parts = tuple(sorted((tuple(sorted(vs)) for vs in groups.values()), key=lambda p: p[0]))
    return PartPartition(k, parts)


@dataclass(frozen=True)
class HeavyClassification:
    h: int
    heavy: frozenset[int]
    mutually_heavy: frozenset[tuple[int, int]]  # unordered, stored (i, j) with i <= j


def classify_heavy(g: Graph, partition: PartPartition, h: int) -> HeavyClassification:
    """Exact heavy / mutually heavy classification by direct counting.

    The witness condition is symmetric over the unordered pair: either
    side may contain the vertex with more than 2h cross neighbors.
    """
    if h < 1:
        raise ValueError("heaviness threshold must be >= 1")
    part_of = partition.part_of()
    sizes = [len(p) for p in partition.parts]
    counts: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for u in range(g.n):
        cu = counts[u]
        for v in g.adj[u]:
            pv = part_of[v]
            cu[pv] = cu.get(pv, 0) + 1
    pairs: set[tuple[int, int]] = set()
    for u in range(g.n):
        pu = part_of[u]
        if sizes[pu] < 5 * h + 1:
            continue
        for pv, cnt in counts[u].items():
            if cnt > 2 * h and sizes[pv] >= 5 * h + 1:
                pairs.add((min(pu, pv), max(pu, pv)))
    heavy = frozenset(i for pair in pairs for i in pair)
    return HeavyClassification(h, heavy, frozenset(pairs))


def light_parts(g: Graph, partition: PartPartition, h: int) -> frozenset[int]:
    """Parts containing a vertex of degree at most h (analysis aid only)."""
    out = set()
    for i, part in enumerate(partition.parts):
        if any(g.degree(v) <= h for v in part):
            out.add(i)
    return frozenset(out)


@dataclass(frozen=True)
class SparsifiedGraph:
    """Construction output: the marked graph plus build provenance."""

    graph: Graph
    apex: Mapping[int, int]  # heavy part index -> apex vertex id
    flipped_pairs: tuple[tuple[int, int], ...]
    original_n: int
    partition: PartPartition
    h: int


def build_sparsifier(g: Graph, k: int, h: int) -> SparsifiedGraph:
    """Flip mutually heavy NT_k-component pairs and attach marked apexes.

    Apex vertices take ids n, n+1, ... (one per heavy part, in part-index
    order) so original ids are stable and recovery is literal equality.
    The input must not already use the reserved predicates R and F.
    """
    if k < 0:
        raise ValueError("threshold must be nonnegative")
    if h < 1:
        raise ValueError("heaviness threshold must be >= 1")
    for reserved in ("R", "F"):
        if reserved in g.predicates:
            raise ValueError(f"input graph already uses reserved predicate {reserved!r}")
    partition = component_partition(g, k)
    hc = classify_heavy(g, partition, h)
    flips = tuple(sorted(hc.mutually_heavy))

    adj: list[set[int]] = [set(s) for s in g.adj]
    for i, j in flips:
        a = partition.parts[i]
        if i == j:
            fa = frozenset(a)
            for u in a:
                adj[u] ^= fa - {u}
        else:
            b = partition.parts[j]
            fa, fb = frozenset(a), frozenset(b)
            for u in a:
                adj[u] ^= fb
            for v in b:
                adj[v] ^= fa

    apex: dict[int, int] = {}
    next_id = g.n
    for i in sorted(hc.heavy):
        apex[i] = next_id
        next_id += 1
    for s in range(g.n, next_id):
        adj.append(set())
    for i, a_vertex in apex.items():
        for u in partition.parts[i]:
            adj[u].add(a_vertex)
            adj[a_vertex].add(u)
    self_flipped = set()
    for i, j in flips:
        if i == j:
            self_flipped.add(i)
        else:
            adj[apex[i]].add(apex[j])
            adj[apex[j]].add(apex[i])

    preds = dict(g.predicates)
    preds["R"] = frozenset(apex.values())
    f_marks = frozenset(apex[i] for i in self_flipped)
    if f_marks:
        preds["F"] = f_marks
    out = Graph(
        next_id,
        tuple(frozenset(s) for s in adj),
        {name: vs for name, vs in preds.items() if vs},
    )
    return SparsifiedGraph(out, apex, flips, g.n, partition, h)


def validate_sparsified(sg: SparsifiedGraph) -> None:
    """Check the construction invariants; raises ValueError on violation."""
    g = sg.graph
    r_set = g.predicates.get("R", frozenset())
    f_set = g.predicates.get("F", frozenset())
    if r_set != frozenset(sg.apex.values()):
        raise ValueError("R marks disagree with the apex record")
    if not f_set <= r_set:
        raise ValueError("F marks escape the R marks")
    apex_partner: dict[int, set[int]] = {a: set() for a in sg.apex.values()}
    for i, j in sg.flipped_pairs:
        if i != j:
            apex_partner[sg.apex[i]].add(sg.apex[j])
            apex_partner[sg.apex[j]].add(sg.apex[i])
    for i, a_vertex in sg.apex.items():
        expected = set(sg.partition.parts[i]) | apex_partner[a_vertex]
        if set(g.adj[a_vertex]) != expected:
            raise ValueError(f"apex {a_vertex} adjacency disagrees with part {i}")
    self_flipped = frozenset(sg.apex[i] for i, j in sg.flipped_pairs if i == j)
    if f_set != self_flipped:
        raise ValueError("F marks disagree with the self-flipped parts")
    for v in range(sg.original_n):
        if len(g.adj[v] & r_set) > 1:
            raise ValueError(f"original vertex {v} has multiple marked neighbors")


class RecoverError(ValueError):
    """The marked graph violates the invariants recovery relies on."""


def recover_graph(g: Graph) -> tuple[Graph, dict[int, int]]:
    """Undo marked flips on any graph carrying R/F predicates.

    Keeps the non-R vertices (ids remapped densely), complements the
    adjacency of pairs sharing an R-and-F-marked neighbor or having
    distinct adjacent R-marked neighbors, drops the R/F marks, and
    restricts the remaining predicates.  Raises RecoverError if some kept
    vertex has several R-marked neighbors or F escapes R.
    """
    r_set = g.predicates.get("R", frozenset())
    f_set = g.predicates.get("F", frozenset())
    if not f_set <= r_set:
        raise RecoverError("F marks escape the R marks")
    keep = [v for v in range(g.n) if v not in r_set]
    mark: dict[int, Optional[int]] = {}
    for v in keep:
        marked = g.adj[v] & r_set
        if len(marked) > 1:
            raise RecoverError(f"vertex {v} has {len(marked)} marked neighbors")
        mark[v] = next(iter(marked)) if marked else None
    remap = {v: i for i, v in enumerate(keep)}
    edges = []
    for idx, x in enumerate(keep):
        mx = mark[x]
        for y in keep[idx + 1 :]:
            my = mark[y]
            if mx is not None and my is not None:
                if mx == my:
                    complement = mx in f_set
                else:
                    complement = my in g.adj[mx]
            else:
                complement = False
            if (y in g.adj[x]) != complement:
                edges.append((remap[x], remap[y]))
    preds = {
        name: [remap[v] for v in vs if v in remap]
        for name, vs in g.predicates.items()
        if name not in ("R", "F")
    }
    return make_graph(len(keep), edges, preds), remap


def recover(sg: SparsifiedGraph) -> Graph:
    """Exact inverse of build_sparsifier: recover(build_sparsifier(g)) == g."""
    out, remap = recover_graph(sg.graph)
    if sorted(remap) != list(range(sg.original_n)):
        raise RecoverError("marked vertices are not the appended apex block")
    return out


def quotient_graph(g: Graph, partition: PartPartition) -> Graph:
    """Parts as vertices; parts adjacent when any cross edge exists."""
    part_of = partition.part_of()
    edges = set()
    for u, v in g.edges():
        pu, pv = part_of[u], part_of[v]
        if pu != pv:
            edges.add((min(pu, pv), max(pu, pv)))
    return make_graph(len(partition.parts), edges)


@dataclass(frozen=True)
class PairDensityReport:
    verdict: str  # "sparse" | "dense" | "mixed"
    preconditions_ok: bool
    notes: tuple[str, ...] = ()


def pair_density(g: Graph, a: Iterable[int], b: Iterable[int], k: int) -> PairDensityReport:
    """Classify the cross adjacency of two near-twin blocks.

    Sparse: every vertex sees at most 2k of the other side; dense: every
    vertex misses at most 2k of the other side; mixed otherwise.  The
    dichotomy hypotheses (sizes >= 5k+1, pairwise k-near-twins inside
    each block) are checked and reported, never assumed.
    """
    fa, fb = sorted(frozenset(a)), sorted(frozenset(b))
    notes = []
    pre_ok = True
    if len(fa) < 5 * k + 1 or len(fb) < 5 * k + 1:
        pre_ok = False
        notes.append(f"sizes ({len(fa)},{len(fb)}) below {5 * k + 1}")
    for name, block in (("A", fa), ("B", fb)):
        bad = next(
            (
                (u, v)
                for u, v in combinations(block, 2)
                if symdiff(g, u, v) > k
            ),
            None,
        )
        if bad is not None:
            pre_ok = False
            notes.append(f"pair {bad} in {name} is not {k}-near-twin")
    sb, sa = frozenset(fb), frozenset(fa)
    sparse = all(len(g.adj[u] & sb) <= 2 * k for u in fa) and all(
        len(g.adj[v] & sa) <= 2 * k for v in fb
    )
    dense = all(len(sb - g.adj[u] - {u}) <= 2 * k for u in fa) and all(
        len(sa - g.adj[v] - {v}) <= 2 * k for v in fb
    )
    if sparse and not dense:
        verdict = "sparse"
    elif dense and not sparse:
        verdict = "dense"
    elif sparse and dense:
        verdict = "sparse"  # tiny blocks can satisfy both; sparse wins
    else:
        verdict = "mixed"
    return PairDensityReport(verdict, pre_ok, tuple(notes))


@dataclass(frozen=True)
class SflipResult:
    s: tuple[int, ...]
    flip_spec: tuple[tuple[int, int], ...]
    classes: tuple[tuple[int, ...], ...]
    flipped_graph: Graph
    sparsified: SparsifiedGraph


def sflip_driver(
    g: Graph,
    s: int,
    k: int,
    h: int,
    verifier: ClassSpec,
    cap_candidates: int = 200_000,
) -> Optional[SflipResult]:
    """Search S-flips whose sparsification lands in the verifier's class.

    Enumerates subsets S of size at most s in colexicographic order
    (equivalently, ascending characteristic bitmasks) and, for each, all
    flip specs over the S-partition classes in binary-counter order over
    the canonical class-pair list.  Returns the first candidate whose
    sparsified graph passes the verifier and whose recovery round-trips,
    or None when the enumeration is exhausted.
    """
    if s < 0:
        raise ValueError("subset size bound must be nonnegative")
    subsets = sorted(
        (c for size in range(s + 1) for c in combinations(range(g.n), size)),
        key=lambda c: sum(1 << v for v in c),
    )
    tried = 0
    for subset in subsets:
        classes = s_flip_classes(g, subset)
        pair_list = [
            (i, j) for i in range(len(classes)) for j in range(i, len(classes))
        ]
        for mask in range(1 << len(pair_list)):
            tried += 1
            if tried > cap_candidates:
                raise ScaleExceeded("sflip_driver", f"candidate cap {cap_candidates}")
            spec = tuple(p for bit, p in enumerate(pair_list) if mask >> bit & 1)
            flipped = s_flip(g, subset, spec)
            sg = build_sparsifier(flipped, k, h)
            if recover(sg) != flipped:
                continue
            if labd_check(sg.graph, verifier).ok:
                return SflipResult(subset, spec, tuple(classes), flipped, sg)
    return None


def class_h(k3: int, k2: int, m2: int) -> int:
    """Heaviness threshold implied by class functions at radii 2 and 3.

    Convenience wrapper: the excluded half-graph order is
    no_ladder_bound(k2, m2) and the threshold is h_bound(k3, t).
    """
    from .labd import no_ladder_bound
    from .neartwin import h_bound

    return h_bound(k3, no_ladder_bound(k2, m2))


def analysis_bounds(h: int, m3: int, k6r: int) -> dict[str, int]:
    """Analysis-only constants for diagnostics: the excluded biclique
    order and the near-twin threshold of the high-degree counting step.
    No tested guarantee is attached to the latter."""
    return {
        "biclique_order": 5 * h * m3 + 1,
        "neartwin_threshold": (5 * h + 1) * m3 + k6r + 1,
    }
