"""Minimal first-order logic over the graph signature plus unary predicates.

Formulas are a small immutable AST evaluated by direct recursive
enumeration (quantifiers range over all vertices).  No optimization is
attempted; the formulas used in this package have quantifier depth <= 3.

Serialization is a prefix s-expression:

    formula := (E x y) | (P <name> x) | (= x y) | true | false
             | (not f) | (and f f ...) | (or f f ...)
             | (exists v f) | (forall v f)

Variables and predicate names are bare symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

from .graph import Graph, make_graph


@dataclass(frozen=True)
class Edge:
    x: str
    y: str


@dataclass(frozen=True)
class Pred:
    name: str
    x: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    f: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Exists:
    var: str
    f: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    f: "Formula"


Formula = Union[Edge, Pred, Eq, Const, Not, And, Or, Exists, Forall]

TRUE = Const(True)
FALSE = Const(False)


def conj(*parts: Formula) -> Formula:
    return And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    return Or(tuple(parts))


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Edge):
        return frozenset((f.x, f.y))
    if isinstance(f, Eq):
        return frozenset((f.x, f.y))
    if isinstance(f, Pred):
        return frozenset((f.x,))
    if isinstance(f, Const):
        return frozenset()
    if isinstance(f, Not):
        return free_vars(f.f)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.f) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def evaluate(g: Graph, f: Formula, assignment: Mapping[str, int]) -> bool:
    """Tarskian truth of f in g under the given variable assignment.

    Raises ValueError if a free variable of f is unassigned.  Predicate
    names absent from g are treated as empty sets.
    """
    missing = free_vars(f) - set(assignment)
    if missing:
        raise ValueError(f"unbound free variables: {sorted(missing)}")
    env = dict(assignment)
    return _ev(g, f, env)


def _ev_edge(g, f, env):
    return env[f.y] in g.adj[env[f.x]]


def _ev_eq(g, f, env):
    return env[f.x] == env[f.y]


def _ev_pred(g, f, env):
    return env[f.x] in g.predicates.get(f.name, frozenset())


def _ev_const(g, f, env):
    return f.value


def _ev_not(g, f, env):
    return not _ev(g, f.f, env)


def _ev_and(g, f, env):
    return all(_ev(g, p, env) for p in f.parts)


def _ev_or(g, f, env):
    return any(_ev(g, p, env) for p in f.parts)


def _ev_exists(g, f, env):
    saved = env.get(f.var)
    for v in range(g.n):
        env[f.var] = v
        if _ev(g, f.f, env):
            _restore(env, f.var, saved)
            return True
    _restore(env, f.var, saved)
    return False


def _ev_forall(g, f, env):
    saved = env.get(f.var)
    for v in range(g.n):
        env[f.var] = v
        if not _ev(g, f.f, env):
            _restore(env, f.var, saved)
            return False
    _restore(env, f.var, saved)
    return True


_EVAL = {
    Edge: _ev_edge,
    Eq: _ev_eq,
    Pred: _ev_pred,
    Const: _ev_const,
    Not: _ev_not,
    And: _ev_and,
    Or: _ev_or,
    Exists: _ev_exists,
    Forall: _ev_forall,
}


def _ev(g: Graph, f: Formula, env: dict[str, int]) -> bool:
    try:
        handler = _EVAL[type(f)]
    except KeyError:
        raise TypeError(f"not a formula: {f!r}") from None
    return handler(g, f, env)


def _restore(env: dict[str, int], var: str, saved: int | None) -> None:
    if saved is None:
        env.pop(var, None)
    else:
        env[var] = saved


@dataclass(frozen=True)
class Interpretation:
    """A pair (psi(x, y), delta(x)) defining a graph transformation.

    psi is symmetrized at evaluation time: an edge is produced iff
    psi(u, v) or psi(v, u) holds with u != v, so the output is always a
    valid simple graph even for syntactically asymmetric psi.
    """

    psi: Formula
    delta: Formula

    def __post_init__(self):
        if not free_vars(self.psi) <= {"x", "y"}:
            raise ValueError("psi may only use free variables x, y")
        if not free_vars(self.delta) <= {"x"}:
            raise ValueError("delta may only use free variable x")


def apply_interpretation(g: Graph, interp: Interpretation) -> tuple[Graph, dict[int, int]]:
    """Graph defined by interp on g, with dense ids and the old->new map.

    Vertices are those satisfying delta; edges are the distinct pairs
    satisfying psi in either order.  Predicates are restricted to the
    surviving vertices (empty ones are dropped).
    """
    kept = [v for v in range(g.n) if evaluate(g, interp.delta, {"x": v})]
    remap = {v: i for i, v in enumerate(kept)}
    edges = []
    env: dict[str, int] = {}
    for i, u in enumerate(kept):
        for v in kept[i + 1 :]:
            env["x"], env["y"] = u, v
            if _ev(g, interp.psi, env):
                edges.append((remap[u], remap[v]))
                continue
            env["x"], env["y"] = v, u
            if _ev(g, interp.psi, env):
                edges.append((remap[u], remap[v]))
    preds = {
        name: [remap[v] for v in vs if v in remap]
        for name, vs in g.predicates.items()
    }
    return make_graph(len(kept), edges, preds), remap


def check_range(g: Graph, psi: Formula, b: int) -> bool:
    """True iff no vertex pair of g at distance > b satisfies psi.

    This is an empirical check on one graph: unreachable pairs count as
    distance infinity.  psi is checked in both argument orders.
    """
    if b < 0:
        raise ValueError("range bound must be nonnegative")
    dist = _all_pairs_distances(g)
    env: dict[str, int] = {}
    for u in range(g.n):
        du = dist[u]
        for v in range(u + 1, g.n):
            if du.get(v, b + 1) <= b:
                continue
            env["x"], env["y"] = u, v
            if _ev(g, psi, env):
                return False
            env["x"], env["y"] = v, u
            if _ev(g, psi, env):
                return False
    return True


def _all_pairs_distances(g: Graph) -> list[dict[int, int]]:
    out = []
    for v in range(g.n):
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
        out.append(d)
    return out


def recovery_interpretation() -> Interpretation:
    """The fixed interpretation undoing the sparsifier's marked flips.

    The adjacency of distinct unmarked vertices x, y is complemented iff
    they share a neighbor marked R and F, or they have distinct adjacent
    R-marked neighbors; delta keeps the vertices not marked R.  The edge
    formula has range 3.
    """
    e_xy = Edge("x", "y")
    shared = Exists(
        "w",
        conj(Pred("R", "w"), Pred("F", "w"), Edge("x", "w"), Edge("y", "w")),
    )
    # The marked-vertex guards sit before the inner quantifier so the
    # brute-force evaluation prunes unmarked witnesses early.
    crossed = Exists(
        "w1",
        conj(
            Pred("R", "w1"),
            Edge("x", "w1"),
            Exists(
                "w2",
                conj(
                    Pred("R", "w2"),
                    Not(Eq("w1", "w2")),
                    Edge("w1", "w2"),
                    Edge("y", "w2"),
                ),
            ),
        ),
    )
    complement = disj(shared, crossed)
    psi = disj(conj(e_xy, Not(complement)), conj(Not(e_xy), complement))
    delta = Not(Pred("R", "x"))
    return Interpretation(psi, delta)


# ---------------------------------------------------------------------------
# S-expression serialization.


def format_formula(f: Formula) -> str:
    if isinstance(f, Edge):
        return f"(E {f.x} {f.y})"
    if isinstance(f, Pred):
        return f"(P {f.name} {f.x})"
    if isinstance(f, Eq):
        return f"(= {f.x} {f.y})"
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return f"(not {format_formula(f.f)})"
    if isinstance(f, And):
        return "(and " + " ".join(format_formula(p) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(or " + " ".join(format_formula(p) for p in f.parts) + ")"
    if isinstance(f, Exists):
        return f"(exists {f.var} {format_formula(f.f)})"
    if isinstance(f, Forall):
        return f"(forall {f.var} {format_formula(f.f)})"
    raise TypeError(f"not a formula: {f!r}")


def parse_formula(text: str) -> Formula:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise ValueError("empty formula")
    f, rest = _parse(tokens)
    if rest:
        raise ValueError(f"trailing tokens: {rest[:3]}")
    return f


def _parse(tokens: list[str]) -> tuple[Formula, list[str]]:
    tok = tokens[0]
    if tok == "true":
        return TRUE, tokens[1:]
    if tok == "false":
        return FALSE, tokens[1:]
    if tok != "(":
        raise ValueError(f"expected '(' or constant, got {tok!r}")
    if len(tokens) < 2:
        raise ValueError("unterminated expression")
    head, rest = tokens[1], tokens[2:]
    if head in ("E", "="):
        x, y = _take_symbols(rest, 2)
        rest = _expect_close(rest[2:])
        return (Edge(x, y) if head == "E" else Eq(x, y)), rest
    if head == "P":
        name, x = _take_symbols(rest, 2)
        rest = _expect_close(rest[2:])
        return Pred(name, x), rest
    if head == "not":
        f, rest = _parse(rest)
        return Not(f), _expect_close(rest)
    if head in ("and", "or"):
        parts = []
        while rest and rest[0] != ")":
            p, rest = _parse(rest)
            parts.append(p)
        if not parts:
            raise ValueError(f"empty {head!r}")
        rest = _expect_close(rest)
        return (And(tuple(parts)) if head == "and" else Or(tuple(parts))), rest
    if head in ("exists", "forall"):
        (var,) = _take_symbols(rest, 1)
        f, rest = _parse(rest[1:])
        rest = _expect_close(rest)
        return (Exists(var, f) if head == "exists" else Forall(var, f)), rest
    raise ValueError(f"unknown operator {head!r}")


def _take_symbols(tokens: list[str], k: int) -> tuple[str, ...]:
    if len(tokens) < k or any(t in "()" for t in tokens[:k]):
        raise ValueError("expected symbol arguments")
    return tuple(tokens[:k])


def _expect_close(tokens: list[str]) -> list[str]:
    if not tokens or tokens[0] != ")":
        raise ValueError("expected ')'")
    return tokens[1:]
