"""Command-line entry point.

Every subcommand is a thin adapter over one library operation; verdicts
are reflected in the exit status and certificates are printed in a
machine-readable line format.

Exit statuses: 0 success / true verdict, 1 false verdict (certificate
emitted), 2 usage or input error, 3 scale-cap abort.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import labd, neartwin, ranking, shallow, sparsify
from .errors import ScaleExceeded
from .graph import (
    Graph,
    ParseError,
    gen_halfgraph,
    gen_random,
    gen_tree,
    parse_graph,
    subdivide,
    write_graph,
)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_SCALE = 3


def _add_global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    # The same flags are accepted before and after the subcommand; the
    # per-subcommand copies suppress their defaults so they never clobber
    # values parsed at the top level.
    def d(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--input", default=d(None), help="graph file (default: stdin)")
    p.add_argument("--output", default=d(None), help="output file (default: stdout)")
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--cap-nodes", type=int, default=d(None), help="search node cap")
    p.add_argument("--cap-branch", type=int, default=d(None), help="candidate cap")
    p.add_argument("--quiet", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="treerank")
    _add_global_flags(top, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_flags(common, suppress=True)
    sub = top.add_subparsers(dest="cmd", required=True, parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))

    p = sub.add_parser("gen", help="generate a graph")
    p.add_argument("family", choices=["tree", "halfgraph", "random"])
    p.add_argument("--depth", type=int)
    p.add_argument("--branch", type=int)
    p.add_argument("--order", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--subdivide", type=int, default=None, metavar="R",
                   help="subdivide every edge exactly R times")

    p = sub.add_parser("rank", help="vertex ranking")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--witness", action="store_true")

    p = sub.add_parser("certify", help="tree pattern as a shallow topological minor")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--extract", action="store_true")
    p.add_argument("--vertex", type=int, default=None)

    p = sub.add_parser("neartwin", help="near-twin graph / components")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--components", action="store_true")

    p = sub.add_parser("halfgraph", help="semi-induced half-graph search")
    p.add_argument("--t", type=int, required=True)

    p = sub.add_parser("bounds", help="bound arithmetic")
    p.add_argument("--g", metavar="c,k,t")
    p.add_argument("--h", metavar="k,t")
    p.add_argument("--no-ladder", metavar="k2,m2")
    p.add_argument("--m-prime", metavar="d,r,m")

    p = sub.add_parser("labd-check", help="bounded-exception degree membership")
    p.add_argument("--f", required=True, help="parameter function spec")
    p.add_argument("--d", required=True, help="parameter function spec")
    p.add_argument("--r-max", type=int, default=None)

    p = sub.add_parser("near-covered", help="near-coverage check")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--exact", action="store_true")

    p = sub.add_parser("sparsify", help="build the marked sparse graph")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--out", help="graph output file (sidecar: <out>.prov)")

    sub.add_parser("recover", help="undo marked flips")

    p = sub.add_parser("verify-roundtrip", help="build + recover + compare")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, required=True)

    p = sub.add_parser("sflip-search", help="search S-flips that sparsify into a class")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--f", required=True, help="verifier parameter function spec")
    p.add_argument("--d", required=True, help="verifier parameter function spec")

    p = sub.add_parser("corpus", help="write a deterministic graph corpus")
    p.add_argument("--family", required=True,
                   choices=["trees", "random", "halfgraph", "mixed"])
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--max-t", type=int, default=6)
    return top


def _read_graph(args) -> Graph:
    text = Path(args.input).read_text() if args.input else sys.stdin.read()
    return parse_graph(text)


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    elif not args.quiet:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return _dispatch(args)
    except ScaleExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCALE
    except (ParseError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    cmd = args.cmd
    if cmd == "gen":
        return _cmd_gen(args)
    if cmd == "rank":
        return _cmd_rank(args)
    if cmd == "certify":
        return _cmd_certify(args)
    if cmd == "neartwin":
        return _cmd_neartwin(args)
    if cmd == "halfgraph":
        return _cmd_halfgraph(args)
    if cmd == "bounds":
        return _cmd_bounds(args)
    if cmd == "labd-check":
        return _cmd_labd(args)
    if cmd == "near-covered":
        return _cmd_near_covered(args)
    if cmd == "sparsify":
        return _cmd_sparsify(args)
    if cmd == "recover":
        return _cmd_recover(args)
    if cmd == "verify-roundtrip":
        return _cmd_roundtrip(args)
    if cmd == "sflip-search":
        return _cmd_sflip(args)
    if cmd == "corpus":
        return _cmd_corpus(args)
    raise AssertionError(cmd)


def _cmd_gen(args) -> int:
    if args.family == "tree":
        if args.depth is None or args.branch is None:
            raise ValueError("gen tree needs --depth and --branch")
        g = gen_tree(args.depth, args.branch)
    elif args.family == "halfgraph":
        if args.order is None:
            raise ValueError("gen halfgraph needs --order")
        g = gen_halfgraph(args.order)
    else:
        if args.n is None or args.p is None:
            raise ValueError("gen random needs --n and --p")
        g = gen_random(args.n, args.p, args.seed)
    if args.subdivide is not None:
        g = subdivide(g, args.subdivide)
    _emit(args, write_graph(g))
    return EXIT_OK


def _fmt_rank(x) -> str:
    return "inf" if x == ranking.INF else str(int(x))


def _cmd_rank(args) -> int:
    g = _read_graph(args)
    ra = ranking.compute_ranking(g, args.r, args.m)
    lines = [f"{v} {_fmt_rank(ra.ranks[v])}" for v in range(g.n)]
    if args.witness:
        for v in range(g.n):
            if v in ra.witnesses:
                members = " ".join(str(u) for u in sorted(ra.witnesses[v]))
                lines.append(f"w {v} {members}".rstrip())
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _embedding_lines(emb) -> list[str]:
    lines = [f"principal {node} {gv}" for node, gv in sorted(emb.principal.items())]
    for (p, c), path in sorted(emb.paths.items()):
        lines.append(f"path {p}-{c} " + " ".join(str(v) for v in path))
    return lines


def _cmd_certify(args) -> int:
    g = _read_graph(args)
    cap = args.cap_nodes if args.cap_nodes is not None else 500_000
    if args.extract:
        if args.vertex is None:
            raise ValueError("--extract needs --vertex")
        mp = shallow.m_prime(args.d, args.r, args.m)
        ra = ranking.compute_ranking(g, args.r, mp)
        emb = shallow.extract_shallow_tree(g, ra, args.vertex, args.d, args.m, args.r)
        _emit(args, "\n".join(_embedding_lines(emb)) + "\n")
        return EXIT_OK
    emb = shallow.contains_shallow_tree(g, args.d, args.m, args.r, cap_nodes=cap)
    if emb is None:
        _emit(args, "absent\n")
        return EXIT_FALSE
    _emit(args, "\n".join(_embedding_lines(emb)) + "\n")
    return EXIT_OK


def _cmd_neartwin(args) -> int:
    g = _read_graph(args)
    view = neartwin.neartwin_view(g, args.k)
    if args.components:
        lines = [
            f"component {i} " + " ".join(str(v) for v in comp)
            for i, comp in enumerate(view.components)
        ]
    else:
        lines = [f"nt {u} {v}" for u, v in view.nt_graph.edges()]
    _emit(args, "\n".join(lines) + "\n" if lines else "")
    return EXIT_OK


def _cmd_halfgraph(args) -> int:
    g = _read_graph(args)
    cap = args.cap_nodes if args.cap_nodes is not None else 500_000
    wit = neartwin.find_halfgraph(g, args.t, cap_nodes=cap)
    if wit is None:
        _emit(args, "absent\n")
        return EXIT_FALSE
    u_line = "u " + " ".join(str(v) for v in wit.u)
    w_line = "w " + " ".join(str(v) for v in wit.w)
    _emit(args, u_line + "\n" + w_line + "\n")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    lines = []
    if args.g:
        c, k, t = (int(x) for x in args.g.split(","))
        lines.append(f"g {neartwin.g_bound(c, k, t)}")
    if args.h:
        k, t = (int(x) for x in args.h.split(","))
        lines.append(f"h {neartwin.h_bound(k, t)}")
    if args.no_ladder:
        k2, m2 = (int(x) for x in args.no_ladder.split(","))
        lines.append(f"no-ladder {labd.no_ladder_bound(k2, m2)}")
    if args.m_prime:
        d, r, m = (int(x) for x in args.m_prime.split(","))
        lines.append(f"m-prime {shallow.m_prime(d, r, m)}")
    if not lines:
        raise ValueError("bounds needs one of --g, --h, --no-ladder, --m-prime")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_labd(args) -> int:
    g = _read_graph(args)
    spec = labd.ClassSpec(
        labd.parse_param_function(args.f), labd.parse_param_function(args.d)
    )
    res = labd.labd_check(g, spec, r_max=args.r_max)
    if res.ok:
        _emit(args, "ok\n")
        return EXIT_OK
    r, v, offenders = res.certificate
    _emit(args, f"cert r {r} v {v} offending " + " ".join(map(str, offenders)) + "\n")
    return EXIT_FALSE


def _cmd_near_covered(args) -> int:
    g = _read_graph(args)
    res = labd.near_covered_check(g, args.k, args.m, exact=args.exact)
    mode = "exact" if res.exact else "greedy"
    if res.ok:
        _emit(args, f"ok {mode}\n")
        return EXIT_OK
    _emit(args, f"cert {mode} " + " ".join(map(str, res.certificate)) + "\n")
    return EXIT_FALSE


def _provenance_lines(sg: sparsify.SparsifiedGraph) -> list[str]:
    lines = [f"apex {i} {v}" for i, v in sorted(sg.apex.items())]
    lines.extend(f"flip {i} {j}" for i, j in sg.flipped_pairs)
    return lines


def _cmd_sparsify(args) -> int:
    g = _read_graph(args)
    sg = sparsify.build_sparsifier(g, args.k, args.h)
    text = write_graph(sg.graph)
    out = args.out or args.output
    if out:
        Path(out).write_text(text)
        prov = "\n".join(_provenance_lines(sg))
        Path(out + ".prov").write_text(prov + "\n" if prov else "")
    elif not args.quiet:
        sys.stdout.write(text)
        for line in _provenance_lines(sg):
            sys.stdout.write("# " + line + "\n")
    return EXIT_OK


def _cmd_recover(args) -> int:
    g = _read_graph(args)
    try:
        out, _ = sparsify.recover_graph(g)
    except sparsify.RecoverError as e:
        print(f"recover aborted: {e}", file=sys.stderr)
        return EXIT_FALSE
    _emit(args, write_graph(out))
    return EXIT_OK


def _cmd_roundtrip(args) -> int:
    g = _read_graph(args)
    sg = sparsify.build_sparsifier(g, args.k, args.h)
    back = sparsify.recover(sg)
    if back == g:
        _emit(args, "roundtrip ok\n")
        return EXIT_OK
    _emit(args, "roundtrip FAILED\n")
    return EXIT_FALSE


def _cmd_sflip(args) -> int:
    g = _read_graph(args)
    verifier = labd.ClassSpec(
        labd.parse_param_function(args.f), labd.parse_param_function(args.d)
    )
    cap = args.cap_branch if args.cap_branch is not None else 200_000
    res = sparsify.sflip_driver(g, args.s, args.k, args.h, verifier, cap_candidates=cap)
    if res is None:
        _emit(args, "absent\n")
        return EXIT_FALSE
    lines = ["S " + " ".join(map(str, res.s))]
    lines.extend(f"flip {i} {j}" for i, j in res.flip_spec)
    lines.append(write_graph(res.sparsified.graph).rstrip("\n"))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_corpus(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []

    def add(name: str, g: Graph, **params) -> None:
        fname = f"{name}.graph"
        (out_dir / fname).write_text(write_graph(g))
        entries.append({"file": fname, **params})

    fam = args.family
    if fam in ("trees", "mixed"):
        for d in range(1, 4):
            for m in range(1, 4):
                for r in range(0, 3):
                    g = subdivide(gen_tree(d, m), r)
                    add(f"tree-d{d}-m{m}-s{r}", g, family="tree", d=d, m=m, subdiv=r)
    if fam in ("halfgraph", "mixed"):
        for t in range(1, args.max_t + 1):
            add(f"halfgraph-t{t}", gen_halfgraph(t), family="halfgraph", t=t)
    if fam in ("random", "mixed"):
        for i in range(args.count):
            n = 2 + (args.seed + i) % max(1, args.max_n - 1)
            p = 0.1 + 0.8 * ((i * 37 % 100) / 100.0)
            g = gen_random(n, p, args.seed + i)
            add(f"random-{i:03d}", g, family="random", n=n, p=round(p, 3),
                seed=args.seed + i)
    manifest = {"family": fam, "seed": args.seed, "count": len(entries),
                "entries": entries}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    if not args.quiet:
        print(f"wrote {len(entries)} graphs to {out_dir}")
    return EXIT_OK


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
