"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence, TextIO

from . import layered as layered_mod
from .bounds import bounds_report
from .construct import VARIANTS, CubeMatching, PermMatching, ProductMatching, query_matching
from .exact import TooLarge, emit_ip, exact_mis, exact_mmm
from .graphs import (
    CubeGraph,
    ExplicitGraph,
    Graph,
    GraphError,
    NoLevelStructure,
    NotBipartite,
    PermGraph,
    make_graph,
    parse_spec,
)
from .matching import CapExceeded, MaterializedMatching, check_cap, materialize, matching_report
from .permcore import PermutationError

# (n, vertices, edges, minimum maximal matching, maximum independent set)
TABLE1 = [
    (2, 2, 1, 1, 1),
    (3, 5, 5, 2, 2),
    (4, 14, 21, 5, 6),
    (5, 42, 84, 14, 16),
    (6, 132, 330, 44, 50),
]


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


def _dump(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _add_graph_args(p: argparse.ArgumentParser, families=("perm", "cube", "assoc", "product")) -> None:
    p.add_argument("--family", choices=families, required=True)
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--n", type=int)
    sel.add_argument("--spec", help="product factors, e.g. 4x3x2")


def _graph_from(args) -> Graph:
    if args.family == "product":
        if args.spec is None:
            raise UsageError("--family product needs --spec")
        return make_graph("product", factors=parse_spec(args.spec))
    if args.n is None:
        raise UsageError(f"--family {args.family} needs --n")
    return make_graph(args.family, n=args.n)


def _read_edges(g: Graph, path: str) -> list[tuple[int, int]]:
    edges = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise UsageError(f"{path}:{lineno}: expected 'u v'")
            edges.append((g.parse(tokens[0]), g.parse(tokens[1])))
    return edges


# ---------------------------------------------------------------------------
# subcommands


def cmd_graph_info(args, out: TextIO) -> int:
    g = _graph_from(args)
    info = {
        "graph": g.describe(),
        "family": g.family,
        "vertices": g.vertex_count,
        "edges": g.edge_count,
        "regular": g.degree is not None,
        "degree": g.degree,
    }
    if g.has_levels():
        sizes = g.level_sizes()
        info["level_sizes"] = sizes
        info["max_level_size"] = max(sizes)
    try:
        g.color(0)
        info["bipartite"] = True
    except NotBipartite:
        info["bipartite"] = False
    _dump(info, out)
    return 0


def cmd_graph_edges(args, out: TextIO) -> int:
    g = _graph_from(args)
    check_cap(g)
    for u, w, label in g.edges():
        out.write(f"{g.format(u)} {g.format(w)} {g.format_label(label)}\n")
    return 0


def cmd_match_build(args, out: TextIO) -> int:
    g = _graph_from(args)
    qm = query_matching(g, args.variant)
    check_cap(g)
    if args.format == "json":
        m = materialize(g, qm, threads=args.threads)
        _dump({
            "graph": g.describe(),
            "variant": args.variant,
            "size": m.size,
            "edges": [[g.format(u), g.format(w)] for u, w in sorted(m.edges)],
            "exposed": [g.format(v) for v in sorted(m.exposed)],
        }, out)
        return 0
    # streaming text: edges first, then exposed vertices as comments
    for v in g.vertices():
        w = qm.match(v)
        if w is not None and v < w:
            out.write(f"{g.format(v)} {g.format(w)}\n")
    for v in g.vertices():
        if qm.match(v) is None:
            out.write(f"# exposed {g.format(v)}\n")
    return 0


def cmd_match_query(args, out: TextIO) -> int:
    if args.family == "perm":
        from . import permcore
        from .construct import perm_matched_neighbor

        if args.n is None:
            raise UsageError("--family perm needs --n")
        p = permcore.parse_perm(args.vertex)
        if len(p) != args.n:
            raise UsageError(f"vertex has length {len(p)}, expected {args.n}")
        hit = perm_matched_neighbor(args.n, p, args.variant)
        out.write("exposed\n" if hit is None else f"{permcore.format_perm(hit[0])} tau={hit[1]}\n")
        return 0
    g = _graph_from(args)
    qm = query_matching(g, args.variant)
    v = g.parse(args.vertex)
    w = qm.match(v)
    if w is None:
        out.write("exposed\n")
        return 0
    label = next(lab for x, lab in g.neighbors(v) if x == w)
    out.write(f"{g.format(w)} {g.format_label(label)}\n")
    return 0


def cmd_match_verify(args, out: TextIO) -> int:
    g = _graph_from(args)
    check_cap(g)
    edges = _read_edges(g, args.edges)
    try:
        m = MaterializedMatching.from_edges(g, edges)
        verdict = matching_report(g, m)
        if len({(min(u, w), max(u, w)) for u, w in edges}) != len(edges):
            verdict["is_matching"] = verdict["is_maximal"] = False
    except GraphError as exc:
        verdict = {"is_matching": False, "is_maximal": False, "size": len(edges), "error": str(exc)}
    _dump(verdict, out)
    return 0 if verdict["is_matching"] and verdict["is_maximal"] else 1


def cmd_layered_build(args, out: TextIO) -> int:
    g = _graph_from(args)
    check_cap(g)
    if isinstance(g, CubeGraph) and args.via == "chains":
        res = layered_mod.cube_layered_via_chains(g)
    else:
        res = layered_mod.layered_matching(g)
    report = {"graph": g.describe(), **res.report()}
    edges = sorted(res.matching.edges)
    if args.format == "json":
        report["edges"] = [[g.format(u), g.format(w)] for u, w in edges]
        _dump(report, out)
    else:
        for u, w in edges:
            out.write(f"{g.format(u)} {g.format(w)}\n")
        out.write("# report " + json.dumps(report, sort_keys=True) + "\n")
    return 0 if res.maximal else 1


def cmd_scd_chain(args, out: TextIO) -> int:
    word = args.word
    if args.n is not None and len(word) != args.n:
        raise UsageError(f"word has length {len(word)}, expected {args.n}")
    if set(word) - {"0", "1"}:
        raise UsageError(f"not a bit word: {word!r}")
    out.write(" ".join(layered_mod.scd_chain(word)) + "\n")
    return 0


def cmd_bounds_report(args, out: TextIO) -> int:
    g = _graph_from(args)
    rep = bounds_report(g, alpha_mode=args.alpha, sample=args.sample, seed=args.seed,
                        exact=args.exact, time_limit=args.time_limit, threads=args.threads)
    _dump(rep, out)
    return 0


def _exact_graph(args) -> Graph:
    if args.edges is not None:
        if args.family is not None:
            raise UsageError("--edges and --family are mutually exclusive")
        with open(args.edges) as fh:
            return ExplicitGraph.from_text(fh.read())
    if args.family is None:
        raise UsageError("give --family or --edges")
    return _graph_from(args)


def cmd_exact(args, out: TextIO) -> int:
    g = _exact_graph(args)
    if args.emit_lp:
        emit_ip(g, args.problem, args.emit_lp)
    time_limit = args.time_limit if args.time_limit is not None else (7200.0 if args.hard else 300.0)
    if args.problem == "mis":
        res = exact_mis(g, time_limit=time_limit, force=args.hard)
    else:
        hint = 0
        if args.hard:
            mis = exact_mis(g, time_limit=time_limit / 4, force=True)
            if mis.proven:
                # exposed vertices of a maximal matching are independent
                hint = -(-(g.vertex_count - mis.optimum) // 2)
        res = exact_mmm(g, time_limit=time_limit, force=args.hard, lower_hint=hint)
    payload = {"graph": g.describe(), **res.as_json(g, include_witness=not args.no_witness)}
    _dump(payload, out)
    return 0


def table1_rows(n_max: int, hard: bool = False, time_limit: float | None = None) -> list[dict]:
    if not 2 <= n_max <= 6:
        raise UsageError("table1 covers 2 <= n <= 6")
    if n_max == 6 and not hard:
        raise UsageError("the n = 6 row needs --hard (long exact search)")
    rows = []
    for n, nv, ne, mmm, mis in TABLE1:
        if n > n_max:
            break
        g = make_graph("assoc", n=n)
        limit = time_limit if time_limit is not None else (7200.0 if n == 6 else 300.0)
        ind = exact_mis(g, time_limit=limit)
        hint = -(-(g.vertex_count - ind.optimum) // 2) if ind.proven else 0
        mat = exact_mmm(g, time_limit=limit, force=True, lower_hint=hint)
        rows.append({
            "n": n,
            "vertices": g.vertex_count,
            "edges": g.edge_count,
            "matching": mat.optimum,
            "matching_proven": mat.proven,
            "matching_lower_bound": mat.lower_bound,
            "independent": ind.optimum,
            "independent_proven": ind.proven,
            "expected": [nv, ne, mmm, mis],
            "agrees": [g.vertex_count, g.edge_count, mat.optimum, ind.optimum] == [nv, ne, mmm, mis],
        })
    return rows


def cmd_table1(args, out: TextIO) -> int:
    rows = table1_rows(args.n_max, args.hard, args.time_limit)
    ok = all(r["agrees"] for r in rows)
    if args.format == "json":
        _dump({"rows": rows, "agrees": ok}, out)
    else:
        out.write("n vertices edges matching independent\n")
        for r in rows:
            flag = "" if r["matching_proven"] and r["independent_proven"] else " (best found)"
            out.write(f"{r['n']} {r['vertices']} {r['edges']} {r['matching']} {r['independent']}{flag}\n")
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permatch", description="Small maximal matchings on permutahedra and friends.")
    sub = parser.add_subparsers(dest="command", required=True)

    graph = sub.add_parser("graph", help="graph families").add_subparsers(dest="action", required=True)
    p = graph.add_parser("info", help="counts, regularity and level sizes as JSON")
    _add_graph_args(p)
    p.set_defaults(func=cmd_graph_info)
    p = graph.add_parser("edges", help="stream 'u v label' lines")
    _add_graph_args(p)
    p.set_defaults(func=cmd_graph_edges)

    match = sub.add_parser("match", help="explicit maximal matchings").add_subparsers(dest="action", required=True)
    p = match.add_parser("build", help="materialize a construction")
    _add_graph_args(p, ("perm", "cube", "product"))
    p.add_argument("--variant", choices=VARIANTS, default="bullet")
    p.add_argument("--format", choices=("edges", "json"), default="edges")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_match_build)
    p = match.add_parser("query", help="matched neighbor of one vertex")
    _add_graph_args(p, ("perm", "cube", "product"))
    p.add_argument("--vertex", required=True)
    p.add_argument("--variant", choices=VARIANTS, default="bullet")
    p.set_defaults(func=cmd_match_query)
    p = match.add_parser("verify", help="check an edge file is a maximal matching")
    _add_graph_args(p)
    p.add_argument("--edges", required=True)
    p.set_defaults(func=cmd_match_verify)

    lay = sub.add_parser("layered", help="level-by-level construction").add_subparsers(dest="action", required=True)
    p = lay.add_parser("build")
    _add_graph_args(p, ("perm", "cube"))
    p.add_argument("--format", choices=("edges", "json"), default="json")
    p.add_argument("--via", choices=("bipartite", "chains"), default="bipartite",
                   help="cube only: generic bipartite matching or symmetric chains")
    p.set_defaults(func=cmd_layered_build)

    scd = sub.add_parser("scd", help="symmetric chains of the hypercube").add_subparsers(dest="action", required=True)
    p = scd.add_parser("chain")
    p.add_argument("--n", type=int)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_scd_chain)

    bnd = sub.add_parser("bounds", help="lower/upper bound certificates").add_subparsers(dest="action", required=True)
    p = bnd.add_parser("report")
    _add_graph_args(p)
    p.add_argument("--alpha", choices=("auto", "exact", "formula"), default="auto")
    p.add_argument("--sample", type=int)
    p.add_argument("--seed", type=int, default=0)
    ex = p.add_mutually_exclusive_group()
    ex.add_argument("--exact", dest="exact", action="store_true", default=None)
    ex.add_argument("--no-exact", dest="exact", action="store_false")
    p.add_argument("--time-limit", type=float, default=30.0)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_bounds_report)

    exact = sub.add_parser("exact", help="exact solvers")
    exact.add_argument("problem", choices=("mmm", "mis"))
    exact.add_argument("--family", choices=("perm", "cube", "assoc", "product"))
    sel = exact.add_mutually_exclusive_group()
    sel.add_argument("--n", type=int)
    sel.add_argument("--spec")
    exact.add_argument("--edges", help="edge-list file, one 'u v' per line")
    exact.add_argument("--time-limit", type=float)
    exact.add_argument("--hard", action="store_true", help="lift size guards, long budget")
    exact.add_argument("--emit-lp", metavar="PATH")
    exact.add_argument("--no-witness", action="store_true")
    exact.add_argument("--threads", type=int, default=1, help="accepted for symmetry; the search itself is sequential")
    exact.set_defaults(func=cmd_exact)

    p = sub.add_parser("table1", help="associahedron table: vertices, edges, matching, independent")
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--hard", action="store_true")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--format", choices=("text", "json"), default="json")
    p.set_defaults(func=cmd_table1)
    return parser


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, GraphError, PermutationError, NoLevelStructure, ValueError) as exc:
        err.write(f"permatch: error: {exc}\n")
        return 2
    except (CapExceeded, TooLarge) as exc:
        err.write(f"permatch: resource cap: {exc}\n")
        return 3
    except VerificationFailed as exc:
        err.write(f"permatch: verification failed: {exc}\n")
        return 1
    except BrokenPipeError:
        return 0
    except OSError as exc:
        err.write(f"permatch: error: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
