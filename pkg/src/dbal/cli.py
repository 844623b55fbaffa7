"""Command-line front end.

Exit codes: 0 success / no counterexample, 1 counterexample found, 2 input
error, 3 hypothesis not applicable (single-instance mode) or disconnected
input to ``analyze``.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .graphcore import (
    Graph,
    GraphError,
    enumerate_connected,
    generate,
    load_graphs,
    parse_edge_list,
    parse_graph6,
)
from .metrics import balance_profile, classify_join_of_regulars, is_locally_regular
from .products import cartesian, check_distance_formula, corona, lexicographic
from .verify import (
    THEOREMS,
    Budget,
    SweepSpec,
    SweepSpecError,
    graph_units,
    run_corpus,
    sweep_units,
)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_NOT_APPLICABLE = 0, 1, 2, 3

log = logging.getLogger("dbal")


class InputError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _single_graph(args) -> Graph:
    given = [x for x in (args.g6, args.edges, args.family, args.source) if x]
    if len(given) != 1:
        raise InputError("give exactly one graph via --g6, --edges, --family or a positional source")
    try:
        if args.g6:
            return parse_graph6(args.g6)
        if args.edges:
            return parse_edge_list(Path(args.edges).read_text())
        if args.family:
            if not args.n:
                raise InputError("--family needs --n")
            return generate(args.family, *(int(p) for p in args.n.split(",")))
        graphs = load_graphs(args.source)
    except (GraphError, OSError, ValueError) as exc:
        raise InputError(str(exc)) from None
    if len(graphs) != 1:
        raise InputError(f"expected one graph, source holds {len(graphs)}")
    return graphs[0]


def analyze_report(G: Graph) -> dict:
    D = G.distances
    lr, lr_w = is_locally_regular(G)
    prof = balance_profile(G, D)
    report = {
        "graph6": G.graph6,
        "n": G.n,
        "m": G.m,
        "diameter": prof.diam,
        "degrees": list(G.degrees),
        "regular": G.is_regular(),
        "locally_regular": lr,
        "locally_regular_witness": list(lr_w) if lr_w else None,
        "profile": [
            {"l": l, "verdict": r.status.value,
             "witness": list(r.witness) if r.witness else None,
             "witness_sizes": list(r.witness_sizes) if r.witness_sizes else None}
            for l, r in prof.verdicts.items()
        ],
        "highly_distance_balanced": prof.highly_balanced,
        "join_classification": classify_join_of_regulars(G).value if prof.diam == 2 else None,
    }
    return report


def cmd_analyze(args) -> int:
    G = _single_graph(args)
    if not G.distances.connected:
        print("error: graph is disconnected", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    t0 = time.perf_counter()
    rep = analyze_report(G)
    if args.format == "json":
        doc = {"tool_version": __version__, "command": "analyze", "graph": rep,
               "wall_time_ms": int((time.perf_counter() - t0) * 1000)}
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    lines = [
        f"graph6:    {rep['graph6']}",
        f"n={rep['n']} m={rep['m']} diameter={rep['diameter']}",
        f"degrees:   {' '.join(map(str, rep['degrees']))} ({'regular' if rep['regular'] else 'not regular'})",
        "locally regular: " + ("yes" if rep["locally_regular"] else f"no, witness {tuple(rep['locally_regular_witness'])}"),
    ]
    for row in rep["profile"]:
        tail = ""
        if row["witness"]:
            tail = f"  witness {tuple(row['witness'])} |W| {row['witness_sizes'][0]} vs {row['witness_sizes'][1]}"
        lines.append(f"  l={row['l']}: {row['verdict']}{tail}")
    lines.append("highly distance-balanced: " + ("yes" if rep["highly_distance_balanced"] else "no"))
    if rep["join_classification"]:
        lines.append(f"diameter-2 classification: {rep['join_classification']}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


_BUILDERS = {"cartesian": cartesian, "lexicographic": lexicographic, "corona": corona}


def _one(source: str) -> Graph:
    try:
        graphs = load_graphs(source)
    except (GraphError, OSError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from None
    if len(graphs) != 1:
        raise InputError(f"{source}: expected one graph, found {len(graphs)}")
    return graphs[0]


def cmd_product(args) -> int:
    G, H = _one(args.G), _one(args.H)
    budget = Budget.parse(args.budget)
    size = G.n * (H.n + 1) if args.kind == "corona" else G.n * H.n
    if budget.max_vertices is not None and size > budget.max_vertices:
        raise InputError(f"product has {size} vertices, over the budget of {budget.max_vertices}")
    P = _BUILDERS[args.kind](G, H)
    X = P.graph
    D = X.distances
    formula = None
    if args.kind != "lexicographic" or (G.n >= 2 and G.distances.connected):
        bad = check_distance_formula(P)
        formula = "pass" if bad is None else f"FAIL at {P.vertex(bad[0])}, {P.vertex(bad[1])}: bfs {bad[2]} vs formula {bad[3]}"
    diam = D.diameter if D.connected else None
    if args.format == "json":
        doc = {"tool_version": __version__, "command": "product", "kind": args.kind,
               "graph6": X.graph6, "n": X.n, "m": X.m, "diameter": diam, "distance_formula": formula}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = X.graph6 + "\n"
    if args.out:
        Path(args.out).write_text(X.graph6 + "\n")
        if args.format != "json":
            text = ""
    sys.stdout.write(text)
    if args.format != "json":
        summary = f"{args.kind}: n={X.n} m={X.m} diameter={diam if diam is not None else 'inf'}"
        if formula is not None:
            summary += f" distance-formula check: {formula}"
        print(summary, file=sys.stderr if not args.out else sys.stdout)
    return EXIT_COUNTEREXAMPLE if formula and formula != "pass" else EXIT_OK


def _parse_checks(values) -> list[str]:
    if not values:
        return list(THEOREMS)
    out = []
    for v in values:
        for c in v.split(","):
            c = c.strip()
            if c == "all":
                out.extend(THEOREMS)
            elif c:
                if c not in THEOREMS:
                    raise InputError(f"unknown check id {c!r}; known: {', '.join(THEOREMS)}")
                out.append(c)
    return [t for t in THEOREMS if t in out]


def _graph_list(source: str) -> list[Graph]:
    try:
        return load_graphs(source)
    except (GraphError, OSError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from None


def format_report_text(doc: dict) -> str:
    s = doc["summary"]
    lines = []
    for inst in doc["instances"]:
        ins = " ".join(f"{k}={v}" for k, v in inst["inputs"].items())
        ps = " ".join(f"{k}={v}" for k, v in inst["params"].items())
        lines.append(f"[{inst['status']}] {inst['theorem']} {ins} {ps}".rstrip()
                     + f": predicted {inst['predicted']}, observed {inst['observed']}")
        if inst.get("witness"):
            lines.append(f"    witness: {json.dumps(inst['witness'])}")
        if inst.get("reason"):
            lines.append(f"    reason: {inst['reason']}")
    lines.append(f"{'theorem':<14} {'checked':>9} {'skipped':>9} {'failed':>7}")
    for t, c in s["by_theorem"].items():
        lines.append(f"{t:<14} {c['checked']:>9} {c['skipped']:>9} {c['failed']:>7}")
    lines.append(f"total: checked={s['checked']} skipped={s['skipped']} failed={s['failed']}"
                 + (" (budget exceeded)" if s["budget_exceeded"] else "")
                 + (" (truncated)" if s["truncated"] else ""))
    lines.append(f"digest: {s['digest']}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    checks = _parse_checks(args.check)
    budget = Budget.parse(args.budget)
    l = args.l
    single_mode = args.sweep is None
    try:
        if args.sweep:
            if args.g or args.h:
                raise InputError("--sweep cannot be combined with --g/--h")
            units = sweep_units(SweepSpec.parse(args.sweep), checks)
            n = None
        else:
            if not args.g and not args.h:
                raise InputError("give --sweep, or explicit inputs via --g/--h")
            G_graphs = _graph_list(args.g) if args.g else []
            H_graphs = _graph_list(args.h) if args.h else []
            n = args.n
            if (args.g and not G_graphs) or (args.h and not H_graphs):
                units, single_mode = [], False
            else:
                units = graph_units(checks, G_graphs, H_graphs, n)
                single_mode = len(G_graphs) <= 1 and len(H_graphs) <= 1
    except SweepSpecError as exc:
        raise InputError(str(exc)) from None
    jobs = args.jobs if args.jobs is not None else int(os.environ.get("DBAL_JOBS", "1") or 1)
    if jobs < 1:
        raise InputError("--jobs must be positive")
    command = "verify " + " ".join(
        [f"--check {','.join(checks)}"]
        + ([f"--sweep {args.sweep}"] if args.sweep else [])
        + ([f"--g {args.g}"] if args.g else []) + ([f"--h {args.h}"] if args.h else [])
        + ([f"--n {args.n}"] if args.n is not None else [])
        + ([f"--l {l}"] if l is not None else [])
        + ([f"--v {args.v}"] if args.v is not None else [])
    )
    report = run_corpus(units, checks, l=l, v=args.v, budget=budget, jobs=jobs, command=command,
                        list_all=args.all_instances or single_mode)
    doc = report.to_dict()
    text = json.dumps(doc, indent=2) + "\n" if args.format == "json" else format_report_text(doc)
    _emit(text, args.out)
    if report.failed:
        return EXIT_COUNTEREXAMPLE
    if single_mode and all(i["status"] == "skipped" or i["predicted"] == "n/a" for i in report.instances):
        # nothing the hypothesis actually constrains: skipped, or l beyond the diameter
        return EXIT_NOT_APPLICABLE
    return EXIT_OK


def cmd_enumerate(args) -> int:
    try:
        lines = [G.graph6 for G in enumerate_connected(args.n)]
    except GraphError as exc:
        raise InputError(str(exc)) from None
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dbal", description="Distance-balance analysis of graphs and graph products.")
    ap.add_argument("--version", action="version", version=f"dbal {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="balance profile and structure of one graph")
    a.add_argument("source", nargs="?", help="graph6 string, shorthand (C5, K2,3), family spec (cycle:5) or file")
    a.add_argument("--g6")
    a.add_argument("--edges", help="edge-list file: 'n m' then m lines 'u v'")
    a.add_argument("--family", help="complete, cycle, path, star, complete_bipartite, wheel, empty")
    a.add_argument("--n", help="family size; comma-separated for complete_bipartite")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    p = sub.add_parser("product", help="build a product graph and write it as graph6")
    p.add_argument("kind", choices=sorted(_BUILDERS))
    p.add_argument("G")
    p.add_argument("H")
    p.add_argument("--out")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--budget", help="vertices=N (default 60)")
    p.set_defaults(func=cmd_product)

    v = sub.add_parser("verify", help="check theorems on single instances or exhaustive sweeps")
    v.add_argument("--check", action="append", help=f"comma-separated ids or 'all': {', '.join(THEOREMS)}")
    v.add_argument("--sweep", help="connected:n<=K | G:n<=K,H:n<=K | K:A<=n<=B,H:n<=K")
    v.add_argument("--g", help="first factor / single graph source (graph6, shorthand, family spec, file)")
    v.add_argument("--h", help="second factor source")
    v.add_argument("--n", type=int, help="order of the complete factor for cartesian checks")
    v.add_argument("--l", type=int, help="restrict to one distance l")
    v.add_argument("--v", type=int, help="universal vertex for cor-4.2")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--jobs", type=int, help="worker processes (default $DBAL_JOBS or 1)")
    v.add_argument("--budget", help="vertices=N,instances=M")
    v.add_argument("--out")
    v.add_argument("--all-instances", action="store_true", help="list every instance, not only failures")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="graph6 lines of all labeled connected graphs on n vertices")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--out")
    e.set_defaults(func=cmd_enumerate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, SweepSpecError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
